#include "concentra/reuse_toy.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "concentra/complexity.hpp"

namespace concentra::ulln {

namespace {
SamplerSpec x_spec(const ReuseToyConfig& c) {
  std::vector<std::vector<double>> atoms;
  for (double a : c.atoms) atoms.push_back({a});
  return SamplerSpec::mixture(atoms, c.weights);
}

SamplerSpec y_spec(const ReuseToyConfig& c) {
  if (c.noise == ToyNoise::pareto) return SamplerSpec::pareto(c.pareto_shape, 1.0);
  return SamplerSpec::gaussian(1);
}
}  // namespace

ReuseToy::ReuseToy(ReuseToyConfig cfg) : cfg_(std::move(cfg)), px_(x_spec(cfg_)), py_(y_spec(cfg_)) {
  if (!(cfg_.radius > 0.0)) throw std::invalid_argument("toy: radius must be > 0");
  if (cfg_.grid_points < 2) throw std::invalid_argument("toy: grid_points must be >= 2");
  if (cfg_.noise == ToyNoise::pareto && !(cfg_.pareto_shape > 2.0))
    throw std::invalid_argument("toy: pareto shape must exceed 2 (finite variance)");
  grid_ = lattice_grid(1, cfg_.radius, cfg_.grid_points);
  for (std::size_t k = 0; k < cfg_.atoms.size(); ++k) {
    r0_ = std::max(r0_, std::abs(cfg_.atoms[k]));
    mean_x_ += cfg_.weights[k] * cfg_.atoms[k];
    second_x_ += cfg_.weights[k] * cfg_.atoms[k] * cfg_.atoms[k];
  }
}

double ReuseToy::mean_y() const {
  if (cfg_.noise == ToyNoise::pareto) return cfg_.pareto_shape / (cfg_.pareto_shape - 1.0);
  return 0.0;
}

double ReuseToy::mean_abs_y() const {
  if (cfg_.noise == ToyNoise::pareto) return mean_y();
  return std::sqrt(2.0 / std::numbers::pi);
}

double ReuseToy::second_moment_y() const {
  if (cfg_.noise == ToyNoise::pareto) return cfg_.pareto_shape / (cfg_.pareto_shape - 2.0);
  return 1.0;
}

double ReuseToy::population_objective(double theta) const {
  return 0.5 * (theta * theta - 2.0 * theta * mean_x_ + second_x_) + (theta + mean_x_) * mean_y();
}

std::vector<double> ReuseToy::population_means() const {
  std::vector<double> out(grid_.size());
  for (std::size_t k = 0; k < grid_.size(); ++k) out[k] = population_objective(grid_.point(k)[0]);
  return out;
}

double ReuseToy::population_inf() const {
  const double vertex = std::clamp(mean_x_ - mean_y(), -cfg_.radius, cfg_.radius);
  return population_objective(vertex);
}

XiFunction ReuseToy::xi_x() const {
  // E_y h_X = |x - x~| kappa; exact cosh average over atom pairs
  const double kappa = cfg_.radius + r0_ + mean_abs_y();
  std::vector<double> diffs, probs;
  for (std::size_t a = 0; a < cfg_.atoms.size(); ++a)
    for (std::size_t b = 0; b < cfg_.atoms.size(); ++b) {
      diffs.push_back(std::abs(cfg_.atoms[a] - cfg_.atoms[b]) * kappa);
      probs.push_back(cfg_.weights[a] * cfg_.weights[b]);
    }
  return XiFunction::custom(
      kInf,
      [diffs, probs](double l) {
        // log sum p cosh(l d), stable for large arguments
        double mx = 0.0;
        for (double d : diffs) mx = std::max(mx, l * d);
        double s = 0.0;
        for (std::size_t i = 0; i < diffs.size(); ++i)
          s += probs[i] * 0.5 * (std::exp(l * diffs[i] - mx) + std::exp(-l * diffs[i] - mx));
        return std::max(0.0, mx + std::log(s));
      },
      "toy_xi_x");
}

XiFunction ReuseToy::xi_y() const {
  const double c = cfg_.radius + r0_;
  if (cfg_.noise == ToyNoise::gaussian) {
    // c (y - y~) ~ N(0, 2c^2): E cosh = exp(lambda^2 c^2)
    return XiFunction::quadratic(c * c);
  }
  // power-law tails: no finite exponential moment
  return XiFunction::custom(kInf, [](double l) { return l == 0.0 ? 0.0 : kInf; }, "heavy_tail");
}

double ReuseToy::moment_inner() const {
  const double e = cfg_.radius + r0_ + mean_abs_y();
  return e * e;
}

double ReuseToy::moment_full() const {
  const double c = cfg_.radius + r0_;
  return c * c + 2.0 * c * mean_abs_y() + second_moment_y();
}

double ReuseToy::dudley(int n) const {
  return complexity::entropy_integral_bound(complexity::CoveringSpec::ball(1, cfg_.radius),
                                            static_cast<std::size_t>(n));
}

double ReuseToy::c_nm(int n, int m) const {
  return complexity::c_nm(moment_inner(), moment_full(), m, dudley(n));
}

double ReuseToy::grid_gap_bound() const {
  const double h = 2.0 * cfg_.radius / (cfg_.grid_points - 1);
  return h * h / 8.0;
}

StochOptProblem ReuseToy::problem(int n, int m) const {
  StochOptProblem p;
  p.objective = [](Point th, Point x, Point y) {
    const double d = th[0] - x[0];
    return 0.5 * d * d + (th[0] + x[0]) * y[0];
  };
  p.grid = grid_;
  const double R = cfg_.radius, r0 = r0_;
  p.envelopes.h_x = [R, r0](Point x, Point xt, Point y) { return std::abs(x[0] - xt[0]) * (R + r0 + std::abs(y[0])); };
  p.envelopes.h_y = [R, r0](Point y, Point yt) { return (R + r0) * std::abs(y[0] - yt[0]); };
  p.envelopes.lipschitz = [R, r0](Point, Point y) { return R + r0 + std::abs(y[0]); };
  p.envelopes.shift = [](Point th) { return 0.5 * th[0] * th[0]; };
  p.envelopes.envelope = [R, r0](Point, Point y) { return R * r0 + 0.5 * r0 * r0 + (R + r0) * std::abs(y[0]); };
  p.envelopes.lower = [R, r0](Point, Point y) { return -(R + r0) * std::abs(y[0]); };
  p.xi_x = xi_x();
  p.xi_y = xi_y();
  p.n = n;
  p.m = m;
  p.eps_opt = grid_gap_bound();
  p.validate();
  return p;
}

ToyTrial run_toy_trial(const ReuseToy& toy, const StochOptProblem& problem,
                       const std::vector<double>& population_means, std::uint64_t seed,
                       std::uint64_t trial) {
  const auto batch = draw_batch(toy.sampler_x(), toy.sampler_y(), problem.n, problem.m, seed, trial);
  const auto emp = empirical_means(problem, batch);
  ToyTrial out;
  out.phi_plus = -kInf;
  out.phi_minus = -kInf;
  std::size_t arg = 0;
  for (std::size_t k = 0; k < emp.size(); ++k) {
    out.phi_plus = std::max(out.phi_plus, emp[k] - population_means[k]);
    out.phi_minus = std::max(out.phi_minus, population_means[k] - emp[k]);
    if (emp[k] < emp[arg]) arg = k;
  }
  out.excess = population_means[arg] - toy.population_inf();
  // empirical objective is theta^2/2 - theta (xbar - ybar) + const on the interval
  double xbar = 0.0, ybar = 0.0;
  for (int i = 0; i < batch.n; ++i) {
    xbar += batch.x_at(i)[0];
    for (int j = 0; j < batch.m; ++j) ybar += batch.y_at(i, j)[0];
  }
  xbar /= batch.n;
  ybar /= static_cast<double>(batch.n) * batch.m;
  const double R = toy.config().radius;
  const double v = std::clamp(xbar - ybar, -R, R);
  const double grid_th = toy.grid().point(arg)[0];
  out.achieved_eps_opt = std::max(0.0, 0.5 * (grid_th - v) * (grid_th + v) - (grid_th - v) * (xbar - ybar));
  return out;
}

}  // namespace concentra::ulln
