#include "concentra/ulln.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace concentra::ulln {

ThetaGrid lattice_grid(int dim, double radius, int per_axis) {
  if (dim < 1 || per_axis < 1 || !(radius >= 0.0)) throw std::invalid_argument("lattice_grid: bad arguments");
  ThetaGrid g;
  g.dim = dim;
  std::vector<int> idx(dim, 0);
  const double step = per_axis > 1 ? 2.0 * radius / (per_axis - 1) : 0.0;
  for (;;) {
    std::vector<double> p(dim);
    double r2 = 0.0;
    for (int a = 0; a < dim; ++a) {
      p[a] = per_axis > 1 ? -radius + step * idx[a] : 0.0;
      r2 += p[a] * p[a];
    }
    if (std::sqrt(r2) <= radius * (1.0 + 1e-12)) g.points.insert(g.points.end(), p.begin(), p.end());
    int a = 0;
    while (a < dim && ++idx[a] == per_axis) idx[a++] = 0;
    if (a == dim) break;
  }
  return g;
}

SampleBatch draw_batch(const Sampler& px, const Sampler& py, int n, int m, std::uint64_t seed,
                       std::uint64_t trial) {
  if (n < 1 || m < 1) throw std::invalid_argument("draw_batch: n, m must be >= 1");
  SampleBatch b;
  b.n = n;
  b.m = m;
  b.dx = px.dim();
  b.dy = py.dim();
  b.seed = seed;
  b.trial = trial;
  b.x = px.stream(seed, streams::kSampleX, trial, static_cast<std::size_t>(n));
  b.y = py.stream(seed, streams::kSampleY, trial, static_cast<std::size_t>(n) * m);
  return b;
}

void StochOptProblem::validate() const {
  if (!objective) throw std::invalid_argument("problem: no objective");
  if (grid.size() == 0) throw std::invalid_argument("problem: empty theta grid");
  if (n < 1 || m < 1) throw std::invalid_argument("problem: n, m must be >= 1");
  if (!(eps_opt >= 0.0)) throw std::invalid_argument("problem: eps_opt must be >= 0");
  if (xi_x.domain_limit() / m > xi_y.domain_limit() * (1.0 + 1e-12))
    throw std::invalid_argument("problem: K_X / m exceeds K_Y");
}

XiFunction reuse_xi(const XiFunction& xi_x, const XiFunction& xi_y, int m) {
  if (m < 1) throw std::invalid_argument("reuse_xi: m must be >= 1");
  if (xi_x.domain_limit() / m > xi_y.domain_limit() * (1.0 + 1e-12))
    throw std::invalid_argument("reuse_xi: K_X / m exceeds K_Y");
  const XiFunction parts[] = {xi_x, xi_y.scaled(m)};
  return XiFunction::sum(parts);
}

namespace {
TailReport reuse_tail(const StochOptProblem& p, double slope, double t) {
  p.validate();
  if (!(t >= 0.0)) throw std::invalid_argument("tail: t must be >= 0");
  const auto ls = legendre_sup(reuse_xi(p.xi_x, p.xi_y, p.m), slope);
  return make_tail_report(t, p.n * ls.value, ls.lambda_star);
}
}  // namespace

TailReport ulln_tail(const StochOptProblem& problem, double t, double c_nm) {
  if (!(c_nm >= 0.0)) throw std::invalid_argument("ulln_tail: C must be >= 0");
  return reuse_tail(problem, t, t);
}

TailReport opt_tail(const StochOptProblem& problem, double t, double c_nm) {
  if (!(c_nm >= 0.0)) throw std::invalid_argument("opt_tail: C must be >= 0");
  return reuse_tail(problem, 0.5 * t, t);
}

double opt_l1_bound(double c_nm, double eps_opt) {
  if (!(c_nm >= 0.0) || !(eps_opt >= 0.0)) throw std::invalid_argument("opt_l1_bound: inputs must be >= 0");
  return 2.0 * c_nm + eps_opt;
}

std::vector<double> empirical_means(const StochOptProblem& problem, const SampleBatch& batch) {
  std::vector<double> out(problem.grid.size(), 0.0);
  const double inv = 1.0 / (static_cast<double>(batch.n) * batch.m);
  for (std::size_t k = 0; k < problem.grid.size(); ++k) {
    const auto th = problem.grid.point(k);
    double s = 0.0;
    for (int i = 0; i < batch.n; ++i)
      for (int j = 0; j < batch.m; ++j) s += problem.objective(th, batch.x_at(i), batch.y_at(i, j));
    out[k] = s * inv;
  }
  return out;
}

double sup_deviation(const StochOptProblem& problem, const SampleBatch& batch,
                     std::span<const double> population_means, int sign) {
  if (sign != 1 && sign != -1) throw std::invalid_argument("sup_deviation: sign must be +1 or -1");
  if (population_means.size() != problem.grid.size())
    throw std::invalid_argument("sup_deviation: population means do not match the grid");
  const auto emp = empirical_means(problem, batch);
  double best = -kInf;
  for (std::size_t k = 0; k < emp.size(); ++k) best = std::max(best, sign * (emp[k] - population_means[k]));
  return best;
}

Minimizer empirical_minimizer(const StochOptProblem& problem, const SampleBatch& batch) {
  const auto emp = empirical_means(problem, batch);
  Minimizer best{0, emp[0], 0.0};
  for (std::size_t k = 1; k < emp.size(); ++k)
    if (emp[k] < best.objective) best = {k, emp[k], 0.0};
  return best;
}

EnvelopeAudit audit_envelopes(const StochOptProblem& problem, const Sampler& px, const Sampler& py,
                              std::size_t tuples, std::uint64_t seed) {
  problem.validate();
  const auto& env = problem.envelopes;
  EnvelopeAudit audit;
  audit.tuples = tuples;
  Rng rng(seed, streams::kEnvelope, 0);
  std::vector<double> x(px.dim()), xt(px.dim()), y(py.dim()), yt(py.dim());
  auto exceeds = [](double lhs, double rhs) { return lhs > rhs * (1.0 + 1e-12) + 1e-12; };
  for (std::size_t s = 0; s < tuples; ++s) {
    const auto i1 = rng.below(problem.grid.size());
    const auto i2 = rng.below(problem.grid.size());
    const auto th1 = problem.grid.point(i1);
    const auto th2 = problem.grid.point(i2);
    px.draw(rng, x);
    px.draw(rng, xt);
    py.draw(rng, y);
    py.draw(rng, yt);
    const double g = problem.objective(th1, x, y);
    if (env.h_x && exceeds(std::abs(g - problem.objective(th1, xt, y)), env.h_x(x, xt, y))) ++audit.h_x;
    if (env.h_y && exceeds(std::abs(g - problem.objective(th1, x, yt)), env.h_y(y, yt))) ++audit.h_y;
    if (env.lipschitz) {
      double d2 = 0.0;
      for (int a = 0; a < problem.grid.dim; ++a) d2 += (th1[a] - th2[a]) * (th1[a] - th2[a]);
      if (exceeds(std::abs(g - problem.objective(th2, x, y)), env.lipschitz(x, y) * std::sqrt(d2)))
        ++audit.lipschitz;
    }
    if (env.envelope && env.shift && exceeds(std::abs(g - env.shift(th1)), env.envelope(x, y))) ++audit.envelope;
    if (env.lower && g < env.lower(x, y) - 1e-12 * (1.0 + std::abs(g))) ++audit.lower;
  }
  return audit;
}

}  // namespace concentra::ulln
