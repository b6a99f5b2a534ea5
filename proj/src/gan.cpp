#include "concentra/gan.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "concentra/orlicz.hpp"
#include "concentra/rng.hpp"

namespace concentra::gan {

FeatureMap FeatureMap::identity(int dim) {
  FeatureMap f;
  f.kind = FeatureKind::identity;
  f.in_dim = dim;
  return f;
}

FeatureMap FeatureMap::fourier(int dim, int features, double bandwidth, std::uint64_t seed) {
  if (features < 1 || !(bandwidth > 0.0)) throw std::invalid_argument("fourier features: bad arguments");
  FeatureMap f;
  f.kind = FeatureKind::fourier;
  f.in_dim = dim;
  f.omega.resize(features, dim);
  f.phase.resize(features);
  Rng rng(seed, streams::kFeatures, 0);
  for (int k = 0; k < features; ++k) {
    for (int a = 0; a < dim; ++a) f.omega(k, a) = bandwidth * rng.normal();
    f.phase[k] = 2.0 * 3.14159265358979323846 * rng.uniform();
  }
  return f;
}

Vec FeatureMap::eval(const Vec& x) const {
  if (kind == FeatureKind::identity) return x;
  const double s = 1.0 / std::sqrt(static_cast<double>(omega.rows()));
  Vec out = omega * x + phase;
  for (int k = 0; k < out.size(); ++k) out[k] = s * std::cos(out[k]);
  return out;
}

Vec FeatureMap::gaussian_pushforward_mean(double a, const Vec& b) const {
  if (kind == FeatureKind::identity) return b;
  const double s = 1.0 / std::sqrt(static_cast<double>(omega.rows()));
  Vec out(omega.rows());
  for (int k = 0; k < out.size(); ++k) {
    const double w2 = omega.row(k).squaredNorm();
    out[k] = s * std::cos(omega.row(k).dot(b) + phase[k]) * std::exp(-0.5 * a * a * w2);
  }
  return out;
}

double ipm_linear(const Vec& mean_p, const Vec& mean_q) {
  if (mean_p.size() != mean_q.size()) throw std::invalid_argument("ipm: dimension mismatch");
  return (mean_p - mean_q).norm();
}

double ipm_grid(const Vec& mean_p, const Vec& mean_q, const Mat& phi_grid) {
  if (phi_grid.cols() != mean_p.size()) throw std::invalid_argument("ipm_grid: dimension mismatch");
  const Vec diff = mean_p - mean_q;
  double best = -kInf;
  for (int r = 0; r < phi_grid.rows(); ++r) best = std::max(best, phi_grid.row(r).dot(diff));
  // the class is symmetric under phi -> -phi when the grid is; report the absolute sup
  double best_neg = -kInf;
  for (int r = 0; r < phi_grid.rows(); ++r) best_neg = std::max(best_neg, -phi_grid.row(r).dot(diff));
  return std::max(best, best_neg);
}

namespace {

SamplerSpec x_spec(const GanConfig& c) {
  std::vector<std::vector<double>> a;
  for (const auto& v : c.atoms) a.emplace_back(v.data(), v.data() + v.size());
  return SamplerSpec::mixture(a, c.weights);
}

SamplerSpec y_spec(const GanConfig& c) {
  if (c.noise == NoiseKind::pareto) return SamplerSpec::pareto(c.pareto_shape, 1.0);
  return SamplerSpec::gaussian(c.dim);
}

}  // namespace

GanProblem::GanProblem(GanConfig cfg) : cfg_(std::move(cfg)), px_(x_spec(cfg_)), py_(y_spec(cfg_)) {
  if (cfg_.features.in_dim != cfg_.dim) throw std::invalid_argument("gan: feature map input dimension mismatch");
  if (cfg_.noise == NoiseKind::pareto) {
    if (cfg_.dim != 1) throw std::invalid_argument("gan: pareto noise is supported for d = 1 only");
    if (cfg_.features.kind != FeatureKind::identity)
      throw std::invalid_argument("gan: pareto noise needs identity features (closed-form IPM)");
    if (!(cfg_.pareto_shape > 2.0)) throw std::invalid_argument("gan: pareto shape must exceed 2");
  }
  if (!(cfg_.radius > 0.0)) throw std::invalid_argument("gan: radius must be > 0");
  grid_ = ulln::lattice_grid(cfg_.dim + 1, cfg_.radius, cfg_.grid_per_axis);
  pop_.resize(grid_.size());
  for (std::size_t k = 0; k < grid_.size(); ++k) pop_[k] = population_ipm(k);

  // h_X(x, x~) = ||F(x) - F(x~)||: exact Psi_2 norm over atom pairs
  std::vector<double> vals, probs;
  for (std::size_t a = 0; a < cfg_.atoms.size(); ++a)
    for (std::size_t b = 0; b < cfg_.atoms.size(); ++b) {
      vals.push_back((cfg_.features.eval(cfg_.atoms[a]) - cfg_.features.eval(cfg_.atoms[b])).norm());
      probs.push_back(cfg_.weights[a] * cfg_.weights[b]);
    }
  c_x_ = orlicz::luxemburg_norm_weighted(vals, probs, 2.0).norm;
  if (cfg_.noise == NoiseKind::gaussian) {
    if (cfg_.features.kind == FeatureKind::identity) {
      // h_Y = R ||y - y~||, y - y~ ~ N(0, 2I): E exp(h^2/c^2) = (1 - 4R^2/c^2)^{-d/2} = 2
      c_y_ = cfg_.radius * std::sqrt(4.0 / (1.0 - std::pow(2.0, -2.0 / cfg_.dim)));
    } else {
      // bounded features: h_Y <= 2, Psi_2 norm of the constant
      c_y_ = 2.0 / std::sqrt(std::log(2.0));
    }
  } else {
    c_y_ = kInf;
  }
}

Vec GanProblem::generator_shift(std::size_t k) const {
  const auto p = grid_.point(k);
  Vec b(cfg_.dim);
  for (int a = 0; a < cfg_.dim; ++a) b[a] = p[a + 1];
  return b;
}

Vec GanProblem::data_feature_mean() const {
  Vec mu = Vec::Zero(cfg_.features.out_dim());
  for (std::size_t k = 0; k < cfg_.atoms.size(); ++k) mu += cfg_.weights[k] * cfg_.features.eval(cfg_.atoms[k]);
  return mu;
}

Vec GanProblem::generated_feature_mean(std::size_t k) const {
  const double a = generator_scale(k);
  const Vec b = generator_shift(k);
  if (cfg_.noise == NoiseKind::gaussian) return cfg_.features.gaussian_pushforward_mean(a, b);
  // identity features, d = 1
  const double mean_y = cfg_.pareto_shape / (cfg_.pareto_shape - 1.0);
  return b + Vec::Constant(1, a * mean_y);
}

double GanProblem::population_ipm(std::size_t k) const {
  return ipm_linear(data_feature_mean(), generated_feature_mean(k));
}

double GanProblem::population_inf() const { return *std::min_element(pop_.begin(), pop_.end()); }

bool GanProblem::has_y_orlicz() const { return std::isfinite(c_y_); }

XiFunction GanProblem::xi_x() const { return gan_xi(c_x_, 2.0); }

XiFunction GanProblem::xi_y() const {
  if (has_y_orlicz()) return gan_xi(c_y_, 2.0);
  return XiFunction::custom(kInf, [](double l) { return l == 0.0 ? 0.0 : kInf; }, "heavy_tail");
}

double GanProblem::mean_norm_y() const {
  if (cfg_.noise == NoiseKind::pareto) return cfg_.pareto_shape / (cfg_.pareto_shape - 1.0);
  return complexity::gaussian_norm_moment(cfg_.dim, 1.0);
}

double GanProblem::second_norm_y() const {
  if (cfg_.noise == NoiseKind::pareto) return cfg_.pareto_shape / (cfg_.pareto_shape - 2.0);
  return static_cast<double>(cfg_.dim);
}

// L_Y(y) = kappa (1 + ||y||)
double GanProblem::lipschitz_y_scale() const {
  const double R = cfg_.radius;
  if (cfg_.features.kind == FeatureKind::identity) return std::sqrt(1.0 + R * R);
  // ||F|| <= 1 and F is lip_f-Lipschitz: sqrt(1 + lip_f^2 (1 + ||y||^2)) <= (1 + lip_f)(1 + ||y||)
  const double lip_f = cfg_.features.omega.norm() / std::sqrt(static_cast<double>(cfg_.features.omega.rows()));
  return 1.0 + lip_f;
}

double GanProblem::moment_inner() const {
  // L_X(x) = ||F(x)||
  const double ly = lipschitz_y_scale() * (1.0 + mean_norm_y());
  double s = 0.0;
  for (std::size_t k = 0; k < cfg_.atoms.size(); ++k) {
    const double v = cfg_.features.eval(cfg_.atoms[k]).norm() + ly;
    s += cfg_.weights[k] * v * v;
  }
  return s;
}

double GanProblem::moment_full() const {
  const double kap = lipschitz_y_scale();
  double ex = 0.0, ex2 = 0.0;
  for (std::size_t k = 0; k < cfg_.atoms.size(); ++k) {
    const double v = cfg_.features.eval(cfg_.atoms[k]).norm();
    ex += cfg_.weights[k] * v;
    ex2 += cfg_.weights[k] * v * v;
  }
  const double ey = kap * (1.0 + mean_norm_y());
  const double ey2 = kap * kap * (1.0 + 2.0 * mean_norm_y() + second_norm_y());
  return ex2 + 2.0 * ex * ey + ey2;
}

complexity::CoveringSpec GanProblem::cover() const {
  // Phi: unit ball in feature space. Theta: the finite generator grid, whose internal
  // eps-cover is bounded by an external eps/2-cover of the radius-R ball and by its size.
  const int k = cfg_.dim + 1;
  const double R = cfg_.radius;
  const double log_size = std::log(static_cast<double>(grid_.size()));
  double diam = 0.0;
  for (std::size_t i = 0; i < grid_.size(); ++i) {
    double r2 = 0.0;
    for (int a = 0; a < k; ++a) r2 += grid_.point(i)[a] * grid_.point(i)[a];
    diam = std::max(diam, 2.0 * std::sqrt(r2));
  }
  diam = std::min(diam, 2.0 * R);
  const auto theta = complexity::CoveringSpec::custom(
      diam, [k, R, log_size](double eps) { return std::min(log_size, k * std::log1p(4.0 * R / eps)); }, true);
  return complexity::CoveringSpec::product(complexity::CoveringSpec::unit_ball(cfg_.features.out_dim()), theta);
}

GanTrainResult GanProblem::train(const ulln::SampleBatch& batch) const {
  const int d = cfg_.dim;
  Vec fx = Vec::Zero(cfg_.features.out_dim());
  for (int i = 0; i < batch.n; ++i) fx += cfg_.features.eval(Eigen::Map<const Vec>(batch.x_at(i).data(), d));
  fx /= batch.n;
  GanTrainResult best;
  best.objective = kInf;
  if (cfg_.features.kind == FeatureKind::identity) {
    Vec ybar = Vec::Zero(d);
    for (int i = 0; i < batch.n; ++i)
      for (int j = 0; j < batch.m; ++j) ybar += Eigen::Map<const Vec>(batch.y_at(i, j).data(), d);
    ybar /= static_cast<double>(batch.n) * batch.m;
    for (std::size_t k = 0; k < grid_.size(); ++k) {
      const double v = (fx - generator_scale(k) * ybar - generator_shift(k)).norm();
      if (v < best.objective) best = {k, v, 0.0};
    }
  } else {
    for (std::size_t k = 0; k < grid_.size(); ++k) {
      const double a = generator_scale(k);
      const Vec b = generator_shift(k);
      Vec fg = Vec::Zero(cfg_.features.out_dim());
      for (int i = 0; i < batch.n; ++i)
        for (int j = 0; j < batch.m; ++j)
          fg += cfg_.features.eval(a * Eigen::Map<const Vec>(batch.y_at(i, j).data(), d) + b);
      fg /= static_cast<double>(batch.n) * batch.m;
      const double v = (fx - fg).norm();
      if (v < best.objective) best = {k, v, 0.0};
    }
  }
  return best;
}

GanTrial GanProblem::run_trial(int n, int m, std::uint64_t seed, std::uint64_t trial) const {
  const auto batch = ulln::draw_batch(px_, py_, n, m, seed, trial);
  const auto fit = train(batch);
  GanTrial out;
  out.index = fit.index;
  out.empirical_ipm = fit.objective;
  out.excess = pop_[fit.index] - population_inf();
  return out;
}

XiFunction gan_xi(double norm, double q) { return XiFunction::series(q, norm); }

double gan_c_nm(const GanProblem& problem, int n, int m) {
  const double dudley = complexity::entropy_integral_bound(problem.cover(), static_cast<std::size_t>(n));
  return complexity::c_nm(problem.moment_inner(), problem.moment_full(), m, dudley);
}

TailReport gan_tail(const GanProblem& problem, int n, int m, double t, double c_gan) {
  if (!(t >= 0.0) || !(c_gan >= 0.0)) throw std::invalid_argument("gan_tail: t and C must be >= 0");
  if (n < 1 || m < 1) throw std::invalid_argument("gan_tail: n, m must be >= 1");
  const auto xi = ulln::reuse_xi(problem.xi_x(), problem.xi_y(), m);
  const auto ls = legendre_sup(xi, 0.5 * t);
  return make_tail_report(t, n * ls.value, ls.lambda_star);
}

double gan_l1_bound(double c_gan, double eps_opt) { return ulln::opt_l1_bound(c_gan, eps_opt); }

}  // namespace concentra::gan
