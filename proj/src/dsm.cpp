#include "concentra/dsm.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "concentra/numerics.hpp"
#include "concentra/orlicz.hpp"
#include "concentra/rng.hpp"

namespace concentra::dsm {

void NoiseSchedule::validate() const {
  if (!(c >= 0.0)) throw std::invalid_argument("schedule: drift c must be >= 0");
  if (times.empty()) throw std::invalid_argument("schedule: no timesteps");
  if (times.size() != gammas.size()) throw std::invalid_argument("schedule: times/gammas size mismatch");
  for (std::size_t j = 0; j < times.size(); ++j) {
    if (!(times[j] > 0.0)) throw std::invalid_argument("schedule: timesteps must be > 0");
    if (j > 0 && !(times[j] > times[j - 1])) throw std::invalid_argument("schedule: timesteps must increase");
    if (!(gammas[j] > 0.0)) throw std::invalid_argument("schedule: weights must be > 0");
  }
  const double tmax = times.back();
  for (int i = 0; i <= 64; ++i) {
    const double s = tmax * i / 64.0;
    if (!(sigma(s) >= 0.0) || !std::isfinite(sigma(s)))
      throw std::invalid_argument("schedule: sigma must be finite and >= 0 on [0, t_J]");
  }
}

double tilde_sigma(const NoiseSchedule& schedule, double t) {
  if (!(t >= 0.0)) throw std::invalid_argument("tilde_sigma: t must be >= 0");
  const double c = schedule.c;
  auto f = [&](double s) {
    const double sg = schedule.sigma(s);
    return std::exp(-2.0 * c * (t - s)) * sg * sg;
  };
  const double v = numerics::adaptive_simpson(f, 0.0, t, 1e-12);
  return std::sqrt(std::max(0.0, v));
}

ResolvedSchedule resolve(const NoiseSchedule& schedule) {
  schedule.validate();
  ResolvedSchedule rs;
  for (std::size_t j = 0; j < schedule.times.size(); ++j) {
    const double t = schedule.times[j];
    const double st = tilde_sigma(schedule, t);
    if (!(st > 0.0)) throw std::invalid_argument("schedule: tilde sigma vanishes at a timestep");
    rs.t.push_back(t);
    rs.gamma.push_back(schedule.gammas[j]);
    rs.sigma_tilde.push_back(st);
    rs.decay.push_back(std::exp(-schedule.c * t));
  }
  return rs;
}

void CompactMixtureData::validate() const {
  if (dim < 1) throw std::invalid_argument("data: dim must be >= 1");
  if (atoms.empty() || atoms.size() != weights.size()) throw std::invalid_argument("data: atoms/weights mismatch");
  double total = 0.0;
  for (std::size_t k = 0; k < atoms.size(); ++k) {
    if (atoms[k].size() != dim) throw std::invalid_argument("data: atom dimension mismatch");
    if (!(weights[k] > 0.0)) throw std::invalid_argument("data: weights must be > 0");
    if (atoms[k].norm() > r0 * (1.0 + 1e-12)) throw std::invalid_argument("data: atom outside the r0 ball");
    total += weights[k];
  }
  if (std::abs(total - 1.0) > 1e-9) throw std::invalid_argument("data: weights must sum to 1");
}

Vec CompactMixtureData::mean() const {
  Vec mu = Vec::Zero(dim);
  for (std::size_t k = 0; k < atoms.size(); ++k) mu += weights[k] * atoms[k];
  return mu;
}

Mat CompactMixtureData::second_moment() const {
  Mat S = Mat::Zero(dim, dim);
  for (std::size_t k = 0; k < atoms.size(); ++k) S += weights[k] * atoms[k] * atoms[k].transpose();
  return S;
}

SamplerSpec CompactMixtureData::sampler_spec() const {
  std::vector<std::vector<double>> a;
  for (const auto& v : atoms) a.emplace_back(v.data(), v.data() + v.size());
  return SamplerSpec::mixture(a, weights);
}

LinearScoreModel LinearScoreModel::zero(int dim, int J) {
  LinearScoreModel m;
  m.dim = dim;
  m.A.assign(J, Mat::Zero(dim, dim));
  m.b.assign(J, Vec::Zero(dim));
  return m;
}

Vec LinearScoreModel::eval(int j, const Vec& z) const { return A[j] * z + b[j]; }

Vec LinearScoreModel::stacked() const {
  Vec th(param_count());
  int o = 0;
  for (int j = 0; j < timesteps(); ++j) {
    for (int c = 0; c < dim; ++c)
      for (int r = 0; r < dim; ++r) th[o++] = A[j](r, c);
    for (int r = 0; r < dim; ++r) th[o++] = b[j][r];
  }
  return th;
}

LinearScoreModel LinearScoreModel::from_stacked(int dim, int J, const Vec& theta) {
  LinearScoreModel m = zero(dim, J);
  if (theta.size() != m.param_count()) throw std::invalid_argument("from_stacked: size mismatch");
  int o = 0;
  for (int j = 0; j < J; ++j) {
    for (int c = 0; c < dim; ++c)
      for (int r = 0; r < dim; ++r) m.A[j](r, c) = theta[o++];
    for (int r = 0; r < dim; ++r) m.b[j][r] = theta[o++];
  }
  return m;
}

double LinearScoreModel::norm() const { return stacked().norm(); }

ModelBounds ModelBounds::linear_family(double radius, int J) {
  ModelBounds mb;
  mb.a.assign(J, radius);
  mb.b.assign(J, radius);
  mb.L.assign(J, radius);
  mb.alpha.assign(J, 1.0);
  mb.beta.assign(J, 1.0);
  mb.q = 1.0;
  return mb;
}

double DsmConstantLedger::x_term() const {
  const double v = A_X + B_X * mean_norm_y;
  return 0.5 * v * v;
}

double DsmConstantLedger::y_quadratic() const {
  const double v = 2.0 * (A_Y + 4.0 * B_Y) * sigma_Y;
  return v * v;
}

XiFunction DsmConstantLedger::xi_x() const {
  const double a = x_term();
  return XiFunction::custom(m * K_Y, [a](double l) { return a * l * l; }, "dsm_xi_x");
}

XiFunction DsmConstantLedger::xi_y() const {
  const double a = y_quadratic();
  return XiFunction::custom(K_Y, [a](double l) { return a * l * l; }, "dsm_xi_y");
}

namespace {
void check_bounds(const ModelBounds& mb, std::size_t J) {
  if (mb.a.size() != J || mb.b.size() != J || mb.L.size() != J || mb.alpha.size() != J || mb.beta.size() != J)
    throw std::invalid_argument("model bounds: one entry per timestep required");
  if (!(mb.q >= 1.0)) throw std::invalid_argument("model bounds: q must be >= 1");
  for (std::size_t j = 0; j < J; ++j)
    if (mb.a[j] < 0 || mb.b[j] < 0 || mb.L[j] < 0 || mb.alpha[j] < 0 || mb.beta[j] < 0)
      throw std::invalid_argument("model bounds: constants must be >= 0");
}
}  // namespace

DsmConstantLedger assemble_ledger(const NoiseSchedule& schedule, const ModelBounds& bounds,
                                  double r0, int d, int m, double sigma_y) {
  if (m < 1 || d < 1) throw std::invalid_argument("ledger: m, d must be >= 1");
  if (!(r0 >= 0.0)) throw std::invalid_argument("ledger: r0 must be >= 0");
  const auto rs = resolve(schedule);
  check_bounds(bounds, rs.t.size());
  const double q = bounds.q;
  const double pq = std::pow(2.0, q - 1.0);
  DsmConstantLedger L;
  L.q = q;
  L.m = m;
  L.d = d;
  L.mean_norm_y = complexity::gaussian_norm_moment(d, 1.0);
  for (int j = 0; j < rs.size(); ++j) {
    const double g = rs.gamma[j], e = rs.decay[j], st = rs.sigma_tilde[j];
    const double a = bounds.a[j], b = bounds.b[j], Lj = bounds.L[j];
    const double al = bounds.alpha[j], be = bounds.beta[j];
    const double P = a + r0 * b * e;
    const double Q = b * st + 1.0 / st;
    const double U = al + pq * be * std::pow(r0 * e, q);
    const double V = pq * be * std::pow(st, q);
    L.A_theta += 2.0 * g * P * U;
    L.B_theta += 2.0 * g * Q * U;
    L.C_theta += 2.0 * g * P * V;
    L.D_theta += 2.0 * g * Q * V;
    L.A_X += 4.0 * r0 * g * Lj * e * (a + b * e * r0);
    L.B_X += 4.0 * r0 * g * Lj * e * (b * st + 1.0 / st);
    L.A_Y += g * 2.0 * P * (Lj * st + 1.0 / st);
    L.B_Y += g * Q * (Lj * st + 1.0 / st);
  }
  if (!(sigma_y > 0.0)) throw std::invalid_argument("ledger: sigma_Y must be > 0");
  L.sigma_Y = sigma_y;
  L.K_Y = 1.0 / (2.0 * (L.A_Y + 4.0 * L.B_Y) * sigma_y);
  L.A_XYm = L.x_term() + L.y_quadratic() / m;
  return L;
}

double h_y_value(double A_Y, double B_Y, const Vec& y, const Vec& yt) {
  return (A_Y + B_Y * (y.norm() + yt.norm())) * (y - yt).norm();
}

DsmConstantLedger dsm_constants(const NoiseSchedule& schedule, const ModelBounds& bounds,
                                double r0, int d, int m, const SigmaYOptions& opts) {
  // A_Y, B_Y do not depend on sigma_Y; assemble once with a placeholder to read them
  const auto pre = assemble_ledger(schedule, bounds, r0, d, m, 1.0);
  if (opts.samples < 1000) throw std::invalid_argument("dsm_constants: need >= 1000 samples for sigma_Y");
  Rng rng(opts.seed, streams::kNormEstimate, 0);
  std::vector<double> h(opts.samples);
  Vec y(d), yt(d);
  for (auto& v : h) {
    for (int a = 0; a < d; ++a) y[a] = rng.normal();
    for (int a = 0; a < d; ++a) yt[a] = rng.normal();
    v = h_y_value(pre.A_Y, pre.B_Y, y, yt);
  }
  const double N = orlicz::luxemburg_norm(h, 1.0).norm;
  const double sigma_y = 0.5 * std::sqrt(3.0) * N / (pre.A_Y + 4.0 * pre.B_Y);
  auto L = assemble_ledger(schedule, bounds, r0, d, m, sigma_y);
  L.h_y_psi1_norm = N;
  return L;
}

bool SigmaYCertificate::pass() const {
  for (const auto& v : quadratic)
    if (!v.pass) return false;
  for (const auto& v : generator)
    if (!v.pass) return false;
  return true;
}

SigmaYCertificate certify_sigma_y(const DsmConstantLedger& ledger, std::size_t samples,
                                  std::uint64_t seed) {
  // fresh draws, independent of the ones that produced the norm
  Rng rng(seed, streams::kNormEstimate, 1);
  std::vector<double> h(samples);
  Vec y(ledger.d), yt(ledger.d);
  for (auto& v : h) {
    for (int a = 0; a < ledger.d; ++a) y[a] = rng.normal();
    for (int a = 0; a < ledger.d; ++a) yt[a] = rng.normal();
    v = h_y_value(ledger.A_Y, ledger.B_Y, y, yt);
  }
  std::vector<double> grid;
  for (int i = 0; i <= 20; ++i) grid.push_back(0.95 * ledger.K_Y * i / 20.0);
  SigmaYCertificate cert;
  cert.quadratic = mgf_envelope_check(h, ledger.xi_y(), grid);
  cert.generator = mgf_envelope_check(h, XiFunction::series(1.0, ledger.h_y_psi1_norm), grid);
  return cert;
}

double dsm_objective(const LinearScoreModel& model, const ResolvedSchedule& rs, const Vec& x0,
                     const Vec& y) {
  if (model.timesteps() != rs.size()) throw std::invalid_argument("dsm_objective: timestep mismatch");
  if (x0.size() != model.dim || y.size() != model.dim) throw std::invalid_argument("dsm_objective: dimension mismatch");
  double total = 0.0;
  for (int j = 0; j < rs.size(); ++j) {
    const Vec z = rs.decay[j] * x0 + rs.sigma_tilde[j] * y;
    const Vec r = model.eval(j, z) + y / rs.sigma_tilde[j];
    total += rs.gamma[j] * r.squaredNorm();
  }
  return total;
}

Vec true_score(const CompactMixtureData& data, double decay, double sigma_tilde, const Vec& z) {
  const std::size_t K = data.atoms.size();
  const double s2 = sigma_tilde * sigma_tilde;
  std::vector<double> logit(K);
  double mx = -kInf;
  for (std::size_t k = 0; k < K; ++k) {
    logit[k] = std::log(data.weights[k]) - (z - decay * data.atoms[k]).squaredNorm() / (2.0 * s2);
    mx = std::max(mx, logit[k]);
  }
  double total = 0.0;
  Vec acc = Vec::Zero(z.size());
  for (std::size_t k = 0; k < K; ++k) {
    const double w = std::exp(logit[k] - mx);
    total += w;
    acc += w * (decay * data.atoms[k] - z);
  }
  return acc / (total * s2);
}

Vec true_score(const CompactMixtureData& data, const NoiseSchedule& schedule, double t, const Vec& z) {
  return true_score(data, std::exp(-schedule.c * t), tilde_sigma(schedule, t), z);
}

namespace {

// E[w w^T] for w = (z, 1), z = e x + sigma~ y
Mat moment_matrix(const CompactMixtureData& data, double e, double st) {
  const int d = data.dim;
  Mat M(d + 1, d + 1);
  M.topLeftCorner(d, d) = e * e * data.second_moment() + st * st * Mat::Identity(d, d);
  const Vec mu = e * data.mean();
  M.topRightCorner(d, 1) = mu;
  M.bottomLeftCorner(1, d) = mu.transpose();
  M(d, d) = 1.0;
  return M;
}

Mat stack_w(const LinearScoreModel& model, int j) {
  Mat W(model.dim, model.dim + 1);
  W.leftCols(model.dim) = model.A[j];
  W.col(model.dim) = model.b[j];
  return W;
}

}  // namespace

double population_objective(const LinearScoreModel& model, const CompactMixtureData& data,
                            const ResolvedSchedule& rs) {
  if (model.timesteps() != rs.size() || model.dim != data.dim)
    throw std::invalid_argument("population_objective: shape mismatch");
  double total = 0.0;
  for (int j = 0; j < rs.size(); ++j) {
    const Mat M = moment_matrix(data, rs.decay[j], rs.sigma_tilde[j]);
    const Mat W = stack_w(model, j);
    const double st = rs.sigma_tilde[j];
    total += rs.gamma[j] * ((W * M * W.transpose()).trace() + 2.0 * model.A[j].trace() + data.dim / (st * st));
  }
  return total;
}

PopulationOptimum population_optimum(const CompactMixtureData& data, const ResolvedSchedule& rs,
                                     double radius) {
  data.validate();
  const int d = data.dim, J = rs.size();
  std::vector<Mat> Ms;
  for (int j = 0; j < J; ++j) Ms.push_back(moment_matrix(data, rs.decay[j], rs.sigma_tilde[j]));
  Mat P = Mat::Zero(d, d + 1);
  P.leftCols(d) = Mat::Identity(d, d);
  // W_j(mu) = -gamma_j P (gamma_j M_j + mu I)^{-1}
  auto build = [&](double mu) {
    LinearScoreModel m = LinearScoreModel::zero(d, J);
    for (int j = 0; j < J; ++j) {
      const Mat H = rs.gamma[j] * Ms[j] + mu * Mat::Identity(d + 1, d + 1);
      const Mat W = -rs.gamma[j] * P * H.inverse();
      m.A[j] = W.leftCols(d);
      m.b[j] = W.col(d);
    }
    return m;
  };
  PopulationOptimum out;
  out.model = build(0.0);
  if (out.model.norm() > radius) {
    out.interior = false;
    double lo = 0.0, hi = 1.0;
    while (build(hi).norm() > radius) hi *= 2.0;
    for (int it = 0; it < 200 && hi - lo > 1e-15 * hi; ++it) {
      const double mid = 0.5 * (lo + hi);
      if (build(mid).norm() > radius) lo = mid;
      else hi = mid;
    }
    out.multiplier = hi;
    out.model = build(hi);
  }
  out.objective = population_objective(out.model, data, rs);
  return out;
}

double score_matching_error(const LinearScoreModel& model, const CompactMixtureData& data,
                            const ResolvedSchedule& rs) {
  if (data.dim > 2) throw std::invalid_argument("score_matching_error: quadrature supports d <= 2");
  if (model.timesteps() != rs.size() || model.dim != data.dim)
    throw std::invalid_argument("score_matching_error: shape mismatch");
  constexpr double kCut = 12.0;
  const double inv_sqrt_2pi = 1.0 / std::sqrt(2.0 * std::numbers::pi);
  auto phi = [&](double u) { return inv_sqrt_2pi * std::exp(-0.5 * u * u); };
  double total = 0.0;
  for (int j = 0; j < rs.size(); ++j) {
    const double e = rs.decay[j], st = rs.sigma_tilde[j];
    double per_t = 0.0;
    for (std::size_t k = 0; k < data.atoms.size(); ++k) {
      const Vec centre = e * data.atoms[k];
      auto err = [&](const Vec& y) {
        const Vec z = centre + st * y;
        return (model.eval(j, z) - true_score(data, e, st, z)).squaredNorm();
      };
      double v;
      if (data.dim == 1) {
        v = numerics::adaptive_simpson(
            [&](double u) {
              Vec y(1);
              y << u;
              return err(y) * phi(u);
            },
            -kCut, kCut, 1e-11);
      } else {
        v = numerics::adaptive_simpson(
            [&](double u1) {
              return phi(u1) * numerics::adaptive_simpson(
                                   [&](double u2) {
                                     Vec y(2);
                                     y << u1, u2;
                                     return err(y) * phi(u2);
                                   },
                                   -kCut, kCut, 1e-11);
            },
            -kCut, kCut, 1e-10);
      }
      per_t += data.weights[k] * v;
    }
    total += rs.gamma[j] * per_t;
  }
  return total;
}

double empirical_objective(const LinearScoreModel& model, const std::vector<Vec>& x,
                           const std::vector<Vec>& y, int m, const ResolvedSchedule& rs) {
  if (y.size() != x.size() * static_cast<std::size_t>(m)) throw std::invalid_argument("empirical_objective: y must hold n*m points");
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i)
    for (int k = 0; k < m; ++k) s += dsm_objective(model, rs, x[i], y[i * m + k]);
  return s / static_cast<double>(y.size());
}

TrainResult train_empirical_dsm(const std::vector<Vec>& x, const std::vector<Vec>& y, int m,
                                const ResolvedSchedule& rs, double radius) {
  if (x.empty() || m < 1) throw std::invalid_argument("train_empirical_dsm: need n, m >= 1");
  if (y.size() != x.size() * static_cast<std::size_t>(m)) throw std::invalid_argument("train_empirical_dsm: y must hold n*m points");
  const int d = static_cast<int>(x[0].size());
  const int J = rs.size();
  TrainResult out;
  out.model = LinearScoreModel::zero(d, J);
  for (int j = 0; j < J; ++j) {
    const double e = rs.decay[j], st = rs.sigma_tilde[j];
    Mat G = Mat::Zero(d + 1, d + 1);
    Mat H = Mat::Zero(d + 1, d);  // sum w y^T
    Vec w(d + 1);
    for (std::size_t i = 0; i < x.size(); ++i)
      for (int k = 0; k < m; ++k) {
        const Vec& yy = y[i * m + k];
        w.head(d) = e * x[i] + st * yy;
        w[d] = 1.0;
        G.noalias() += w * w.transpose();
        H.noalias() += w * yy.transpose();
      }
    Eigen::CompleteOrthogonalDecomposition<Mat> cod(G);
    if (cod.rank() < d + 1) out.rank_deficient = true;
    const Mat Wt = cod.solve(-H / st);  // (d+1) x d
    out.model.A[j] = Wt.topRows(d).transpose();
    out.model.b[j] = Wt.row(d).transpose();
  }
  const double nrm = out.model.norm();
  if (nrm > radius) {
    const double unconstrained = empirical_objective(out.model, x, y, m, rs);
    const Vec th = out.model.stacked() * (radius / nrm);
    out.model = LinearScoreModel::from_stacked(d, J, th);
    out.projected = true;
    out.objective = empirical_objective(out.model, x, y, m, rs);
    out.eps_opt = std::max(0.0, out.objective - unconstrained);
  } else {
    out.objective = empirical_objective(out.model, x, y, m, rs);
  }
  return out;
}

double objective_envelope(const ResolvedSchedule& rs, const ModelBounds& bounds, double r0,
                          double norm_y) {
  check_bounds(bounds, rs.t.size());
  double s = 0.0;
  for (int j = 0; j < rs.size(); ++j) {
    const double P = bounds.a[j] + r0 * bounds.b[j] * rs.decay[j];
    const double Q = bounds.b[j] * rs.sigma_tilde[j] + 1.0 / rs.sigma_tilde[j];
    s += rs.gamma[j] * (P + Q * norm_y) * (P + Q * norm_y);
  }
  return s;
}

CDsm c_dsm(const DsmConstantLedger& ledger, int J, int n, int m, double radius) {
  const int d = ledger.d;
  const double q = ledger.q;
  const double coef[4] = {ledger.A_theta, ledger.B_theta, ledger.C_theta, ledger.D_theta};
  const double pw[4] = {0.0, 1.0, q, q + 1.0};
  CDsm out;
  double mean = 0.0, second = 0.0;
  for (int i = 0; i < 4; ++i) {
    mean += coef[i] * complexity::gaussian_norm_moment(d, pw[i]);
    for (int k = 0; k < 4; ++k) second += coef[i] * coef[k] * complexity::gaussian_norm_moment(d, pw[i] + pw[k]);
  }
  out.moment_inner = mean * mean;
  out.moment_full = std::max(second, out.moment_inner);
  out.param_count = J * (d * d + d);
  out.dudley = complexity::entropy_integral_bound(complexity::CoveringSpec::ball(out.param_count, radius),
                                                  static_cast<std::size_t>(n));
  out.value = complexity::c_nm(out.moment_inner, out.moment_full, m, out.dudley);
  return out;
}

DsmBoundReport dsm_bound(double eps, int n, int m, const DsmConstantLedger& ledger, double r_star,
                         double c_dsm_value, double eps_opt) {
  if (!(eps >= 0.0)) throw std::invalid_argument("dsm_bound: eps must be >= 0");
  if (n < 1 || m < 1) throw std::invalid_argument("dsm_bound: n, m must be >= 1");
  if (m != ledger.m) throw std::invalid_argument("dsm_bound: ledger was assembled for a different m");
  const double a = ledger.A_XYm;
  const auto xi = XiFunction::custom(m * ledger.K_Y, [a](double l) { return a * l * l; }, "dsm_combined");
  const auto ls = legendre_sup(xi, 0.5 * eps);
  DsmBoundReport r;
  r.tail = make_tail_report(eps, n * ls.value, ls.lambda_star);
  r.threshold = eps + r_star + 2.0 * c_dsm_value + eps_opt;
  return r;
}

Vec random_in_ball(Rng& rng, int dim, double radius) {
  Vec v(dim);
  for (int a = 0; a < dim; ++a) v[a] = rng.normal();
  const double n = v.norm();
  if (n == 0.0) return Vec::Zero(dim);
  return v * (radius * std::pow(rng.uniform(), 1.0 / dim) / n);
}

DsmEnvelopeAudit audit_dsm_envelopes(const NoiseSchedule& schedule, const DsmConstantLedger& L,
                                     const ModelBounds& bounds, double r0, int d, double radius,
                                     std::size_t tuples, std::uint64_t seed) {
  const auto rs = resolve(schedule);
  check_bounds(bounds, rs.t.size());
  const int J = rs.size();
  const int k = J * (d * d + d);
  DsmEnvelopeAudit audit;
  audit.tuples = tuples;
  Rng rng(seed, streams::kEnvelope, 0);
  auto exceeds = [](double lhs, double rhs) { return lhs > rhs * (1.0 + 1e-12) + 1e-12; };
  auto draw_theta = [&]() {
    Vec th = random_in_ball(rng, k, radius);
    // a quarter of the draws sit on the sphere where the growth constants are tight
    if (rng.uniform() < 0.25 && th.norm() > 0.0) th *= radius / th.norm();
    return LinearScoreModel::from_stacked(d, J, th);
  };
  auto draw_y = [&]() {
    Vec y(d);
    const double scale = 1.0 + 3.0 * rng.uniform();
    for (int a = 0; a < d; ++a) y[a] = scale * rng.normal();
    return y;
  };
  for (std::size_t s = 0; s < tuples; ++s) {
    const auto m1 = draw_theta();
    const auto m2 = draw_theta();
    const Vec x = random_in_ball(rng, d, r0);
    const Vec xt = random_in_ball(rng, d, r0);
    const Vec y = draw_y();
    const Vec yt = draw_y();
    const double ny = y.norm();
    const double g = dsm_objective(m1, rs, x, y);
    const double dtheta = (m1.stacked() - m2.stacked()).norm();
    const double lip = L.A_theta + L.B_theta * ny + L.C_theta * std::pow(ny, L.q) + L.D_theta * std::pow(ny, L.q + 1.0);
    if (exceeds(std::abs(g - dsm_objective(m2, rs, x, y)), lip * dtheta)) ++audit.theta_lipschitz;
    if (exceeds(std::abs(g - dsm_objective(m1, rs, xt, y)), L.A_X + L.B_X * ny)) ++audit.h_x;
    if (exceeds(std::abs(g - dsm_objective(m1, rs, x, yt)), h_y_value(L.A_Y, L.B_Y, y, yt))) ++audit.h_y;
    if (exceeds(g, objective_envelope(rs, bounds, r0, ny))) ++audit.envelope;
    const int j = static_cast<int>(rng.below(static_cast<std::uint64_t>(J)));
    const Vec z = rs.decay[j] * x + rs.sigma_tilde[j] * y;
    const Vec z2 = rs.decay[j] * xt + rs.sigma_tilde[j] * yt;
    if (exceeds(m1.eval(j, z).norm(), bounds.a[j] + bounds.b[j] * z.norm())) ++audit.growth;
    if (exceeds((m1.eval(j, z) - m1.eval(j, z2)).norm(), bounds.L[j] * (z - z2).norm())) ++audit.z_lipschitz;
    if (exceeds((m1.eval(j, z) - m2.eval(j, z)).norm(),
                (bounds.alpha[j] + bounds.beta[j] * std::pow(z.norm(), bounds.q)) * dtheta))
      ++audit.model_theta_lipschitz;
  }
  return audit;
}

}  // namespace concentra::dsm
