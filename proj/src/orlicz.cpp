#include "concentra/orlicz.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <vector>

namespace concentra::orlicz {

double psi(double t, double q) { return std::expm1(std::pow(std::abs(t), q)); }

double psi_inverse(double v, double q) {
  if (v < 0.0) throw std::invalid_argument("psi_inverse: negative argument");
  return std::pow(std::log1p(v), 1.0 / q);
}

namespace {

// mean Psi_q(|x|/c) under weights w (sum 1)
double criterion(std::span<const double> x, std::span<const double> w, double c, double q) {
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double wi = w.empty() ? 1.0 / static_cast<double>(x.size()) : w[i];
    if (x[i] == 0.0) continue;
    s += wi * psi(x[i] / c, q);
  }
  return s;
}

OrliczEstimate bisect(std::span<const double> absx, std::span<const double> w, double q,
                      double c_lo, double c_hi) {
  OrliczEstimate est;
  est.q = q;
  est.sample_count = absx.size();
  const double tol = est.bisection_tol;
  if (!(criterion(absx, w, c_lo, q) >= 1.0 - 1e-12) || !(criterion(absx, w, c_hi, q) <= 1.0 + 1e-12))
    throw std::logic_error("luxemburg_norm: invalid bisection bracket");
  double lo = c_lo, hi = c_hi;
  int it = 0;
  for (; it < 200 && (hi - lo) > tol * hi; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (criterion(absx, w, mid, q) > 1.0) lo = mid;
    else hi = mid;
  }
  est.norm = hi;
  est.iterations = it;
  est.criterion_at_norm = criterion(absx, w, hi, q);
  return est;
}

}  // namespace

OrliczEstimate luxemburg_norm(std::span<const double> samples, double q) {
  if (samples.empty()) throw std::invalid_argument("luxemburg_norm: empty sample");
  if (!(q >= 1.0)) throw std::invalid_argument("luxemburg_norm: q must be >= 1");
  std::vector<double> absx(samples.size());
  double xmax = 0.0;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    if (!std::isfinite(samples[i])) throw std::invalid_argument("luxemburg_norm: non-finite sample");
    absx[i] = std::abs(samples[i]);
    xmax = std::max(xmax, absx[i]);
  }
  if (xmax == 0.0) {
    OrliczEstimate est;
    est.q = q;
    est.sample_count = samples.size();
    return est;
  }
  const double n = static_cast<double>(samples.size());
  const double c_lo = xmax / psi_inverse(n, q);
  const double c_hi = xmax / psi_inverse(1.0 / n, q);
  return bisect(absx, {}, q, c_lo, c_hi);
}

OrliczEstimate luxemburg_norm_weighted(std::span<const double> values,
                                       std::span<const double> weights, double q) {
  if (values.empty() || values.size() != weights.size())
    throw std::invalid_argument("luxemburg_norm_weighted: size mismatch or empty");
  if (!(q >= 1.0)) throw std::invalid_argument("luxemburg_norm_weighted: q must be >= 1");
  const double total = std::accumulate(weights.begin(), weights.end(), 0.0);
  if (!(total > 0.0)) throw std::invalid_argument("luxemburg_norm_weighted: weights must be positive");
  std::vector<double> absx, w;
  double xmax = 0.0, w_at_max = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (weights[i] < 0.0) throw std::invalid_argument("luxemburg_norm_weighted: negative weight");
    if (weights[i] == 0.0) continue;
    absx.push_back(std::abs(values[i]));
    w.push_back(weights[i] / total);
  }
  for (std::size_t i = 0; i < absx.size(); ++i) {
    if (absx[i] > xmax) {
      xmax = absx[i];
      w_at_max = w[i];
    } else if (absx[i] == xmax) {
      w_at_max += w[i];
    }
  }
  if (xmax == 0.0) {
    OrliczEstimate est;
    est.q = q;
    est.sample_count = absx.size();
    return est;
  }
  // lower end: the largest atom alone reaches 1; upper end: every term is at most its weight
  const double c_lo = xmax / psi_inverse(1.0 / w_at_max, q);
  const double c_hi = xmax / psi_inverse(1.0, q);
  return bisect(absx, w, q, c_lo, c_hi);
}

XiFunction xi_psi_q(double norm, double q) {
  if (!(norm >= 0.0)) throw std::invalid_argument("xi_psi_q: norm must be >= 0");
  return XiFunction::series(q, norm);
}

namespace {

void check_norms(std::span<const double> norms, double t) {
  if (norms.empty()) throw std::invalid_argument("tail: empty norm list");
  if (!(t > 0.0)) throw std::invalid_argument("tail: t must be > 0");
  for (double v : norms)
    if (!(v >= 0.0) || !std::isfinite(v)) throw std::invalid_argument("tail: norms must be finite and >= 0");
}

TailReport degenerate_report(double t) {
  TailReport r;
  r.t = t;
  r.bound = 0.0;
  r.exponent_value = kInf;
  r.lambda_star = kInf;
  r.degenerate = true;
  return r;
}

}  // namespace

TailReport subgauss_tail(std::span<const double> norms, double t) {
  check_norms(norms, t);
  double s = 0.0;
  for (double v : norms) s += v * v;
  if (s == 0.0) return degenerate_report(t);
  return make_tail_report(t, t * t / (4.0 * s), t / (2.0 * s));
}

TailReport subexp_tail(std::span<const double> norms, double t) {
  check_norms(norms, t);
  double s = 0.0, mx = 0.0;
  for (double v : norms) {
    s += v * v;
    mx = std::max(mx, v);
  }
  if (s == 0.0) return degenerate_report(t);
  return make_tail_report(t, t * t / (8.0 * s + 2.0 * t * mx), t / (4.0 * s + 2.0 * mx * t));
}

OrliczTailCheck orlicz_tail_check(std::span<const double> samples, double q, double s) {
  if (!(s > 0.0)) throw std::invalid_argument("orlicz_tail_check: s must be > 0");
  const auto est = luxemburg_norm(samples, q);
  OrliczTailCheck out;
  out.s = s;
  out.norm = est.norm;
  out.envelope = est.norm == 0.0 ? 0.0 : std::min(1.0, 1.0 / psi(s / est.norm, q));
  std::size_t hits = 0;
  for (double x : samples)
    if (std::abs(x) > s) ++hits;
  out.empirical_fraction = static_cast<double>(hits) / static_cast<double>(samples.size());
  return out;
}

}  // namespace concentra::orlicz
