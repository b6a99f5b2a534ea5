#include "concentra/xi.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace concentra {

XiFunction::XiFunction(XiKind kind, double K, std::function<double(double)> fn, std::string label,
                       double coef, double q)
    : kind_(kind), K_(K), fn_(std::move(fn)), label_(std::move(label)), coef_(coef), q_(q) {}

XiFunction XiFunction::quadratic(double a) {
  if (!(a >= 0.0) || !std::isfinite(a)) throw std::invalid_argument("quadratic xi: need finite a >= 0");
  std::ostringstream os;
  os << "quadratic(" << a << ")";
  return XiFunction(XiKind::quadratic, kInf, [a](double l) { return a * l * l; }, os.str(), a, 2.0);
}

XiFunction XiFunction::bernstein(double u) {
  if (!(u >= 0.0) || !std::isfinite(u)) throw std::invalid_argument("bernstein xi: need finite u >= 0");
  std::ostringstream os;
  os << "bernstein(" << u << ")";
  const double K = u > 0.0 ? 1.0 / u : kInf;
  return XiFunction(
      XiKind::bernstein, K,
      [u](double l) {
        const double v = u * l;
        const double v2 = v * v;
        if (v2 >= 1.0) return kInf;
        return 2.0 * v2 / (1.0 - v2);
      },
      os.str(), u, 1.0);
}

double psi_q_series_exponent(double u, double q, bool force_series) {
  if (!(q >= 1.0)) throw std::invalid_argument("series xi: q must be >= 1");
  if (!(u >= 0.0)) throw std::invalid_argument("series xi: argument must be >= 0");
  if (u == 0.0) return 0.0;
  if (q == 1.0) {
    if (u >= 1.0) return kInf;
    if (!force_series) {
      const double u2 = u * u;
      return std::log1p(2.0 * u2 / (1.0 - u2));
    }
  }
  if (q == 2.0 && !force_series) {
    // sum_{k>=1} u^{2k} k! / (2k)! = (sqrt(pi)/2) u exp(u^2/4) erf(u/2)
    const double L = 0.25 * u * u + std::log(std::sqrt(std::numbers::pi) * u * std::erf(0.5 * u));
    return L > 40.0 ? L + std::log1p(std::exp(-L)) : std::log1p(std::exp(L));
  }
  // log T_k = 2k log u + lgamma(2k/q + 1) - lgamma(2k + 1), summed in log space
  auto log_term = [&](long k) {
    const double kk = static_cast<double>(k);
    return 2.0 * kk * std::log(u) + std::lgamma(2.0 * kk / q + 1.0) - std::lgamma(2.0 * kk + 1.0);
  };
  constexpr long kMaxTerms = 5'000'000;
  const double log_thresh = std::log(1e-15);
  double log_s = log_term(1);
  long k = 1;
  for (;;) {
    if (k >= kMaxTerms) return kInf;  // too far out to sum; dropping the point is conservative
    const double lt1 = log_term(k + 1);
    const double lt2 = log_term(k + 2);
    const double log_ratio = lt2 - lt1;
    const bool decaying = (lt1 - log_term(k)) < 0.0 && log_ratio < 0.0;
    if (decaying && lt1 < log_s + log_thresh) {
      // geometric tail bound T_{k+1} / (1 - r) with r the (nonincreasing) next ratio
      const double log_tail = lt1 - std::log1p(-std::exp(log_ratio));
      const double hi = std::max(log_s, log_tail);
      log_s = hi + std::log1p(std::exp(std::min(log_s, log_tail) - hi));
      break;
    }
    const double hi = std::max(log_s, lt1);
    log_s = hi + std::log1p(std::exp(std::min(log_s, lt1) - hi));
    ++k;
  }
  // log(1 + 2 S)
  const double log2s = std::log(2.0) + log_s;
  if (log2s > 40.0) return log2s + std::log1p(std::exp(-log2s));
  return std::log1p(std::exp(log2s));
}

XiFunction XiFunction::series(double q, double norm) {
  if (!(norm >= 0.0) || !std::isfinite(norm)) throw std::invalid_argument("series xi: need finite norm >= 0");
  if (!(q >= 1.0)) throw std::invalid_argument("series xi: q must be >= 1");
  std::ostringstream os;
  os << "series(q=" << q << ",norm=" << norm << ")";
  const double K = (q == 1.0 && norm > 0.0) ? 1.0 / norm : kInf;
  return XiFunction(
      XiKind::series, K, [q, norm](double l) { return psi_q_series_exponent(norm * l, q); },
      os.str(), norm, q);
}

XiFunction XiFunction::custom(double domain_limit, std::function<double(double)> fn,
                              std::string label) {
  if (!(domain_limit > 0.0)) throw std::invalid_argument("custom xi: domain limit must be > 0");
  if (!fn) throw std::invalid_argument("custom xi: empty evaluator");
  const double K = domain_limit;
  auto guarded = [K, f = std::move(fn)](double l) { return l >= K ? kInf : f(l); };
  return XiFunction(XiKind::custom, K, std::move(guarded), std::move(label), 0.0, 0.0);
}

XiFunction XiFunction::sum(std::span<const XiFunction> parts) {
  if (parts.empty()) throw std::invalid_argument("xi sum: empty list");
  double K = kInf;
  for (const auto& p : parts) K = std::min(K, p.domain_limit());
  if (!(K > 0.0)) throw std::invalid_argument("xi sum: domains do not overlap");
  if (parts.size() == 1) return parts[0];
  bool all_quad = true;
  double a = 0.0;
  for (const auto& p : parts) {
    all_quad = all_quad && p.kind() == XiKind::quadratic;
    a += p.coefficient();
  }
  if (all_quad) return quadratic(a);
  std::vector<XiFunction> copy(parts.begin(), parts.end());
  std::string label = "sum[" + std::to_string(copy.size()) + "]";
  return custom(
      K,
      [copy](double l) {
        double s = 0.0;
        for (const auto& p : copy) s += p.eval_unchecked(l);
        return s;
      },
      label);
}

double XiFunction::operator()(double lambda) const {
  if (!(lambda >= 0.0) || !(lambda < K_)) throw std::out_of_range("xi evaluated outside [0, K)");
  return fn_(lambda);
}

XiFunction XiFunction::scaled(double m) const {
  if (!(m > 0.0)) throw std::invalid_argument("xi scale: m must be > 0");
  if (kind_ == XiKind::quadratic) return quadratic(coef_ / m);
  auto f = fn_;
  std::ostringstream os;
  os << m << "*" << label_ << "(./" << m << ")";
  return custom(m * K_, [f, m](double l) { return m * f(l / m); }, os.str());
}

XiFunction XiFunction::dilated(double s) const {
  if (!(s > 0.0)) throw std::invalid_argument("xi dilation: s must be > 0");
  if (kind_ == XiKind::quadratic) return quadratic(coef_ * s * s);
  auto f = fn_;
  std::ostringstream os;
  os << label_ << "(" << s << "*.)";
  return custom(K_ / s, [f, s](double l) { return f(s * l); }, os.str());
}

namespace {

// lambda * t - xi(lambda); non-finite xi drops the point, negative xi is an error
double legendre_objective(const XiFunction& xi, double lambda, double t) {
  const double v = xi.eval_unchecked(lambda);
  if (std::isnan(v) || v == kInf) return -kInf;
  if (v < 0.0) throw std::domain_error("xi evaluator returned a negative value");
  return lambda * t - v;
}

std::vector<double> lambda_grid(double K) {
  std::vector<double> g{0.0};
  if (K == kInf) {
    for (int i = -240; i <= 240; ++i) g.push_back(std::pow(10.0, i * 0.05));
  } else {
    for (int i = -240; i < 0; ++i) g.push_back(K * std::pow(10.0, i * 0.05));
    for (int i = 6; i <= 64; ++i) g.push_back(K * (1.0 - std::pow(10.0, -i * 0.25)));
  }
  std::sort(g.begin(), g.end());
  g.erase(std::unique(g.begin(), g.end()), g.end());
  while (!g.empty() && g.back() >= K) g.pop_back();
  return g;
}

}  // namespace

LegendreResult legendre_sup(const XiFunction& xi, double slope) {
  if (!(slope >= 0.0) || !std::isfinite(slope)) throw std::invalid_argument("legendre_sup: slope must be finite and >= 0");
  const double K = xi.domain_limit();
  auto g = lambda_grid(K);
  std::vector<double> vals(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) vals[i] = legendre_objective(xi, g[i], slope);
  // unbounded domain: keep expanding while the maximum sits on the last point
  if (K == kInf) {
    while (true) {
      const auto it = std::max_element(vals.begin(), vals.end());
      if (it != vals.end() - 1 || g.back() > 1e300) break;
      const double next = g.back() * 10.0;
      g.push_back(next);
      vals.push_back(legendre_objective(xi, next, slope));
    }
  }
  std::size_t best = 0;
  for (std::size_t i = 1; i < g.size(); ++i)
    if (vals[i] > vals[best]) best = i;
  if (!std::isfinite(vals[best])) throw std::domain_error("legendre_sup: xi not finite anywhere on its domain");

  const double lo = best == 0 ? 0.0 : g[best - 1];
  double hi;
  if (best + 1 < g.size()) {
    hi = g[best + 1];
  } else {
    hi = (K == kInf) ? g[best] * 10.0 : std::nextafter(K, 0.0);
  }
  auto f = [&](double l) { return legendre_objective(xi, l, slope); };
  auto refined = numerics::golden_maximize(f, lo, hi, 4e-16, 1e-12);
  LegendreResult out{vals[best], g[best]};
  if (refined.value > out.value) out = {refined.value, refined.x};

#ifndef NDEBUG
  {
    // dense grid cross-check
    const double top = (K == kInf) ? std::max(1.0, 4.0 * out.lambda_star) : K;
    for (int i = 0; i < 10000; ++i) {
      const double l = top * i / 10000.0;
      const double v = f(l);
      assert(!(v > out.value + 1e-9 * (1.0 + std::abs(out.value))));
    }
  }
#endif
  return out;
}

TailReport make_tail_report(double t, double exponent, double lambda_star) {
  TailReport r;
  r.t = t;
  r.lambda_star = lambda_star;
  r.exponent_value = std::max(0.0, exponent);
  r.bound = std::min(1.0, std::exp(-r.exponent_value));
  return r;
}

TailReport mcdiarmid_tail(std::span<const XiFunction> xis, double t) {
  if (xis.empty()) throw std::invalid_argument("mcdiarmid_tail: empty xi list");
  const XiFunction total = XiFunction::sum(xis);
  const auto ls = legendre_sup(total, t);
  return make_tail_report(t, ls.value, ls.lambda_star);
}

std::vector<EnvelopeVerdict> mgf_envelope_check(std::span<const double> h_samples,
                                                const XiFunction& xi,
                                                std::span<const double> lambda_grid,
                                                double z_slack) {
  if (h_samples.size() < 2) throw std::invalid_argument("mgf_envelope_check: need samples");
  std::vector<EnvelopeVerdict> out;
  out.reserve(lambda_grid.size());
  const double n = static_cast<double>(h_samples.size());
  for (double l : lambda_grid) {
    if (!(l >= 0.0) || !(l < xi.domain_limit()))
      throw std::out_of_range("mgf_envelope_check: lambda outside the xi domain");
    double mean = 0.0, m2 = 0.0;
    std::size_t k = 0;
    for (double h : h_samples) {
      const double c = std::cosh(l * h);
      ++k;
      const double d = c - mean;
      mean += d / static_cast<double>(k);
      m2 += d * (c - mean);
    }
    EnvelopeVerdict v;
    v.lambda = l;
    v.mean_cosh = mean;
    v.std_error = std::sqrt(m2 / (n - 1.0) / n);
    v.envelope = std::exp(xi(l));
    v.pass = std::isfinite(mean) && mean <= v.envelope + z_slack * v.std_error;
    out.push_back(v);
  }
  return out;
}

std::string to_string(XiKind kind) {
  switch (kind) {
    case XiKind::quadratic: return "quadratic";
    case XiKind::bernstein: return "bernstein";
    case XiKind::series: return "series";
    case XiKind::custom: return "custom";
  }
  return "custom";
}

}  // namespace concentra
