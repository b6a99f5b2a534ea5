#include "concentra/complexity.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "concentra/numerics.hpp"
#include "concentra/parallel.hpp"
#include "concentra/rng.hpp"

namespace concentra::complexity {

double unit_ball_log_cover(double eps, int k) {
  if (!(eps > 0.0)) throw std::invalid_argument("unit_ball_log_cover: eps must be > 0");
  if (k < 1) throw std::invalid_argument("unit_ball_log_cover: k must be >= 1");
  if (eps >= 2.0) return 0.0;
  return k * std::log1p(2.0 / eps);
}

CoveringSpec CoveringSpec::unit_ball(int k) { return ball(k, 1.0); }

CoveringSpec CoveringSpec::ball(int k, double radius) {
  if (k < 1) throw std::invalid_argument("ball cover: k must be >= 1");
  if (!(radius >= 0.0)) throw std::invalid_argument("ball cover: radius must be >= 0");
  CoveringSpec c;
  c.kind_ = radius == 1.0 ? CoverKind::unit_ball : CoverKind::ball;
  c.diameter_ = 2.0 * radius;
  c.dim_ = k;
  c.integrable_ = true;
  c.fn_ = [k, radius](double eps) {
    if (radius == 0.0) return 0.0;
    return unit_ball_log_cover(eps / radius, k);
  };
  return c;
}

std::size_t greedy_cover_size(const std::vector<std::vector<double>>& points, double eps) {
  std::vector<char> covered(points.size(), 0);
  std::size_t centres = 0;
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (covered[i]) continue;
    ++centres;
    for (std::size_t j = i; j < points.size(); ++j) {
      if (covered[j]) continue;
      double d2 = 0.0;
      for (std::size_t a = 0; a < points[i].size(); ++a) {
        const double d = points[i][a] - points[j][a];
        d2 += d * d;
      }
      if (std::sqrt(d2) <= eps) covered[j] = 1;
    }
  }
  return centres;
}

CoveringSpec CoveringSpec::finite_set(std::vector<std::vector<double>> points) {
  if (points.empty()) throw std::invalid_argument("finite_set cover: no points");
  const std::size_t dim = points[0].size();
  for (const auto& p : points)
    if (p.size() != dim) throw std::invalid_argument("finite_set cover: inconsistent dimensions");
  double diam = 0.0;
  for (std::size_t i = 0; i < points.size(); ++i)
    for (std::size_t j = i + 1; j < points.size(); ++j) {
      double d2 = 0.0;
      for (std::size_t a = 0; a < dim; ++a) d2 += (points[i][a] - points[j][a]) * (points[i][a] - points[j][a]);
      diam = std::max(diam, std::sqrt(d2));
    }
  CoveringSpec c;
  c.kind_ = CoverKind::finite_set;
  c.diameter_ = diam;
  c.dim_ = static_cast<int>(dim);
  c.integrable_ = true;
  auto pts = std::make_shared<const std::vector<std::vector<double>>>(std::move(points));
  c.fn_ = [pts, diam](double eps) {
    if (eps >= diam) return 0.0;
    return std::log(static_cast<double>(greedy_cover_size(*pts, eps)));
  };
  return c;
}

CoveringSpec CoveringSpec::product(const CoveringSpec& a, const CoveringSpec& b) {
  CoveringSpec c;
  c.kind_ = CoverKind::product;
  c.diameter_ = std::hypot(a.diameter_, b.diameter_);
  c.dim_ = a.dim_ + b.dim_;
  c.integrable_ = a.integrable_ && b.integrable_;
  const double diam = c.diameter_;
  // an (eps/sqrt2)-cover of each factor is an eps-cover of the product
  c.fn_ = [a, b, diam](double eps) {
    if (eps >= diam) return 0.0;
    const double e = eps / std::sqrt(2.0);
    return a.log_cover(e) + b.log_cover(e);
  };
  return c;
}

CoveringSpec CoveringSpec::custom(double diameter, std::function<double(double)> log_cover,
                                  bool integrable_at_zero) {
  if (!(diameter >= 0.0)) throw std::invalid_argument("custom cover: diameter must be >= 0");
  if (!log_cover) throw std::invalid_argument("custom cover: empty evaluator");
  CoveringSpec c;
  c.kind_ = CoverKind::custom;
  c.diameter_ = diameter;
  c.integrable_ = integrable_at_zero;
  c.fn_ = [diameter, f = std::move(log_cover)](double eps) { return eps >= diameter ? 0.0 : f(eps); };
  return c;
}

double CoveringSpec::log_cover(double eps) const {
  if (!(eps > 0.0)) throw std::invalid_argument("log_cover: eps must be > 0");
  const double v = fn_(eps);
  if (!(v >= 0.0)) throw std::domain_error("log_cover: evaluator returned a negative or NaN value");
  return v;
}

double entropy_integral(const CoveringSpec& cover, double a, double b, double abs_tol) {
  if (!(a > 0.0)) throw std::invalid_argument("entropy_integral: lower limit must be > 0");
  if (b <= a) return 0.0;
  // eps = e^s, d eps = e^s ds
  auto f = [&](double s) {
    const double e = std::exp(s);
    return std::sqrt(cover.log_cover(e)) * e;
  };
  const double lo = std::log(a), hi = std::log(b);
  // the integrand can jump where log N drops to 0, so integrate up to D/2 exactly and split
  // at the diameter when it falls inside
  const double d = cover.diameter();
  if (d > a && d < b) {
    return numerics::adaptive_simpson(f, lo, std::log(d), 0.5 * abs_tol) +
           numerics::adaptive_simpson(f, std::log(d), hi, 0.5 * abs_tol);
  }
  return numerics::adaptive_simpson(f, lo, hi, abs_tol);
}

EntropyBound entropy_integral_bound_detail(const CoveringSpec& cover, std::size_t n) {
  if (n == 0) throw std::invalid_argument("entropy_integral_bound: n must be >= 1");
  const double D = cover.diameter();
  if (D == 0.0) return {0.0, 0.0};
  const double coef = 8.0 * std::sqrt(2.0) / std::sqrt(static_cast<double>(n));
  auto objective = [&](double log_eta) {
    const double eta = std::exp(log_eta);
    if (eta >= D) return 4.0 * eta;
    return 4.0 * eta + coef * entropy_integral(cover, 0.5 * eta, 0.5 * D);
  };
  // the objective is convex in eta (derivative 4 - 4 sqrt(2/n) sqrt(log N(eta/2)) increases)
  const double lo = std::log(1e-15 * D), hi = std::log(D);
  auto r = numerics::golden_minimize(objective, lo, hi, 0.0, 1e-10);
  EntropyBound best{r.value, std::exp(r.x)};
  const double at_d = 4.0 * D;
  if (at_d < best.value) best = {at_d, D};
  const double at_lo = objective(lo);
  if (at_lo < best.value) best = {at_lo, std::exp(lo)};
  return best;
}

double entropy_integral_bound(const CoveringSpec& cover, std::size_t n) {
  return entropy_integral_bound_detail(cover, n).value;
}

double c_nm(double moment_inner, double moment_full, int m, double dudley) {
  if (m < 1) throw std::invalid_argument("c_nm: m must be >= 1");
  if (!(moment_inner >= 0.0) || !(moment_full >= 0.0) || !(dudley >= 0.0))
    throw std::invalid_argument("c_nm: inputs must be >= 0");
  if (moment_inner > moment_full * (1.0 + 1e-12))
    throw std::invalid_argument("c_nm: moment_inner exceeds moment_full (Jensen violated)");
  const double inv_m = 1.0 / m;
  return 2.0 * std::sqrt((1.0 - inv_m) * moment_inner + inv_m * moment_full) * dudley;
}

double finite_dim_c_tilde(double moment_inner, double moment_full, int m,
                          const CoveringSpec& cover, std::size_t n) {
  if (n == 0) throw std::invalid_argument("finite_dim_c_tilde: n must be >= 1");
  if (!cover.integrable_at_zero())
    throw std::invalid_argument("finite_dim_c_tilde: log cover not integrable at 0");
  const double D = cover.diameter();
  if (D == 0.0) return 0.0;
  // int_0^{D/2}: start far enough down that the omitted piece is below double resolution
  const double integral = entropy_integral(cover, 1e-300 * D, 0.5 * D);
  const double moments = c_nm(moment_inner, moment_full, m, 1.0) / 2.0;
  return 16.0 * std::sqrt(2.0) / std::sqrt(static_cast<double>(n)) * moments * integral;
}

double gaussian_norm_moment(int d, double p) {
  if (d < 1) throw std::invalid_argument("gaussian_norm_moment: d must be >= 1");
  if (!(p >= 0.0)) throw std::invalid_argument("gaussian_norm_moment: p must be >= 0");
  return std::exp(0.5 * p * std::log(2.0) + std::lgamma(0.5 * (d + p)) - std::lgamma(0.5 * d));
}

RademacherSigns enumerate_signs(std::size_t n, std::uint64_t index) {
  RademacherSigns s;
  s.source = SignSource::exhaustive;
  s.signs.resize(n);
  for (std::size_t i = 0; i < n; ++i) s.signs[i] = ((index >> i) & 1ULL) ? 1 : -1;
  return s;
}

RademacherSigns random_signs(std::size_t n, std::uint64_t seed, std::uint64_t draw) {
  RademacherSigns s;
  s.source = SignSource::seeded_rng;
  s.signs.resize(n);
  Rng rng(seed, streams::kRademacher, draw);
  for (auto& v : s.signs) v = rng.sign();
  return s;
}

namespace {

std::size_t check_table(const std::vector<std::vector<double>>& table) {
  if (table.empty()) throw std::invalid_argument("empirical_rademacher: empty family");
  const std::size_t n = table[0].size();
  if (n == 0) throw std::invalid_argument("empirical_rademacher: n must be >= 1");
  for (const auto& row : table)
    if (row.size() != n) throw std::invalid_argument("empirical_rademacher: ragged table");
  return n;
}

double sup_correlation(const std::vector<std::vector<double>>& table, const std::vector<int>& s) {
  double best = -kInf;
  for (const auto& row : table) {
    double acc = 0.0;
    for (std::size_t i = 0; i < row.size(); ++i) acc += s[i] * row[i];
    best = std::max(best, acc);
  }
  return best / static_cast<double>(s.size());
}

RademacherEstimate summarize(const std::vector<double>& vals, bool exhaustive) {
  RademacherEstimate est;
  est.draws = vals.size();
  est.exhaustive = exhaustive;
  double mean = 0.0;
  for (double v : vals) mean += v;
  mean /= static_cast<double>(vals.size());
  est.value = mean;
  if (!exhaustive && vals.size() > 1) {
    double ss = 0.0;
    for (double v : vals) ss += (v - mean) * (v - mean);
    est.std_error = std::sqrt(ss / static_cast<double>(vals.size() - 1) / static_cast<double>(vals.size()));
  }
  return est;
}

template <bool Parallel>
RademacherEstimate rademacher_impl(const std::vector<std::vector<double>>& table,
                                   const RademacherOptions& opts) {
  const std::size_t n = check_table(table);
  std::size_t count;
  if (opts.exhaustive) {
    if (n > 20) throw std::invalid_argument("empirical_rademacher: exhaustive mode needs n <= 20");
    count = std::size_t{1} << n;
  } else {
    if (opts.draws == 0) throw std::invalid_argument("empirical_rademacher: draws must be >= 1");
    count = opts.draws;
  }
  auto one = [&](std::size_t k) {
    const auto s = opts.exhaustive ? enumerate_signs(n, k) : random_signs(n, opts.seed, k);
    return sup_correlation(table, s.signs);
  };
  std::vector<double> vals;
  if constexpr (Parallel) vals = run_trials<double>(count, opts.workers, one);
  else vals = run_trials_serial<double>(count, one);
  return summarize(vals, opts.exhaustive);
}

}  // namespace

RademacherEstimate empirical_rademacher(const std::vector<std::vector<double>>& table,
                                        const RademacherOptions& opts) {
  return rademacher_impl<true>(table, opts);
}

RademacherEstimate empirical_rademacher_serial(const std::vector<std::vector<double>>& table,
                                               const RademacherOptions& opts) {
  return rademacher_impl<false>(table, opts);
}

std::string to_string(CoverKind kind) {
  switch (kind) {
    case CoverKind::unit_ball: return "unit_ball";
    case CoverKind::ball: return "ball";
    case CoverKind::finite_set: return "finite_set";
    case CoverKind::product: return "product";
    case CoverKind::custom: return "custom";
  }
  return "custom";
}

}  // namespace concentra::complexity
