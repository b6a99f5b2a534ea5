#include "concentra/mc.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <boost/math/special_functions/beta.hpp>

namespace concentra::mc {

namespace {
void check_counts(std::size_t k, std::size_t n, double confidence) {
  if (n == 0) throw std::invalid_argument("binomial limits: trials must be >= 1");
  if (k > n) throw std::invalid_argument("binomial limits: successes exceed trials");
  if (!(confidence > 0.0 && confidence < 1.0))
    throw std::invalid_argument("binomial limits: confidence must be in (0, 1)");
}
}  // namespace

double binomial_upper_cl(std::size_t k, std::size_t n, double confidence) {
  check_counts(k, n, confidence);
  if (k == n) return 1.0;
  return boost::math::ibeta_inv(static_cast<double>(k + 1), static_cast<double>(n - k), confidence);
}

double binomial_lower_cl(std::size_t k, std::size_t n, double confidence) {
  check_counts(k, n, confidence);
  if (k == 0) return 0.0;
  return boost::math::ibeta_inv(static_cast<double>(k), static_cast<double>(n - k + 1), 1.0 - confidence);
}

McReport certify_counts(std::size_t k, std::size_t n, double bound, double confidence) {
  if (!(bound >= 0.0)) throw std::invalid_argument("certify: bound must be >= 0");
  McReport r;
  r.trials = n;
  r.successes = k;
  r.p_hat = static_cast<double>(k) / static_cast<double>(n);
  r.upper_cl = binomial_upper_cl(k, n, confidence);
  r.lower_cl = binomial_lower_cl(k, n, confidence);
  r.bound = bound;
  r.confidence = confidence;
  if (r.lower_cl > bound) r.verdict = Verdict::violated;
  else if (bound >= kInconclusiveAbove) r.verdict = Verdict::inconclusive;
  else if (r.upper_cl <= bound) r.verdict = Verdict::certified;
  else r.verdict = Verdict::inconclusive;
  return r;
}

McReport certify_exceedances(const std::vector<double>& stats, double threshold, double bound,
                             double confidence) {
  if (stats.empty()) throw std::invalid_argument("certify: no trials");
  std::size_t k = 0;
  for (double s : stats)
    if (s >= threshold) ++k;
  return certify_counts(k, stats.size(), bound, confidence);
}

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::certified: return "certified";
    case Verdict::violated: return "violated";
    case Verdict::inconclusive: return "inconclusive";
  }
  return "inconclusive";
}

MeanSummary summarize_mean(const std::vector<double>& values) {
  MeanSummary s;
  s.count = values.size();
  if (values.empty()) return s;
  double mean = 0.0;
  for (double v : values) mean += v;
  mean /= static_cast<double>(values.size());
  s.mean = mean;
  if (values.size() > 1) {
    double ss = 0.0;
    for (double v : values) ss += (v - mean) * (v - mean);
    s.std_error = std::sqrt(ss / static_cast<double>(values.size() - 1) / static_cast<double>(values.size()));
  }
  return s;
}

}  // namespace concentra::mc
