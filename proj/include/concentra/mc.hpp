#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "concentra/parallel.hpp"
#include "concentra/rng.hpp"

namespace concentra::mc {

enum class Verdict { certified, violated, inconclusive };

struct McReport {
  std::size_t trials = 0;
  std::size_t successes = 0;
  double p_hat = 0.0;
  double upper_cl = 1.0;
  double lower_cl = 0.0;
  double bound = 1.0;
  double confidence = 0.99;
  Verdict verdict = Verdict::inconclusive;
};

// Vacuous-bound zone: at or above this a bound is never reported as certified.
inline constexpr double kInconclusiveAbove = 0.9;

// exact Clopper-Pearson limits (one-sided at the given confidence)
double binomial_upper_cl(std::size_t successes, std::size_t trials, double confidence = 0.99);
double binomial_lower_cl(std::size_t successes, std::size_t trials, double confidence = 0.99);

McReport certify_counts(std::size_t successes, std::size_t trials, double bound,
                        double confidence = 0.99);

// Event evaluator: bool(std::size_t trial, Rng& rng). Trial i gets Rng(seed, kGeneric, i).
template <class Event>
McReport certify(Event&& event, double bound, std::size_t trials, std::uint64_t seed,
                 double confidence = 0.99, int workers = 0) {
  auto hits = run_trials<char>(trials, workers, [&](std::size_t i) {
    Rng rng(seed, streams::kGeneric, i);
    return static_cast<char>(event(i, rng) ? 1 : 0);
  });
  std::size_t k = 0;
  for (char h : hits) k += static_cast<std::size_t>(h);
  return certify_counts(k, trials, bound, confidence);
}

// For precomputed per-trial statistics: event is {stat >= threshold}.
McReport certify_exceedances(const std::vector<double>& stats, double threshold, double bound,
                             double confidence = 0.99);

std::string to_string(Verdict v);

struct MeanSummary {
  double mean = 0.0;
  double std_error = 0.0;
  std::size_t count = 0;
};

MeanSummary summarize_mean(const std::vector<double>& values);

}  // namespace concentra::mc
