#pragma once

#include <cstddef>
#include <cstdlib>
#include <exception>
#include <string>
#include <vector>

#include <omp.h>

namespace concentra {

// Worker count: explicit request > CONCENTRA_WORKERS > OpenMP default. Never affects results.
inline int resolve_workers(int requested = 0) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("CONCENTRA_WORKERS")) {
    try {
      const int w = std::stoi(env);
      if (w > 0) return w;
    } catch (...) {
    }
  }
  return omp_get_max_threads();
}

// Serial reference: results[i] = fn(i).
template <class Result, class Fn>
std::vector<Result> run_trials_serial(std::size_t count, Fn&& fn) {
  std::vector<Result> out(count);
  for (std::size_t i = 0; i < count; ++i) out[i] = fn(i);
  return out;
}

// Parallel version; each slot is written by exactly one trial so output order is fixed.
template <class Result, class Fn>
std::vector<Result> run_trials(std::size_t count, int workers, Fn&& fn) {
  std::vector<Result> out(count);
  const int w = resolve_workers(workers);
  std::exception_ptr failure;
#pragma omp parallel for schedule(dynamic, 1) num_threads(w)
  for (long long i = 0; i < static_cast<long long>(count); ++i) {
    try {
      out[static_cast<std::size_t>(i)] = fn(static_cast<std::size_t>(i));
    } catch (...) {
#pragma omp critical(concentra_trial_failure)
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);
  return out;
}

}  // namespace concentra
