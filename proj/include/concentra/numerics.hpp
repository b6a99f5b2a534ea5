#pragma once

#include <functional>
#include <limits>

namespace concentra {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

namespace numerics {

// Adaptive Simpson with Richardson correction. abs_tol is the target on the whole interval.
double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                        double abs_tol = 1e-10, int max_depth = 40);

struct Extremum {
  double x = 0.0;
  double value = 0.0;
};

// Golden-section search for the maximum of a unimodal f on [lo, hi].
Extremum golden_maximize(const std::function<double(double)>& f, double lo, double hi,
                         double rel_tol = 1e-12, double abs_tol = 1e-12, int max_iter = 300);

Extremum golden_minimize(const std::function<double(double)>& f, double lo, double hi,
                         double rel_tol = 1e-12, double abs_tol = 1e-12, int max_iter = 300);

}  // namespace numerics
}  // namespace concentra
