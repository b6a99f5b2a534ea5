#pragma once

#include <cstddef>
#include <span>

#include "concentra/xi.hpp"

namespace concentra::orlicz {

// Psi_q(t) = exp(t^q) - 1
double psi(double t, double q);
double psi_inverse(double v, double q);

struct OrliczEstimate {
  double q = 1.0;
  double norm = 0.0;
  std::size_t sample_count = 0;
  double bisection_tol = 1e-10;
  double criterion_at_norm = 0.0;  // mean Psi_q(|x|/norm)
  int iterations = 0;
};

// inf{c > 0 : mean Psi_q(|x_i|/c) <= 1}
OrliczEstimate luxemburg_norm(std::span<const double> samples, double q);

// same for a discrete law with the given probabilities (normalized internally)
OrliczEstimate luxemburg_norm_weighted(std::span<const double> values,
                                       std::span<const double> weights, double q);

XiFunction xi_psi_q(double norm, double q);

TailReport subgauss_tail(std::span<const double> norms, double t);
TailReport subexp_tail(std::span<const double> norms, double t);

struct OrliczTailCheck {
  double s = 0.0;
  double norm = 0.0;
  double envelope = 1.0;            // min(1, 1/Psi_q(s/norm))
  double empirical_fraction = 0.0;  // fraction of |x| > s
};

OrliczTailCheck orlicz_tail_check(std::span<const double> samples, double q, double s);

}  // namespace concentra::orlicz
