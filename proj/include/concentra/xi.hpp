#pragma once

#include <functional>
#include <span>
#include <string>
#include <vector>

#include "concentra/numerics.hpp"

namespace concentra {

enum class XiKind { quadratic, bernstein, series, custom };

// Bound xi on log E cosh(lambda h), valid on [0, K).
class XiFunction {
 public:
  XiFunction() : XiFunction(quadratic(0.0)) {}

  static XiFunction quadratic(double a);
  static XiFunction bernstein(double u);
  static XiFunction series(double q, double norm);
  static XiFunction custom(double domain_limit, std::function<double(double)> fn,
                           std::string label = "custom");
  static XiFunction sum(std::span<const XiFunction> parts);

  // throws std::out_of_range outside [0, K)
  double operator()(double lambda) const;
  // +inf outside the domain, no checks
  double eval_unchecked(double lambda) const { return fn_(lambda); }

  double domain_limit() const { return K_; }
  XiKind kind() const { return kind_; }
  const std::string& label() const { return label_; }
  // quadratic: a; bernstein: u; series: norm
  double coefficient() const { return coef_; }
  double q() const { return q_; }

  // lambda -> m * xi(lambda / m) on [0, m K)
  XiFunction scaled(double m) const;
  // lambda -> xi(s lambda) on [0, K / s)
  XiFunction dilated(double s) const;

 private:
  XiFunction(XiKind kind, double K, std::function<double(double)> fn, std::string label,
             double coef, double q);

  XiKind kind_;
  double K_;
  std::function<double(double)> fn_;
  std::string label_;
  double coef_ = 0.0;
  double q_ = 0.0;
};

// log(1 + 2 sum_k u^{2k} Gamma(2k/q+1)/(2k)!). q = 1 uses the closed form unless force_series.
double psi_q_series_exponent(double u, double q, bool force_series = false);

struct LegendreResult {
  double value = 0.0;
  double lambda_star = 0.0;
};

// sup over [0, K) of lambda * slope - xi(lambda)
LegendreResult legendre_sup(const XiFunction& xi, double slope);

struct TailReport {
  double t = 0.0;
  double bound = 1.0;
  double lambda_star = 0.0;
  double exponent_value = 0.0;
  bool degenerate = false;
};

// bound = min(1, exp(-exponent)), exponent clamped below at 0
TailReport make_tail_report(double t, double exponent, double lambda_star);

TailReport mcdiarmid_tail(std::span<const XiFunction> xis, double t);

struct EnvelopeVerdict {
  double lambda = 0.0;
  double mean_cosh = 0.0;
  double std_error = 0.0;
  double envelope = 0.0;
  bool pass = false;
};

// Sample mean of cosh(lambda h) against exp(xi(lambda)), passing within z_slack standard errors.
std::vector<EnvelopeVerdict> mgf_envelope_check(std::span<const double> h_samples,
                                                const XiFunction& xi,
                                                std::span<const double> lambda_grid,
                                                double z_slack = 3.0);

std::string to_string(XiKind kind);

}  // namespace concentra
