#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <vector>

namespace concentra::complexity {

enum class CoverKind { unit_ball, ball, finite_set, product, custom };

class CoveringSpec {
 public:
  static CoveringSpec unit_ball(int k);
  static CoveringSpec ball(int k, double radius);
  // Euclidean metric; log N from a greedy cover with centres in the set
  static CoveringSpec finite_set(std::vector<std::vector<double>> points);
  // stacked Euclidean metric on the product
  static CoveringSpec product(const CoveringSpec& a, const CoveringSpec& b);
  static CoveringSpec custom(double diameter, std::function<double(double)> log_cover,
                             bool integrable_at_zero = false);

  double diameter() const { return diameter_; }
  double log_cover(double eps) const;
  CoverKind kind() const { return kind_; }
  bool integrable_at_zero() const { return integrable_; }
  int dimension() const { return dim_; }

 private:
  CoverKind kind_ = CoverKind::custom;
  double diameter_ = 0.0;
  int dim_ = 0;
  bool integrable_ = false;
  std::function<double(double)> fn_;
};

double unit_ball_log_cover(double eps, int k);

// greedy cover size of a point set at radius eps (centres taken from the set)
std::size_t greedy_cover_size(const std::vector<std::vector<double>>& points, double eps);

// int_a^b sqrt(log N(eps)) d eps, adaptive Simpson in log eps
double entropy_integral(const CoveringSpec& cover, double a, double b, double abs_tol = 1e-10);

struct EntropyBound {
  double value = 0.0;
  double eta_star = 0.0;
};

// inf_eta {4 eta + 1_{eta < D} 8 sqrt(2/n) int_{eta/2}^{D/2} sqrt(log N)}
EntropyBound entropy_integral_bound_detail(const CoveringSpec& cover, std::size_t n);
double entropy_integral_bound(const CoveringSpec& cover, std::size_t n);

double c_nm(double moment_inner, double moment_full, int m, double dudley);

double finite_dim_c_tilde(double moment_inner, double moment_full, int m,
                          const CoveringSpec& cover, std::size_t n);

// E||Y||^p for Y ~ N(0, I_d)
double gaussian_norm_moment(int d, double p);

enum class SignSource { exhaustive, seeded_rng };

struct RademacherSigns {
  std::vector<int> signs;
  SignSource source = SignSource::seeded_rng;
};

// index-th vector of the exhaustive enumeration (bit i -> sign i)
RademacherSigns enumerate_signs(std::size_t n, std::uint64_t index);
RademacherSigns random_signs(std::size_t n, std::uint64_t seed, std::uint64_t draw);

struct RademacherOptions {
  bool exhaustive = false;
  std::size_t draws = 10000;
  std::uint64_t seed = 0;
  int workers = 0;
};

struct RademacherEstimate {
  double value = 0.0;
  double std_error = 0.0;
  std::size_t draws = 0;
  bool exhaustive = false;
};

// table[theta][i] = g_theta(z_i); estimate of E_sigma sup_theta (1/n) sigma . g_theta
RademacherEstimate empirical_rademacher(const std::vector<std::vector<double>>& table,
                                        const RademacherOptions& opts);
// serial reference used by tests and benchmarks
RademacherEstimate empirical_rademacher_serial(const std::vector<std::vector<double>>& table,
                                               const RademacherOptions& opts);

std::string to_string(CoverKind kind);

}  // namespace concentra::complexity
