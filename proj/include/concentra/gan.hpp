#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "concentra/complexity.hpp"
#include "concentra/samplers.hpp"
#include "concentra/ulln.hpp"
#include "concentra/xi.hpp"

namespace concentra::gan {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

enum class FeatureKind { identity, fourier };
enum class NoiseKind { gaussian, pareto };

// F(x) = x, or F_k(x) = cos(w_k . x + b_k) / sqrt(D)
struct FeatureMap {
  FeatureKind kind = FeatureKind::identity;
  int in_dim = 1;
  Mat omega;  // D x in_dim
  Vec phase;  // D

  static FeatureMap identity(int dim);
  static FeatureMap fourier(int dim, int features, double bandwidth, std::uint64_t seed);

  int out_dim() const { return kind == FeatureKind::identity ? in_dim : static_cast<int>(omega.rows()); }
  Vec eval(const Vec& x) const;
  // E F(a Y + b), Y ~ N(0, I)
  Vec gaussian_pushforward_mean(double a, const Vec& b) const;
};

struct GanConfig {
  int dim = 1;
  std::vector<Vec> atoms;
  std::vector<double> weights;
  NoiseKind noise = NoiseKind::gaussian;
  double pareto_shape = 3.0;
  double radius = 2.0;   // generator parameter (a, b) ball
  int grid_per_axis = 21;
  FeatureMap features = FeatureMap::identity(1);
};

// IPM for the unit-ball linear discriminator class: dual norm of the feature-mean gap
double ipm_linear(const Vec& mean_p, const Vec& mean_q);
// same sup restricted to a finite discriminator grid (rows of phi_grid)
double ipm_grid(const Vec& mean_p, const Vec& mean_q, const Mat& phi_grid);

struct GanTrainResult {
  std::size_t index = 0;  // grid index of theta*
  double objective = 0.0; // empirical IPM at theta*
  double eps_opt = 0.0;   // exact over the grid
};

struct GanTrial {
  double excess = 0.0;
  double empirical_ipm = 0.0;
  std::size_t index = 0;
};

class GanProblem {
 public:
  explicit GanProblem(GanConfig cfg);

  const GanConfig& config() const { return cfg_; }
  const ulln::ThetaGrid& grid() const { return grid_; }
  const Sampler& sampler_x() const { return px_; }
  const Sampler& sampler_y() const { return py_; }

  double generator_scale(std::size_t k) const { return grid_.point(k)[0]; }
  Vec generator_shift(std::size_t k) const;

  Vec data_feature_mean() const;
  Vec generated_feature_mean(std::size_t k) const;
  double population_ipm(std::size_t k) const;
  const std::vector<double>& population_ipms() const { return pop_; }
  double population_inf() const;

  // q = 2 Orlicz norms of h_X (exact over atom pairs) and h_Y (closed form / constant)
  double c_x() const { return c_x_; }
  double c_y() const { return c_y_; }
  bool has_y_orlicz() const;
  XiFunction xi_x() const;
  XiFunction xi_y() const;

  // moments of L(x, y) = L_X(x) + L_Y(y) (C~ = 1 for the stacked metric)
  double moment_inner() const;
  double moment_full() const;
  complexity::CoveringSpec cover() const;

  GanTrainResult train(const ulln::SampleBatch& batch) const;
  GanTrial run_trial(int n, int m, std::uint64_t seed, std::uint64_t trial) const;

 private:
  double mean_norm_y() const;
  double second_norm_y() const;
  double lipschitz_y_scale() const;

  GanConfig cfg_;
  Sampler px_;
  Sampler py_;
  ulln::ThetaGrid grid_;
  std::vector<double> pop_;
  double c_x_ = 0.0, c_y_ = 0.0;
};

XiFunction gan_xi(double norm, double q);
double gan_c_nm(const GanProblem& problem, int n, int m);
TailReport gan_tail(const GanProblem& problem, int n, int m, double t, double c_gan);
double gan_l1_bound(double c_gan, double eps_opt);

}  // namespace concentra::gan
