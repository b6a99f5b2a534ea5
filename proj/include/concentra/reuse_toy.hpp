#pragma once

#include <cstdint>
#include <vector>

#include "concentra/samplers.hpp"
#include "concentra/ulln.hpp"

namespace concentra::ulln {

// d = 1 problem with closed-form population objective:
//   g_theta(x, y) = (theta - x)^2 / 2 + (theta + x) y,  theta in [-R, R]
// x from a finite atom law, y standard Gaussian or Pareto (heavy tail).
enum class ToyNoise { gaussian, pareto };

struct ReuseToyConfig {
  std::vector<double> atoms{-1.0, 1.0};
  std::vector<double> weights{0.5, 0.5};
  double radius = 2.0;
  int grid_points = 41;
  ToyNoise noise = ToyNoise::gaussian;
  double pareto_shape = 3.0;
};

class ReuseToy {
 public:
  explicit ReuseToy(ReuseToyConfig cfg);

  const ReuseToyConfig& config() const { return cfg_; }
  const Sampler& sampler_x() const { return px_; }
  const Sampler& sampler_y() const { return py_; }
  const ThetaGrid& grid() const { return grid_; }
  double r0() const { return r0_; }

  double mean_y() const;
  double mean_abs_y() const;
  double second_moment_y() const;

  double population_objective(double theta) const;
  std::vector<double> population_means() const;
  double population_inf() const;  // over [-R, R]

  XiFunction xi_x() const;
  XiFunction xi_y() const;

  // moments of L(x, y) = R + r0 + |y|
  double moment_inner() const;
  double moment_full() const;
  double dudley(int n) const;
  double c_nm(int n, int m) const;

  // worst-case grid-vs-interval gap of the empirical objective (unit curvature)
  double grid_gap_bound() const;

  StochOptProblem problem(int n, int m) const;

 private:
  ReuseToyConfig cfg_;
  Sampler px_;
  Sampler py_;
  ThetaGrid grid_;
  double r0_ = 0.0;
  double mean_x_ = 0.0;
  double second_x_ = 0.0;
};

struct ToyTrial {
  double phi_plus = 0.0;
  double phi_minus = 0.0;
  double excess = 0.0;
  double achieved_eps_opt = 0.0;  // grid minimum minus interval minimum of the empirical objective
};

ToyTrial run_toy_trial(const ReuseToy& toy, const StochOptProblem& problem,
                       const std::vector<double>& population_means, std::uint64_t seed,
                       std::uint64_t trial);

}  // namespace concentra::ulln
