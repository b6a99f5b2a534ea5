#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "concentra/samplers.hpp"
#include "concentra/xi.hpp"

namespace concentra::ulln {

using Point = std::span<const double>;

struct ThetaGrid {
  int dim = 1;
  std::vector<double> points;  // flattened, size() * dim

  std::size_t size() const { return dim > 0 ? points.size() / static_cast<std::size_t>(dim) : 0; }
  Point point(std::size_t i) const { return Point(points).subspan(i * dim, dim); }
};

// lattice with per_axis points per coordinate on [-radius, radius]^dim, kept if inside the ball
ThetaGrid lattice_grid(int dim, double radius, int per_axis);

struct SampleBatch {
  int n = 0, m = 0, dx = 1, dy = 1;
  std::uint64_t seed = 0, trial = 0;
  std::vector<double> x;  // n * dx
  std::vector<double> y;  // n * m * dy

  Point x_at(int i) const { return Point(x).subspan(static_cast<std::size_t>(i) * dx, dx); }
  Point y_at(int i, int j) const {
    return Point(y).subspan((static_cast<std::size_t>(i) * m + j) * dy, dy);
  }
};

// X from stream kSampleX and Y from kSampleY, both at counter = trial
SampleBatch draw_batch(const Sampler& px, const Sampler& py, int n, int m, std::uint64_t seed,
                       std::uint64_t trial);

struct LipschitzEnvelopeSet {
  std::function<double(Point x, Point xt, Point y)> h_x;
  std::function<double(Point y, Point yt)> h_y;
  std::function<double(Point x, Point y)> lipschitz;
  std::function<double(Point x, Point y)> envelope;
  std::function<double(Point theta)> shift;
  std::function<double(Point x, Point y)> lower;
};

using Objective = std::function<double(Point theta, Point x, Point y)>;

struct StochOptProblem {
  Objective objective;
  ThetaGrid grid;
  LipschitzEnvelopeSet envelopes;
  XiFunction xi_x;
  XiFunction xi_y;
  int m = 1;
  int n = 1;
  double eps_opt = 0.0;

  void validate() const;
};

XiFunction reuse_xi(const XiFunction& xi_x, const XiFunction& xi_y, int m);

// P(phi >= t + C) bound; exponent n sup{lambda t - xi_X - m xi_Y(./m)}
TailReport ulln_tail(const StochOptProblem& problem, double t, double c_nm);
TailReport opt_tail(const StochOptProblem& problem, double t, double c_nm);
double opt_l1_bound(double c_nm, double eps_opt);

// (1/nm) sum_ij g_theta(x_i, y_ij) per grid point
std::vector<double> empirical_means(const StochOptProblem& problem, const SampleBatch& batch);

// max over the grid of sign * (empirical - population), sign in {+1, -1}
double sup_deviation(const StochOptProblem& problem, const SampleBatch& batch,
                     std::span<const double> population_means, int sign);

struct Minimizer {
  std::size_t index = 0;
  double objective = 0.0;
  double eps_opt = 0.0;  // relative to the grid
};

Minimizer empirical_minimizer(const StochOptProblem& problem, const SampleBatch& batch);

struct EnvelopeAudit {
  std::size_t tuples = 0;
  std::size_t h_x = 0, h_y = 0, lipschitz = 0, envelope = 0, lower = 0;
  std::size_t violations() const { return h_x + h_y + lipschitz + envelope + lower; }
};

// random (theta1, theta2, x, x~, y, y~) tuples; counts inequality violations of the envelope set
EnvelopeAudit audit_envelopes(const StochOptProblem& problem, const Sampler& px, const Sampler& py,
                              std::size_t tuples, std::uint64_t seed);

}  // namespace concentra::ulln
