#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "concentra/complexity.hpp"
#include "concentra/samplers.hpp"
#include "concentra/xi.hpp"

namespace concentra::dsm {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

struct SigmaSpec {
  enum class Kind { constant, linear };
  Kind kind = Kind::constant;
  double value = 1.0;  // constant level, or intercept for linear
  double slope = 0.0;

  double operator()(double s) const { return kind == Kind::constant ? value : value + slope * s; }
};

struct NoiseSchedule {
  double c = 1.0;
  SigmaSpec sigma;
  std::vector<double> times;
  std::vector<double> gammas;

  void validate() const;
};

// sqrt of int_0^t exp(-2c(t-s)) sigma_s^2 ds
double tilde_sigma(const NoiseSchedule& schedule, double t);

struct ResolvedSchedule {
  std::vector<double> t, gamma, sigma_tilde, decay;  // decay = exp(-c t)
  int size() const { return static_cast<int>(t.size()); }
};

ResolvedSchedule resolve(const NoiseSchedule& schedule);

struct CompactMixtureData {
  int dim = 1;
  std::vector<Vec> atoms;
  std::vector<double> weights;
  double r0 = 1.0;

  void validate() const;
  Vec mean() const;
  Mat second_moment() const;
  SamplerSpec sampler_spec() const;
};

// s(z, t_j) = A_j z + b_j; parameter is the stacked (A_1, b_1, ..., A_J, b_J)
struct LinearScoreModel {
  int dim = 1;
  std::vector<Mat> A;
  std::vector<Vec> b;

  static LinearScoreModel zero(int dim, int J);
  int timesteps() const { return static_cast<int>(A.size()); }
  int param_count() const { return timesteps() * (dim * dim + dim); }
  Vec eval(int j, const Vec& z) const;
  Vec stacked() const;
  static LinearScoreModel from_stacked(int dim, int J, const Vec& theta);
  double norm() const;
};

struct ModelBounds {
  std::vector<double> a, b, L, alpha, beta;
  double q = 1.0;

  // constants implied by the linear family in the radius-R ball
  static ModelBounds linear_family(double radius, int J);
};

struct DsmConstantLedger {
  double A_theta = 0, B_theta = 0, C_theta = 0, D_theta = 0;
  double A_X = 0, B_X = 0;
  double A_Y = 0, B_Y = 0;
  double sigma_Y = 0, K_Y = 0;
  double A_XYm = 0;
  double q = 1;
  int m = 1;
  int d = 1;
  double mean_norm_y = 0;   // E||y||
  double h_y_psi1_norm = 0; // plug-in Orlicz norm behind sigma_Y

  double x_term() const;    // (A_X + B_X E||y||)^2 / 2
  double y_quadratic() const;  // 4 (A_Y + 4 B_Y)^2 sigma_Y^2
  XiFunction xi_x() const;  // quadratic, restricted to [0, m K_Y)
  XiFunction xi_y() const;  // quadratic on [0, K_Y)
};

// Assemble the ledger for a given sigma_Y.
DsmConstantLedger assemble_ledger(const NoiseSchedule& schedule, const ModelBounds& bounds,
                                  double r0, int d, int m, double sigma_y);

double h_y_value(double A_Y, double B_Y, const Vec& y, const Vec& yt);

struct SigmaYOptions {
  std::size_t samples = 100000;
  std::uint64_t seed = 0;
};

// sigma_Y from the plug-in Psi_1 norm N of h_Y(Y, Y~): sigma_Y = (sqrt3/2) N / (A_Y + 4 B_Y),
// so that K_Y = 1/(sqrt3 N) and the quadratic term 3 N^2 lambda^2 dominates the q = 1 generator.
DsmConstantLedger dsm_constants(const NoiseSchedule& schedule, const ModelBounds& bounds,
                                double r0, int d, int m, const SigmaYOptions& opts = {});

// mgf check of h_Y samples against the quadratic xi_Y and the q = 1 generator on [0, K_Y)
struct SigmaYCertificate {
  std::vector<EnvelopeVerdict> quadratic;
  std::vector<EnvelopeVerdict> generator;
  bool pass() const;
};
SigmaYCertificate certify_sigma_y(const DsmConstantLedger& ledger, std::size_t samples,
                                  std::uint64_t seed);

double dsm_objective(const LinearScoreModel& model, const ResolvedSchedule& rs, const Vec& x0,
                     const Vec& y);

Vec true_score(const CompactMixtureData& data, double decay, double sigma_tilde, const Vec& z);
Vec true_score(const CompactMixtureData& data, const NoiseSchedule& schedule, double t, const Vec& z);

// closed form: sum_j gamma_j [tr(W M W^T) + 2 tr(A) + d / sigma~^2]
double population_objective(const LinearScoreModel& model, const CompactMixtureData& data,
                            const ResolvedSchedule& rs);

struct PopulationOptimum {
  LinearScoreModel model;
  double objective = 0.0;
  bool interior = true;
  double multiplier = 0.0;
};

PopulationOptimum population_optimum(const CompactMixtureData& data, const ResolvedSchedule& rs,
                                     double radius);

double score_matching_error(const LinearScoreModel& model, const CompactMixtureData& data,
                            const ResolvedSchedule& rs);

struct TrainResult {
  LinearScoreModel model;
  double eps_opt = 0.0;
  bool projected = false;
  bool rank_deficient = false;
  double objective = 0.0;  // empirical objective at the returned model
};

// x: n points, y: n*m points (row i*m + k pairs with x_i)
TrainResult train_empirical_dsm(const std::vector<Vec>& x, const std::vector<Vec>& y, int m,
                                const ResolvedSchedule& rs, double radius);

double empirical_objective(const LinearScoreModel& model, const std::vector<Vec>& x,
                           const std::vector<Vec>& y, int m, const ResolvedSchedule& rs);

// sum_j gamma_j (P + Q||y||)^2 with P, Q as in the theta-Lipschitz chain
double objective_envelope(const ResolvedSchedule& rs, const ModelBounds& bounds, double r0,
                          double norm_y);

struct CDsm {
  double moment_inner = 0, moment_full = 0, dudley = 0, value = 0;
  int param_count = 0;
};

CDsm c_dsm(const DsmConstantLedger& ledger, int J, int n, int m, double radius);

struct DsmBoundReport {
  TailReport tail;
  double threshold = 0.0;  // eps + R_star + 2 C_dsm + eps_opt
};

DsmBoundReport dsm_bound(double eps, int n, int m, const DsmConstantLedger& ledger, double r_star,
                         double c_dsm_value, double eps_opt = 0.0);

struct DsmEnvelopeAudit {
  std::size_t tuples = 0;
  std::size_t theta_lipschitz = 0, h_x = 0, h_y = 0, envelope = 0;
  std::size_t growth = 0, z_lipschitz = 0, model_theta_lipschitz = 0;
  std::size_t violations() const {
    return theta_lipschitz + h_x + h_y + envelope + growth + z_lipschitz + model_theta_lipschitz;
  }
};

DsmEnvelopeAudit audit_dsm_envelopes(const NoiseSchedule& schedule, const DsmConstantLedger& ledger,
                                     const ModelBounds& bounds, double r0, int d, double radius,
                                     std::size_t tuples, std::uint64_t seed);

// uniform point in the radius-R ball of the given dimension
Vec random_in_ball(Rng& rng, int dim, double radius);

}  // namespace concentra::dsm
