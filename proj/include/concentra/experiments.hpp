#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include <json.hpp>

#include "concentra/dsm.hpp"
#include "concentra/gan.hpp"
#include "concentra/mc.hpp"
#include "concentra/reuse_toy.hpp"

namespace concentra::experiments {

// RFC-4180 CSV with a fixed column order
class CsvWriter {
 public:
  explicit CsvWriter(std::vector<std::string> header);
  void add(std::vector<std::string> row);
  std::string str() const;
  std::size_t rows() const { return rows_.size(); }

  static std::string quote(const std::string& field);
  static std::string num(double v);

 private:
  std::vector<std::string> header_;
  std::vector<std::vector<std::string>> rows_;
};

// thresholds t at which a nonincreasing bound(t) hits geometric targets in [lo, hi]
std::vector<double> auto_threshold_grid(const std::function<double(double)>& bound_of_t,
                                        double hi = 0.85, double lo = 1.1e-3, int points = 8);

struct CertificateRow {
  std::string label;
  double t = 0.0;
  double threshold = 0.0;
  double bound = 1.0;
  mc::McReport report;
};

struct MeanCheck {
  std::string label;
  double mean = 0.0;
  double std_error = 0.0;
  double limit = 0.0;  // the bound the mean is compared against (before the SE slack)
  double slack_se = 3.0;
  bool pass = false;
};

struct Outcome {
  std::vector<CertificateRow> certificates;
  std::vector<MeanCheck> means;
  nlohmann::json summary;
  std::string csv;

  bool any_violation() const;
  bool all_certified() const;  // every certificate certified and every mean check passed
};

// --- ULLN / optimization on the d = 1 reuse toy ---
struct ToyExperimentConfig {
  ulln::ReuseToyConfig toy;
  int n = 50;
  int m = 1;
  std::size_t trials = 1000;
  std::vector<double> t_grid;  // empty: automatic
  std::uint64_t seed = 1;
  double confidence = 0.99;
  int workers = 0;
};

Outcome run_ulln_certify(const ToyExperimentConfig& cfg);
Outcome run_opt_certify(const ToyExperimentConfig& cfg);

// --- denoising score matching ---
struct DsmExperimentConfig {
  dsm::CompactMixtureData data;
  dsm::NoiseSchedule schedule;
  double radius = 4.0;
  int n = 50;
  int m = 1;
  std::size_t trials = 1000;
  std::vector<double> eps_grid;  // empty: automatic
  std::uint64_t seed = 1;
  double confidence = 0.99;
  std::size_t sigma_y_samples = 100000;
  std::size_t envelope_tuples = 0;  // 0 skips the envelope audit
  int workers = 0;
};

struct DsmTrial {
  double excess = 0.0;
  double eps_opt = 0.0;
  bool projected = false;
  bool rank_deficient = false;
};

struct DsmSetup {
  dsm::ResolvedSchedule rs;
  dsm::ModelBounds bounds;
  dsm::DsmConstantLedger ledger;
  dsm::CDsm c;
  dsm::PopulationOptimum optimum;
  double r_star = 0.0;
};

DsmSetup prepare_dsm(const DsmExperimentConfig& cfg);
DsmTrial run_dsm_trial(const DsmExperimentConfig& cfg, const DsmSetup& setup, std::uint64_t trial);
Outcome run_dsm(const DsmExperimentConfig& cfg);

// --- GAN ---
struct GanExperimentConfig {
  gan::GanConfig problem;
  int n = 100;
  int m = 1;
  std::size_t trials = 1000;
  std::vector<double> t_grid;  // empty: automatic
  std::uint64_t seed = 1;
  double confidence = 0.99;
  int workers = 0;
};

Outcome run_gan(const GanExperimentConfig& cfg);

nlohmann::json to_json(const mc::McReport& r);
nlohmann::json to_json(const dsm::DsmConstantLedger& l);

}  // namespace concentra::experiments
