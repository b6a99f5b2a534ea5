#pragma once

#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "concentra/experiments.hpp"
#include "concentra/xi.hpp"

namespace concentra::cli {

enum ExitCode { kOk = 0, kViolation = 1, kUsage = 2 };

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// quadratic:a | bernstein:u | series:q:norm | psi1:norm | psi2:norm
XiFunction parse_xi(const std::string& text);

// parse with line/column diagnostics on malformed input
nlohmann::json parse_config_text(const std::string& text, const std::string& origin);
nlohmann::json load_config(const std::string& path);

struct GlobalFields {
  std::uint64_t seed = 1;
  std::size_t trials = 1000;
  std::string output_path;
  double confidence = 0.99;
};

// each throws ConfigError naming the offending field (and its line when known)
experiments::ToyExperimentConfig toy_config(const nlohmann::json& j, GlobalFields& g,
                                            const std::string& text = {});
experiments::DsmExperimentConfig dsm_config(const nlohmann::json& j, GlobalFields& g,
                                            const std::string& text = {});
experiments::GanExperimentConfig gan_config(const nlohmann::json& j, GlobalFields& g,
                                            const std::string& text = {});

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int run(int argc, char** argv);

}  // namespace concentra::cli
