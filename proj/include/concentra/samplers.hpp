#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "concentra/rng.hpp"

namespace concentra {

enum class SamplerKind { mixture, gaussian, truncated_gaussian, exponential, pareto };

struct SamplerSpec {
  SamplerKind kind = SamplerKind::gaussian;
  int dim = 1;
  std::vector<std::vector<double>> atoms;  // mixture
  std::vector<double> weights;             // mixture
  double truncation = 3.0;                 // truncated_gaussian: |coordinate| <= truncation
  double rate = 1.0;                       // exponential
  double shape = 3.0;                      // pareto
  double scale = 1.0;                      // pareto x_m

  static SamplerSpec mixture(std::vector<std::vector<double>> atoms, std::vector<double> weights);
  static SamplerSpec gaussian(int dim);
  static SamplerSpec truncated_gaussian(int dim, double truncation);
  static SamplerSpec exponential(double rate);
  static SamplerSpec pareto(double shape, double scale = 1.0);
};

class Sampler {
 public:
  explicit Sampler(SamplerSpec spec);

  int dim() const { return spec_.dim; }
  const SamplerSpec& spec() const { return spec_; }

  void draw(Rng& rng, std::span<double> out) const;
  // mixture only: index of the drawn atom
  std::size_t draw_atom(Rng& rng) const;

  // count draws, flattened (count * dim), from Rng(seed, stream, counter)
  std::vector<double> stream(std::uint64_t seed, std::uint64_t stream_id, std::uint64_t counter,
                             std::size_t count) const;

 private:
  SamplerSpec spec_;
  std::vector<double> cdf_;
};

std::string to_string(SamplerKind kind);

}  // namespace concentra
