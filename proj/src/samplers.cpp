#include "concentra/samplers.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace concentra {

SamplerSpec SamplerSpec::mixture(std::vector<std::vector<double>> atoms, std::vector<double> weights) {
  SamplerSpec s;
  s.kind = SamplerKind::mixture;
  s.dim = atoms.empty() ? 0 : static_cast<int>(atoms[0].size());
  s.atoms = std::move(atoms);
  s.weights = std::move(weights);
  return s;
}

SamplerSpec SamplerSpec::gaussian(int dim) {
  SamplerSpec s;
  s.kind = SamplerKind::gaussian;
  s.dim = dim;
  return s;
}

SamplerSpec SamplerSpec::truncated_gaussian(int dim, double truncation) {
  SamplerSpec s;
  s.kind = SamplerKind::truncated_gaussian;
  s.dim = dim;
  s.truncation = truncation;
  return s;
}

SamplerSpec SamplerSpec::exponential(double rate) {
  SamplerSpec s;
  s.kind = SamplerKind::exponential;
  s.rate = rate;
  return s;
}

SamplerSpec SamplerSpec::pareto(double shape, double scale) {
  SamplerSpec s;
  s.kind = SamplerKind::pareto;
  s.shape = shape;
  s.scale = scale;
  return s;
}

Sampler::Sampler(SamplerSpec spec) : spec_(std::move(spec)) {
  if (spec_.dim < 1) throw std::invalid_argument("sampler: dim must be >= 1");
  switch (spec_.kind) {
    case SamplerKind::mixture: {
      if (spec_.atoms.empty() || spec_.atoms.size() != spec_.weights.size())
        throw std::invalid_argument("mixture sampler: atoms/weights mismatch");
      double total = 0.0;
      for (std::size_t k = 0; k < spec_.atoms.size(); ++k) {
        if (static_cast<int>(spec_.atoms[k].size()) != spec_.dim)
          throw std::invalid_argument("mixture sampler: atom dimension mismatch");
        if (!(spec_.weights[k] > 0.0)) throw std::invalid_argument("mixture sampler: weights must be > 0");
        total += spec_.weights[k];
      }
      if (std::abs(total - 1.0) > 1e-9) throw std::invalid_argument("mixture sampler: weights must sum to 1");
      cdf_.resize(spec_.weights.size());
      std::partial_sum(spec_.weights.begin(), spec_.weights.end(), cdf_.begin());
      cdf_.back() = 1.0;
      break;
    }
    case SamplerKind::truncated_gaussian:
      if (!(spec_.truncation > 0.0)) throw std::invalid_argument("truncated gaussian: truncation must be > 0");
      break;
    case SamplerKind::exponential:
      if (spec_.dim != 1 || !(spec_.rate > 0.0)) throw std::invalid_argument("exponential sampler: d=1, rate > 0");
      break;
    case SamplerKind::pareto:
      if (spec_.dim != 1 || !(spec_.shape > 0.0) || !(spec_.scale > 0.0))
        throw std::invalid_argument("pareto sampler: d=1, shape > 0, scale > 0");
      break;
    case SamplerKind::gaussian: break;
  }
}

std::size_t Sampler::draw_atom(Rng& rng) const {
  if (spec_.kind != SamplerKind::mixture) throw std::logic_error("draw_atom: not a mixture");
  const double u = rng.uniform();
  const auto it = std::upper_bound(cdf_.begin(), cdf_.end(), u);
  return std::min<std::size_t>(static_cast<std::size_t>(it - cdf_.begin()), cdf_.size() - 1);
}

void Sampler::draw(Rng& rng, std::span<double> out) const {
  if (static_cast<int>(out.size()) != spec_.dim) throw std::invalid_argument("sampler: output size mismatch");
  switch (spec_.kind) {
    case SamplerKind::mixture: {
      const auto& a = spec_.atoms[draw_atom(rng)];
      std::copy(a.begin(), a.end(), out.begin());
      break;
    }
    case SamplerKind::gaussian:
      for (auto& v : out) v = rng.normal();
      break;
    case SamplerKind::truncated_gaussian:
      for (auto& v : out) {
        do {
          v = rng.normal();
        } while (std::abs(v) > spec_.truncation);
      }
      break;
    case SamplerKind::exponential: out[0] = rng.exponential(spec_.rate); break;
    case SamplerKind::pareto: out[0] = rng.pareto(spec_.shape, spec_.scale); break;
  }
}

std::vector<double> Sampler::stream(std::uint64_t seed, std::uint64_t stream_id,
                                    std::uint64_t counter, std::size_t count) const {
  Rng rng(seed, stream_id, counter);
  std::vector<double> out(count * static_cast<std::size_t>(spec_.dim));
  for (std::size_t i = 0; i < count; ++i)
    draw(rng, std::span<double>(out).subspan(i * spec_.dim, spec_.dim));
  return out;
}

std::string to_string(SamplerKind kind) {
  switch (kind) {
    case SamplerKind::mixture: return "mixture";
    case SamplerKind::gaussian: return "gaussian";
    case SamplerKind::truncated_gaussian: return "truncated_gaussian";
    case SamplerKind::exponential: return "exponential";
    case SamplerKind::pareto: return "pareto";
  }
  return "gaussian";
}

}  // namespace concentra
