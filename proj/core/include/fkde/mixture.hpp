#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "fkde/types.hpp"

namespace fkde::bench {

/// Mixture of isotropic Gaussians; the ground-truth density for synthetic
/// benchmarks.
struct GaussianMixture {
    std::vector<double> weights;   // sum to 1 within 1e-12
    SampleSet means;               // components x d
    std::vector<double> sigmas;    // per-component isotropic std, > 0

    std::size_t components() const { return weights.size(); }
    std::size_t dim() const { return means.d; }

    void validate() const;
};

// i.i.d. draws; bitwise reproducible for a fixed seed.
SampleSet sample_mixture(const GaussianMixture& mix, std::size_t n, std::uint64_t seed);

// Exact mixture density at each point.
std::vector<double> mixture_pdf(const GaussianMixture& mix, const SampleSet& points);

// JSON config round-trip (schema_version, d, weights, means, sigmas).
GaussianMixture load_mixture(const std::string& path);
void save_mixture(const GaussianMixture& mix, const std::string& path);

// FNV-1a over the canonical serialized form; identifies the mixture in
// sidecar metadata.
std::uint64_t mixture_hash(const GaussianMixture& mix);

}  // namespace fkde::bench
