#pragma once

#include "fkde/types.hpp"

namespace fkde {

// Mean of the per-dimension sample standard deviations (ddof = 1).
double mean_stddev(const SampleSet& samples);

// Rule-of-thumb bandwidth for a single isotropic h:
//   h = sigma_bar * (4 / (d + 2))^(1/(d+4)) * n^(-1/(d+4)).
// Throws DegenerateDataError when the spread is zero in every dimension.
double silverman_bandwidth(const SampleSet& samples);

// Rate-matched bandwidth for the score-debiased estimator:
//   h = c * sigma_bar * n^(-1/(d+8)).
double sdkde_bandwidth(const SampleSet& samples, double c);

// Prefactor (4 / (d + 2))^(1/(d+4)); the default c for sdkde_bandwidth so the
// two rules coincide at small n.
double silverman_prefactor(std::size_t d);

}  // namespace fkde
