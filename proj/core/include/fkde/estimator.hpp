#pragma once

#include "fkde/types.hpp"

namespace fkde {

// Dispatch on (method, engine). The single entry point used by the CLI and
// the benchmark sweeps.
DensityResult estimate(const SampleSet& train, const SampleSet& queries,
                       const EstimatorConfig& config);

}  // namespace fkde
