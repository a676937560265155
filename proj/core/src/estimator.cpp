#include "fkde/estimator.hpp"

#include <algorithm>

#include "fkde/engine.hpp"
#include "fkde/oracle.hpp"

namespace fkde {

namespace {

// Query-set average of the negative part. A cheap diagnostic for signed
// estimates; the bench module computes the properly integrated version.
void attach_negative_mass(DensityResult& result) {
    double acc = 0.0;
    for (double v : result.values) {
        acc += std::max(0.0, -v);
    }
    result.negative_mass_estimate = acc / static_cast<double>(result.values.size());
}

DensityResult dispatch(const SampleSet& train, const SampleSet& queries,
                       const EstimatorConfig& config) {
    if (config.engine == EngineKind::Naive) {
        switch (config.method) {
            case Method::Kde:
                return oracle::kde_naive(train, queries, config.bandwidth.h);
            case Method::Sdkde:
                return oracle::sdkde_naive(train, queries, config.bandwidth);
            case Method::LaplaceKde:
                return oracle::laplace_naive(train, queries, config.bandwidth.h);
        }
    }
    const engine::TilePlan plan =
        engine::TilePlan::make(queries.n, train.n, config.tile_m, config.tile_n);
    const engine::EngineOptions opts{config.threads, config.fast_accumulation};
    switch (config.method) {
        case Method::Kde:
            return engine::kde_flash(train, queries, config.bandwidth.h,
                                     KernelKind::Gaussian, true, plan, opts);
        case Method::Sdkde:
            return engine::sdkde_flash(train, queries, config.bandwidth, plan, opts);
        case Method::LaplaceKde:
            return engine::kde_flash(train, queries, config.bandwidth.h,
                                     KernelKind::LaplaceCorrected, config.fused, plan, opts);
    }
    throw InvalidArgumentError("estimate: unknown method");
}

}  // namespace

DensityResult estimate(const SampleSet& train, const SampleSet& queries,
                       const EstimatorConfig& config) {
    config.validate();
    DensityResult result = dispatch(train, queries, config);
    if (config.method == Method::LaplaceKde) {
        attach_negative_mass(result);
    }
    return result;
}

}  // namespace fkde
