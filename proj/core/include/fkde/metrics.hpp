#pragma once

#include <cstdint>
#include <functional>

#include "fkde/mixture.hpp"
#include "fkde/types.hpp"

namespace fkde::bench {

enum class ErrorMode { Grid1D, ImportanceMC };

/// Oracle-error metrics of one estimator run against the true mixture
/// density. Errors are computed on the signed estimate (no clamping);
/// negative_mass integrates max(0, -p_hat) separately.
struct ErrorReport {
    double mise = 0.0;
    double miae = 0.0;
    double negative_mass = 0.0;
    // Standard errors; zero for Grid1D quadrature.
    double mise_se = 0.0;
    double miae_se = 0.0;
    double negative_mass_se = 0.0;
    std::size_t n_train = 0;
    Method method = Method::Kde;
    std::uint64_t seed = 0;
};

using EstimateFn = std::function<std::vector<double>(const SampleSet&)>;

// Grid1D (d = 1 only): trapezoid quadrature on n_eval points spanning
// [min_c(mu_c - 6 sigma_c), max_c(mu_c + 6 sigma_c)].
// ImportanceMC (any d): draws z ~ mix and averages (p_hat-p)^2/p, |p_hat-p|/p,
// max(0,-p_hat)/p with standard errors.
// Throws NonFiniteValueError if the estimate contains NaN/Inf.
ErrorReport error_metrics(const EstimateFn& estimate_at, const GaussianMixture& mix,
                          ErrorMode mode, std::size_t n_eval, std::uint64_t seed);

}  // namespace fkde::bench
