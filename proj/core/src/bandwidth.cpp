#include "fkde/bandwidth.hpp"

#include <cmath>

#include "fkde/errors.hpp"

namespace fkde {

double mean_stddev(const SampleSet& samples) {
    samples.validate();
    if (samples.n < 2) {
        throw InvalidArgumentError("mean_stddev: need at least 2 samples");
    }
    const std::size_t n = samples.n;
    const std::size_t d = samples.d;
    double acc = 0.0;
    for (std::size_t j = 0; j < d; ++j) {
        double mean = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            mean += samples.values[i * d + j];
        }
        mean /= static_cast<double>(n);
        double ssq = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double diff = samples.values[i * d + j] - mean;
            ssq += diff * diff;
        }
        acc += std::sqrt(ssq / static_cast<double>(n - 1));
    }
    return acc / static_cast<double>(d);
}

double silverman_prefactor(std::size_t d) {
    const double dd = static_cast<double>(d);
    return std::pow(4.0 / (dd + 2.0), 1.0 / (dd + 4.0));
}

double silverman_bandwidth(const SampleSet& samples) {
    const double sigma = mean_stddev(samples);
    if (sigma <= 0.0) {
        throw DegenerateDataError("silverman_bandwidth: zero spread in every dimension");
    }
    const double dd = static_cast<double>(samples.d);
    return sigma * silverman_prefactor(samples.d) *
           std::pow(static_cast<double>(samples.n), -1.0 / (dd + 4.0));
}

double sdkde_bandwidth(const SampleSet& samples, double c) {
    if (!(c > 0.0) || !std::isfinite(c)) {
        throw InvalidArgumentError("sdkde_bandwidth: c must be positive");
    }
    const double sigma = mean_stddev(samples);
    if (sigma <= 0.0) {
        throw DegenerateDataError("sdkde_bandwidth: zero spread in every dimension");
    }
    const double dd = static_cast<double>(samples.d);
    return c * sigma * std::pow(static_cast<double>(samples.n), -1.0 / (dd + 8.0));
}

}  // namespace fkde
