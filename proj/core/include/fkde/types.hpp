#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "fkde/errors.hpp"

namespace fkde {

/// Dense n x d row-major point set. Row i is one point in R^d; the same
/// container holds training samples, query points, and score/shift matrices.
struct SampleSet {
    std::vector<double> values;  // n * d scalars, row-major
    std::size_t n = 0;
    std::size_t d = 0;

    SampleSet() = default;

    SampleSet(std::vector<double> data, std::size_t n_rows, std::size_t n_cols);

    static SampleSet zeros(std::size_t n_rows, std::size_t n_cols);

    std::span<const double> row(std::size_t i) const {
        return {values.data() + i * d, d};
    }
    std::span<double> row(std::size_t i) {
        return {values.data() + i * d, d};
    }

    const double* data() const noexcept { return values.data(); }
    double* data() noexcept { return values.data(); }

    bool empty() const noexcept { return n == 0; }

    // Throws InvalidArgumentError unless n >= 1, d >= 1, size matches,
    // and every entry is finite.
    void validate() const;
};

enum class Method { Kde, Sdkde, LaplaceKde };
enum class EngineKind { Naive, Flash };
enum class KernelKind { Gaussian, LaplaceCorrected };

std::string to_string(Method m);
std::string to_string(EngineKind e);
Method method_from_string(const std::string& s);
EngineKind engine_from_string(const std::string& s);

/// Evaluation bandwidth h plus the (possibly different) bandwidth used
/// inside the empirical score.
struct Bandwidth {
    double h = 1.0;
    double h_score = 1.0;

    static Bandwidth uniform(double h) { return {h, h}; }
    // Score kernel at half the evaluation variance: h_score = h / sqrt(2).
    static Bandwidth half_variance_score(double h);

    void validate() const;
};

struct EstimatorConfig {
    Method method = Method::Kde;
    Bandwidth bandwidth;
    EngineKind engine = EngineKind::Flash;
    std::size_t tile_m = 64;
    std::size_t tile_n = 1024;
    bool fused = true;  // meaningful for LaplaceKde only
    std::size_t threads = 0;  // 0 = engine default
    bool fast_accumulation = false;

    void validate() const;
};

/// Per-query density values plus optional diagnostics. Values may be
/// negative for the Laplace-corrected estimator only.
struct DensityResult {
    std::vector<double> values;
    std::optional<double> negative_mass_estimate;
    std::optional<SampleSet> debiased_samples;
};

}  // namespace fkde
