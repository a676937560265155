#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "fkde/metrics.hpp"
#include "fkde/mixture.hpp"
#include "fkde/perfmodel.hpp"
#include "fkde/types.hpp"

namespace fkde::bench {

/// One estimator variant in a sweep; fused matters for LaplaceKde only.
struct MethodSpec {
    Method method = Method::Kde;
    bool fused = true;

    static MethodSpec parse(const std::string& token);  // kde|sdkde|laplace|laplace-nofuse
    std::string label() const;
};

enum class BandwidthRule { Auto, Silverman, SdkdeRate, Fixed };

// Auto = Silverman for KDE/Laplace, the n^(-1/(d+8)) rate rule for SD-KDE.
struct BandwidthPolicy {
    BandwidthRule rule = BandwidthRule::Auto;
    double fixed_h = 0.0;       // Fixed only
    double sdkde_c = 0.0;       // 0 = silverman_prefactor(d)
    bool half_variance_score = false;  // h_score = h / sqrt(2) instead of h
    double fixed_h_score = 0.0;        // explicit h_score override, 0 = off

    Bandwidth resolve(const SampleSet& train, Method method) const;
};

struct ErrorSweepConfig {
    GaussianMixture mixture;
    std::vector<MethodSpec> methods;
    std::vector<std::size_t> n_grid;
    std::vector<std::uint64_t> seeds;
    BandwidthPolicy bandwidth;
    EngineKind engine = EngineKind::Flash;
    std::size_t tile_m = 64;
    std::size_t tile_n = 1024;
    std::size_t threads = 0;
    ErrorMode mode = ErrorMode::Grid1D;
    std::size_t n_eval = 2048;
};

struct ErrorSweepRow {
    MethodSpec method;
    EngineKind engine = EngineKind::Flash;
    std::size_t n_train = 0;
    std::uint64_t seed = 0;
    std::size_t d = 0;
    double h = 0.0;
    double h_score = 0.0;
    ErrorReport report;
    bool failed = false;
    std::string error;
};

// One row per (method, n, seed), ordered by (method, n, seed) regardless of
// completion order. A failing cell is recorded and the sweep continues.
std::vector<ErrorSweepRow> error_sweep(const ErrorSweepConfig& config);

struct RuntimeSweepConfig {
    GaussianMixture mixture;
    std::vector<MethodSpec> methods;
    std::vector<EngineKind> engines;
    std::vector<std::size_t> n_grid;     // n_test = n_train / 8 per cell
    std::vector<std::size_t> tile_m_grid{64};
    std::vector<std::size_t> tile_n_grid{1024};
    BandwidthPolicy bandwidth;
    std::size_t threads = 0;
    std::size_t repeats = 5;             // median of repeats, after one warm-up
    std::uint64_t seed = 0;
    std::optional<perfmodel::HardwareSpec> hw;  // enables the utilization column
};

struct RuntimeSweepRow {
    MethodSpec method;
    EngineKind engine = EngineKind::Flash;
    std::size_t n_train = 0;
    std::size_t n_test = 0;
    std::size_t d = 0;
    std::size_t tile_m = 0;
    std::size_t tile_n = 0;
    std::size_t repeats = 0;
    double median_seconds = 0.0;
    double model_flops = 0.0;
    std::optional<double> util;
    bool failed = false;
    std::string error;
};

// Timing covers the estimator call (plus data-dependent bandwidth
// resolution); data generation and I/O are excluded. Naive cells are skipped
// for tile plans other than the first (the oracle has no tiles).
std::vector<RuntimeSweepRow> runtime_sweep(const RuntimeSweepConfig& config);

// Stable column order; see the schema section of the README.
std::string error_rows_csv(const std::vector<ErrorSweepRow>& rows);
std::string error_rows_json(const std::vector<ErrorSweepRow>& rows);
std::string runtime_rows_csv(const std::vector<RuntimeSweepRow>& rows);
std::string runtime_rows_json(const std::vector<RuntimeSweepRow>& rows);

}  // namespace fkde::bench
