#include "fkde/sweep.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <sstream>

#include <json.hpp>

#include "fkde/bandwidth.hpp"
#include "fkde/errors.hpp"
#include "fkde/estimator.hpp"
#include "fkde/rng.hpp"

namespace fkde::bench {

MethodSpec MethodSpec::parse(const std::string& token) {
    if (token == "laplace-nofuse") {
        return {Method::LaplaceKde, false};
    }
    return {method_from_string(token), true};
}

std::string MethodSpec::label() const {
    if (method == Method::LaplaceKde && !fused) {
        return "laplace-nofuse";
    }
    return to_string(method);
}

Bandwidth BandwidthPolicy::resolve(const SampleSet& train, Method method) const {
    BandwidthRule effective = rule;
    if (effective == BandwidthRule::Auto) {
        effective = method == Method::Sdkde ? BandwidthRule::SdkdeRate : BandwidthRule::Silverman;
    }
    double h = 0.0;
    switch (effective) {
        case BandwidthRule::Silverman:
            h = silverman_bandwidth(train);
            break;
        case BandwidthRule::SdkdeRate: {
            const double c = sdkde_c > 0.0 ? sdkde_c : silverman_prefactor(train.d);
            h = sdkde_bandwidth(train, c);
            break;
        }
        case BandwidthRule::Fixed:
            if (!(fixed_h > 0.0)) {
                throw InvalidArgumentError("bandwidth policy: fixed rule needs h > 0");
            }
            h = fixed_h;
            break;
        case BandwidthRule::Auto:
            break;
    }
    Bandwidth bw = half_variance_score ? Bandwidth::half_variance_score(h)
                                       : Bandwidth::uniform(h);
    if (fixed_h_score > 0.0) {
        bw.h_score = fixed_h_score;
    }
    return bw;
}

namespace {

// Seed for the training draw of one sweep cell; shared across methods so
// the per-(n, seed) comparisons are paired.
std::uint64_t cell_data_seed(std::uint64_t seed, std::size_t n_train) {
    return mix64(seed ^ mix64(static_cast<std::uint64_t>(n_train)));
}

double median_of(std::vector<double> xs) {
    std::sort(xs.begin(), xs.end());
    const std::size_t m = xs.size() / 2;
    return xs.size() % 2 == 1 ? xs[m] : 0.5 * (xs[m - 1] + xs[m]);
}

// Model FLOPs per estimator: the score pass costs (4d+12) per train-train
// pair, a kernel-evaluation pass (2d+12) per train-test pair, the Laplace
// affine factor 2 more, and the non-fused variant a full second pass.
double model_flops(const MethodSpec& spec, std::size_t d, std::size_t n, std::size_t m) {
    const double dd = static_cast<double>(d);
    const double nn = static_cast<double>(n);
    const double mm = static_cast<double>(m);
    switch (spec.method) {
        case Method::Kde:
            return (2.0 * dd + 12.0) * nn * mm;
        case Method::Sdkde:
            return (4.0 * dd + 12.0) * nn * nn + (2.0 * dd + 12.0) * nn * mm;
        case Method::LaplaceKde:
            return spec.fused ? (2.0 * dd + 14.0) * nn * mm
                              : (4.0 * dd + 26.0) * nn * mm;
    }
    return 0.0;
}

std::string format_double(double v) {
    std::ostringstream os;
    os.precision(17);
    os << v;
    return os.str();
}

}  // namespace

std::vector<ErrorSweepRow> error_sweep(const ErrorSweepConfig& config) {
    config.mixture.validate();
    if (config.methods.empty() || config.n_grid.empty() || config.seeds.empty()) {
        throw InvalidArgumentError("error_sweep: empty methods, n grid, or seeds");
    }

    std::vector<ErrorSweepRow> rows;
    for (const MethodSpec& spec : config.methods) {
        for (std::size_t n : config.n_grid) {
            for (std::uint64_t seed : config.seeds) {
                ErrorSweepRow row;
                row.method = spec;
                row.engine = config.engine;
                row.n_train = n;
                row.seed = seed;
                row.d = config.mixture.dim();
                try {
                    const SampleSet train =
                        sample_mixture(config.mixture, n, cell_data_seed(seed, n));
                    const Bandwidth bw = config.bandwidth.resolve(train, spec.method);
                    row.h = bw.h;
                    row.h_score = bw.h_score;

                    EstimatorConfig est;
                    est.method = spec.method;
                    est.bandwidth = bw;
                    est.engine = config.engine;
                    est.tile_m = config.tile_m;
                    est.tile_n = config.tile_n;
                    est.fused = spec.fused;
                    est.threads = config.threads;

                    const EstimateFn fn = [&](const SampleSet& points) {
                        return estimate(train, points, est).values;
                    };
                    row.report = error_metrics(fn, config.mixture, config.mode,
                                               config.n_eval, seed);
                    row.report.n_train = n;
                    row.report.method = spec.method;
                    row.report.seed = seed;
                } catch (const std::exception& e) {
                    row.failed = true;
                    row.error = e.what();
                }
                rows.push_back(std::move(row));
            }
        }
    }
    return rows;
}

std::vector<RuntimeSweepRow> runtime_sweep(const RuntimeSweepConfig& config) {
    config.mixture.validate();
    if (config.methods.empty() || config.engines.empty() || config.n_grid.empty()) {
        throw InvalidArgumentError("runtime_sweep: empty methods, engines, or n grid");
    }
    if (config.repeats == 0) {
        throw InvalidArgumentError("runtime_sweep: repeats must be >= 1");
    }
    if (config.tile_m_grid.empty() || config.tile_n_grid.empty()) {
        throw InvalidArgumentError("runtime_sweep: tile grids must be non-empty");
    }

    using clock = std::chrono::steady_clock;
    std::vector<RuntimeSweepRow> rows;
    for (const MethodSpec& spec : config.methods) {
        for (EngineKind engine : config.engines) {
            for (std::size_t n : config.n_grid) {
                const std::size_t n_test = std::max<std::size_t>(1, n / 8);
                const SampleSet train =
                    sample_mixture(config.mixture, n, cell_data_seed(config.seed, n));
                const SampleSet queries = sample_mixture(
                    config.mixture, n_test, mix64(cell_data_seed(config.seed, n) ^ 0x71ULL));

                for (std::size_t tm : config.tile_m_grid) {
                    for (std::size_t tn : config.tile_n_grid) {
                        // The oracle has no tile parameters; time it once.
                        if (engine == EngineKind::Naive &&
                            (tm != config.tile_m_grid.front() || tn != config.tile_n_grid.front())) {
                            continue;
                        }
                        RuntimeSweepRow row;
                        row.method = spec;
                        row.engine = engine;
                        row.n_train = n;
                        row.n_test = n_test;
                        row.d = config.mixture.dim();
                        row.tile_m = tm;
                        row.tile_n = tn;
                        row.repeats = config.repeats;
                        row.model_flops = model_flops(spec, row.d, n, n_test);
                        try {
                            EstimatorConfig est;
                            est.method = spec.method;
                            est.engine = engine;
                            est.tile_m = tm;
                            est.tile_n = tn;
                            est.fused = spec.fused;
                            est.threads = config.threads;

                            // A data-dependent bandwidth rule is part of the
                            // measured pipeline; a fixed h is not.
                            const bool timed_bandwidth =
                                config.bandwidth.rule != BandwidthRule::Fixed;
                            est.bandwidth = config.bandwidth.resolve(train, spec.method);
                            auto run_once = [&] {
                                if (timed_bandwidth) {
                                    est.bandwidth =
                                        config.bandwidth.resolve(train, spec.method);
                                }
                                estimate(train, queries, est);
                            };
                            run_once();  // warm-up
                            std::vector<double> times(config.repeats);
                            for (std::size_t r = 0; r < config.repeats; ++r) {
                                const auto t0 = clock::now();
                                run_once();
                                const auto t1 = clock::now();
                                times[r] = std::chrono::duration<double>(t1 - t0).count();
                            }
                            row.median_seconds = median_of(times);
                            if (config.hw) {
                                row.util = perfmodel::utilization(
                                    row.model_flops, row.median_seconds, *config.hw);
                            }
                        } catch (const std::exception& e) {
                            row.failed = true;
                            row.error = e.what();
                        }
                        rows.push_back(std::move(row));
                    }
                }
            }
        }
    }
    return rows;
}

std::string error_rows_csv(const std::vector<ErrorSweepRow>& rows) {
    std::ostringstream os;
    os << "schema_version,method,engine,n_train,seed,d,h,h_score,"
          "mise,mise_se,miae,miae_se,negative_mass,negative_mass_se,failed,error\n";
    for (const auto& r : rows) {
        os << 1 << ',' << r.method.label() << ',' << to_string(r.engine) << ',' << r.n_train
           << ',' << r.seed << ',' << r.d << ',' << format_double(r.h) << ','
           << format_double(r.h_score) << ',' << format_double(r.report.mise) << ','
           << format_double(r.report.mise_se) << ',' << format_double(r.report.miae) << ','
           << format_double(r.report.miae_se) << ',' << format_double(r.report.negative_mass)
           << ',' << format_double(r.report.negative_mass_se) << ',' << (r.failed ? 1 : 0)
           << ',' << r.error << '\n';
    }
    return os.str();
}

std::string error_rows_json(const std::vector<ErrorSweepRow>& rows) {
    nlohmann::json j;
    j["schema_version"] = 1;
    auto& arr = j["rows"] = nlohmann::json::array();
    for (const auto& r : rows) {
        nlohmann::json e;
        e["method"] = r.method.label();
        e["engine"] = to_string(r.engine);
        e["n_train"] = r.n_train;
        e["seed"] = r.seed;
        e["d"] = r.d;
        e["h"] = r.h;
        e["h_score"] = r.h_score;
        e["mise"] = r.report.mise;
        e["mise_se"] = r.report.mise_se;
        e["miae"] = r.report.miae;
        e["miae_se"] = r.report.miae_se;
        e["negative_mass"] = r.report.negative_mass;
        e["negative_mass_se"] = r.report.negative_mass_se;
        e["failed"] = r.failed;
        if (r.failed) {
            e["error"] = r.error;
        }
        arr.push_back(std::move(e));
    }
    return j.dump(2) + "\n";
}

std::string runtime_rows_csv(const std::vector<RuntimeSweepRow>& rows) {
    std::ostringstream os;
    os << "schema_version,method,engine,n_train,n_test,d,tile_m,tile_n,repeats,"
          "median_seconds,model_flops,utilization,failed,error\n";
    for (const auto& r : rows) {
        os << 1 << ',' << r.method.label() << ',' << to_string(r.engine) << ',' << r.n_train
           << ',' << r.n_test << ',' << r.d << ',' << r.tile_m << ',' << r.tile_n << ','
           << r.repeats << ',' << format_double(r.median_seconds) << ','
           << format_double(r.model_flops) << ',' << (r.util ? format_double(*r.util) : "")
           << ',' << (r.failed ? 1 : 0) << ',' << r.error << '\n';
    }
    return os.str();
}

std::string runtime_rows_json(const std::vector<RuntimeSweepRow>& rows) {
    nlohmann::json j;
    j["schema_version"] = 1;
    auto& arr = j["rows"] = nlohmann::json::array();
    for (const auto& r : rows) {
        nlohmann::json e;
        e["method"] = r.method.label();
        e["engine"] = to_string(r.engine);
        e["n_train"] = r.n_train;
        e["n_test"] = r.n_test;
        e["d"] = r.d;
        e["tile_m"] = r.tile_m;
        e["tile_n"] = r.tile_n;
        e["repeats"] = r.repeats;
        e["median_seconds"] = r.median_seconds;
        e["model_flops"] = r.model_flops;
        if (r.util) {
            e["utilization"] = *r.util;
        }
        e["failed"] = r.failed;
        if (r.failed) {
            e["error"] = r.error;
        }
        arr.push_back(std::move(e));
    }
    return j.dump(2) + "\n";
}

}  // namespace fkde::bench
