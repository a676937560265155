// fkde: generate synthetic data, run the estimators, sweep benchmarks, and
// evaluate the analytic performance model.
//
// Exit codes: 0 success, 1 comparison/strict failure, 2 usage,
// 3 file I/O, 4 numeric or dimension error.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "fkde/bandwidth.hpp"
#include "fkde/engine.hpp"
#include "fkde/errors.hpp"
#include "fkde/estimator.hpp"
#include "fkde/io.hpp"
#include "fkde/metrics.hpp"
#include "fkde/mixture.hpp"
#include "fkde/perfmodel.hpp"
#include "fkde/sweep.hpp"
#include "fkde/types.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFail = 1;
constexpr int kExitUsage = 2;
constexpr int kExitIo = 3;
constexpr int kExitNumeric = 4;

struct BandwidthFlags {
    std::string rule = "auto";
    double h = 0.0;
    double h_score = 0.0;
    double sdkde_c = 0.0;
    bool h_score_half = false;

    void attach(CLI::App* cmd) {
        cmd->set_help_flag("--help", "Print help");  // frees -h for the bandwidth flag
        cmd->add_option("--h-rule", rule, "Bandwidth rule")
            ->check(CLI::IsMember({"auto", "silverman", "sdkde", "fixed"}));
        cmd->add_option("--h", h, "Fixed evaluation bandwidth (implies --h-rule fixed)");
        cmd->add_option("--h-score", h_score, "Explicit score bandwidth (default: same as h)");
        cmd->add_option("--sdkde-c", sdkde_c,
                        "Prefactor c in h = c*sigma*n^(-1/(d+8)); default (4/(d+2))^(1/(d+4))");
        cmd->add_flag("--h-score-half", h_score_half,
                      "Use h_score = h/sqrt(2) instead of h_score = h");
    }

    fkde::bench::BandwidthPolicy policy() const {
        fkde::bench::BandwidthPolicy p;
        if (rule == "silverman") {
            p.rule = fkde::bench::BandwidthRule::Silverman;
        } else if (rule == "sdkde") {
            p.rule = fkde::bench::BandwidthRule::SdkdeRate;
        } else if (rule == "fixed" || h > 0.0) {
            p.rule = fkde::bench::BandwidthRule::Fixed;
            p.fixed_h = h;
        } else {
            p.rule = fkde::bench::BandwidthRule::Auto;
        }
        p.sdkde_c = sdkde_c;
        p.half_variance_score = h_score_half;
        p.fixed_h_score = h_score;
        return p;
    }

    fkde::Bandwidth resolve(const fkde::SampleSet& train, fkde::Method method) const {
        return policy().resolve(train, method);
    }
};

std::string hex64(std::uint64_t v) {
    char buf[19];
    std::snprintf(buf, sizeof(buf), "0x%016llx", static_cast<unsigned long long>(v));
    return buf;
}

int run_gen(const std::string& config_path, std::size_t n, std::uint64_t seed,
            const std::string& out_path, const std::string& format) {
    const fkde::bench::GaussianMixture mix = fkde::bench::load_mixture(config_path);
    const fkde::SampleSet samples = fkde::bench::sample_mixture(mix, n, seed);
    if (format == "bin") {
        fkde::io::write_samples_bin(samples, out_path);
    } else {
        fkde::io::write_samples_csv(samples, out_path);
    }

    nlohmann::json meta;
    meta["n"] = samples.n;
    meta["d"] = samples.d;
    meta["seed"] = seed;
    meta["mixture_hash"] = hex64(fkde::bench::mixture_hash(mix));
    meta["format"] = format;
    meta["format_version"] = fkde::io::kFormatVersion;
    fkde::io::write_text_file(out_path + ".meta.json", meta.dump(2) + "\n");
    return kExitOk;
}

int run_estimate(const std::string& train_path, const std::string& query_path,
                 const std::string& method_str, const std::string& engine_str,
                 const BandwidthFlags& bw_flags, std::size_t tile_m, std::size_t tile_n,
                 bool no_fuse, std::size_t threads, bool fast,
                 const std::string& out_path, const std::string& format) {
    const fkde::SampleSet train = fkde::io::read_samples(train_path);
    const fkde::SampleSet queries = fkde::io::read_samples(query_path);

    fkde::EstimatorConfig config;
    config.method = fkde::method_from_string(method_str);
    config.engine = fkde::engine_from_string(engine_str);
    config.bandwidth = bw_flags.resolve(train, config.method);
    config.tile_m = tile_m;
    config.tile_n = tile_n;
    config.fused = !no_fuse;
    config.threads = threads;
    config.fast_accumulation = fast;

    const auto t0 = std::chrono::steady_clock::now();
    const fkde::DensityResult result = fkde::estimate(train, queries, config);
    const auto t1 = std::chrono::steady_clock::now();

    fkde::io::write_values(result.values, out_path, format);

    nlohmann::json summary;
    summary["n_train"] = train.n;
    summary["n_test"] = queries.n;
    summary["d"] = train.d;
    summary["method"] = fkde::to_string(config.method);
    summary["engine"] = fkde::to_string(config.engine);
    summary["h"] = config.bandwidth.h;
    summary["h_score"] = config.bandwidth.h_score;
    summary["tile_m"] = tile_m;
    summary["tile_n"] = tile_n;
    summary["fused"] = config.fused;
    summary["wall_time_s"] = std::chrono::duration<double>(t1 - t0).count();
    if (result.negative_mass_estimate) {
        summary["negative_mass"] = *result.negative_mass_estimate;
    }
    summary["out"] = out_path;
    std::cout << summary.dump() << "\n";
    return kExitOk;
}

int run_compare(const std::string& path_a, const std::string& path_b, double rtol,
                bool per_component) {
    const std::vector<double> a = fkde::io::read_values(path_a);
    const std::vector<double> b = fkde::io::read_values(path_b);
    if (a.size() != b.size()) {
        throw fkde::DimensionMismatchError("compare: value files have different lengths");
    }
    double max_abs = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        max_abs = std::max(max_abs, std::max(std::abs(a[i]), std::abs(b[i])));
    }
    double max_diff = 0.0;
    double max_component_rel = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double diff = std::abs(a[i] - b[i]);
        max_diff = std::max(max_diff, diff);
        const double denom = std::max(std::abs(a[i]), std::abs(b[i]));
        if (denom > 0.0) {
            max_component_rel = std::max(max_component_rel, diff / denom);
        } else if (diff > 0.0) {
            max_component_rel = std::numeric_limits<double>::infinity();
        }
    }
    const double normalized = max_abs > 0.0 ? max_diff / max_abs : (max_diff > 0.0 ? INFINITY : 0.0);
    const double gate = per_component ? max_component_rel : normalized;

    nlohmann::json out;
    out["count"] = a.size();
    out["max_abs_diff"] = max_diff;
    out["max_rel_vs_peak"] = normalized;
    out["max_rel_per_component"] = max_component_rel;
    out["rtol"] = rtol;
    out["pass"] = gate <= rtol;
    std::cout << out.dump() << "\n";
    return gate <= rtol ? kExitOk : kExitFail;
}

int run_model(std::size_t d, std::size_t k, std::size_t tile_m, std::size_t tile_n,
              const std::string& hw_path) {
    const fkde::perfmodel::HardwareSpec hw = fkde::perfmodel::load_hardware_spec(hw_path);

    const double flops = d == 1 ? fkde::perfmodel::flops_1d(k) : fkde::perfmodel::flops_nd(d, k);
    const double bytes =
        d == 1 ? fkde::perfmodel::bytes_1d(k) : fkde::perfmodel::bytes_nd(d, k, tile_m, tile_n);
    const fkde::perfmodel::PerfModelReport report = fkde::perfmodel::classify(flops, bytes, hw);

    nlohmann::json out;
    out["d"] = d;
    out["k"] = k;
    out["tile_m"] = tile_m;
    out["tile_n"] = tile_n;
    out["hw"] = hw.name;
    out["flops"] = report.flops;
    out["bytes"] = report.bytes;
    out["intensity"] = report.intensity;
    out["machine_balance"] = report.machine_balance;
    out["classification"] = fkde::perfmodel::to_string(report.classification);
    if (d > 1) {
        out["intensity_asymptotic_per_k"] = fkde::perfmodel::intensity_asymptotic(d);
        out["bytes_linear"] = fkde::perfmodel::bytes_linear(d, k);
    }
    std::cout << out.dump() << "\n";
    return kExitOk;
}

std::vector<fkde::bench::MethodSpec> parse_methods(const std::vector<std::string>& tokens) {
    std::vector<fkde::bench::MethodSpec> out;
    out.reserve(tokens.size());
    for (const auto& t : tokens) {
        out.push_back(fkde::bench::MethodSpec::parse(t));
    }
    return out;
}

int run_bench_error(const std::string& config_path, const std::vector<std::string>& methods,
                    const std::string& engine_str, const std::vector<std::size_t>& n_grid,
                    const std::vector<std::uint64_t>& seeds, const BandwidthFlags& bw_flags,
                    std::size_t tile_m, std::size_t tile_n, std::size_t threads,
                    const std::string& metric, std::size_t n_eval,
                    const std::string& out_path, const std::string& format, bool strict) {
    fkde::bench::ErrorSweepConfig config;
    config.mixture = fkde::bench::load_mixture(config_path);
    config.methods = parse_methods(methods);
    config.engine = fkde::engine_from_string(engine_str);
    config.n_grid = n_grid;
    config.seeds = seeds;
    config.bandwidth = bw_flags.policy();
    config.tile_m = tile_m;
    config.tile_n = tile_n;
    config.threads = threads;
    config.n_eval = n_eval;
    if (metric == "grid") {
        config.mode = fkde::bench::ErrorMode::Grid1D;
    } else if (metric == "mc") {
        config.mode = fkde::bench::ErrorMode::ImportanceMC;
    } else {  // auto
        config.mode = config.mixture.dim() == 1 ? fkde::bench::ErrorMode::Grid1D
                                                : fkde::bench::ErrorMode::ImportanceMC;
    }

    const auto rows = fkde::bench::error_sweep(config);
    fkde::io::write_text_file(out_path, format == "json"
                                            ? fkde::bench::error_rows_json(rows)
                                            : fkde::bench::error_rows_csv(rows));
    std::size_t failed = 0;
    for (const auto& r : rows) {
        failed += r.failed ? 1 : 0;
    }
    nlohmann::json summary;
    summary["rows"] = rows.size();
    summary["failed"] = failed;
    summary["out"] = out_path;
    std::cout << summary.dump() << "\n";
    return (strict && failed > 0) ? kExitFail : kExitOk;
}

int run_bench_runtime(const std::string& config_path, const std::vector<std::string>& methods,
                      const std::vector<std::string>& engines,
                      const std::vector<std::size_t>& n_grid,
                      const std::vector<std::size_t>& tile_m_grid,
                      const std::vector<std::size_t>& tile_n_grid,
                      const BandwidthFlags& bw_flags, std::size_t threads, std::size_t repeats,
                      std::uint64_t seed, const std::string& hw_path,
                      const std::string& out_path, const std::string& format, bool strict) {
    fkde::bench::RuntimeSweepConfig config;
    config.mixture = fkde::bench::load_mixture(config_path);
    config.methods = parse_methods(methods);
    for (const auto& e : engines) {
        config.engines.push_back(fkde::engine_from_string(e));
    }
    config.n_grid = n_grid;
    config.tile_m_grid = tile_m_grid;
    config.tile_n_grid = tile_n_grid;
    config.bandwidth = bw_flags.policy();
    config.threads = threads;
    config.repeats = repeats;
    config.seed = seed;
    if (!hw_path.empty()) {
        config.hw = fkde::perfmodel::load_hardware_spec(hw_path);
    }

    const auto rows = fkde::bench::runtime_sweep(config);
    fkde::io::write_text_file(out_path, format == "json"
                                            ? fkde::bench::runtime_rows_json(rows)
                                            : fkde::bench::runtime_rows_csv(rows));
    std::size_t failed = 0;
    for (const auto& r : rows) {
        failed += r.failed ? 1 : 0;
    }
    nlohmann::json summary;
    summary["rows"] = rows.size();
    summary["failed"] = failed;
    summary["out"] = out_path;
    std::cout << summary.dump() << "\n";
    return (strict && failed > 0) ? kExitFail : kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Density estimation toolkit: KDE, score-debiased KDE, and "
                 "Laplace-corrected KDE with naive and blocked engines"};
    app.require_subcommand(1);

    // --- gen ---
    auto* gen = app.add_subcommand("gen", "Draw samples from a mixture config");
    std::string gen_config, gen_out, gen_format = "bin";
    std::size_t gen_n = 0;
    std::uint64_t gen_seed = 0;
    gen->add_option("--config", gen_config, "Mixture config (JSON)")->required();
    gen->add_option("--n", gen_n, "Number of samples")->required()->check(CLI::PositiveNumber);
    gen->add_option("--seed", gen_seed, "RNG seed")->required();
    gen->add_option("--out", gen_out, "Output sample file")->required();
    gen->add_option("--format", gen_format, "Output format")
        ->check(CLI::IsMember({"bin", "csv"}));

    // --- estimate ---
    auto* est = app.add_subcommand("estimate", "Evaluate a density estimator");
    std::string est_train, est_query, est_method = "kde", est_engine = "flash";
    std::string est_out, est_format = "csv";
    BandwidthFlags est_bw;
    std::size_t est_tile_m = 64, est_tile_n = 1024, est_threads = 0;
    bool est_no_fuse = false, est_fast = false;
    est->add_option("train", est_train, "Training sample file")->required();
    est->add_option("query", est_query, "Query point file")->required();
    est->add_option("--method", est_method, "Estimator")
        ->check(CLI::IsMember({"kde", "sdkde", "laplace"}));
    est->add_option("--engine", est_engine, "Execution engine")
        ->check(CLI::IsMember({"naive", "flash"}));
    est_bw.attach(est);
    est->add_option("--tile-m", est_tile_m, "Query-block rows")->check(CLI::PositiveNumber);
    est->add_option("--tile-n", est_tile_n, "Train-block rows")->check(CLI::PositiveNumber);
    est->add_flag("--no-fuse", est_no_fuse, "Two-pass Laplace correction");
    est->add_option("--threads", est_threads, "Worker cap (0 = machine parallelism)");
    est->add_flag("--fast", est_fast, "Relaxed accumulation order (not bitwise reproducible)");
    est->add_option("--out", est_out, "Output values file")->required();
    est->add_option("--format", est_format, "Output format")
        ->check(CLI::IsMember({"csv", "bin", "json"}));

    // --- compare ---
    auto* cmp = app.add_subcommand("compare", "Compare two value files");
    std::string cmp_a, cmp_b;
    double cmp_rtol = 1e-8;
    bool cmp_per_component = false;
    cmp->add_option("a", cmp_a, "First values file")->required();
    cmp->add_option("b", cmp_b, "Second values file")->required();
    cmp->add_option("--rtol", cmp_rtol, "Relative tolerance");
    cmp->add_flag("--per-component", cmp_per_component,
                  "Gate on per-component relative error instead of peak-normalized");

    // --- bench ---
    auto* bench = app.add_subcommand("bench", "Error and runtime sweeps");
    std::string bench_mode, bench_config, bench_out, bench_format = "csv";
    std::string bench_engine = "flash", bench_metric = "auto", bench_hw;
    std::vector<std::string> bench_methods{"kde", "sdkde", "laplace", "laplace-nofuse"};
    std::vector<std::string> bench_engines{"flash"};
    std::vector<std::size_t> bench_n_grid, bench_tile_m{64}, bench_tile_n{1024};
    std::vector<std::uint64_t> bench_seeds{0};
    BandwidthFlags bench_bw;
    std::size_t bench_threads = 0, bench_repeats = 5, bench_n_eval = 2048;
    std::uint64_t bench_seed = 0;
    bool bench_strict = false;
    bench->add_option("--mode", bench_mode, "Sweep mode")
        ->required()
        ->check(CLI::IsMember({"runtime", "error"}));
    bench->add_option("--config", bench_config, "Mixture config (JSON)")->required();
    bench->add_option("--methods", bench_methods, "Estimators to sweep")->delimiter(',');
    bench->add_option("--engine", bench_engine, "Engine for error mode")
        ->check(CLI::IsMember({"naive", "flash"}));
    bench->add_option("--engines", bench_engines, "Engines for runtime mode")->delimiter(',');
    bench->add_option("--n-grid", bench_n_grid, "Training sizes")->required()->delimiter(',');
    bench->add_option("--seeds", bench_seeds, "Seeds for error mode")->delimiter(',');
    auto* seed_opt = bench->add_option("--seed", bench_seed, "Seed for runtime mode");
    bench_bw.attach(bench);
    bench->add_option("--tile-m", bench_tile_m, "Query-block rows (list in runtime mode)")
        ->delimiter(',');
    bench->add_option("--tile-n", bench_tile_n, "Train-block rows (list in runtime mode)")
        ->delimiter(',');
    bench->add_option("--threads", bench_threads, "Worker cap");
    bench->add_option("--repeats", bench_repeats, "Timed repeats per cell")
        ->check(CLI::PositiveNumber);
    bench->add_option("--metric", bench_metric, "Error metric mode")
        ->check(CLI::IsMember({"auto", "grid", "mc"}));
    bench->add_option("--n-eval", bench_n_eval, "Eval points per error cell");
    bench->add_option("--hw", bench_hw, "Hardware spec for the utilization column");
    bench->add_option("--out", bench_out, "Output table path")->required();
    bench->add_option("--format", bench_format, "Output format")
        ->check(CLI::IsMember({"csv", "json"}));
    bench->add_flag("--strict", bench_strict, "Exit nonzero if any cell failed");

    // --- model ---
    auto* model = app.add_subcommand("model", "Analytic FLOP/byte/intensity report");
    std::size_t model_d = 16, model_k = 0, model_tile_m = 64, model_tile_n = 1024;
    std::string model_hw;
    model->add_option("--d", model_d, "Dimension")->required()->check(CLI::PositiveNumber);
    model->add_option("--k", model_k, "Training size (n_test = k/8)")
        ->required()
        ->check(CLI::PositiveNumber);
    model->add_option("--tile-m", model_tile_m, "Query-block rows")->check(CLI::PositiveNumber);
    model->add_option("--tile-n", model_tile_n, "Train-block rows")->check(CLI::PositiveNumber);
    model->add_option("--hw", model_hw, "Hardware spec file")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    if ((est->parsed() && est_bw.rule == "fixed" && !(est_bw.h > 0.0)) ||
        (bench->parsed() && bench_bw.rule == "fixed" && !(bench_bw.h > 0.0))) {
        std::cerr << "--h-rule fixed requires --h > 0\n";
        return kExitUsage;
    }

    try {
        if (gen->parsed()) {
            return run_gen(gen_config, gen_n, gen_seed, gen_out, gen_format);
        }
        if (est->parsed()) {
            return run_estimate(est_train, est_query, est_method, est_engine, est_bw,
                                est_tile_m, est_tile_n, est_no_fuse, est_threads, est_fast,
                                est_out, est_format);
        }
        if (cmp->parsed()) {
            return run_compare(cmp_a, cmp_b, cmp_rtol, cmp_per_component);
        }
        if (bench->parsed()) {
            if (bench_mode == "error") {
                return run_bench_error(bench_config, bench_methods, bench_engine, bench_n_grid,
                                       bench_seeds, bench_bw, bench_tile_m.front(),
                                       bench_tile_n.front(), bench_threads, bench_metric,
                                       bench_n_eval, bench_out, bench_format, bench_strict);
            }
            if (seed_opt->count() == 0) {
                std::cerr << "bench --mode runtime requires --seed\n";
                return kExitUsage;
            }
            return run_bench_runtime(bench_config, bench_methods, bench_engines, bench_n_grid,
                                     bench_tile_m, bench_tile_n, bench_bw, bench_threads,
                                     bench_repeats, bench_seed, bench_hw, bench_out,
                                     bench_format, bench_strict);
        }
        if (model->parsed()) {
            return run_model(model_d, model_k, model_tile_m, model_tile_n, model_hw);
        }
    } catch (const fkde::IoError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitIo;
    } catch (const fkde::InvalidArgumentError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitNumeric;
    } catch (const fkde::DegenerateDataError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitNumeric;
    } catch (const fkde::ScoreUnderflowError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitNumeric;
    } catch (const fkde::NonFiniteValueError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitNumeric;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitFail;
    }
    return kExitUsage;
}
