// Acceptance suite: one pass/fail line per criterion, nonzero exit if any
// criterion fails. Run via `ctest -R acceptance` or directly.

#include <unistd.h>

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "fkde/alloc_stats.hpp"
#include "fkde/bandwidth.hpp"
#include "fkde/engine.hpp"
#include "fkde/errors.hpp"
#include "fkde/io.hpp"
#include "fkde/kernels.hpp"
#include "fkde/metrics.hpp"
#include "fkde/mixture.hpp"
#include "fkde/oracle.hpp"
#include "fkde/perfmodel.hpp"
#include "fkde/rng.hpp"
#include "fkde/sweep.hpp"
#include "fkde/types.hpp"

#include "../test_util.hpp"

namespace fs = std::filesystem;
using namespace fkde;
using Clock = std::chrono::steady_clock;

namespace {

struct Check {
    bool ok = true;
    std::ostringstream detail;

    void expect(bool cond, const std::string& what) {
        if (!cond) {
            ok = false;
            detail << (detail.str().empty() ? "" : "; ") << what;
        }
    }
};

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

// ---------------------------------------------------------------- criterion 1+2

struct Instance {
    SampleSet train;
    SampleSet queries;
    double h;
    std::size_t n;
    std::size_t d;
};

std::vector<Instance> make_instances() {
    const std::size_t ns[] = {3, 64, 1024, 4096};
    const std::size_t ds[] = {1, 2, 16};
    std::vector<Instance> out;
    for (std::size_t i = 0; i < 50; ++i) {
        const std::size_t n = ns[(i % 12) / 3];
        const std::size_t d = ds[i % 3];
        Instance inst;
        inst.n = n;
        inst.d = d;
        inst.train = testutil::random_gaussian(n, d, 1000 + i, 1.5);
        inst.queries = testutil::random_gaussian(std::max<std::size_t>(1, n / 8), d,
                                                 2000 + i, 1.5);
        Rng hr(3000 + i);
        inst.h = (0.8 + 0.8 * hr.uniform01()) * 0.75 * std::sqrt(static_cast<double>(d));
        out.push_back(std::move(inst));
    }
    return out;
}

std::vector<engine::TilePlan> plans_for(const Instance& inst) {
    return {engine::TilePlan::make(inst.queries.n, inst.n, 1, 1),
            engine::TilePlan::make(inst.queries.n, inst.n, 64, 1024),
            engine::TilePlan::make(inst.queries.n, inst.n, inst.n, inst.n)};
}

Check criterion1(const std::vector<Instance>& instances) {
    Check c;
    double worst_kde = 0.0, worst_lap = 0.0, worst_score = 0.0, worst_sd = 0.0;
    for (const auto& inst : instances) {
        const Bandwidth bw = Bandwidth::uniform(inst.h);
        const auto kde_ref = oracle::kde_naive(inst.train, inst.queries, inst.h);
        const auto lap_ref = oracle::laplace_naive(inst.train, inst.queries, inst.h);
        const auto score_ref = oracle::score_naive(inst.train, inst.train, bw.h_score);
        const auto sd_ref = oracle::sdkde_naive(inst.train, inst.queries, bw);

        for (const auto& plan : plans_for(inst)) {
            worst_kde = std::max(
                worst_kde,
                testutil::max_component_rel(
                    engine::kde_flash(inst.train, inst.queries, inst.h, KernelKind::Gaussian,
                                      true, plan)
                        .values,
                    kde_ref.values));
            worst_lap = std::max(
                worst_lap,
                testutil::max_rel_vs_peak(
                    engine::kde_flash(inst.train, inst.queries, inst.h,
                                      KernelKind::LaplaceCorrected, true, plan)
                        .values,
                    lap_ref.values));
            worst_score = std::max(
                worst_score,
                testutil::max_rel_global_floor(engine::score_flash(inst.train, bw.h_score, plan),
                                               score_ref));
            worst_sd = std::max(
                worst_sd,
                testutil::max_component_rel(
                    engine::sdkde_flash(inst.train, inst.queries, bw, plan).values,
                    sd_ref.values));
        }
    }
    c.expect(worst_kde < 1e-10, "kde worst rel " + std::to_string(worst_kde));
    c.expect(worst_lap < 1e-10, "laplace worst rel " + std::to_string(worst_lap));
    c.expect(worst_score < 1e-8, "score worst rel " + std::to_string(worst_score));
    c.expect(worst_sd < 1e-8, "sdkde worst rel " + std::to_string(worst_sd));
    c.detail << (c.detail.str().empty() ? "" : "; ") << "max rel: kde " << worst_kde
             << ", laplace " << worst_lap << ", score " << worst_score << ", sdkde "
             << worst_sd;
    return c;
}

Check criterion2(const std::vector<Instance>& instances) {
    Check c;
    double worst = 0.0;
    for (const auto& inst : instances) {
        for (const auto& plan : plans_for(inst)) {
            const auto fused = engine::kde_flash(inst.train, inst.queries, inst.h,
                                                 KernelKind::LaplaceCorrected, true, plan);
            const auto nofuse = engine::kde_flash(inst.train, inst.queries, inst.h,
                                                  KernelKind::LaplaceCorrected, false, plan);
            worst = std::max(worst, testutil::max_rel_vs_peak(fused.values, nofuse.values));
        }
    }
    c.expect(worst < 1e-12, "fused vs non-fused worst rel " + std::to_string(worst));
    c.detail << "max rel " << worst;
    return c;
}

// ------------------------------------------------------------------ criterion 3

Check criterion3() {
    using namespace perfmodel;
    Check c;
    for (std::size_t k : {64u, 1000u, 32768u}) {
        const double kk = static_cast<double>(k);
        c.expect(flops_nd(16, k) == 81.5 * kk * kk, "flops_nd(16,k) != 81.5 k^2");
        c.expect(flops_1d(k) == 17.75 * kk * kk, "flops_1d(k) != 17.75 k^2");
        c.expect(intensity_1d(k) == 3.55 * kk, "1-D intensity != 3.55 k");
    }
    c.expect(bytes_tile(16, 64, 1024) == 73984.0, "bytes_tile != 73984");
    for (std::size_t k = 1024; k <= 32768; k += 1024) {
        const double coef = bytes_nd(16, k, 64, 1024) / (static_cast<double>(k) * k);
        c.expect(coef >= 1.12 && coef <= 1.14, "bytes_nd/k^2 outside [1.12,1.14]");
        const double inten = intensity(flops_nd(16, k), bytes_nd(16, k, 64, 1024));
        c.expect(inten >= 71.0 && inten <= 73.0, "tile-aware intensity outside [71,73]");
    }
    c.detail << "intensity(16, 32k) = "
             << intensity(flops_nd(16, 32768), bytes_nd(16, 32768, 64, 1024));
    return c;
}

// ------------------------------------------------------------------ criterion 4

Check criterion4() {
    using namespace perfmodel;
    Check c;
    const std::string cfg = FKDE_CONFIG_DIR;
    const auto fp32 = load_hardware_spec(cfg + "/hw/a6000-fp32.txt");
    const auto tc = load_hardware_spec(cfg + "/hw/a6000-tensorcore.txt");
    const double f = flops_nd(16, 32768);
    const double b = bytes_nd(16, 32768, 64, 1024);
    const auto vs_fp32 = classify(f, b, fp32);
    const auto vs_tc = classify(f, b, tc);
    c.expect(vs_fp32.classification == Bound::ComputeBound,
             "not compute-bound against the FP32 roof");
    c.expect(vs_tc.classification == Bound::MemoryBound,
             "not memory-bound against the tensor-core roof");
    c.detail << "intensity " << vs_fp32.intensity << " straddles balances "
             << vs_fp32.machine_balance << " / " << vs_tc.machine_balance;
    return c;
}

// ------------------------------------------------------------- criterion 5 + 10

struct SweepOutcome {
    Check c5;
    Check c10;
};

SweepOutcome criterion5_and_10() {
    SweepOutcome out;
    const auto mix =
        bench::load_mixture(std::string(FKDE_CONFIG_DIR) + "/mixture-1d-default.json");

    bench::ErrorSweepConfig cfg;
    cfg.mixture = mix;
    cfg.methods = {bench::MethodSpec::parse("kde"), bench::MethodSpec::parse("sdkde"),
                   bench::MethodSpec::parse("laplace")};
    cfg.n_grid = {1024, 2048, 4096, 8192, 16384, 32768};
    cfg.seeds = {0, 1, 2};
    cfg.n_eval = 2048;
    cfg.bandwidth.sdkde_c = 0.4;
    const auto rows = bench::error_sweep(cfg);

    auto median_mise = [&](const std::string& label, std::size_t n) {
        std::vector<double> cell;
        for (const auto& r : rows) {
            if (r.method.label() == label && r.n_train == n && !r.failed) {
                cell.push_back(r.report.mise);
            }
        }
        std::sort(cell.begin(), cell.end());
        return cell.empty() ? std::nan("") : cell[cell.size() / 2];
    };

    // (a) log-log slope of the KDE median MISE.
    std::vector<double> xs, ys;
    for (std::size_t n : cfg.n_grid) {
        xs.push_back(std::log(static_cast<double>(n)));
        ys.push_back(std::log(median_mise("kde", n)));
    }
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        mx += xs[i];
        my += ys[i];
    }
    mx /= static_cast<double>(xs.size());
    my /= static_cast<double>(xs.size());
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        num += (xs[i] - mx) * (ys[i] - my);
        den += (xs[i] - mx) * (xs[i] - mx);
    }
    const double slope = num / den;
    out.c5.expect(slope <= -0.6 && slope >= -1.0,
                  "KDE slope " + std::to_string(slope) + " outside [-1.0,-0.6]");

    // (b) SD-KDE beats KDE at 32k; (c) Laplace no worse than KDE at 32k.
    const double kde32 = median_mise("kde", 32768);
    const double sd32 = median_mise("sdkde", 32768);
    const double lap32 = median_mise("laplace", 32768);
    out.c5.expect(sd32 < kde32, "sdkde median MISE not below kde at 32k");
    out.c5.expect(lap32 <= kde32, "laplace median MISE above kde at 32k");
    out.c5.detail << "slope " << slope << "; MISE at 32k: kde " << kde32 << ", sdkde " << sd32
                  << ", laplace " << lap32;

    // Criterion 10 on the same sweep.
    bool witness = false;
    bool clean = true;
    for (const auto& r : rows) {
        if (r.failed) {
            continue;
        }
        if (r.method.method == Method::LaplaceKde) {
            witness = witness || r.report.negative_mass > 0.0;
        } else {
            clean = clean && r.report.negative_mass == 0.0;
        }
    }
    out.c10.expect(witness, "no laplace cell reported negative mass > 0");
    out.c10.expect(clean, "a kde/sdkde cell reported nonzero negative mass");
    out.c10.detail << (witness ? "laplace witness present" : "no witness")
                   << ", kde/sdkde all zero: " << (clean ? "yes" : "no");
    return out;
}

// ------------------------------------------------------------------ criterion 6

Check criterion6() {
    Check c;
    for (double h : {0.1, 1.0, 3.0}) {
        const std::size_t n = 100000;
        const double lo = -10.0 * h, hi = 10.0 * h;
        const double dx = (hi - lo) / static_cast<double>(n - 1);
        double ik = 0.0, ilc = 0.0, m2 = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double x = lo + dx * static_cast<double>(i);
            const double w = (i == 0 || i == n - 1) ? 0.5 : 1.0;
            ik += w * gaussian_kernel(x * x, h, 1);
            const double lc = laplace_corrected_kernel(x * x, h, 1);
            ilc += w * lc;
            m2 += w * x * x * lc;
        }
        ik *= dx;
        ilc *= dx;
        m2 *= dx;
        c.expect(std::abs(ik - 1.0) < 1e-8, "int K != 1 at h=" + std::to_string(h));
        c.expect(std::abs(ilc - 1.0) < 1e-6, "int K_lc != 1 at h=" + std::to_string(h));
        c.expect(std::abs(m2) < 1e-6, "second moment of K_lc != 0 at h=" + std::to_string(h));
    }
    c.detail << "h in {0.1, 1, 3}";
    return c;
}

// ------------------------------------------------------------------ criterion 7

Check criterion7() {
    Check c;
    for (int seed : {0, 1, 2}) {
        const double mu = -0.5 + 0.4 * seed;
        const double scale = 0.6 + 0.1 * seed;
        SampleSet train = SampleSet::zeros(512, 1);
        for (std::size_t i = 0; i < train.n; ++i) {
            const double t = (static_cast<double>(i) + 0.5) / 512.0;
            train.values[i] = mu + scale * std::log(t / (1.0 - t));
        }
        SampleSet queries = SampleSet::zeros(41, 1);
        for (std::size_t j = 0; j < queries.n; ++j) {
            queries.values[j] = mu - 2.0 + 4.0 * static_cast<double>(j) / 40.0;
        }
        std::vector<double> ratios;
        for (double h : {0.4, 0.2, 0.1, 0.05}) {
            const auto sd = oracle::sdkde_naive(train, queries, Bandwidth::uniform(h));
            const auto lc = oracle::laplace_naive(train, queries, h);
            const auto kde = oracle::kde_naive(train, queries, h);
            double e = 0.0, g = 0.0;
            for (std::size_t j = 0; j < queries.n; ++j) {
                e = std::max(e, std::abs(sd.values[j] - lc.values[j]));
                g = std::max(g, std::abs(sd.values[j] - kde.values[j]));
            }
            ratios.push_back(e / g);
        }
        bool mono = true;
        for (std::size_t i = 0; i + 1 < ratios.size(); ++i) {
            mono = mono && ratios[i + 1] < ratios[i];
        }
        c.expect(mono, "ratio not monotone, seed " + std::to_string(seed));
        c.expect(ratios.back() < 0.25 * ratios.front(),
                 "ratio(0.05) not < 0.25 * ratio(0.4), seed " + std::to_string(seed));
        if (seed == 0) {
            c.detail << "seed 0 ratios " << ratios[0] << " -> " << ratios[3];
        }
    }
    return c;
}

// ------------------------------------------------------------------ criterion 8

Check criterion8() {
    Check c;
    const std::size_t n = 32768, m = 4096, d = 16;
    const auto train = testutil::random_gaussian(n, d, 81, 1.0);
    const auto queries = testutil::random_gaussian(m, d, 82, 1.0);
    const Bandwidth bw = Bandwidth::uniform(2.5);
    const auto plan = engine::TilePlan::make(m, n, 64, 1024);

    alloc_stats::reset_peak();
    double flash_best = 1e300;
    for (int rep = 0; rep < 3; ++rep) {
        const auto t0 = Clock::now();
        engine::sdkde_flash(train, queries, bw, plan);
        flash_best = std::min(flash_best, seconds_since(t0));
    }
    const std::size_t peak_bytes = alloc_stats::peak_scalars() * sizeof(double);

    const auto t1 = Clock::now();
    oracle::sdkde_naive(train, queries, bw);
    const double naive_s = seconds_since(t1);

    const double materialized_phi_bytes =
        static_cast<double>(n) * static_cast<double>(n) * 8.0 +
        static_cast<double>(n) * static_cast<double>(d) * 8.0;

    c.expect(naive_s >= 5.0 * flash_best,
             "speedup " + std::to_string(naive_s / flash_best) + " below 5x");
    c.expect(peak_bytes < 64ull * 1024 * 1024,
             "transient peak " + std::to_string(peak_bytes) + " bytes >= 64 MiB");
    c.expect(materialized_phi_bytes > 8.0 * 1024 * 1024 * 1024,
             "materialized pairwise matrix would fit in 8 GiB");
    c.detail << "flash " << flash_best << " s, naive " << naive_s << " s (x"
             << naive_s / flash_best << "), transient peak " << peak_bytes / (1024.0 * 1024.0)
             << " MiB, materialized equivalent "
             << materialized_phi_bytes / (1024.0 * 1024.0 * 1024.0) << " GiB";
    return c;
}

// ------------------------------------------------------------------ criterion 9

struct CliRunner {
    std::string cli = FKDE_CLI_PATH;
    fs::path dir;

    int run(const std::string& args, const std::string& stdout_file = "") const {
        std::string cmd = cli + " " + args;
        cmd += stdout_file.empty() ? " > /dev/null" : (" > " + stdout_file);
        cmd += " 2> /dev/null";
        const int raw = std::system(cmd.c_str());
        return WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
    }

    static std::string slurp(const fs::path& p) {
        std::ifstream in(p, std::ios::binary);
        std::ostringstream os;
        os << in.rdbuf();
        return os.str();
    }
};

Check criterion9() {
    Check c;
    CliRunner cli;
    cli.dir = fs::temp_directory_path() / ("fkde_accept_" + std::to_string(::getpid()));
    fs::create_directories(cli.dir);
    const std::string dir = cli.dir.string();
    const std::string mix = std::string(FKDE_CONFIG_DIR) + "/mixture-1d-default.json";

    // gen
    c.expect(cli.run("gen --config " + mix + " --n 300 --seed 11 --out " + dir + "/g1.bin") == 0,
             "gen run 1 failed");
    c.expect(cli.run("gen --config " + mix + " --n 300 --seed 11 --out " + dir + "/g2.bin") == 0,
             "gen run 2 failed");
    c.expect(CliRunner::slurp(dir + "/g1.bin") == CliRunner::slurp(dir + "/g2.bin"),
             "gen outputs differ");
    c.expect(CliRunner::slurp(dir + "/g1.bin.meta.json") ==
                 CliRunner::slurp(dir + "/g2.bin.meta.json"),
             "gen sidecars differ");

    // estimate (all three methods, fixed thread count)
    c.expect(cli.run("gen --config " + mix + " --n 64 --seed 12 --out " + dir + "/q.bin") == 0,
             "gen queries failed");
    for (const std::string method : {"kde", "sdkde", "laplace"}) {
        const std::string base = " " + dir + "/g1.bin " + dir + "/q.bin --method " + method +
                                 " --threads 2 --out ";
        c.expect(cli.run("estimate" + base + dir + "/e1.csv") == 0, method + " run 1 failed");
        c.expect(cli.run("estimate" + base + dir + "/e2.csv") == 0, method + " run 2 failed");
        c.expect(CliRunner::slurp(dir + "/e1.csv") == CliRunner::slurp(dir + "/e2.csv"),
                 method + " estimates differ");
    }

    // bench (error mode; runtime tables carry measured wall times)
    const std::string bench_args = "bench --mode error --config " + mix +
                                   " --methods kde,laplace --n-grid 128 --seeds 0,1 "
                                   "--n-eval 256 --threads 2 --out ";
    c.expect(cli.run(bench_args + dir + "/b1.csv") == 0, "bench run 1 failed");
    c.expect(cli.run(bench_args + dir + "/b2.csv") == 0, "bench run 2 failed");
    c.expect(CliRunner::slurp(dir + "/b1.csv") == CliRunner::slurp(dir + "/b2.csv"),
             "bench outputs differ");

    // model
    const std::string model_args = "model --d 16 --k 32768 --hw " +
                                   std::string(FKDE_CONFIG_DIR) + "/hw/a6000-fp32.txt";
    c.expect(cli.run(model_args, dir + "/m1.json") == 0, "model run 1 failed");
    c.expect(cli.run(model_args, dir + "/m2.json") == 0, "model run 2 failed");
    c.expect(CliRunner::slurp(dir + "/m1.json") == CliRunner::slurp(dir + "/m2.json"),
             "model outputs differ");

    // compare
    const std::string cmp_args =
        "compare " + dir + "/e1.csv " + dir + "/e2.csv --rtol 1e-12";
    c.expect(cli.run(cmp_args, dir + "/c1.json") == 0, "compare run 1 failed");
    c.expect(cli.run(cmp_args, dir + "/c2.json") == 0, "compare run 2 failed");
    c.expect(CliRunner::slurp(dir + "/c1.json") == CliRunner::slurp(dir + "/c2.json"),
             "compare outputs differ");

    fs::remove_all(cli.dir);
    c.detail << "gen, estimate, bench(error), model, compare bitwise-stable";
    return c;
}

}  // namespace

int main() {
    struct Row {
        std::string name;
        Check check;
        double seconds;
    };
    std::vector<Row> rows;

    auto record = [&](const std::string& name, const std::function<Check()>& fn) {
        const auto t0 = Clock::now();
        Check c;
        try {
            c = fn();
        } catch (const std::exception& e) {
            c.ok = false;
            c.detail << "exception: " << e.what();
        }
        rows.push_back({name, std::move(c), seconds_since(t0)});
    };

    const auto instances = make_instances();

    const auto t_c1 = Clock::now();
    record("1. oracle equivalence (50 instances x 3 tile plans)",
           [&] { return criterion1(instances); });
    const double c1_seconds = seconds_since(t_c1);
    rows.back().check.expect(c1_seconds < 300.0, "criterion-1 suite exceeded 5 minutes");

    record("2. fusion is estimator-invariant", [&] { return criterion2(instances); });
    record("3. cost-model exactness", criterion3);
    record("4. roofline classification straddles the A6000 roofs", criterion4);

    const auto t_c5 = Clock::now();
    SweepOutcome sweep;
    try {
        sweep = criterion5_and_10();
    } catch (const std::exception& e) {
        sweep.c5.ok = false;
        sweep.c5.detail << "exception: " << e.what();
        sweep.c10.ok = false;
        sweep.c10.detail << "exception: " << e.what();
    }
    sweep.c5.expect(seconds_since(t_c5) < 600.0, "criterion-5 sweep exceeded 10 minutes");
    rows.push_back({"5. convergence-rate shape (slope, sdkde, laplace)", std::move(sweep.c5),
                    seconds_since(t_c5)});

    record("6. kernel moment identities", criterion6);
    record("7. linearization consistency trend", criterion7);
    record("8. flash speedup and transient memory", criterion8);
    record("9. subcommand determinism", criterion9);
    rows.push_back({"10. negative-mass diagnostic", std::move(sweep.c10), 0.0});

    int failed = 0;
    for (const auto& row : rows) {
        failed += row.check.ok ? 0 : 1;
        std::cout << (row.check.ok ? "[PASS] " : "[FAIL] ") << row.name;
        const std::string detail = row.check.detail.str();
        if (!detail.empty()) {
            std::cout << " -- " << detail;
        }
        std::cout << " (" << row.seconds << " s)\n";
    }
    std::cout << (failed == 0 ? "all criteria passed\n"
                              : std::to_string(failed) + " criteria FAILED\n");
    return failed == 0 ? 0 : 1;
}
