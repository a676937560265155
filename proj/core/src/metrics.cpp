#include "fkde/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "fkde/errors.hpp"
#include "fkde/rng.hpp"

namespace fkde::bench {

namespace {

void check_finite(const std::vector<double>& values) {
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (!std::isfinite(values[i])) {
            throw NonFiniteValueError(i, "estimate produced a non-finite value at eval point " +
                                             std::to_string(i));
        }
    }
}

struct MeanSe {
    double mean = 0.0;
    double se = 0.0;
};

MeanSe mean_and_se(const std::vector<double>& xs) {
    const double n = static_cast<double>(xs.size());
    double mean = 0.0;
    for (double x : xs) {
        mean += x;
    }
    mean /= n;
    if (xs.size() < 2) {
        return {mean, 0.0};
    }
    double ssq = 0.0;
    for (double x : xs) {
        ssq += (x - mean) * (x - mean);
    }
    return {mean, std::sqrt(ssq / (n - 1.0) / n)};
}

}  // namespace

ErrorReport error_metrics(const EstimateFn& estimate_at, const GaussianMixture& mix,
                          ErrorMode mode, std::size_t n_eval, std::uint64_t seed) {
    mix.validate();
    if (n_eval < 2) {
        throw InvalidArgumentError("error_metrics: n_eval must be >= 2");
    }

    ErrorReport report;
    report.seed = seed;

    if (mode == ErrorMode::Grid1D) {
        if (mix.dim() != 1) {
            throw InvalidArgumentError("error_metrics: Grid1D requires d == 1");
        }
        double lo = mix.means.values[0] - 6.0 * mix.sigmas[0];
        double hi = mix.means.values[0] + 6.0 * mix.sigmas[0];
        for (std::size_t c = 1; c < mix.components(); ++c) {
            lo = std::min(lo, mix.means.values[c] - 6.0 * mix.sigmas[c]);
            hi = std::max(hi, mix.means.values[c] + 6.0 * mix.sigmas[c]);
        }
        SampleSet grid = SampleSet::zeros(n_eval, 1);
        const double dx = (hi - lo) / static_cast<double>(n_eval - 1);
        for (std::size_t i = 0; i < n_eval; ++i) {
            grid.values[i] = lo + dx * static_cast<double>(i);
        }
        const std::vector<double> est = estimate_at(grid);
        if (est.size() != n_eval) {
            throw InvalidArgumentError("error_metrics: estimate size mismatch");
        }
        check_finite(est);
        const std::vector<double> truth = mixture_pdf(mix, grid);

        double mise = 0.0, miae = 0.0, neg = 0.0;
        for (std::size_t i = 0; i < n_eval; ++i) {
            const double w = (i == 0 || i == n_eval - 1) ? 0.5 : 1.0;  // trapezoid
            const double diff = est[i] - truth[i];
            mise += w * diff * diff;
            miae += w * std::abs(diff);
            neg += w * std::max(0.0, -est[i]);
        }
        report.mise = mise * dx;
        report.miae = miae * dx;
        report.negative_mass = neg * dx;
        return report;
    }

    // Importance sampling from the true mixture:
    //   integral f(x) dx = E_{z~p}[ f(z) / p(z) ].
    const SampleSet z = sample_mixture(mix, n_eval, mix64(seed ^ 0x5eedULL));
    const std::vector<double> est = estimate_at(z);
    if (est.size() != n_eval) {
        throw InvalidArgumentError("error_metrics: estimate size mismatch");
    }
    check_finite(est);
    const std::vector<double> truth = mixture_pdf(mix, z);

    std::vector<double> sq(n_eval), ab(n_eval), ng(n_eval);
    for (std::size_t i = 0; i < n_eval; ++i) {
        const double diff = est[i] - truth[i];
        sq[i] = diff * diff / truth[i];
        ab[i] = std::abs(diff) / truth[i];
        ng[i] = std::max(0.0, -est[i]) / truth[i];
    }
    const MeanSe m = mean_and_se(sq);
    const MeanSe a = mean_and_se(ab);
    const MeanSe g = mean_and_se(ng);
    report.mise = m.mean;
    report.mise_se = m.se;
    report.miae = a.mean;
    report.miae_se = a.se;
    report.negative_mass = g.mean;
    report.negative_mass_se = g.se;
    return report;
}

}  // namespace fkde::bench
