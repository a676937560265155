#include "fkde/oracle.hpp"

#include <cmath>
#include <string>

#include "fkde/errors.hpp"
#include "fkde/kernels.hpp"

// Everything here is a plain double loop over (eval point, train point)
// pairs with direct subtraction distances. No blocking, no threads, no
// shared code with the engine beyond the scalar kernel functions.
namespace fkde::oracle {

namespace {

void check_pair(const SampleSet& train, const SampleSet& eval) {
    train.validate();
    eval.validate();
    if (train.d != eval.d) {
        throw DimensionMismatchError("oracle: train.d=" + std::to_string(train.d) +
                                     " != queries.d=" + std::to_string(eval.d));
    }
}

double sq_dist(std::span<const double> a, std::span<const double> b) {
    double r2 = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) {
        const double diff = a[k] - b[k];
        r2 += diff * diff;
    }
    return r2;
}

}  // namespace

DensityResult kde_naive(const SampleSet& train, const SampleSet& queries, double h) {
    check_pair(train, queries);
    Bandwidth{h, h}.validate();

    DensityResult result;
    result.values.resize(queries.n);
    for (std::size_t j = 0; j < queries.n; ++j) {
        const auto q = queries.row(j);
        double acc = 0.0;
        for (std::size_t i = 0; i < train.n; ++i) {
            acc += gaussian_kernel(sq_dist(q, train.row(i)), h, train.d);
        }
        result.values[j] = acc / static_cast<double>(train.n);
    }
    return result;
}

SampleSet score_naive(const SampleSet& train, const SampleSet& eval_points, double h_score) {
    check_pair(train, eval_points);
    Bandwidth{h_score, h_score}.validate();

    const std::size_t d = train.d;
    const double inv_2h2 = 1.0 / (2.0 * h_score * h_score);
    SampleSet scores = SampleSet::zeros(eval_points.n, d);
    std::vector<double> numer(d);

    for (std::size_t j = 0; j < eval_points.n; ++j) {
        const auto y = eval_points.row(j);
        std::fill(numer.begin(), numer.end(), 0.0);
        double denom = 0.0;
        for (std::size_t i = 0; i < train.n; ++i) {
            const auto x = train.row(i);
            const double phi = std::exp(-sq_dist(y, x) * inv_2h2);
            denom += phi;
            for (std::size_t k = 0; k < d; ++k) {
                numer[k] += -(y[k] - x[k]) * phi;
            }
        }
        if (denom == 0.0) {
            throw ScoreUnderflowError(
                j, "score denominator underflowed to zero at eval point " + std::to_string(j));
        }
        const double scale = 1.0 / (h_score * h_score * denom);
        auto out = scores.row(j);
        for (std::size_t k = 0; k < d; ++k) {
            out[k] = numer[k] * scale;
        }
    }
    return scores;
}

DensityResult sdkde_naive(const SampleSet& train, const SampleSet& queries, const Bandwidth& bw) {
    check_pair(train, queries);
    bw.validate();

    SampleSet debiased = train;
    const SampleSet scores = score_naive(train, train, bw.h_score);
    const double shift = 0.5 * bw.h * bw.h;
    for (std::size_t i = 0; i < train.n * train.d; ++i) {
        debiased.values[i] += shift * scores.values[i];
    }

    DensityResult result = kde_naive(debiased, queries, bw.h);
    result.debiased_samples = std::move(debiased);
    return result;
}

DensityResult laplace_naive(const SampleSet& train, const SampleSet& queries, double h) {
    check_pair(train, queries);
    Bandwidth{h, h}.validate();

    DensityResult result;
    result.values.resize(queries.n);
    for (std::size_t j = 0; j < queries.n; ++j) {
        const auto q = queries.row(j);
        double acc = 0.0;
        for (std::size_t i = 0; i < train.n; ++i) {
            acc += laplace_corrected_kernel(sq_dist(q, train.row(i)), h, train.d);
        }
        result.values[j] = acc / static_cast<double>(train.n);
    }
    return result;
}

}  // namespace fkde::oracle
