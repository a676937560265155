#include "fkde/engine.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <mutex>
#include <string>

#include "fkde/alloc_stats.hpp"
#include "fkde/errors.hpp"
#include "fkde/kernels.hpp"
#include "fkde/parallel.hpp"

namespace fkde::engine {

namespace {

using RowMat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using ConstMat = Eigen::Map<const RowMat>;
using MutMat = Eigen::Map<RowMat>;
using ConstVec = Eigen::Map<const Eigen::VectorXd>;
using MutVec = Eigen::Map<Eigen::VectorXd>;
using ConstRowVec = Eigen::Map<const Eigen::RowVectorXd>;

void check_pair(const SampleSet& train, const SampleSet& queries) {
    train.validate();
    queries.validate();
    if (train.d != queries.d) {
        throw DimensionMismatchError("engine: train.d=" + std::to_string(train.d) +
                                     " != queries.d=" + std::to_string(queries.d));
    }
}

// |a_i - b_j|^2 = |a_i|^2 + |b_j|^2 - 2 a_i.b_j on one tile; the cross term
// is a dense block product. Values inside the rounding band
// 16 eps (|a|^2 + |b|^2) snap to zero: the expansion can land a few ulp on
// either side of zero, the exponent sign must not flip, and bitwise-equal
// rows must come out exactly zero.
void tile_sq_dists(ConstMat a_blk, ConstMat b_blk,
                   const double* a_norms, const double* b_norms, MutMat out) {
    constexpr double kSnapBand = 16.0 * std::numeric_limits<double>::epsilon();
    out.noalias() = a_blk * b_blk.transpose();
    const auto bn = Eigen::Map<const Eigen::ArrayXd>(b_norms, b_blk.rows()).transpose();
    for (Eigen::Index r = 0; r < out.rows(); ++r) {
        auto row = out.row(r).array();
        row = ((bn + a_norms[r]) - 2.0 * row < kSnapBand * (bn + a_norms[r]))
                  .select(0.0, (bn + a_norms[r]) - 2.0 * row);
    }
}

void squared_norms(const SampleSet& s, double* out) {
    ConstMat m(s.data(), static_cast<Eigen::Index>(s.n), static_cast<Eigen::Index>(s.d));
    MutVec(out, static_cast<Eigen::Index>(s.n)) = m.rowwise().squaredNorm();
}

// Caps the worker count so that live per-worker tile buffers stay within the
// advertised transient-memory envelope (tile area + problem data), instead
// of scaling with the machine's core count.
std::size_t budget_workers(std::size_t requested, std::size_t n_row_tiles,
                           std::size_t tile_scalars, std::size_t data_scalars) {
    std::size_t w = parallel::resolve_threads(requested);
    w = std::min(w, n_row_tiles);
    const std::size_t cap = 3 + (3 * data_scalars) / std::max<std::size_t>(tile_scalars, 1);
    return std::max<std::size_t>(1, std::min(w, cap));
}

struct Block {
    std::size_t start;
    std::size_t len;
};

Block tile_range(std::size_t tile_index, std::size_t tile_size, std::size_t total) {
    const std::size_t start = tile_index * tile_size;
    return {start, std::min(tile_size, total - start)};
}

enum class PairTerm { Gaussian, LaplaceFused, LaplaceCorrection };

// Turns a tile of squared distances into the requested per-pair kernel term,
// in place. u = r2 / (2 h^2).
void apply_pair_term(MutMat tile, double inv_2h2, double half_d, PairTerm term) {
    switch (term) {
        case PairTerm::Gaussian:
            tile.array() = (tile.array() * -inv_2h2).exp();
            break;
        case PairTerm::LaplaceFused:
            tile.array() = (tile.array() * -inv_2h2).exp() *
                           (1.0 + half_d - tile.array() * inv_2h2);
            break;
        case PairTerm::LaplaceCorrection:
            tile.array() = (tile.array() * -inv_2h2).exp() *
                           (half_d - tile.array() * inv_2h2);
            break;
    }
}

// One streaming pass of sum_i term(q_j, t_i) over all tiles, accumulated
// into acc[j]. Worker w owns query tiles w, w+W, ... and walks train tiles
// in ascending order, so each output element sees a fixed accumulation
// order no matter how many workers run.
void stream_kde_pass(const SampleSet& train, const SampleSet& queries,
                     const TilePlan& plan, double inv_2h2, PairTerm term,
                     const double* train_norms, const double* query_norms,
                     std::size_t n_workers, bool fast, double* acc) {
    const std::size_t d = train.d;
    const double half_d = 0.5 * static_cast<double>(d);
    const std::size_t bm_max = std::min(plan.tile_m, queries.n);
    const std::size_t bn_max = std::min(plan.tile_n, train.n);

    if (!fast) {
        parallel::for_each_worker(n_workers, [&](std::size_t w) {
            alloc_stats::TrackedBuffer tile(bm_max * bn_max);
            for (std::size_t qt = w; qt < plan.n_tiles_m; qt += n_workers) {
                const Block qb = tile_range(qt, plan.tile_m, queries.n);
                ConstMat q_blk(queries.data() + qb.start * d,
                               static_cast<Eigen::Index>(qb.len), static_cast<Eigen::Index>(d));
                MutVec acc_seg(acc + qb.start, static_cast<Eigen::Index>(qb.len));
                for (std::size_t tt = 0; tt < plan.n_tiles_n; ++tt) {
                    const Block tb = tile_range(tt, plan.tile_n, train.n);
                    ConstMat t_blk(train.data() + tb.start * d,
                                   static_cast<Eigen::Index>(tb.len), static_cast<Eigen::Index>(d));
                    MutMat g(tile.data(), static_cast<Eigen::Index>(qb.len),
                             static_cast<Eigen::Index>(tb.len));
                    tile_sq_dists(q_blk, t_blk, query_norms + qb.start, train_norms + tb.start, g);
                    apply_pair_term(g, inv_2h2, half_d, term);
                    acc_seg += g.rowwise().sum();
                }
            }
        });
        return;
    }

    // Fast mode: tile pairs are claimed dynamically and partial sums merged
    // in arrival order. Not bitwise reproducible; same values to ~1e-10.
    const std::size_t n_tasks = plan.n_tiles_m * plan.n_tiles_n;
    std::vector<std::mutex> row_locks(plan.n_tiles_m);
    std::atomic<std::size_t> next{0};
    parallel::for_each_worker(std::min(n_workers, std::max<std::size_t>(n_tasks, 1)),
                              [&](std::size_t) {
        alloc_stats::TrackedBuffer tile(bm_max * bn_max);
        alloc_stats::TrackedBuffer partial(bm_max);
        for (;;) {
            const std::size_t task = next.fetch_add(1);
            if (task >= n_tasks) {
                break;
            }
            const std::size_t qt = task / plan.n_tiles_n;
            const std::size_t tt = task % plan.n_tiles_n;
            const Block qb = tile_range(qt, plan.tile_m, queries.n);
            const Block tb = tile_range(tt, plan.tile_n, train.n);
            ConstMat q_blk(queries.data() + qb.start * d,
                           static_cast<Eigen::Index>(qb.len), static_cast<Eigen::Index>(d));
            ConstMat t_blk(train.data() + tb.start * d,
                           static_cast<Eigen::Index>(tb.len), static_cast<Eigen::Index>(d));
            MutMat g(tile.data(), static_cast<Eigen::Index>(qb.len),
                     static_cast<Eigen::Index>(tb.len));
            tile_sq_dists(q_blk, t_blk, query_norms + qb.start, train_norms + tb.start, g);
            apply_pair_term(g, inv_2h2, half_d, term);
            MutVec p(partial.data(), static_cast<Eigen::Index>(qb.len));
            p = g.rowwise().sum();
            std::lock_guard<std::mutex> lock(row_locks[qt]);
            MutVec acc_seg(acc + qb.start, static_cast<Eigen::Index>(qb.len));
            acc_seg += p;
        }
    });
}

// Streaming score totals: phi_sum += row sums of the phi tile,
// weighted_sum += phi tile * train block (the per-tile piece of T = Phi X).
void stream_score_totals(const SampleSet& train, double h_score, const TilePlan& plan,
                         std::size_t n_workers, bool fast,
                         const double* train_norms, double* phi_sum, double* weighted) {
    const std::size_t d = train.d;
    const double inv_2h2 = 1.0 / (2.0 * h_score * h_score);
    const std::size_t bm_max = std::min(plan.tile_m, train.n);
    const std::size_t bn_max = std::min(plan.tile_n, train.n);

    if (!fast) {
        parallel::for_each_worker(n_workers, [&](std::size_t w) {
            alloc_stats::TrackedBuffer tile(bm_max * bn_max);
            for (std::size_t it = w; it < plan.n_tiles_m; it += n_workers) {
                const Block ib = tile_range(it, plan.tile_m, train.n);
                ConstMat i_blk(train.data() + ib.start * d,
                               static_cast<Eigen::Index>(ib.len), static_cast<Eigen::Index>(d));
                MutVec phi_seg(phi_sum + ib.start, static_cast<Eigen::Index>(ib.len));
                MutMat w_seg(weighted + ib.start * d,
                             static_cast<Eigen::Index>(ib.len), static_cast<Eigen::Index>(d));
                for (std::size_t jt = 0; jt < plan.n_tiles_n; ++jt) {
                    const Block jb = tile_range(jt, plan.tile_n, train.n);
                    ConstMat j_blk(train.data() + jb.start * d,
                                   static_cast<Eigen::Index>(jb.len), static_cast<Eigen::Index>(d));
                    MutMat g(tile.data(), static_cast<Eigen::Index>(ib.len),
                             static_cast<Eigen::Index>(jb.len));
                    tile_sq_dists(i_blk, j_blk, train_norms + ib.start, train_norms + jb.start, g);
                    g.array() = (g.array() * -inv_2h2).exp();
                    phi_seg += g.rowwise().sum();
                    w_seg.noalias() += g * j_blk;
                }
            }
        });
        return;
    }

    const std::size_t n_tasks = plan.n_tiles_m * plan.n_tiles_n;
    std::vector<std::mutex> row_locks(plan.n_tiles_m);
    std::atomic<std::size_t> next{0};
    parallel::for_each_worker(std::min(n_workers, std::max<std::size_t>(n_tasks, 1)),
                              [&](std::size_t) {
        alloc_stats::TrackedBuffer tile(bm_max * bn_max);
        alloc_stats::TrackedBuffer phi_partial(bm_max);
        alloc_stats::TrackedBuffer w_partial(bm_max * d);
        for (;;) {
            const std::size_t task = next.fetch_add(1);
            if (task >= n_tasks) {
                break;
            }
            const std::size_t it = task / plan.n_tiles_n;
            const std::size_t jt = task % plan.n_tiles_n;
            const Block ib = tile_range(it, plan.tile_m, train.n);
            const Block jb = tile_range(jt, plan.tile_n, train.n);
            ConstMat i_blk(train.data() + ib.start * d,
                           static_cast<Eigen::Index>(ib.len), static_cast<Eigen::Index>(d));
            ConstMat j_blk(train.data() + jb.start * d,
                           static_cast<Eigen::Index>(jb.len), static_cast<Eigen::Index>(d));
            MutMat g(tile.data(), static_cast<Eigen::Index>(ib.len),
                     static_cast<Eigen::Index>(jb.len));
            tile_sq_dists(i_blk, j_blk, train_norms + ib.start, train_norms + jb.start, g);
            g.array() = (g.array() * -inv_2h2).exp();
            MutVec pp(phi_partial.data(), static_cast<Eigen::Index>(ib.len));
            MutMat wp(w_partial.data(), static_cast<Eigen::Index>(ib.len),
                      static_cast<Eigen::Index>(d));
            pp = g.rowwise().sum();
            wp.noalias() = g * j_blk;
            std::lock_guard<std::mutex> lock(row_locks[it]);
            MutVec phi_seg(phi_sum + ib.start, static_cast<Eigen::Index>(ib.len));
            MutMat w_seg(weighted + ib.start * d,
                         static_cast<Eigen::Index>(ib.len), static_cast<Eigen::Index>(d));
            phi_seg += pp;
            w_seg += wp;
        }
    });
}

}  // namespace

TilePlan TilePlan::make(std::size_t n_queries, std::size_t n_train,
                        std::size_t tile_m, std::size_t tile_n) {
    if (tile_m == 0 || tile_n == 0) {
        throw InvalidArgumentError("TilePlan: tile sizes must be >= 1");
    }
    TilePlan plan;
    plan.tile_m = tile_m;
    plan.tile_n = tile_n;
    plan.n_tiles_m = n_queries == 0 ? 0 : (n_queries + tile_m - 1) / tile_m;
    plan.n_tiles_n = n_train == 0 ? 0 : (n_train + tile_n - 1) / tile_n;
    return plan;
}

void pairwise_sq_dists_block(const double* a, std::size_t na,
                             const double* b, std::size_t nb,
                             std::size_t d, double* out) {
    ConstMat am(a, static_cast<Eigen::Index>(na), static_cast<Eigen::Index>(d));
    ConstMat bm(b, static_cast<Eigen::Index>(nb), static_cast<Eigen::Index>(d));
    Eigen::VectorXd an = am.rowwise().squaredNorm();
    Eigen::VectorXd bn = bm.rowwise().squaredNorm();
    MutMat o(out, static_cast<Eigen::Index>(na), static_cast<Eigen::Index>(nb));
    tile_sq_dists(am, bm, an.data(), bn.data(), o);
}

SampleSet pairwise_sq_dists_block(const SampleSet& a, const SampleSet& b) {
    check_pair(a, b);
    SampleSet out = SampleSet::zeros(a.n, b.n);
    pairwise_sq_dists_block(a.data(), a.n, b.data(), b.n, a.d, out.data());
    return out;
}

ScoreAccumulator score_accumulate(const SampleSet& train, double h_score,
                                  const TilePlan& plan, const EngineOptions& opts) {
    train.validate();
    Bandwidth{h_score, h_score}.validate();
    const TilePlan p = TilePlan::make(train.n, train.n, plan.tile_m, plan.tile_n);

    const std::size_t tile_scalars =
        std::min(p.tile_m, train.n) * std::min(p.tile_n, train.n);
    const std::size_t data_scalars = 2 * train.n * train.d;
    const std::size_t n_workers =
        budget_workers(opts.threads, p.n_tiles_m, tile_scalars, data_scalars);

    alloc_stats::TrackedBuffer norms(train.n);
    squared_norms(train, norms.data());

    ScoreAccumulator acc;
    acc.phi_sum.assign(train.n, 0.0);
    acc.weighted_sum = SampleSet::zeros(train.n, train.d);
    stream_score_totals(train, h_score, p, n_workers, opts.fast_accumulation,
                        norms.data(), acc.phi_sum.data(), acc.weighted_sum.data());
    return acc;
}

SampleSet score_flash(const SampleSet& train, double h_score,
                      const TilePlan& plan, const EngineOptions& opts) {
    train.validate();
    Bandwidth{h_score, h_score}.validate();
    const TilePlan p = TilePlan::make(train.n, train.n, plan.tile_m, plan.tile_n);

    const std::size_t d = train.d;
    const std::size_t tile_scalars = std::min(p.tile_m, train.n) * std::min(p.tile_n, train.n);
    const std::size_t data_scalars = 2 * train.n * d;
    const std::size_t n_workers =
        budget_workers(opts.threads, p.n_tiles_m, tile_scalars, data_scalars);

    SampleSet scores = SampleSet::zeros(train.n, d);
    {
        alloc_stats::TrackedBuffer norms(train.n);
        alloc_stats::TrackedBuffer phi_sum(train.n);
        squared_norms(train, norms.data());
        stream_score_totals(train, h_score, p, n_workers, opts.fast_accumulation,
                            norms.data(), phi_sum.data(), scores.data());

        // s(x_i) = (sum_j phi_ij x_j - x_i sum_j phi_ij) / (h^2 sum_j phi_ij)
        const double inv_h2 = 1.0 / (h_score * h_score);
        for (std::size_t i = 0; i < train.n; ++i) {
            const double denom = phi_sum[i];
            if (denom == 0.0) {
                throw ScoreUnderflowError(
                    i, "score denominator underflowed to zero at train point " +
                           std::to_string(i));
            }
            const double scale = inv_h2 / denom;
            const auto x = train.row(i);
            auto s = scores.row(i);
            for (std::size_t k = 0; k < d; ++k) {
                s[k] = (s[k] - x[k] * denom) * scale;
            }
        }
    }
    return scores;
}

DensityResult kde_flash(const SampleSet& train, const SampleSet& queries,
                        double h, KernelKind kernel, bool fused,
                        const TilePlan& plan, const EngineOptions& opts) {
    check_pair(train, queries);
    Bandwidth{h, h}.validate();
    const TilePlan p = TilePlan::make(queries.n, train.n, plan.tile_m, plan.tile_n);

    const std::size_t d = train.d;
    const std::size_t tile_scalars = std::min(p.tile_m, queries.n) * std::min(p.tile_n, train.n);
    const std::size_t data_scalars = (train.n + queries.n) * d;
    const std::size_t n_workers =
        budget_workers(opts.threads, p.n_tiles_m, tile_scalars, data_scalars);

    DensityResult result;
    result.values.assign(queries.n, 0.0);
    {
        alloc_stats::TrackedBuffer train_norms(train.n);
        alloc_stats::TrackedBuffer query_norms(queries.n);
        squared_norms(train, train_norms.data());
        squared_norms(queries, query_norms.data());

        const double inv_2h2 = 1.0 / (2.0 * h * h);
        if (kernel == KernelKind::Gaussian) {
            stream_kde_pass(train, queries, p, inv_2h2, PairTerm::Gaussian,
                            train_norms.data(), query_norms.data(), n_workers,
                            opts.fast_accumulation, result.values.data());
        } else if (fused) {
            stream_kde_pass(train, queries, p, inv_2h2, PairTerm::LaplaceFused,
                            train_norms.data(), query_norms.data(), n_workers,
                            opts.fast_accumulation, result.values.data());
        } else {
            stream_kde_pass(train, queries, p, inv_2h2, PairTerm::Gaussian,
                            train_norms.data(), query_norms.data(), n_workers,
                            opts.fast_accumulation, result.values.data());
            stream_kde_pass(train, queries, p, inv_2h2, PairTerm::LaplaceCorrection,
                            train_norms.data(), query_norms.data(), n_workers,
                            opts.fast_accumulation, result.values.data());
        }
    }

    const double scale = gaussian_norm_const(h, d) / static_cast<double>(train.n);
    for (double& v : result.values) {
        v *= scale;
    }
    return result;
}

DensityResult sdkde_flash(const SampleSet& train, const SampleSet& queries,
                          const Bandwidth& bw, const TilePlan& plan,
                          const EngineOptions& opts) {
    check_pair(train, queries);
    bw.validate();

    SampleSet debiased = score_flash(train, bw.h_score, plan, opts);
    const double shift = 0.5 * bw.h * bw.h;
    for (std::size_t i = 0; i < train.n * train.d; ++i) {
        debiased.values[i] = train.values[i] + shift * debiased.values[i];
    }

    DensityResult result =
        kde_flash(debiased, queries, bw.h, KernelKind::Gaussian, true, plan, opts);
    result.debiased_samples = std::move(debiased);
    return result;
}

}  // namespace fkde::engine
