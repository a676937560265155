#pragma once

#include <cstddef>

#include "fkde/types.hpp"

// Blocked estimators. Every pairwise pass is reordered into a dense
// block product A_blk * B_blk^T plus O(rows*cols) elementwise work, and the
// conceptual n x m interaction matrix is streamed tile by tile: at no point
// is more than one tile of it resident per worker.
namespace fkde::engine {

/// Tiling of an (n_queries x n_train) pairwise pass into tile_m x tile_n
/// blocks. Edge tiles are ragged; block extents are clamped, never padded.
struct TilePlan {
    std::size_t tile_m = 64;
    std::size_t tile_n = 1024;
    std::size_t n_tiles_m = 0;
    std::size_t n_tiles_n = 0;

    static TilePlan make(std::size_t n_queries, std::size_t n_train,
                         std::size_t tile_m, std::size_t tile_n);
};

/// Streaming totals for the score pass over one block of train rows:
/// phi_sum[i]      = sum_j phi_ij   (includes the self term phi_ii = 1)
/// weighted_sum[i] = sum_j phi_ij * x_j
struct ScoreAccumulator {
    std::vector<double> phi_sum;
    SampleSet weighted_sum;
};

struct EngineOptions {
    std::size_t threads = 0;       // 0 = hardware concurrency (FKDE_THREADS caps)
    bool fast_accumulation = false;  // relaxes tile accumulation order; results
                                     // stay within 1e-10 of the default mode but
                                     // are not bitwise reproducible
};

// Squared Euclidean distances between two row blocks via the norm expansion
//   |a - b|^2 = |a|^2 + |b|^2 - 2 a.b
// with the cross term computed as a dense block matrix product.
// out is row-major na x nb. Entries inside the 16-eps rounding band of the
// expansion snap to zero, so results are never negative and bitwise-equal
// rows give exactly zero.
void pairwise_sq_dists_block(const double* a, std::size_t na,
                             const double* b, std::size_t nb,
                             std::size_t d, double* out);
SampleSet pairwise_sq_dists_block(const SampleSet& a, const SampleSet& b);

// Streams the score totals without forming any n x n matrix:
// weighted_sum collects the per-tile products phi_blk * x_blk.
ScoreAccumulator score_accumulate(const SampleSet& train, double h_score,
                                  const TilePlan& plan, const EngineOptions& opts = {});

// Empirical score at every training point, streamed in tiles. Row i of the
// result is s_hat(x_i). Transient memory is O(tile_m*tile_n + n*d).
SampleSet score_flash(const SampleSet& train, double h_score,
                      const TilePlan& plan, const EngineOptions& opts = {});

// Blocked KDE (Gaussian or Laplace-corrected kernel) of train evaluated at
// queries. For the Laplace kernel, fused=true applies the affine factor to
// each exponential inside the single streaming pass; fused=false runs two
// sequential blocked passes (plain Gaussian accumulation, then the
// (d/2 - r2/(2h^2))*K_h correction).
DensityResult kde_flash(const SampleSet& train, const SampleSet& queries,
                        double h, KernelKind kernel, bool fused,
                        const TilePlan& plan, const EngineOptions& opts = {});

// score_flash -> shift train by (h^2/2)*s_hat -> Gaussian kde_flash.
// debiased_samples is populated on the result.
DensityResult sdkde_flash(const SampleSet& train, const SampleSet& queries,
                          const Bandwidth& bw, const TilePlan& plan,
                          const EngineOptions& opts = {});

}  // namespace fkde::engine
