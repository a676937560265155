#pragma once

#include "fkde/types.hpp"

// Naive O(n*m*d) reference estimators. Plain loops, direct subtraction
// distances, single-threaded: structurally independent of the blocked engine
// so the two paths can check each other.
namespace fkde::oracle {

// p_hat(y_j) = (1/n) * sum_i K_h(y_j - x_i).
DensityResult kde_naive(const SampleSet& train, const SampleSet& queries, double h);

// Empirical score s_hat(y) = grad log p_hat(y) at each eval point:
//   s_hat(y) = sum_i [-(y - x_i) phi_i] / (h^2 sum_i phi_i),
// with phi_i the standard Gaussian of (y - x_i)/h.
// Row j of the result is s_hat(eval_j). Throws ScoreUnderflowError when the
// denominator underflows to zero at some eval point.
SampleSet score_naive(const SampleSet& train, const SampleSet& eval_points, double h_score);

// KDE on debiased samples x_i + (h^2/2) * s_hat(x_i); the score uses
// bw.h_score and the final KDE uses bw.h. Result carries the debiased set.
DensityResult sdkde_naive(const SampleSet& train, const SampleSet& queries, const Bandwidth& bw);

// p_hat_lc(y_j) = (1/n) * sum_i K_h^lc(y_j - x_i). May be negative.
DensityResult laplace_naive(const SampleSet& train, const SampleSet& queries, double h);

}  // namespace fkde::oracle
