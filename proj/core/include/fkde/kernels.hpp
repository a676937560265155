#pragma once

#include <cstddef>

namespace fkde {

// Normalizing constant (2*pi)^(-d/2) * h^(-d) of the isotropic Gaussian.
double gaussian_norm_const(double h, std::size_t d);

// Isotropic Gaussian kernel K_h evaluated at squared distance r2:
//   K_h = (2*pi)^(-d/2) * h^(-d) * exp(-r2 / (2 h^2)).
// Strictly positive and monotone decreasing in r2.
double gaussian_kernel(double r2, double h, std::size_t d);

// Laplace-corrected kernel K_h * (1 + d/2 - r2/(2 h^2)).
// Integrates to 1, has zero second moment, and is negative exactly
// when r2 > (2 + d) * h^2.
double laplace_corrected_kernel(double r2, double h, std::size_t d);

}  // namespace fkde
