#include "fkde/kernels.hpp"

#include <cmath>
#include <numbers>

#include "fkde/errors.hpp"

namespace fkde {

namespace {

void check_kernel_args(double r2, double h) {
    if (!std::isfinite(r2) || !std::isfinite(h)) {
        throw InvalidArgumentError("kernel: non-finite argument");
    }
    if (r2 < 0.0) {
        throw InvalidArgumentError("kernel: squared distance must be >= 0");
    }
    if (h <= 0.0) {
        throw InvalidArgumentError("kernel: bandwidth must be > 0");
    }
}

}  // namespace

double gaussian_norm_const(double h, std::size_t d) {
    const double dd = static_cast<double>(d);
    return std::pow(2.0 * std::numbers::pi, -0.5 * dd) * std::pow(h, -dd);
}

double gaussian_kernel(double r2, double h, std::size_t d) {
    check_kernel_args(r2, h);
    return gaussian_norm_const(h, d) * std::exp(-r2 / (2.0 * h * h));
}

double laplace_corrected_kernel(double r2, double h, std::size_t d) {
    check_kernel_args(r2, h);
    const double u = r2 / (2.0 * h * h);
    return gaussian_norm_const(h, d) * std::exp(-u) *
           (1.0 + 0.5 * static_cast<double>(d) - u);
}

}  // namespace fkde
