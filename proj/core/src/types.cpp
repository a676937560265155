#include "fkde/types.hpp"

#include <cmath>
#include <utility>

namespace fkde {

SampleSet::SampleSet(std::vector<double> data, std::size_t n_rows, std::size_t n_cols)
    : values(std::move(data)), n(n_rows), d(n_cols) {
    validate();
}

SampleSet SampleSet::zeros(std::size_t n_rows, std::size_t n_cols) {
    SampleSet s;
    s.values.assign(n_rows * n_cols, 0.0);
    s.n = n_rows;
    s.d = n_cols;
    return s;
}

void SampleSet::validate() const {
    if (n == 0 || d == 0) {
        throw InvalidArgumentError("SampleSet: n and d must be >= 1");
    }
    if (values.size() != n * d) {
        throw InvalidArgumentError("SampleSet: storage size does not match n*d");
    }
    for (double v : values) {
        if (!std::isfinite(v)) {
            throw InvalidArgumentError("SampleSet: non-finite entry");
        }
    }
}

std::string to_string(Method m) {
    switch (m) {
        case Method::Kde: return "kde";
        case Method::Sdkde: return "sdkde";
        case Method::LaplaceKde: return "laplace";
    }
    return "?";
}

std::string to_string(EngineKind e) {
    return e == EngineKind::Naive ? "naive" : "flash";
}

Method method_from_string(const std::string& s) {
    if (s == "kde") return Method::Kde;
    if (s == "sdkde") return Method::Sdkde;
    if (s == "laplace") return Method::LaplaceKde;
    throw InvalidArgumentError("unknown method: " + s);
}

EngineKind engine_from_string(const std::string& s) {
    if (s == "naive") return EngineKind::Naive;
    if (s == "flash") return EngineKind::Flash;
    throw InvalidArgumentError("unknown engine: " + s);
}

Bandwidth Bandwidth::half_variance_score(double h) {
    return {h, h / std::sqrt(2.0)};
}

void Bandwidth::validate() const {
    if (!(h > 0.0) || !std::isfinite(h)) {
        throw InvalidArgumentError("Bandwidth: h must be positive and finite");
    }
    if (!(h_score > 0.0) || !std::isfinite(h_score)) {
        throw InvalidArgumentError("Bandwidth: h_score must be positive and finite");
    }
}

void EstimatorConfig::validate() const {
    bandwidth.validate();
    if (tile_m == 0 || tile_n == 0) {
        throw InvalidArgumentError("EstimatorConfig: tile_m and tile_n must be >= 1");
    }
}

}  // namespace fkde
