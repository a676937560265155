#include "fkde/mixture.hpp"

#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

#include <json.hpp>

#include "fkde/errors.hpp"
#include "fkde/rng.hpp"

namespace fkde::bench {

void GaussianMixture::validate() const {
    if (weights.empty()) {
        throw InvalidArgumentError("mixture: needs at least one component");
    }
    means.validate();
    if (means.n != weights.size() || sigmas.size() != weights.size()) {
        throw InvalidArgumentError("mixture: weights/means/sigmas size mismatch");
    }
    double total = 0.0;
    for (double w : weights) {
        if (!(w >= 0.0) || !std::isfinite(w)) {
            throw InvalidArgumentError("mixture: weights must be finite and >= 0");
        }
        total += w;
    }
    if (std::abs(total - 1.0) > 1e-12) {
        throw InvalidArgumentError("mixture: weights must sum to 1 within 1e-12");
    }
    for (double s : sigmas) {
        if (!(s > 0.0) || !std::isfinite(s)) {
            throw InvalidArgumentError("mixture: sigmas must be positive");
        }
    }
}

SampleSet sample_mixture(const GaussianMixture& mix, std::size_t n, std::uint64_t seed) {
    mix.validate();
    if (n == 0) {
        throw InvalidArgumentError("sample_mixture: n must be >= 1");
    }
    const std::size_t d = mix.dim();
    SampleSet out = SampleSet::zeros(n, d);
    Rng rng(seed, /*stream=*/0);
    for (std::size_t i = 0; i < n; ++i) {
        const double u = rng.uniform01();
        std::size_t comp = mix.components() - 1;
        double cum = 0.0;
        for (std::size_t c = 0; c < mix.components(); ++c) {
            cum += mix.weights[c];
            if (u < cum) {
                comp = c;
                break;
            }
        }
        auto row = out.row(i);
        const auto mean = mix.means.row(comp);
        const double sigma = mix.sigmas[comp];
        for (std::size_t k = 0; k < d; ++k) {
            row[k] = mean[k] + sigma * rng.normal();
        }
    }
    return out;
}

std::vector<double> mixture_pdf(const GaussianMixture& mix, const SampleSet& points) {
    mix.validate();
    points.validate();
    if (points.d != mix.dim()) {
        throw DimensionMismatchError("mixture_pdf: dimension mismatch");
    }
    const std::size_t d = mix.dim();
    std::vector<double> out(points.n, 0.0);
    std::vector<double> comp_norm(mix.components());
    for (std::size_t c = 0; c < mix.components(); ++c) {
        comp_norm[c] = mix.weights[c] *
                       std::pow(2.0 * std::numbers::pi * mix.sigmas[c] * mix.sigmas[c],
                                -0.5 * static_cast<double>(d));
    }
    for (std::size_t j = 0; j < points.n; ++j) {
        const auto p = points.row(j);
        double acc = 0.0;
        for (std::size_t c = 0; c < mix.components(); ++c) {
            const auto mean = mix.means.row(c);
            double r2 = 0.0;
            for (std::size_t k = 0; k < d; ++k) {
                const double diff = p[k] - mean[k];
                r2 += diff * diff;
            }
            acc += comp_norm[c] * std::exp(-r2 / (2.0 * mix.sigmas[c] * mix.sigmas[c]));
        }
        out[j] = acc;
    }
    return out;
}

GaussianMixture load_mixture(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw IoError("cannot open mixture config: " + path);
    }
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw IoError("mixture config parse error in " + path + ": " + e.what());
    }
    try {
        GaussianMixture mix;
        const std::size_t d = j.at("d").get<std::size_t>();
        mix.weights = j.at("weights").get<std::vector<double>>();
        mix.sigmas = j.at("sigmas").get<std::vector<double>>();
        const auto rows = j.at("means").get<std::vector<std::vector<double>>>();
        std::vector<double> flat;
        flat.reserve(rows.size() * d);
        for (const auto& r : rows) {
            if (r.size() != d) {
                throw InvalidArgumentError("mixture config: mean row length != d");
            }
            flat.insert(flat.end(), r.begin(), r.end());
        }
        mix.means = SampleSet(std::move(flat), rows.size(), d);
        mix.validate();
        return mix;
    } catch (const nlohmann::json::exception& e) {
        throw InvalidArgumentError("mixture config missing field in " + path + ": " + e.what());
    }
}

namespace {

nlohmann::json to_json(const GaussianMixture& mix) {
    nlohmann::json j;
    j["schema_version"] = 1;
    j["d"] = mix.dim();
    j["weights"] = mix.weights;
    j["sigmas"] = mix.sigmas;
    std::vector<std::vector<double>> rows(mix.components());
    for (std::size_t c = 0; c < mix.components(); ++c) {
        const auto r = mix.means.row(c);
        rows[c].assign(r.begin(), r.end());
    }
    j["means"] = rows;
    return j;
}

}  // namespace

void save_mixture(const GaussianMixture& mix, const std::string& path) {
    mix.validate();
    std::ofstream out(path);
    if (!out) {
        throw IoError("cannot write mixture config: " + path);
    }
    out << to_json(mix).dump(2) << "\n";
}

std::uint64_t mixture_hash(const GaussianMixture& mix) {
    const std::string canon = to_json(mix).dump();
    std::uint64_t h = 0xcbf29ce484222325ULL;  // FNV-1a 64
    for (unsigned char ch : canon) {
        h ^= ch;
        h *= 0x100000001b3ULL;
    }
    return h;
}

}  // namespace fkde::bench
