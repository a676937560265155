#include "fkde/perfmodel.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "fkde/errors.hpp"

namespace fkde::perfmodel {

void HardwareSpec::validate() const {
    if (!(peak_flops > 0.0) || !(mem_bw > 0.0) || !(exp_cost > 0.0)) {
        throw InvalidArgumentError("HardwareSpec: peak_flops, mem_bw, exp_cost must be > 0");
    }
}

HardwareSpec load_hardware_spec(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw IoError("cannot open hardware spec: " + path);
    }
    HardwareSpec hw;
    std::string line;
    while (std::getline(in, line)) {
        const auto hash = line.find('#');
        if (hash != std::string::npos) {
            line.erase(hash);
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            continue;
        }
        auto trim = [](std::string s) {
            const auto a = s.find_first_not_of(" \t\r");
            const auto b = s.find_last_not_of(" \t\r");
            return a == std::string::npos ? std::string{} : s.substr(a, b - a + 1);
        };
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key == "name") {
            hw.name = value;
        } else if (key == "peak_flops") {
            hw.peak_flops = std::stod(value);
        } else if (key == "mem_bw") {
            hw.mem_bw = std::stod(value);
        } else if (key == "exp_cost") {
            hw.exp_cost = std::stod(value);
        } else {
            throw InvalidArgumentError("hardware spec: unknown key '" + key + "' in " + path);
        }
    }
    hw.validate();
    return hw;
}

std::string to_string(Bound b) {
    return b == Bound::ComputeBound ? "compute-bound" : "memory-bound";
}

namespace {

void check_positive_counts(std::size_t d, std::size_t k) {
    if (d == 0 || k == 0) {
        throw InvalidArgumentError("perf model: d and k must be >= 1");
    }
}

double ceil_div(std::size_t a, std::size_t b) {
    return static_cast<double>((a + b - 1) / b);
}

}  // namespace

double flops_nd(std::size_t d, std::size_t k) {
    check_positive_counts(d, k);
    const double dd = static_cast<double>(d);
    const double kk = static_cast<double>(k);
    return (4.0 * dd + 12.0 + dd / 4.0 + 1.5) * kk * kk;
}

double flops_1d(std::size_t k) {
    check_positive_counts(1, k);
    const double kk = static_cast<double>(k);
    return 17.75 * kk * kk;
}

double bytes_tile(std::size_t d, std::size_t tile_m, std::size_t tile_n) {
    check_positive_counts(d, 1);
    if (tile_m == 0 || tile_n == 0) {
        throw InvalidArgumentError("bytes_tile: tile sizes must be >= 1");
    }
    const double dd = static_cast<double>(d);
    const double tm = static_cast<double>(tile_m);
    const double tn = static_cast<double>(tile_n);
    return 4.0 * (2.0 * tm * dd + tn * dd + tm);
}

double bytes_nd(std::size_t d, std::size_t k, std::size_t tile_m, std::size_t tile_n) {
    check_positive_counts(d, k);
    return bytes_tile(d, tile_m, tile_n) * ceil_div(k, tile_m) * ceil_div(k, tile_n);
}

double bytes_linear(std::size_t d, std::size_t k) {
    check_positive_counts(d, k);
    const double dd = static_cast<double>(d);
    const double kk = static_cast<double>(k);
    return 4.0 * ((9.0 / 8.0) * dd * kk + kk / 8.0);
}

double bytes_1d(std::size_t k) {
    check_positive_counts(1, k);
    return 5.0 * static_cast<double>(k);
}

double intensity(double flops, double bytes) {
    if (!(bytes > 0.0)) {
        throw InvalidArgumentError("intensity: bytes must be > 0");
    }
    return flops / bytes;
}

double intensity_asymptotic(std::size_t d) {
    check_positive_counts(d, 1);
    const double dd = static_cast<double>(d);
    return ((17.0 / 4.0) * dd + 27.0 / 2.0) / (9.0 * dd / 2.0);
}

double intensity_1d(std::size_t k) {
    return intensity(flops_1d(k), bytes_1d(k));
}

PerfModelReport classify(double flops, double bytes, const HardwareSpec& hw) {
    hw.validate();
    PerfModelReport report;
    report.flops = flops;
    report.bytes = bytes;
    report.intensity = intensity(flops, bytes);
    report.machine_balance = hw.peak_flops / hw.mem_bw;
    report.classification = report.intensity >= report.machine_balance
                                ? Bound::ComputeBound
                                : Bound::MemoryBound;
    return report;
}

double utilization(double flops, double runtime_s, const HardwareSpec& hw) {
    hw.validate();
    if (!(runtime_s > 0.0)) {
        throw InvalidArgumentError("utilization: runtime must be > 0");
    }
    return flops / (runtime_s * hw.peak_flops);
}

}  // namespace fkde::perfmodel
