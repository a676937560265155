#pragma once

#include <cstddef>
#include <string>

namespace fkde::perfmodel {

/// Compute and bandwidth roofs of one machine, plus the FLOP-equivalents
/// charged per exponential (SFU-to-ALU issue ratio on the modeled GPU).
struct HardwareSpec {
    std::string name;
    double peak_flops = 0.0;  // FLOP/s
    double mem_bw = 0.0;      // bytes/s
    double exp_cost = 8.0;    // FLOP-equivalents per exp

    void validate() const;
};

// Key-value text file: name=..., peak_flops=..., mem_bw=..., exp_cost=...
// '#' starts a comment. Throws IoError / InvalidArgumentError.
HardwareSpec load_hardware_spec(const std::string& path);

enum class Bound { ComputeBound, MemoryBound };
std::string to_string(Bound b);

struct PerfModelReport {
    double flops = 0.0;
    double bytes = 0.0;
    double intensity = 0.0;        // flops / bytes
    double machine_balance = 0.0;  // peak_flops / mem_bw
    Bound classification = Bound::MemoryBound;
};

// Pipeline FLOPs for one d-dimensional run with n_train = k and
// n_test = k/8:  (4d + 12 + d/4 + 3/2) * k^2.
double flops_nd(std::size_t d, std::size_t k);

// 1-D pipeline model: 17.75 * k^2  (16 flops per train-train pair,
// 14 per train-test pair at n_test = k/8).
double flops_1d(std::size_t k);

// Bytes one tile moves: 4 * (2*tile_m*d + tile_n*d + tile_m).
// Query block and its output row are loaded/written once per tile; the train
// block is streamed through every tile.
double bytes_tile(std::size_t d, std::size_t tile_m, std::size_t tile_n);

// Whole-problem traffic: bytes_tile * ceil(k/tile_m) * ceil(k/tile_n).
double bytes_nd(std::size_t d, std::size_t k, std::size_t tile_m, std::size_t tile_n);

// Per-point asymptotic traffic 4 * ((9/8)*d*k + k/8); the large-k
// denominator behind the C(d) limit below.
double bytes_linear(std::size_t d, std::size_t k);

// 1-D traffic: 5k bytes (one 4-byte read per train and test point, one
// 4-byte write per output, n_test = k/8).
double bytes_1d(std::size_t k);

double intensity(double flops, double bytes);

// Large-k intensity growth rate C(d) = ((17/4) d + 27/2) / (9 d / 2),
// from flops_nd / bytes_linear with the k/8 byte term dropped.
double intensity_asymptotic(std::size_t d);

// 1-D intensity 17.75 k^2 / 5k = 3.55 * k.
double intensity_1d(std::size_t k);

// Roofline classification: ComputeBound iff intensity >= machine balance
// (ties classify as compute-bound).
PerfModelReport classify(double flops, double bytes, const HardwareSpec& hw);

// Fraction of the machine's peak sustained: flops / (runtime * peak).
// May exceed 1 when the flop model and the measurement disagree.
double utilization(double flops, double runtime_s, const HardwareSpec& hw);

}  // namespace fkde::perfmodel
