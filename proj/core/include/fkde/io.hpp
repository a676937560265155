#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "fkde/types.hpp"

namespace fkde::io {

inline constexpr char kMagic[4] = {'F', 'K', 'D', 'E'};
inline constexpr std::uint32_t kFormatVersion = 1;

// Binary sample container: magic "FKDE", u32 format version, u64 n, u64 d,
// then n*d little-endian IEEE-754 doubles, row-major. Round-trips bitwise.
void write_samples_bin(const SampleSet& s, const std::string& path);
SampleSet read_samples_bin(const std::string& path);

// CSV with header "x0,...,x{d-1}"; values printed with enough digits to
// round-trip exactly.
void write_samples_csv(const SampleSet& s, const std::string& path);
SampleSet read_samples_csv(const std::string& path);

// Dispatch on content: FKDE magic -> binary, otherwise CSV.
SampleSet read_samples(const std::string& path);

// Density values as a single "value" column (CSV), an n x 1 binary
// container (bin), or a JSON array (json).
void write_values(const std::vector<double>& values, const std::string& path,
                  const std::string& format);
std::vector<double> read_values(const std::string& path);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& contents);

}  // namespace fkde::io
