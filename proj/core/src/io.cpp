#include "fkde/io.hpp"

#include <bit>
#include <charconv>
#include <cstring>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "fkde/errors.hpp"

static_assert(std::endian::native == std::endian::little,
              "binary sample format assumes a little-endian host");

namespace fkde::io {

namespace {

std::string format_double(double v) {
    std::ostringstream os;
    os.precision(17);
    os << v;
    return os.str();
}

std::vector<double> parse_csv_row(const std::string& line, const std::string& path) {
    std::vector<double> out;
    const char* p = line.data();
    const char* end = line.data() + line.size();
    while (end > p && (end[-1] == '\r' || end[-1] == ' ')) {
        --end;
    }
    while (p < end) {
        double v = 0.0;
        const auto [next, ec] = std::from_chars(p, end, v);
        if (ec != std::errc()) {
            throw IoError("bad CSV number in " + path + ": " + line);
        }
        out.push_back(v);
        p = next;
        if (p == end) {
            break;
        }
        if (*p != ',') {
            throw IoError("bad CSV separator in " + path + ": " + line);
        }
        ++p;
    }
    return out;
}

}  // namespace

void write_samples_bin(const SampleSet& s, const std::string& path) {
    s.validate();
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw IoError("cannot open for writing: " + path);
    }
    out.write(kMagic, 4);
    const std::uint32_t version = kFormatVersion;
    const std::uint64_t n = s.n;
    const std::uint64_t d = s.d;
    out.write(reinterpret_cast<const char*>(&version), sizeof(version));
    out.write(reinterpret_cast<const char*>(&n), sizeof(n));
    out.write(reinterpret_cast<const char*>(&d), sizeof(d));
    out.write(reinterpret_cast<const char*>(s.values.data()),
              static_cast<std::streamsize>(s.values.size() * sizeof(double)));
    if (!out) {
        throw IoError("short write: " + path);
    }
}

SampleSet read_samples_bin(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw IoError("cannot open: " + path);
    }
    char magic[4];
    in.read(magic, 4);
    if (!in || std::memcmp(magic, kMagic, 4) != 0) {
        throw IoError("not a FKDE sample file: " + path);
    }
    std::uint32_t version = 0;
    std::uint64_t n = 0, d = 0;
    in.read(reinterpret_cast<char*>(&version), sizeof(version));
    in.read(reinterpret_cast<char*>(&n), sizeof(n));
    in.read(reinterpret_cast<char*>(&d), sizeof(d));
    if (!in || version != kFormatVersion) {
        throw IoError("unsupported FKDE format version in " + path);
    }
    if (n == 0 || d == 0 || n > (1ULL << 40) || d > (1ULL << 20)) {
        throw IoError("implausible header in " + path);
    }
    std::vector<double> values(n * d);
    in.read(reinterpret_cast<char*>(values.data()),
            static_cast<std::streamsize>(values.size() * sizeof(double)));
    if (!in) {
        throw IoError("truncated FKDE sample file: " + path);
    }
    return SampleSet(std::move(values), n, d);
}

void write_samples_csv(const SampleSet& s, const std::string& path) {
    s.validate();
    std::ofstream out(path);
    if (!out) {
        throw IoError("cannot open for writing: " + path);
    }
    for (std::size_t k = 0; k < s.d; ++k) {
        out << (k ? "," : "") << 'x' << k;
    }
    out << '\n';
    for (std::size_t i = 0; i < s.n; ++i) {
        const auto row = s.row(i);
        for (std::size_t k = 0; k < s.d; ++k) {
            out << (k ? "," : "") << format_double(row[k]);
        }
        out << '\n';
    }
    if (!out) {
        throw IoError("short write: " + path);
    }
}

SampleSet read_samples_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw IoError("cannot open: " + path);
    }
    std::string header;
    if (!std::getline(in, header)) {
        throw IoError("empty CSV file: " + path);
    }
    std::size_t d = 1;
    for (char c : header) {
        if (c == ',') {
            ++d;
        }
    }
    std::vector<double> values;
    std::string line;
    std::size_t n = 0;
    while (std::getline(in, line)) {
        if (line.empty()) {
            continue;
        }
        const auto row = parse_csv_row(line, path);
        if (row.size() != d) {
            throw IoError("CSV row width mismatch in " + path);
        }
        values.insert(values.end(), row.begin(), row.end());
        ++n;
    }
    if (n == 0) {
        throw IoError("CSV file has no data rows: " + path);
    }
    return SampleSet(std::move(values), n, d);
}

SampleSet read_samples(const std::string& path) {
    std::ifstream probe(path, std::ios::binary);
    if (!probe) {
        throw IoError("cannot open: " + path);
    }
    char magic[4] = {0, 0, 0, 0};
    probe.read(magic, 4);
    probe.close();
    if (std::memcmp(magic, kMagic, 4) == 0) {
        return read_samples_bin(path);
    }
    return read_samples_csv(path);
}

void write_values(const std::vector<double>& values, const std::string& path,
                  const std::string& format) {
    if (values.empty()) {
        throw InvalidArgumentError("write_values: empty value vector");
    }
    if (format == "bin") {
        SampleSet s;
        s.values = values;
        s.n = values.size();
        s.d = 1;
        write_samples_bin(s, path);
        return;
    }
    if (format == "csv") {
        std::ofstream out(path);
        if (!out) {
            throw IoError("cannot open for writing: " + path);
        }
        out << "value\n";
        for (double v : values) {
            out << format_double(v) << '\n';
        }
        if (!out) {
            throw IoError("short write: " + path);
        }
        return;
    }
    if (format == "json") {
        nlohmann::json j = values;
        write_text_file(path, j.dump() + "\n");
        return;
    }
    throw InvalidArgumentError("write_values: unknown format '" + format + "'");
}

std::vector<double> read_values(const std::string& path) {
    std::ifstream probe(path, std::ios::binary);
    if (!probe) {
        throw IoError("cannot open: " + path);
    }
    char first = 0;
    probe.get(first);
    probe.close();
    if (first == 'F') {
        return read_samples_bin(path).values;
    }
    if (first == '[') {
        nlohmann::json j;
        try {
            j = nlohmann::json::parse(read_text_file(path));
        } catch (const nlohmann::json::exception& e) {
            throw IoError("bad JSON values file " + path + ": " + e.what());
        }
        return j.get<std::vector<double>>();
    }
    std::ifstream in(path);
    std::string header;
    std::getline(in, header);
    while (!header.empty() && (header.back() == '\r' || header.back() == ' ')) {
        header.pop_back();
    }
    if (header != "value") {
        throw IoError("not a values file (expected 'value' header): " + path);
    }
    std::vector<double> out;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) {
            continue;
        }
        out.push_back(parse_csv_row(line, path).at(0));
    }
    if (out.empty()) {
        throw IoError("values file has no rows: " + path);
    }
    return out;
}

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw IoError("cannot open: " + path);
    }
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

void write_text_file(const std::string& path, const std::string& contents) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw IoError("cannot open for writing: " + path);
    }
    out << contents;
    if (!out) {
        throw IoError("short write: " + path);
    }
}

}  // namespace fkde::io
