#include "fracfp/io.hpp"

#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace fracfp::io {

namespace {

void put_u32_le(std::ostream& out, std::uint32_t v) {
    unsigned char b[4] = {static_cast<unsigned char>(v), static_cast<unsigned char>(v >> 8),
                          static_cast<unsigned char>(v >> 16),
                          static_cast<unsigned char>(v >> 24)};
    out.write(reinterpret_cast<const char*>(b), 4);
}

std::uint32_t get_u32_le(std::istream& in) {
    unsigned char b[4];
    in.read(reinterpret_cast<char*>(b), 4);
    return static_cast<std::uint32_t>(b[0]) | (static_cast<std::uint32_t>(b[1]) << 8) |
           (static_cast<std::uint32_t>(b[2]) << 16) |
           (static_cast<std::uint32_t>(b[3]) << 24);
}

void put_f64_le(std::ostream& out, double v) {
    std::uint64_t bits;
    std::memcpy(&bits, &v, 8);
    unsigned char b[8];
    for (int i = 0; i < 8; ++i) b[i] = static_cast<unsigned char>(bits >> (8 * i));
    out.write(reinterpret_cast<const char*>(b), 8);
}

double get_f64_le(std::istream& in) {
    unsigned char b[8];
    in.read(reinterpret_cast<char*>(b), 8);
    std::uint64_t bits = 0;
    for (int i = 0; i < 8; ++i) bits |= static_cast<std::uint64_t>(b[i]) << (8 * i);
    double v;
    std::memcpy(&v, &bits, 8);
    return v;
}

}  // namespace

void write_field_csv(const Field& f, const std::string& path) {
    const Grid& g = f.grid();
    std::ostringstream out;
    out.precision(17);
    for (std::size_t i = 0; i < g.size(); ++i) {
        const auto idx = g.unravel(i);
        for (int ax = 0; ax < g.dim(); ++ax) out << g.coord(idx[ax]) << ",";
        out << f[i] << "\n";
    }
    write_text_atomic(path, out.str());
}

void write_field_binary(const Field& f, const std::string& path) {
    const Grid& g = f.grid();
    const std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary);
        if (!out) throw Error("cannot open " + tmp);
        put_u32_le(out, static_cast<std::uint32_t>(g.dim()));
        put_u32_le(out, static_cast<std::uint32_t>(g.n()));
        put_f64_le(out, g.half_width());
        for (std::size_t i = 0; i < g.size(); ++i) put_f64_le(out, f[i]);
    }
    std::filesystem::rename(tmp, path);
}

Field read_field_binary(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open " + path);
    const std::uint32_t d = get_u32_le(in);
    const std::uint32_t n = get_u32_le(in);
    const double L = get_f64_le(in);
    Grid g(static_cast<int>(d), static_cast<int>(n), L);
    Field f(g);
    for (std::size_t i = 0; i < g.size(); ++i) f[i] = get_f64_le(in);
    if (!in) throw Error("truncated field file " + path);
    return f;
}

void write_traces_csv(const SolutionPath& path, const std::string& file) {
    std::ostringstream out;
    out.precision(17);
    out << "t,mass,min,linf\n";
    for (std::size_t j = 0; j < path.trace_times.size(); ++j)
        out << path.trace_times[j] << "," << path.mass_trace[j] << ","
            << path.min_trace[j] << "," << path.linf_trace[j] << "\n";
    write_text_atomic(file, out.str());
}

void write_kernel_csv(const std::vector<double>& r, const std::vector<double>& g,
                      const std::string& path) {
    std::ostringstream out;
    out.precision(17);
    out << "r,g\n";
    for (std::size_t i = 0; i < r.size(); ++i) out << r[i] << "," << g[i] << "\n";
    write_text_atomic(path, out.str());
}

std::uint64_t fnv1a64(const std::string& bytes) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

std::uint64_t fnv1a64_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return fnv1a64(ss.str());
}

void write_text_atomic(const std::string& path, const std::string& content) {
    const std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary);
        if (!out) throw Error("cannot open " + tmp);
        out << content;
    }
    std::filesystem::rename(tmp, path);
}

}  // namespace fracfp::io
