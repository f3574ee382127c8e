#pragma once

#include <cstdint>
#include <string>

#include "fracfp/evolution.hpp"

namespace fracfp::io {

/// One row per grid point: coordinates then value.
void write_field_csv(const Field& f, const std::string& path);

/// Binary layout: header d (u32), n (u32), L (f64), all little-endian, then
/// n^d values as 64-bit floats, row-major.
void write_field_binary(const Field& f, const std::string& path);
Field read_field_binary(const std::string& path);

/// Trace table: t, mass, min, linf.
void write_traces_csv(const SolutionPath& path, const std::string& file);

/// Snapshot table (r, value) for radial kernel profiles.
void write_kernel_csv(const std::vector<double>& r, const std::vector<double>& g,
                      const std::string& path);

std::uint64_t fnv1a64(const std::string& bytes);
std::uint64_t fnv1a64_file(const std::string& path);

/// Write-to-temp-then-rename so readers never observe partial content.
void write_text_atomic(const std::string& path, const std::string& content);

}  // namespace fracfp::io
