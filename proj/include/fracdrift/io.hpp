#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "fracdrift/field.hpp"

namespace fracdrift::io {

/// FDF field file: magic "FDF1", little-endian u32 n_dim, u32 N, f64 period,
/// then N^n_dim f64 samples row-major. Round-trips bit exactly.
void write_field(const std::string& path, const field::ScalarField& f);
field::ScalarField read_field(const std::string& path);

std::uint64_t fnv1a_file(const std::string& path);

/// Shortest decimal that round-trips the double (%.17g), shared by every CSV
/// writer for byte reproducibility.
std::string format_double(double v);

void write_text_file(const std::string& path, const std::string& content);
std::string read_text_file(const std::string& path);

}  // namespace fracdrift::io
