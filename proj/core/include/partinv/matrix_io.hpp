#pragma once

#include <filesystem>
#include <iosfwd>

#include "partinv/types.hpp"

namespace partinv::io {

/// Portable text matrix format (.dmat): first line "rows cols", then one line
/// per row of whitespace-separated decimal floats (row-major). Values are
/// written with round-trip precision and a locale-independent decimal point.
void save_dmat(const Matrix& a, const std::filesystem::path& path);
Matrix load_dmat(const std::filesystem::path& path);

void write_dmat(const Matrix& a, std::ostream& os);
Matrix read_dmat(std::istream& is);

/// Vector files (.vec) are whitespace-separated decimal floats; length is
/// inferred from the contents.
void save_vec(const Vector& v, const std::filesystem::path& path);
Vector load_vec(const std::filesystem::path& path);

/// Shortest decimal representation that round-trips to the same double;
/// never locale-dependent.
std::string format_double(double value);

}  // namespace partinv::io
