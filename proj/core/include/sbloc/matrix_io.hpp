#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>

#include "sbloc/linalg.hpp"

namespace sbloc {

// Text matrix format shared by every artifact:
//
//   cmat <rows> <cols>
//   <re> <im>          (rows*cols lines, row-major)
//
// Numbers are printed in shortest round-trip form, so write -> read is exact.

std::string format_cmat(const ComplexMatrix& m);
void write_cmat(std::ostream& os, const ComplexMatrix& m);

/// Throws ConfigError with the offending line number on malformed input.
ComplexMatrix parse_cmat(std::string_view text, std::string_view source_name = "<memory>");
ComplexMatrix read_cmat(const std::filesystem::path& path);
void save_cmat(const std::filesystem::path& path, const ComplexMatrix& m);

/// Shortest representation of a double that parses back to the same value.
std::string format_double(double v);

/// Writes to a temporary sibling and renames it into place, so readers never
/// observe a partially written file.
void write_file_atomic(const std::filesystem::path& path, std::string_view content);
std::string read_file(const std::filesystem::path& path);

} // namespace sbloc
