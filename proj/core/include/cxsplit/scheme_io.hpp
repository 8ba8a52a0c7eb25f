#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>

#include "cxsplit/schemes.hpp"

namespace cxsplit {

// Text format:
//
//   # comment
//   scheme <name> order <r> structure <palindromic|symmetric-conjugate|none>
//   b 1 <re> <im>
//   a 1 <re> <im>
//   ...
//
// Indices are 1-based and every index 1..s (a) and 1..s+1 (b) must appear once.

SplittingScheme parse_scheme(std::istream& in, double consistency_tol = 1e-14);
SplittingScheme load_scheme_file(const std::filesystem::path& path, double consistency_tol = 1e-14);

/// Writes coefficients with 17 significant digits so that parse_scheme
/// reproduces them bit for bit.
void write_scheme(std::ostream& out, const SplittingScheme& s);

/// Registry identifier, or a path to a scheme file.
SplittingScheme resolve_scheme(const std::string& name_or_path);

}  // namespace cxsplit
