#pragma once

#include <filesystem>
#include <string>
#include <string_view>

namespace okd::cli {

/// Shortest %g-style text with at most `digits` significant digits.
std::string format_number(double value, int digits = 12);

/// value rounded to `digits` significant digits (NaN/inf pass through).
double round_significant(double value, int digits = 12);

/// Writes text to path through a sibling temporary file and a rename, so a
/// reader never observes a partially written file.
void write_atomically(const std::filesystem::path& path, std::string_view text);

}  // namespace okd::cli
