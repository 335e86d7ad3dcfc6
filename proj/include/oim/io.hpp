#pragma once

#include <string>

namespace oim {

// Shortest text that parses back to exactly `value`.
std::string format_shortest(double value);

// Fixed number of significant digits in %g style, locale independent.
std::string format_significant(double value, int digits = 17);

// Writes `content` to `path` through a sibling temporary file and a rename,
// so readers never observe a partially written file. Throws IoError.
void write_file_atomic(const std::string& path, const std::string& content);

std::string read_file(const std::string& path);

}  // namespace oim
