#pragma once

#include <cstdio>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

namespace superrad {

// Ordered key=value pairs written as `# key=value` lines ahead of a CSV header.
using Metadata = std::vector<std::pair<std::string, std::string>>;

// Round-trip (17 significant digit) representation; locale independent and
// bit-identical for identical inputs.
inline std::string format_double(double value) {
  char buffer[32];
  std::snprintf(buffer, sizeof(buffer), "%.17g", value);
  return buffer;
}

inline void write_metadata(std::ostream& os, const Metadata& metadata) {
  for (const auto& [key, value] : metadata) {
    os << "# " << key << '=' << value << '\n';
  }
}

}  // namespace superrad
