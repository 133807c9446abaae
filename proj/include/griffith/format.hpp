#pragma once

#include <cstdio>
#include <string>

namespace griffith {

// 17 significant digits: enough to round-trip IEEE doubles exactly, used for
// every number that reaches an output file.
inline std::string format_g17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace griffith
