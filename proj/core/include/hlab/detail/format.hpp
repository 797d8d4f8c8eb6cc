#pragma once

#include <cstdio>
#include <string>

namespace hlab {

/// Doubles rendered with 17 significant digits: round-trips bit-exactly and
/// keeps CSV output byte-stable across runs.
inline std::string fmt17(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

}  // namespace hlab
