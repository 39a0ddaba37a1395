#pragma once

#include <cstdio>
#include <string>

namespace hfclt::detail {

/// Shortest-safe round-trip formatting for CSV cells.
inline std::string fmt_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace hfclt::detail
