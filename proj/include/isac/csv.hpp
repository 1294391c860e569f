#pragma once

#include <cstdio>
#include <cstdlib>
#include <string>

namespace isac {

/// Shortest round-trippable text form of a double ("%.17g" trimmed).
inline std::string csv_num(double v) {
  char buf[32];
  for (int prec = 6; prec <= 17; ++prec) {
    std::snprintf(buf, sizeof buf, "%.*g", prec, v);
    if (std::strtod(buf, nullptr) == v) break;
  }
  return buf;
}

}  // namespace isac
