// Copyright the emoxling authors. Licensed under the terms of the Apache 2.0 license. See LICENSE in the project root.
#include "emoxling/numfmt.hpp"

#include <cstdio>

namespace emoxling {

std::string fmt_exact(double value) {
  char buf[48];
  std::snprintf(buf, sizeof(buf), "%.16e", value);
  return buf;
}

std::string fmt_g17(double value) {
  char buf[48];
  std::snprintf(buf, sizeof(buf), "%.17g", value);
  return buf;
}

std::string fmt_pct1(double value) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.1f", value * 100.0);
  return buf;
}

}  // namespace emoxling
