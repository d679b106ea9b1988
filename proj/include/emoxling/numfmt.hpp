// Copyright the emoxling authors. Licensed under the terms of the Apache 2.0 license. See LICENSE in the project root.
#ifndef EMOXLING_NUMFMT_HPP
#define EMOXLING_NUMFMT_HPP

#include <string>

namespace emoxling {

/// Scientific notation with 16 fractional digits: round-trips any finite
/// double exactly through strtod.
std::string fmt_exact(double value);

/// Up to 17 significant digits, shortest-ish; also round-trip safe.
std::string fmt_g17(double value);

/// Score as a percentage with one decimal, e.g. 0.486 -> "48.6".
std::string fmt_pct1(double value);

}  // namespace emoxling

#endif  // EMOXLING_NUMFMT_HPP
