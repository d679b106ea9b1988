// Copyright the emoxling authors. Licensed under the terms of the Apache 2.0 license. See LICENSE in the project root.
#ifndef EMOXLING_FINGERPRINT_HPP
#define EMOXLING_FINGERPRINT_HPP

#include <cstdint>
#include <string>
#include <string_view>

namespace emoxling {

/// FNV-1a, 64-bit.
std::uint64_t fnv1a64(std::string_view bytes);

/// Sixteen lowercase hex digits.
std::string fnv1a64_hex(std::string_view bytes);

/// Fingerprint of a file's raw bytes.
std::string fingerprint_file(const std::string& path);

}  // namespace emoxling

#endif  // EMOXLING_FINGERPRINT_HPP
