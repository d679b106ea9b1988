// Copyright the emoxling authors. Licensed under the terms of the Apache 2.0 license. See LICENSE in the project root.
#ifndef EMOXLING_VERSION_HPP
#define EMOXLING_VERSION_HPP

namespace emoxling {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace emoxling

#endif  // EMOXLING_VERSION_HPP
