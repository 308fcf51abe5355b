#pragma once

namespace tailsort {

inline constexpr const char* kVersion = "0.1.0";

/// Default master seed for all CLI runs; fixed, never time-derived.
inline constexpr unsigned long long kDefaultSeed = 1896354207ULL;

}  // namespace tailsort
