#pragma once

#include <string>

#include <fmt/format.h>

namespace pcv {

// Shortest round-trip is not used on purpose: every number gets 17 significant digits.
inline std::string fmt17(double x) { return fmt::format("{:.17g}", x); }

}  // namespace pcv
