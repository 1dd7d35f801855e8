#pragma once

#include <string>

namespace dpnls {

/// Shortest round-trip decimal form of x ("%.17g" cleaned up), locale free.
/// All data files go through this so reruns are byte-identical.
std::string format_double(double x);

std::string format_double(double x, int precision);

}  // namespace dpnls
