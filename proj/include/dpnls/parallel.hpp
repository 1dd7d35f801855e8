#pragma once

#include <cstddef>
#include <functional>

namespace dpnls {

/// Runs body(i) for i in [0, count). threads <= 1 runs inline; otherwise a
/// small worker pool pulls indices from a shared counter. The first exception
/// thrown by any body is rethrown after all workers join.
void parallel_for(std::size_t count, int threads, const std::function<void(std::size_t)>& body);

}  // namespace dpnls
