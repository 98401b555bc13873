#pragma once

#include <cstddef>
#include <functional>

namespace meancurve {

/// Worker count: MEANCURVE_THREADS if set (>= 1), else hardware concurrency.
unsigned worker_count();

/// Calls task(i) for i in [0, n) on up to worker_count() threads. Results must
/// be written to per-index slots, so output never depends on scheduling. The
/// first exception thrown by any task is rethrown after all workers join.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& task);

}  // namespace meancurve
