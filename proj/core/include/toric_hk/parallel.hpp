#pragma once

#include <cstddef>
#include <functional>

namespace toric_hk {

// Worker count: TORIC_HK_THREADS if set to a positive integer, otherwise the
// hardware concurrency (at least 1).
unsigned worker_count();

// Calls body(i) for i in [0, count) on up to worker_count() threads. The
// first exception thrown by any call is rethrown after all workers stop.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body);

}  // namespace toric_hk
