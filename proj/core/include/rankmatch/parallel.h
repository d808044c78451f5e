#pragma once

#include <cstddef>
#include <functional>

namespace rankmatch {

// Runs fn(0) ... fn(count - 1) on up to `workers` threads. Items are claimed
// dynamically, so fn must only write to per-index state. workers <= 1 runs
// inline on the calling thread. The first exception thrown by any item is
// rethrown after all workers have joined.
void parallel_for(std::size_t count, int workers,
                  const std::function<void(std::size_t)>& fn);

// Worker count to use when the caller passes 0 ("auto").
int default_workers();

}  // namespace rankmatch
