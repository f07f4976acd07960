#pragma once

#include <cstddef>
#include <functional>

namespace facegate {

// Runs fn(0..n-1) across up to `threads` workers. Tasks must write to
// disjoint, index-addressed outputs; results are then independent of the
// schedule. threads <= 1 degenerates to a plain loop. The first exception
// thrown by any task is rethrown on the calling thread after join.
void parallel_for(std::size_t n, unsigned threads, const std::function<void(std::size_t)>& fn);

// Resolves a requested thread count: 0 means hardware concurrency.
unsigned resolve_threads(unsigned requested);

}  // namespace facegate
