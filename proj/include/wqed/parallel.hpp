#pragma once

// Minimal deterministic worker pool.  Tasks are indexed; each task writes
// only its own output slot, so results never depend on the thread count.

#include <functional>
#include <stdexcept>

namespace wqed {

// Runs fn(0) .. fn(n-1), possibly concurrently on n_threads threads.
// The first exception (by task index) is rethrown after all workers join.
void parallel_for(int n, int n_threads, const std::function<void(int)>& fn);

}  // namespace wqed
