#pragma once

#include <cstddef>
#include <functional>

namespace hypext {

// Worker count for grid sweeps. Reads HYPEXT_THREADS once; falls back to
// the hardware concurrency. Always >= 1.
int worker_count();

// Runs fn(0..n-1) on up to worker_count() threads. Results must be written
// to disjoint slots so the outcome is independent of scheduling. Nested
// calls run serially on the calling thread.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

}  // namespace hypext
