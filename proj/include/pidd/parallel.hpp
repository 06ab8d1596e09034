#ifndef PIDD_PARALLEL_HPP
#define PIDD_PARALLEL_HPP

#include <cstddef>
#include <functional>

namespace pidd {

// Worker cap from PID_DECOMP_THREADS (0 or unset = hardware concurrency).
int worker_cap();

// Runs f(0..n-1) across at most worker_cap() threads. Results must be written
// to disjoint slots; the iteration order inside a chunk is ascending, so
// per-slot outputs are identical regardless of thread count.
void parallel_for(size_t n, const std::function<void(size_t)>& f);

}  // namespace pidd

#endif  // PIDD_PARALLEL_HPP
