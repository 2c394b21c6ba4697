#pragma once

#include <functional>

namespace rdelab {

// Number of worker threads to use: `requested` if positive, otherwise
// hardware concurrency; the RDE_LAB_THREADS environment variable caps the
// result when set. Always at least 1.
int resolve_threads(int requested = 0);

// Runs fn(i) for i in [0, n) across `threads` workers on contiguous chunks.
// Workers only write to disjoint caller-owned slots, so results cannot depend
// on the thread count; any merging is the caller's (sequential) job. The
// first exception thrown by a worker is rethrown after all workers join.
void parallel_for(long n, int threads, const std::function<void(long)>& fn);

}  // namespace rdelab
