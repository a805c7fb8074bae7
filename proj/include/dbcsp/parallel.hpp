#pragma once

#include <cstddef>
#include <functional>

namespace dbcsp::util {

/// Number of worker threads used by parallel_for. Defaults to the
/// hardware concurrency; the DBCSP_THREADS environment variable caps it
/// (1 disables threading, unparsable values fall back to 1).
std::size_t thread_cap();

/// Runs fn(i) for i in [0, n). Work is split into contiguous chunks over
/// at most thread_cap() threads. Each index is processed exactly once, so
/// loops whose iterations write disjoint outputs produce results identical
/// to the sequential run. The first exception thrown by any worker is
/// rethrown on the calling thread.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

} // namespace dbcsp::util
