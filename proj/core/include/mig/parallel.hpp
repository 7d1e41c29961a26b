#pragma once

#include <functional>

namespace mig {

/// Threads to use given a CLI request: MIG_THREADS env var wins, then the
/// request, then hardware concurrency. Result is always >= 1.
int resolve_threads(int requested);

/// Runs body(i) for i in [0, n) across the given number of threads.
/// Work is claimed through an atomic counter; callers that need
/// determinism must write into index-addressed slots and reduce after
/// the call returns. The first exception thrown by any body is rethrown.
void parallel_for(long n, int threads, const std::function<void(long)>& body);

}  // namespace mig
