#pragma once

#include <functional>

namespace pss {

/// Worker count: PS_SPLINES_THREADS if set and positive, else the hardware concurrency.
int thread_count();

/// Calls body(i) for i in [0, n), spread over thread_count() threads. Each index is
/// processed exactly once; the first exception thrown by a worker is rethrown.
void parallel_for(int n, const std::function<void(int)>& body);

}  // namespace pss
