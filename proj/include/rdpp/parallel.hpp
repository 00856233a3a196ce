#pragma once

#include <cstddef>
#include <functional>

namespace rdpp {

/// Worker count: RD_THREADS when set to a positive value, otherwise the
/// hardware concurrency (RD_THREADS=0 means auto).
std::size_t thread_count();

/// Runs fn(i) for i in [0, n) on up to thread_count() threads. Tasks must be
/// independent; the first exception thrown by any task is rethrown.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

}  // namespace rdpp
