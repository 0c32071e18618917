#pragma once

#include <cstddef>
#include <functional>

namespace calab {

/// Worker count: hardware concurrency, capped by CALAB_THREADS when set.
std::size_t worker_count();

/// Calls body(i) for every i in [0, count). Work is split into contiguous
/// index blocks; callers write results by index and reduce afterwards, so
/// output never depends on scheduling. The first exception thrown is rethrown.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body);

}  // namespace calab
