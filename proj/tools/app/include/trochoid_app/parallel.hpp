#pragma once

#include <cstddef>
#include <functional>

namespace trochoid::app {

/// Worker count: TROCHOID_THREADS when set to a positive integer, otherwise
/// the hardware concurrency (at least 1).
int thread_count();

/// Runs body(i) for i in [0, count) on up to thread_count() threads. Each index
/// is handled exactly once; callers write results into slot i so aggregation
/// order never depends on scheduling. The first exception is rethrown after
/// all workers finish.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body);

}  // namespace trochoid::app
