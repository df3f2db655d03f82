#pragma once

#include <cstddef>
#include <functional>

namespace svj {

/// Worker count: SVJ_THREADS when set to a positive integer, otherwise the
/// hardware concurrency (at least 1).
int worker_count();

/// Runs body(i) for i in [0, n) on up to `threads` workers (0 = worker_count()).
/// Indices are split into contiguous static chunks; body must only write to
/// state owned by index i, so results never depend on the schedule.
/// The first exception thrown by any body is rethrown after all workers join.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body, int threads = 0);

}  // namespace svj
