#pragma once

#include <cstddef>
#include <functional>

namespace featshift {

/// Worker count: hardware concurrency, capped by FEATSHIFT_THREADS when set.
std::size_t worker_count();

/// Runs body(i) for i in [0, n). Iterations are handed out dynamically to
/// worker_count() threads; calls made from inside a worker run serially, so
/// nesting never oversubscribes. The first exception thrown by any body is
/// rethrown after all workers join. Callers must make body(i) depend only on
/// i (not on scheduling) to keep results deterministic.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace featshift
