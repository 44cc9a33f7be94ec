#pragma once

#include <cstddef>
#include <functional>

namespace abspec {

/// Worker count: AB_SPECTRAL_THREADS if set to a positive integer, else the
/// hardware concurrency (at least 1).
std::size_t thread_count();

/// Runs body(i) for i in [0, n) over contiguous blocks, one block per worker.
/// Each index is handled by exactly one call, so results written per index do
/// not depend on the worker count. The first exception is rethrown.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace abspec
