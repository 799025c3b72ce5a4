#pragma once

#include <cstddef>
#include <functional>

namespace cfas {

/// Worker thread count: the CFAS_THREADS environment variable when set
/// (clamped to >= 1), otherwise the hardware concurrency.
std::size_t worker_count();

/// Runs fn(i) for every i in [0, n) across the worker pool. Indices are
/// handed out dynamically, so fn must write only to per-index slots;
/// reductions happen after the loop, in index order, which keeps results
/// identical no matter how work was scheduled.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

}  // namespace cfas
