#pragma once

#include <cstddef>
#include <functional>

namespace equizero {

// EQUIZERO_THREADS when set, else hardware concurrency.
int default_thread_count();

// Index-wise parallel map.  Work items must be pure w.r.t. shared state;
// callers store per-index results, so output is schedule-independent.
void parallel_for(std::size_t n, int threads, const std::function<void(std::size_t)>& fn);

}  // namespace equizero
