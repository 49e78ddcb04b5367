#pragma once

#include <cstddef>
#include <functional>

namespace wcospec {

// Worker count: WCOSPEC_THREADS if set (>= 1), else hardware concurrency.
unsigned thread_count();

// Calls body(i) for i in [0, n), split into contiguous chunks across
// threads. Each index is processed exactly once; callers write results
// into per-index slots so that output does not depend on the thread count.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace wcospec
