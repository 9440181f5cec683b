#pragma once

#include <cstddef>
#include <functional>

namespace geoeval {

// Global worker-thread count. 0 means "use hardware concurrency".
void set_threads(int n);
int effective_threads();

// Runs fn(i) for i in [0,n). Work is split into contiguous chunks across the
// configured thread count; items must only write state owned by index i, so
// results never depend on scheduling. Nested calls run sequentially.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

}  // namespace geoeval
