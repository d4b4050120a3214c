#pragma once

#include <cstddef>
#include <functional>

namespace zog {

// Worker count from ZOG_THREADS (default 1).
std::size_t worker_count();

// Runs body(index, worker) for index in [0, count), split into contiguous
// chunks across workers. Results must be written to per-index slots so the
// outcome does not depend on the worker count.
void parallel_for(std::size_t count, const std::function<void(std::size_t, std::size_t)>& body);

}  // namespace zog
