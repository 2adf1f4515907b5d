#pragma once

#include <cstddef>
#include <functional>

namespace mgd {

// Worker count: MGDISPATCH_THREADS when set, else the hardware concurrency.
std::size_t default_thread_count();

// Runs body(i) for i in [0, count). Each index is handled exactly once and
// results must be written to per-index slots, so output never depends on the
// thread count.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body, std::size_t threads = 0);

} // namespace mgd
