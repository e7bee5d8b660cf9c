#pragma once

#include <cstddef>
#include <functional>

namespace rotacover {

// Worker count used by parallel loops; 0 means hardware concurrency.
void set_thread_count(unsigned n);
unsigned thread_count();

// Calls body(i) for i in [0, n). Work is split into contiguous index blocks,
// so callers that write results by index get deterministic output.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace rotacover
