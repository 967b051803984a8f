#pragma once

#include <cstddef>
#include <functional>

namespace wsnids {

int default_thread_count();

// Runs fn(i) for every i in [0, n) using up to `threads` workers. Each index
// must write only to its own output slot; under that discipline the result is
// identical for any thread count. Exceptions from workers are rethrown.
void parallel_for(std::size_t n, int threads, const std::function<void(std::size_t)>& fn);

}  // namespace wsnids
