#pragma once

#include <cstddef>
#include <functional>

namespace dle {

// Worker cap: DLE_THREADS if set, hardware concurrency otherwise.
unsigned worker_count();

// Runs fn(i) for i in [0, count) on up to worker_count() threads. Callers are
// responsible for writing results into disjoint slots; reductions should be
// done sequentially afterwards so results do not depend on the thread count.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& fn);

}  // namespace dle
