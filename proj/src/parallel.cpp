#include "dle/parallel.hpp"

#include <atomic>
#include <cstdlib>
#include <string>
#include <thread>
#include <vector>

namespace dle {

unsigned worker_count() {
  unsigned hw = std::thread::hardware_concurrency();
  if (hw == 0) hw = 1;
  if (const char* env = std::getenv("DLE_THREADS")) {
    const long v = std::strtol(env, nullptr, 10);
    if (v >= 1 && static_cast<unsigned>(v) < hw) return static_cast<unsigned>(v);
  }
  return hw;
}

void parallel_for(std::size_t count, const std::function<void(std::size_t)>& fn) {
  const unsigned workers = worker_count();
  if (count == 0) return;
  if (workers <= 1 || count == 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  const unsigned nthreads = static_cast<unsigned>(workers < count ? workers : count);
  std::vector<std::thread> pool;
  pool.reserve(nthreads);
  for (unsigned t = 0; t < nthreads; ++t) {
    pool.emplace_back([&] {
      for (;;) {
        const std::size_t i = next.fetch_add(1);
        if (i >= count) return;
        fn(i);
      }
    });
  }
  for (auto& th : pool) th.join();
}

}  // namespace dle
