#include "infotrace/common.hpp"

#include <algorithm>
#include <cstdlib>
#include <thread>
#include <vector>

namespace infotrace {

int thread_count() {
  if (const char* env = std::getenv("INFOTRACE_THREADS")) {
    const int n = std::atoi(env);
    if (n >= 1) return n;
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw ? static_cast<int>(hw) : 1;
}

void parallel_for(Index n, const std::function<void(Index, Index)>& fn) {
  if (n <= 0) return;
  const Index workers = std::min<Index>(thread_count(), n);
  if (workers <= 1) {
    fn(0, n);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(workers));
  const Index chunk = (n + workers - 1) / workers;
  for (Index t = 0; t < workers; ++t) {
    const Index begin = t * chunk;
    const Index end = std::min(n, begin + chunk);
    if (begin >= end) break;
    pool.emplace_back([&fn, begin, end] { fn(begin, end); });
  }
  for (auto& th : pool) th.join();
}

}  // namespace infotrace
