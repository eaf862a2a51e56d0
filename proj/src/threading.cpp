#include "hetkg/threading.hpp"

#include <algorithm>
#include <atomic>
#include <thread>
#include <vector>

namespace hetkg {

namespace {
std::atomic<int> g_cap{0};  // 0: use hardware concurrency
}

void set_thread_cap(int n) { g_cap.store(n); }

int thread_cap() {
  int cap = g_cap.load();
  if (cap > 0) return cap;
  unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

void parallel_for(std::int64_t n, const std::function<void(std::int64_t, std::int64_t)>& fn) {
  if (n <= 0) return;
  std::int64_t workers = std::min<std::int64_t>(thread_cap(), n);
  if (workers <= 1) {
    fn(0, n);
    return;
  }
  std::vector<std::thread> threads;
  std::int64_t chunk = (n + workers - 1) / workers;
  for (std::int64_t w = 0; w < workers; ++w) {
    std::int64_t begin = w * chunk;
    std::int64_t end = std::min(n, begin + chunk);
    if (begin >= end) break;
    threads.emplace_back([&fn, begin, end]() { fn(begin, end); });
  }
  for (auto& t : threads) t.join();
}

}  // namespace hetkg
