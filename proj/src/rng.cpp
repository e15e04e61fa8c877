#include "tailcalc/rng.hpp"

#include <atomic>
#include <thread>
#include <vector>

namespace tailcalc {

namespace {
std::atomic<int> g_max_threads{0};
}

void set_max_threads(int n) { g_max_threads.store(n < 0 ? 0 : n); }

int max_threads() {
  int n = g_max_threads.load();
  if (n == 0) {
    n = static_cast<int>(std::thread::hardware_concurrency());
    if (n == 0) n = 1;
  }
  return n;
}

void parallel_blocks(std::size_t n,
                     const std::function<void(std::size_t, std::size_t,
                                              std::size_t)>& fn) {
  if (n == 0) return;
  const std::size_t blocks = (n + kSampleBlockSize - 1) / kSampleBlockSize;
  const int workers = static_cast<int>(
      std::min(blocks, static_cast<std::size_t>(max_threads())));
  if (workers <= 1) {
    for (std::size_t b = 0; b < blocks; ++b) {
      const std::size_t lo = b * kSampleBlockSize;
      fn(b, lo, std::min(n, lo + kSampleBlockSize));
    }
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(workers));
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&]() {
      for (;;) {
        const std::size_t b = next.fetch_add(1);
        if (b >= blocks) return;
        const std::size_t lo = b * kSampleBlockSize;
        fn(b, lo, std::min(n, lo + kSampleBlockSize));
      }
    });
  }
  for (auto& t : pool) t.join();
}

}  // namespace tailcalc
