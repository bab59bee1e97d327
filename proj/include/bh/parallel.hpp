#ifndef BH_PARALLEL_HPP
#define BH_PARALLEL_HPP

#include <atomic>
#include <cstdlib>
#include <thread>
#include <vector>

namespace bh {

/** Worker count: explicit request, else BLOCH_HOMOG_THREADS, else hardware. */
inline int resolve_threads(int requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("BLOCH_HOMOG_THREADS")) {
    int v = std::atoi(env);
    if (v > 0) return v;
  }
  unsigned hw = std::thread::hardware_concurrency();
  return hw ? static_cast<int>(hw) : 1;
}

/** Index-parallel map over [0, count); the body must write results into
 * pre-sized storage so reductions stay deterministic. */
template <typename Fn>
void parallel_for(int count, const Fn& body, int threads = 0) {
  threads = std::min(resolve_threads(threads), count > 0 ? count : 1);
  if (threads <= 1) {
    for (int i = 0; i < count; ++i) body(i);
    return;
  }
  std::atomic<int> next{0};
  std::vector<std::thread> pool;
  pool.reserve(threads);
  for (int t = 0; t < threads; ++t)
    pool.emplace_back([&] {
      for (int i = next.fetch_add(1); i < count; i = next.fetch_add(1)) body(i);
    });
  for (auto& th : pool) th.join();
}

}  // namespace bh

#endif
