#include "anticonc/core/parallel.hpp"

#include <atomic>

namespace anticonc {

namespace {
std::atomic<unsigned> g_threads{0};
}

unsigned thread_count() noexcept {
  const unsigned n = g_threads.load(std::memory_order_relaxed);
  if (n != 0) return n;
  return std::max(1u, std::thread::hardware_concurrency());
}

void set_thread_count(unsigned n) noexcept { g_threads.store(n, std::memory_order_relaxed); }

}  // namespace anticonc
