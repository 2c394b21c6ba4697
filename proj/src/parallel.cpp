#include "rdelab/parallel.hpp"

#include <algorithm>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace rdelab {

int resolve_threads(int requested) {
  int n = requested > 0 ? requested : int(std::thread::hardware_concurrency());
  if (n < 1) n = 1;
  if (const char* env = std::getenv("RDE_LAB_THREADS")) {
    int cap = std::atoi(env);
    if (cap >= 1) n = std::min(n, cap);
  }
  return n;
}

void parallel_for(long n, int threads, const std::function<void(long)>& fn) {
  if (n <= 0) return;
  threads = std::max(1, threads);
  if (threads == 1 || n < 2) {
    for (long i = 0; i < n; ++i) fn(i);
    return;
  }
  threads = int(std::min<long>(threads, n));
  std::vector<std::thread> pool;
  std::exception_ptr first_error;
  std::mutex error_mu;
  for (int w = 0; w < threads; ++w) {
    long lo = n * w / threads;
    long hi = n * (w + 1) / threads;
    pool.emplace_back([&, lo, hi] {
      try {
        for (long i = lo; i < hi; ++i) fn(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mu);
        if (!first_error) first_error = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  if (first_error) std::rethrow_exception(first_error);
}

}  // namespace rdelab
