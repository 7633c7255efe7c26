#ifndef CVSTOP_PARALLEL_HPP
#define CVSTOP_PARALLEL_HPP

#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace cvstop {

// Worker count for node sweeps.  Defaults to 1 (single-threaded, matching
// the timing setup of the benchmark tables); override with set_thread_count
// or the CVSTOP_THREADS environment variable.  Results are identical for any
// count: every loop body is pure and writes a distinct slot.
int thread_count();
void set_thread_count(int n);  // 0 restores the environment/default choice

// Runs f(i) for i in [0, n).  Falls back to a plain loop when a single
// worker is configured or the range is small.
template <class F>
void parallel_for(std::size_t n, F&& f) {
  int workers = thread_count();
  if (workers <= 1 || n < 2 * static_cast<std::size_t>(workers)) {
    for (std::size_t i = 0; i < n; ++i) f(i);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(workers));
  std::exception_ptr first_error;
  std::mutex error_mutex;
  std::size_t chunk = (n + static_cast<std::size_t>(workers) - 1) / static_cast<std::size_t>(workers);
  for (int w = 0; w < workers; ++w) {
    std::size_t lo = static_cast<std::size_t>(w) * chunk;
    std::size_t hi = lo + chunk < n ? lo + chunk : n;
    if (lo >= hi) break;
    pool.emplace_back([lo, hi, &f, &first_error, &error_mutex] {
      try {
        for (std::size_t i = lo; i < hi; ++i) f(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!first_error) first_error = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  if (first_error) std::rethrow_exception(first_error);
}

}  // namespace cvstop

#endif
