#include "cvstop/parallel.hpp"

#include <atomic>
#include <cstdlib>

namespace cvstop {

namespace {
std::atomic<int> g_override{0};

int env_threads() {
  const char* v = std::getenv("CVSTOP_THREADS");
  if (!v) return 1;
  int n = std::atoi(v);
  return n >= 1 ? n : 1;
}
}  // namespace

int thread_count() {
  int n = g_override.load(std::memory_order_relaxed);
  return n >= 1 ? n : env_threads();
}

void set_thread_count(int n) { g_override.store(n, std::memory_order_relaxed); }

}  // namespace cvstop
