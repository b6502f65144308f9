#include "rftap/parallel.hpp"

#include <omp.h>

#include <atomic>
#include <cstdlib>
#include <string>

namespace rftap::parallel {
namespace {

int initial_threads() {
  if (const char* env = std::getenv("ROBUSTFTAP_THREADS")) {
    try {
      int n = std::stoi(env);
      if (n >= 1) return n;
    } catch (...) {
    }
  }
  return omp_get_max_threads();
}

std::atomic<int>& thread_cap() {
  static std::atomic<int> cap{initial_threads()};
  return cap;
}

}  // namespace

int max_threads() { return thread_cap().load(); }

void set_max_threads(int n) { thread_cap().store(n < 1 ? 1 : n); }

Execution default_execution() {
  return max_threads() > 1 ? Execution::Parallel : Execution::Serial;
}

namespace detail {

void run_openmp(std::size_t n, void (*trampoline)(void*, std::size_t), void* ctx) {
  const auto count = static_cast<long long>(n);
#pragma omp parallel for schedule(dynamic, 1) num_threads(max_threads())
  for (long long i = 0; i < count; ++i) trampoline(ctx, static_cast<std::size_t>(i));
}

}  // namespace detail
}  // namespace rftap::parallel
