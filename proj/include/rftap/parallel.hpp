#pragma once

#include <cstddef>
#include <exception>
#include <mutex>
#include <type_traits>

namespace rftap::parallel {

// Serial is the reference path kept for testing; Parallel runs the same
// loop body under OpenMP. Kernels must produce identical results under both.
enum class Execution { Serial, Parallel };

// Thread cap. Initialized from ROBUSTFTAP_THREADS when set (values < 1 are
// ignored), otherwise from the OpenMP default.
int max_threads();
void set_max_threads(int n);

// Parallel unless the thread cap is 1.
Execution default_execution();

namespace detail {
void run_openmp(std::size_t n, void (*trampoline)(void*, std::size_t), void* ctx);
}

// Calls body(i) for i in [0, n). Iterations must be independent and write
// only to slot i of pre-sized outputs. The first exception thrown by any
// iteration is rethrown after the loop.
template <class Body>
void for_each_index(std::size_t n, Body&& body, Execution exec = default_execution()) {
  if (exec == Execution::Serial || n < 2) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  struct Ctx {
    std::remove_reference_t<Body>* body;
    std::exception_ptr error;
    std::mutex mu;
  } ctx{&body, nullptr, {}};
  detail::run_openmp(
      n,
      [](void* raw, std::size_t i) {
        auto* c = static_cast<Ctx*>(raw);
        try {
          (*c->body)(i);
        } catch (...) {
          std::lock_guard lock(c->mu);
          if (!c->error) c->error = std::current_exception();
        }
      },
      &ctx);
  if (ctx.error) std::rethrow_exception(ctx.error);
}

}  // namespace rftap::parallel
