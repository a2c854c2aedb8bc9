#pragma once

#include <atomic>
#include <cstddef>
#include <thread>
#include <vector>

namespace sqv {

/// Runs body(i) for i in [0, count) on up to `jobs` threads. Results must
/// be written into caller-owned slots indexed by i so reductions stay
/// deterministic regardless of scheduling.
template <typename Body>
void parallel_for(std::size_t count, unsigned jobs, Body&& body) {
  if (jobs <= 1 || count <= 1) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> cursor{0};
  unsigned workers = jobs < count ? jobs : static_cast<unsigned>(count);
  std::vector<std::thread> pool;
  pool.reserve(workers);
  std::exception_ptr error;
  std::atomic<bool> failed{false};
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&]() {
      for (std::size_t i = cursor.fetch_add(1); i < count; i = cursor.fetch_add(1)) {
        if (failed.load()) return;
        try {
          body(i);
        } catch (...) {
          if (!failed.exchange(true)) error = std::current_exception();
          return;
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

}  // namespace sqv
