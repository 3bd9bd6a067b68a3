#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <thread>
#include <vector>

namespace kirchhoff::detail {

// Runs body(i) for i in [0, count) on up to `jobs` threads. Each index is a
// pre-assigned slot, so results do not depend on scheduling. Exceptions are
// returned per slot.
template <class Body>
std::vector<std::exception_ptr> parallel_for(std::size_t count, unsigned jobs, Body&& body) {
  std::vector<std::exception_ptr> errors(count);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < count; i = next++) {
      try {
        body(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const unsigned threads = static_cast<unsigned>(std::min<std::size_t>(std::max(jobs, 1u), count));
  if (threads <= 1) {
    worker();
    return errors;
  }
  std::vector<std::thread> pool;
  pool.reserve(threads);
  for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
  for (auto& th : pool) th.join();
  return errors;
}

}  // namespace kirchhoff::detail
