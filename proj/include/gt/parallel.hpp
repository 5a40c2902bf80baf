#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdlib>
#include <exception>
#include <string_view>
#include <thread>
#include <vector>

namespace gt {

/// Worker count for a request; GT_DETERMINISTIC=1 forces one. Zero or a
/// negative request means hardware concurrency.
inline int resolve_threads(int requested) {
  if (const char* env = std::getenv("GT_DETERMINISTIC"); env && std::string_view(env) == "1") return 1;
  if (requested > 0) return requested;
  return std::max(1u, std::thread::hardware_concurrency());
}

/// Runs body(i) for i in [0, n) over `threads` workers with a fixed strided
/// assignment, so each index is computed the same way regardless of count.
template <class Body>
void parallel_for(std::size_t n, int threads, Body&& body) {
  const std::size_t workers = std::clamp<std::size_t>(static_cast<std::size_t>(std::max(threads, 1)), 1, std::max<std::size_t>(n, 1));
  std::vector<std::exception_ptr> errors(workers);
  auto run = [&](std::size_t begin) {
    try {
      for (std::size_t i = begin; i < n; i += workers) body(i);
    } catch (...) {
      errors[begin] = std::current_exception();
    }
  };
  {
    std::vector<std::jthread> pool;
    for (std::size_t w = 1; w < workers; ++w) pool.emplace_back(run, w);
    run(0);
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

}  // namespace gt
