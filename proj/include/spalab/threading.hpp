#pragma once

#include <algorithm>
#include <cstdlib>
#include <string>
#include <thread>
#include <vector>

namespace spalab {

/// Worker count from SPA_LAB_THREADS; defaults to 1 so results never depend
/// on the machine unless the user opts in.
inline int thread_budget() {
  const char* env = std::getenv("SPA_LAB_THREADS");
  if (!env) return 1;
  try {
    const int n = std::stoi(env);
    return std::max(1, n);
  } catch (...) {
    return 1;
  }
}

/// Run body(i) for i in [0, count) on up to thread_budget() threads. Each
/// index writes only its own slot, so the reduction order downstream is
/// fixed and the outcome does not depend on the thread count.
template <typename Body>
void parallel_indexed(int count, Body&& body) {
  const int workers = std::min(thread_budget(), std::max(count, 1));
  if (workers <= 1) {
    for (int i = 0; i < count; ++i) body(i);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      for (int i = w; i < count; i += workers) body(i);
    });
  }
  for (auto& th : pool) th.join();
}

}  // namespace spalab
