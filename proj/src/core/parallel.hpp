#ifndef MLRANK_CORE_PARALLEL_HPP_
#define MLRANK_CORE_PARALLEL_HPP_

#include <algorithm>
#include <cstdlib>
#include <exception>
#include <thread>
#include <vector>

namespace mlrank {

// Worker count: MLRANK_WORKERS if set and positive, else hardware threads.
inline int worker_count() {
  if (const char* env = std::getenv("MLRANK_WORKERS")) {
    const int n = std::atoi(env);
    if (n > 0) return n;
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw > 0 ? static_cast<int>(hw) : 1;
}

// Static block partition of [begin, end) across workers. The body must write
// only to slots owned by its index so that the result is independent of the
// partition. The first exception (by index order) is rethrown.
template <typename Body>
void parallel_for(long begin, long end, const Body& body) {
  const long count = end - begin;
  if (count <= 0) return;
  const int workers =
      static_cast<int>(std::min<long>(worker_count(), count));
  if (workers <= 1) {
    for (long i = begin; i < end; ++i) body(i);
    return;
  }
  std::vector<std::exception_ptr> errors(workers);
  std::vector<std::thread> threads;
  threads.reserve(workers);
  const long chunk = (count + workers - 1) / workers;
  for (int w = 0; w < workers; ++w) {
    const long lo = begin + w * chunk;
    const long hi = std::min(end, lo + chunk);
    if (lo >= hi) break;
    threads.emplace_back([&, w, lo, hi] {
      try {
        for (long i = lo; i < hi; ++i) body(i);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  }
  for (auto& t : threads) t.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

}  // namespace mlrank

#endif  // MLRANK_CORE_PARALLEL_HPP_
