#include "pslab/parallel.hpp"

#include <algorithm>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

namespace pslab {

int resolveWorkers(int requested) {
  if (const char* env = std::getenv("PSLAB_WORKERS")) {
    try {
      const int value = std::stoi(env);
      if (value >= 1) return value;
    } catch (const std::exception&) {
      // ignore malformed overrides
    }
  }
  return std::max(1, requested);
}

void parallelFor(std::size_t count, int workers,
                 const std::function<void(std::size_t, std::size_t)>& body) {
  if (count == 0) return;
  // Small batches are not worth a thread start; the split never affects results.
  constexpr std::size_t kMinBlock = 64;
  const std::size_t threads = std::min<std::size_t>(static_cast<std::size_t>(std::max(1, workers)),
                                                    (count + kMinBlock - 1) / kMinBlock);
  if (threads == 1) {
    body(0, count);
    return;
  }
  const std::size_t block = (count + threads - 1) / threads;
  std::exception_ptr failure;
  std::mutex failureMutex;
  std::vector<std::thread> pool;
  pool.reserve(threads);
  for (std::size_t t = 0; t < threads; ++t) {
    const std::size_t begin = t * block;
    const std::size_t end = std::min(count, begin + block);
    if (begin >= end) break;
    pool.emplace_back([&, begin, end] {
      try {
        body(begin, end);
      } catch (...) {
        std::lock_guard<std::mutex> lock(failureMutex);
        if (!failure) failure = std::current_exception();
      }
    });
  }
  for (auto& th : pool) th.join();
  if (failure) std::rethrow_exception(failure);
}

}  // namespace pslab
