#include "pidd/parallel.hpp"

#include <algorithm>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

namespace pidd {

int worker_cap() {
  int cap = 0;
  if (const char* env = std::getenv("PID_DECOMP_THREADS")) {
    try {
      cap = std::stoi(env);
    } catch (const std::exception&) {
      cap = 0;
    }
  }
  if (cap <= 0) cap = static_cast<int>(std::thread::hardware_concurrency());
  return std::max(cap, 1);
}

void parallel_for(size_t n, const std::function<void(size_t)>& f) {
  const size_t workers = std::min<size_t>(worker_cap(), n);
  if (workers <= 1 || n < 2) {
    for (size_t i = 0; i < n; ++i) f(i);
    return;
  }
  std::vector<std::thread> threads;
  threads.reserve(workers);
  std::exception_ptr error;
  std::mutex error_mutex;
  for (size_t w = 0; w < workers; ++w) {
    threads.emplace_back([&, w] {
      try {
        for (size_t i = w; i < n; i += workers) f(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!error) error = std::current_exception();
      }
    });
  }
  for (auto& t : threads) t.join();
  if (error) std::rethrow_exception(error);
}

}  // namespace pidd
