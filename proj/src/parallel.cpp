#include "twirl/parallel.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace twirl {
namespace {

std::atomic<int> g_threads{0};

int threads_from_env() {
  if (const char* env = std::getenv("TWIRL_LAB_THREADS")) {
    const int n = std::atoi(env);
    if (n > 0) return n;
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

}  // namespace

int max_threads() {
  int n = g_threads.load();
  if (n <= 0) {
    n = threads_from_env();
    g_threads.store(n);
  }
  return n;
}

void set_max_threads(int n) { g_threads.store(std::max(1, n)); }

void parallel_for(int n, const std::function<void(int)>& body) {
  const int workers = std::min(max_threads(), n);
  if (workers <= 1 || n < 8) {
    for (int i = 0; i < n; ++i) body(i);
    return;
  }
  std::atomic<int> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (int i = next.fetch_add(1); i < n; i = next.fetch_add(1)) {
        try {
          body(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(error_mutex);
          if (!error) error = std::current_exception();
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

}  // namespace twirl
