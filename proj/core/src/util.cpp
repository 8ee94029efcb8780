#include "richardson/util.hpp"

#include <atomic>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <thread>
#include <vector>

namespace richardson {

void parallel_for_replicas(std::int64_t count, int workers,
                           const std::function<void(std::int64_t)>& fn) {
  if (count <= 0) return;
  if (workers <= 1 || count == 1) {
    for (std::int64_t r = 0; r < count; ++r) fn(r);
    return;
  }
  if (workers > count) workers = static_cast<int>(count);

  std::atomic<std::int64_t> next{0};
  // One exception slot per replica so the rethrow choice is deterministic.
  std::vector<std::exception_ptr> errors(static_cast<std::size_t>(count));
  std::vector<std::thread> threads;
  threads.reserve(static_cast<std::size_t>(workers));
  for (int w = 0; w < workers; ++w) {
    threads.emplace_back([&]() {
      for (;;) {
        std::int64_t r = next.fetch_add(1);
        if (r >= count) return;
        try {
          fn(r);
        } catch (...) {
          errors[static_cast<std::size_t>(r)] = std::current_exception();
        }
      }
    });
  }
  for (auto& t : threads) t.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

std::string fmt_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string env_or(const char* name, const std::string& fallback) {
  const char* v = std::getenv(name);
  return v != nullptr && v[0] != '\0' ? std::string(v) : fallback;
}

}  // namespace richardson
