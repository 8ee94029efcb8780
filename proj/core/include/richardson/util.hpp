#ifndef RICHARDSON_UTIL_HPP
#define RICHARDSON_UTIL_HPP

#include <cstdint>
#include <functional>
#include <string>

namespace richardson {

// Run fn(replica) for replica in [0, count) on `workers` threads. Callers get
// determinism by writing results into replica-indexed slots; the pool imposes
// no ordering of its own. workers <= 1 runs inline. Exceptions from workers
// are rethrown (first by replica index) after all threads join.
void parallel_for_replicas(std::int64_t count, int workers,
                           const std::function<void(std::int64_t)>& fn);

// Decimal form with 17 significant digits (%.17g): round-trips the exact
// double, and identical bits print identical bytes on any platform.
std::string fmt_double(double v);

std::string env_or(const char* name, const std::string& fallback);

}  // namespace richardson

#endif
