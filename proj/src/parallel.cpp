#include "gazedyn/parallel.hpp"

#include <omp.h>

#include <cstdlib>
#include <exception>
#include <string>
#include <vector>

namespace gazedyn {

int worker_count() {
  int n = omp_get_max_threads();
  if (const char* env = std::getenv("GAZE_DYN_THREADS")) {
    try {
      const int cap = std::stoi(env);
      if (cap > 0 && cap < n) n = cap;
    } catch (const std::exception&) {
      // ignored: malformed cap leaves the default
    }
  }
  return n < 1 ? 1 : n;
}

void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body) {
  if (n == 0) return;
  std::vector<std::exception_ptr> errors(n);
  const auto count = static_cast<long long>(n);
#pragma omp parallel for schedule(dynamic) num_threads(worker_count())
  for (long long i = 0; i < count; ++i) {
    try {
      body(static_cast<std::size_t>(i));
    } catch (...) {
      errors[static_cast<std::size_t>(i)] = std::current_exception();
    }
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

}  // namespace gazedyn
