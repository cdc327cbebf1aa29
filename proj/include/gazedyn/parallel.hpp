#pragma once

#include <cstddef>
#include <functional>

namespace gazedyn {

/// Worker threads for parallel loops: the OpenMP default, capped by the
/// GAZE_DYN_THREADS environment variable when it holds a positive integer.
int worker_count();

/// Runs body(i) for i in [0, n) on up to worker_count() threads. If any
/// iteration throws, the exception from the lowest failing index is
/// rethrown after the loop finishes.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace gazedyn
