#pragma once

#include <cstddef>

#include "okd/function_ref.hpp"

namespace okd {

/// Name of the environment variable holding the default worker count.
inline constexpr const char* kThreadsEnvVar = "OKD_THREADS";

/// OKD_THREADS when set to a positive integer, otherwise the hardware
/// concurrency (at least 1).
unsigned default_thread_count();

/// Runs body(i) for i in [0, n) on up to `threads` workers (0 selects
/// default_thread_count()). Indices are handed out dynamically, so body must
/// not depend on execution order. The first exception thrown by any body is
/// rethrown after all workers have joined.
void parallel_for(std::size_t n, unsigned threads,
                  FunctionRef<void(std::size_t)> body);

}  // namespace okd
