#pragma once

#include <cstddef>
#include <functional>

namespace revend {

/// Number of workers to use: the request if nonzero, else hardware
/// concurrency; both capped by the REVEND_THREADS environment variable.
unsigned worker_count(unsigned requested = 0);

/// Runs body(i) for i in [0, n) on up to `workers` threads using contiguous
/// index blocks. If any call throws, the exception from the lowest failing
/// block is rethrown after all workers finish.
void parallel_for(std::size_t n, unsigned workers, const std::function<void(std::size_t)>& body);

}  // namespace revend
