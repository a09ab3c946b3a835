#pragma once

#include <functional>

namespace mmtop {

/// Worker count from MMTOP_THREADS (0 or unset = hardware concurrency).
int worker_count();

/// Runs body(i) for i in [0, n) over contiguous chunks. Each index is visited
/// exactly once, so per-index writes are deterministic regardless of threads.
void parallel_for(int n, const std::function<void(int)>& body);

}  // namespace mmtop
