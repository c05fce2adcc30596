#pragma once

#include <cstddef>
#include <functional>

namespace cradon {

/// Number of worker threads used by data-parallel loops (default 1).
int worker_count();
void set_worker_count(int n);

/// Runs body(begin, end) over contiguous chunks of [0, n). Each index is
/// visited exactly once and chunks never overlap, so callers that write
/// disjoint output slices get results independent of the worker count.
void parallel_for(std::size_t n, const std::function<void(std::size_t, std::size_t)>& body);

} // namespace cradon
