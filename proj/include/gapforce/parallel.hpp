#pragma once

#include <cstddef>
#include <functional>

namespace gapforce {

/// Worker count used by parallel loops (default 1). Results are
/// bit-reproducible for any count: each index writes its own slot and
/// reductions run in fixed index order afterwards.
void set_worker_threads(int count);
int worker_threads();

namespace detail {

/// Runs fn(i) for i in [0, count), split into contiguous chunks across the
/// configured workers. fn must only write to index-owned state.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& fn);

}  // namespace detail

}  // namespace gapforce
