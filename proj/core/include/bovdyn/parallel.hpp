#pragma once

#include <cstddef>
#include <functional>

namespace bovdyn {

/// Worker count: hardware concurrency, capped by BOVDYN_THREADS when set
/// to a positive integer. Never less than 1.
std::size_t worker_count();

/// Splits [0, n) into contiguous chunks and runs body(begin, end) on each,
/// one chunk per worker. Exceptions from a worker are rethrown after join.
void parallel_for(std::size_t n, const std::function<void(std::size_t, std::size_t)>& body,
                  std::size_t workers = 0);

} // namespace bovdyn
