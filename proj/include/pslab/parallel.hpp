#pragma once

#include <cstddef>
#include <functional>

namespace pslab {

/// Worker count after applying the PSLAB_WORKERS override; always >= 1.
int resolveWorkers(int requested);

/// Splits [0, count) into contiguous blocks and runs body(begin, end) on up
/// to `workers` threads. Bodies must only write to slots they own; callers
/// reduce afterwards in index order, which keeps results independent of the
/// worker count.
void parallelFor(std::size_t count, int workers,
                 const std::function<void(std::size_t begin, std::size_t end)>& body);

}  // namespace pslab
