#pragma once

#include <cstddef>
#include <functional>

namespace placement {

/// Worker count used by every parallel loop in the library. Defaults to the
/// PLACEMENT_THREADS environment variable, else the hardware concurrency.
std::size_t num_threads();
void set_num_threads(std::size_t n);

/// Runs body(i) for i in [begin, end) over contiguous static chunks. The result
/// of each index must only depend on i, which keeps outputs independent of the
/// thread count.
void parallel_for(std::size_t begin, std::size_t end,
                  const std::function<void(std::size_t)>& body);

}  // namespace placement
