#pragma once

#include <cstddef>
#include <functional>

namespace qtwist {

/// Worker count from QTWIST_WORKERS, falling back to the hardware concurrency.
unsigned default_workers();

/// Runs body(begin, end) over [0, n) in chunks of at most `chunk` indices.
/// Chunks are claimed dynamically; callers write results into per-index slots,
/// so the outcome does not depend on the worker count.
void parallel_for(std::size_t n, unsigned workers, std::size_t chunk,
                  const std::function<void(std::size_t, std::size_t)>& body);

}  // namespace qtwist
