#pragma once

#include <cstddef>
#include <functional>

namespace regext {

// Worker count: `requested` if positive, else REGIME_EXTRACT_THREADS if set and
// positive, else the hardware concurrency (at least 1).
unsigned resolve_threads(unsigned requested = 0);

// Runs body(k) for k in [0, n) over `threads` workers with static chunking.
// Each index is handled exactly once; results must be written per index so the
// outcome does not depend on scheduling. The first exception thrown is rethrown.
void parallel_for(std::size_t n, unsigned threads, const std::function<void(std::size_t)>& body);

}  // namespace regext
