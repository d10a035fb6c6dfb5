#pragma once

#include <cstddef>
#include <functional>

namespace qli {

/// Worker count: `requested` if non-zero, else hardware concurrency, capped
/// by the QLI_THREADS environment variable when set.
unsigned resolve_threads(unsigned requested = 0);

/// Runs body(i) for i in [0, n) on up to `threads` workers. Work items are
/// handed out dynamically; callers write results into slot i to keep output
/// order independent of scheduling. The first exception is rethrown.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body,
                  unsigned threads = 0);

}  // namespace qli
