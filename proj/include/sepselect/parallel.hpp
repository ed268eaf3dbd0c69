#ifndef SEPSELECT_PARALLEL_HPP
#define SEPSELECT_PARALLEL_HPP

#include <cstddef>
#include <functional>

namespace sepselect {

/**
 * Effective worker count: `requested` (or hardware concurrency when
 * requested <= 0), capped by the SEPSELECT_THREADS environment variable
 * when it is set. Always at least 1.
 */
int resolve_workers(int requested);

/**
 * Run fn(begin, end) over contiguous chunks of [0, count) on `workers`
 * threads. Chunk boundaries depend only on (count, workers); callers that
 * write results by index stay deterministic for any worker count.
 */
void parallel_chunks(std::size_t count, int workers,
                     const std::function<void(std::size_t, std::size_t)>& fn);

}  // namespace sepselect

#endif
