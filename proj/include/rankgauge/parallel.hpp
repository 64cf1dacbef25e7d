#ifndef RANKGAUGE_PARALLEL_HPP
#define RANKGAUGE_PARALLEL_HPP

#include <cstdint>
#include <functional>

namespace rankgauge {

/// Worker count: RANKGAUGE_THREADS if set (clamped to [1, 512]), otherwise
/// the hardware concurrency.  Results never depend on this value; it only
/// caps the parallelism.
int worker_count();

/// Runs fn(i) for i in [0, count).  Work is split into contiguous chunks
/// across workers; each index must be independent of the others so output
/// cannot depend on the partitioning.
void parallel_for(std::int64_t count, const std::function<void(std::int64_t)>& fn);

/// Chunked variant for loops that want per-worker scratch: fn(begin, end)
/// is invoked once per contiguous chunk.
void parallel_chunks(std::int64_t count,
                     const std::function<void(std::int64_t, std::int64_t)>& fn);

}  // namespace rankgauge

#endif  // RANKGAUGE_PARALLEL_HPP
