#pragma once

#include <cstdint>
#include <functional>

namespace hypercone {

/// Worker cap: min(hardware_concurrency, HYPERCONE_THREADS) and at least 1.
int worker_count();

/// Runs fn(chunk_index, begin, end) over a contiguous partition of [0, total).
/// Callers must merge per-chunk results with order-independent reductions so
/// the outcome does not depend on the partitioning.
void parallel_chunks(std::uint64_t total,
                     const std::function<void(int, std::uint64_t, std::uint64_t)>& fn);

} // namespace hypercone
