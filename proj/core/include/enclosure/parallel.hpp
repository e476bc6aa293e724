#pragma once

#include <cstddef>
#include <functional>

namespace enclosure {

/// Worker count after applying the ENCLOSURE_WORKERS environment override; always >= 1.
int resolve_worker_count(int requested);

/// Runs task(0..count-1) on a fixed pool of `workers` threads. Tasks must write only to their
/// own result slot. If tasks throw, the exception of the lowest failing index is rethrown after
/// all workers have joined.
void parallel_for(std::size_t count, int workers, const std::function<void(std::size_t)>& task);

}  // namespace enclosure
