#pragma once

#include <cstddef>
#include <functional>

namespace adm {

/// Worker count: VERIFY_THREADS if set and positive, else hardware concurrency.
unsigned worker_count();

/// Calls body(i) for i in [0, n) on up to worker_count() threads using a
/// static contiguous partition. Results must be written to per-index slots;
/// the first exception thrown by any worker is rethrown.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace adm
