#pragma once

#include <cstddef>
#include <functional>

namespace surfrank {

/// Caps the number of worker threads used by parallel_for. 0 means
/// "hardware concurrency". Results never depend on this value.
void set_max_threads(unsigned n);
unsigned max_threads();

/// Runs body(begin, end) over contiguous chunks of [0, count). Chunks are
/// disjoint; the first exception thrown by any chunk is rethrown.
void parallel_for(std::size_t count,
                  const std::function<void(std::size_t, std::size_t)>& body);

}  // namespace surfrank
