#pragma once

#include <cstddef>
#include <functional>

namespace ews {

/// Worker cap: EWS_THREADS if set to a positive integer, else hardware
/// concurrency (at least 1).
std::size_t worker_count();

/// Runs body(i) for i in [0, count). Each index must write only its own
/// output slot; results are then independent of scheduling.
void parallel_for(std::size_t count, const std::function<void(std::size_t)> &body);

} // namespace ews
