#pragma once

#include <cstdint>
#include <functional>

namespace rewardlab {

/// Runs fn(0..n-1) across up to n_workers threads (0 = hardware concurrency).
/// Work items must be independent; each item's output must not depend on
/// scheduling, so results are identical for any worker count.
void parallel_for(std::int64_t n, int n_workers, const std::function<void(std::int64_t)>& fn);

} // namespace rewardlab
