#pragma once

#include <cstddef>
#include <functional>

namespace proxeq {

// Global worker count used by parallel_for; 1 means run inline. Set from the
// CLI --jobs flag. Results must not depend on this value: tasks write to
// disjoint indices and any reduction is done serially over the index order.
void set_worker_count(int n);
int worker_count();

// Runs fn(i) for i in [0, n). Work is split into contiguous chunks by index,
// so outputs land in caller-owned slots and the assembled result is
// independent of thread count and scheduling.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

}  // namespace proxeq
