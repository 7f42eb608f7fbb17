#pragma once

#include <cstddef>
#include <functional>

namespace fqfi {

/// Worker count: hardware concurrency, capped by FERMI_QFI_THREADS when set.
int worker_count();

/// Runs body(i) for i in [0, n) on up to worker_count() threads.  Each index is
/// visited exactly once; callers write results into per-index slots so the
/// output does not depend on scheduling.  The first exception is rethrown.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace fqfi
