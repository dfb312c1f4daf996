#pragma once

#include <cstddef>
#include <functional>

namespace mitodet {

/// Calls fn(i) for i in [0, n) on up to `jobs` threads. With jobs <= 1 the
/// calls run in index order on the calling thread. If any call throws, the
/// exception from the lowest failing index is rethrown after all workers stop.
void parallel_for(std::size_t n, int jobs, const std::function<void(std::size_t)>& fn);

}  // namespace mitodet
