#ifndef WLMC_PARALLEL_HPP
#define WLMC_PARALLEL_HPP

#include <cstdint>
#include <functional>

namespace wlmc::util {

/// Runs fn(0..count-1) on up to `jobs` worker threads pulling indices from a
/// shared counter. Work items must write only to disjoint state. The first
/// exception thrown by any item is rethrown on the calling thread.
void parallel_for(std::int64_t count, int jobs, const std::function<void(std::int64_t)>& fn);

}  // namespace wlmc::util

#endif  // WLMC_PARALLEL_HPP
