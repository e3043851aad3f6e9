#pragma once

#include <cstddef>
#include <functional>

namespace sbm {

/// Worker count: SBM_SPECTRA_THREADS if set, else `requested` if nonzero,
/// else hardware concurrency.
std::size_t resolve_threads(std::size_t requested = 0);

/// Runs body(i) for i in [0, n) on up to `threads` workers. Work is handed out
/// by index so results written to slot i are independent of scheduling. The
/// first exception thrown by any body is rethrown after all workers join.
void parallel_for(std::size_t n, std::size_t threads, const std::function<void(std::size_t)>& body);

}  // namespace sbm
