#pragma once

#include <cstddef>
#include <functional>

namespace dgff {

// Runs fn(i) for i in [0, n) on up to `threads` workers (0 = hardware
// concurrency). Work is split into contiguous chunks; the first exception
// thrown is rethrown on the caller.
void parallel_for(std::size_t n, int threads, const std::function<void(std::size_t)>& fn);

int resolve_threads(int threads);

} // namespace dgff
