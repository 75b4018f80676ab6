#pragma once

#include <cstddef>
#include <functional>

namespace mfts {

/// Number of worker threads to use; 0 or negative requests all cores.
int resolve_threads(int requested);

/// Runs fn(i) for i in [0, count) across up to `threads` workers. Each index
/// is processed exactly once; callers keep determinism by writing results
/// into per-index slots and seeding any randomness per index.
void parallel_for(std::size_t count, int threads, const std::function<void(std::size_t)>& fn);

} // namespace mfts
