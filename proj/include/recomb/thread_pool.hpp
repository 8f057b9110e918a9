#pragma once

#include <atomic>
#include <cstdint>
#include <functional>
#include <thread>
#include <vector>

namespace recomb {

// Worker count resolution: explicit request > RECOMB_THREADS > hardware.
int resolve_thread_count(int requested = 0);

// Runs fn(chunk_index) for chunk_index in [0, n_chunks) on up to `threads`
// workers. Chunks must write only to their own slots; results are therefore
// identical for any thread count.
void parallel_for_chunks(std::int64_t n_chunks, int threads,
                         const std::function<void(std::int64_t)>& fn);

} // namespace recomb
