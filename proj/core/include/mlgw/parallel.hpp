#pragma once

#include <functional>
#include <utility>

/* Fixed-chunk work distribution. The chunk grid is a pure function of the
   task count — never of the worker count — so a caller that merges chunk
   results in chunk order produces byte-identical output for any number of
   workers. Workers claim whole chunks from a shared counter. */

namespace mlgw {

inline constexpr int kWorkChunks = 8;

// Half-open task range of one chunk.
inline std::pair<int, int> chunk_range(int chunk, int n_chunks, int n_tasks) {
  const auto lo = static_cast<int>(static_cast<long long>(chunk) * n_tasks / n_chunks);
  const auto hi = static_cast<int>(static_cast<long long>(chunk + 1) * n_tasks / n_chunks);
  return {lo, hi};
}

// Runs body(chunk) for every chunk in [0, n_chunks) on up to `workers`
// threads (inline when either is <= 1). The first exception thrown by a body
// stops the remaining chunks and is rethrown on the calling thread.
void run_chunks(int workers, int n_chunks, const std::function<void(int)>& body);

}  // namespace mlgw
