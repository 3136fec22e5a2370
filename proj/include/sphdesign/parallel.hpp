#pragma once

#include <cstddef>
#include <functional>

namespace sphdesign {

/// Worker count used by library loops. Initialised from SPHDESIGN_THREADS
/// (falls back to the hardware concurrency). Results never depend on it.
int thread_count();
void set_thread_count(int n);

/// Runs body(begin, end) over a static partition of [0, n) into `chunk`-sized
/// ranges. Chunk boundaries depend only on n and chunk, so any per-chunk
/// output is identical for every worker count. Nested calls run inline.
void parallel_chunks(std::size_t n, std::size_t chunk,
                     const std::function<void(std::size_t, std::size_t)>& body);

/// parallel_chunks with one index per call.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace sphdesign
