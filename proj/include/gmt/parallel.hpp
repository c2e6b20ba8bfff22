#pragma once

#include <cstddef>
#include <functional>

namespace gmt {

// Process-wide worker count (the CLI's --threads). 0 means "hardware".
void set_thread_count(unsigned n);
unsigned thread_count();

// Runs fn(chunk_begin, chunk_end) over [0,n) split into fixed-size chunks.
// Chunk boundaries depend only on n and chunk_size, never on the worker
// count, so any reduction done per chunk and combined in chunk order gives
// bit-identical results for every --threads value.
void parallel_chunks(std::size_t n, std::size_t chunk_size,
                     const std::function<void(std::size_t, std::size_t)>& fn);

// Convenience: fn(i) for each i in [0,n), independent items.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

}  // namespace gmt
