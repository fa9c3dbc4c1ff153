#pragma once

#include <cstddef>
#include <functional>

namespace grt {

/// Worker threads used by the projectors, synthesis and DTB evaluation.
/// Defaults to 1; the CLI sets it from --threads.
void set_thread_count(unsigned n);
unsigned thread_count();

/// Calls body(i) for every i in [0, n). Indices are split into contiguous
/// chunks, one per worker; each index is visited by exactly one worker.
void parallel_for(std::size_t n, const std::function<void(std::size_t)> &body);

}  // namespace grt
