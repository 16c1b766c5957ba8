#pragma once

#include <cstddef>
#include <functional>

namespace vizrec {

/// Caps the worker count used by parallel_for. 0 restores the hardware default.
void set_thread_count(std::size_t n);
std::size_t thread_count();

/// Runs body(i) for i in [0, n). Work is split into contiguous static ranges,
/// and each index is processed exactly once, so any result written to slot i
/// is independent of the worker count. Calls made from inside a worker run serially.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace vizrec
