#pragma once

#include <cstddef>
#include <functional>

namespace taufpl {

/// Worker cap from TAU_FPL_THREADS (default 1, i.e. sequential).
std::size_t thread_budget();

/// Runs body(i) for i in [0, count) on up to `threads` workers. Exceptions
/// are rethrown on the caller's thread (lowest index first).
void parallel_for(std::size_t count, std::size_t threads, const std::function<void(std::size_t)>& body);

}  // namespace taufpl
