#pragma once

#include <cstddef>
#include <functional>

namespace hdmole {

/// Worker count: min(hardware threads, HDMOLE_THREADS if set). Always >= 1.
std::size_t worker_count();

/// Runs body(i) for i in [begin, end) across worker threads. Blocks until all
/// iterations finish. Iterations must not share mutable state. Falls back to
/// a plain loop when only one worker is available or the range is tiny.
void parallel_for(std::size_t begin, std::size_t end,
                  const std::function<void(std::size_t)>& body);

}  // namespace hdmole
