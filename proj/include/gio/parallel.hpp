#pragma once

#include <cstddef>

namespace gio {

// Caps worker threads for every OpenMP kernel. 0 restores the runtime default.
void set_thread_count(int threads);
int thread_count();

// Fixed block size for parallel reductions. Partial sums are formed per block
// and combined in block order, so results do not depend on the thread count.
inline constexpr std::size_t kReductionBlock = 64;

}  // namespace gio
