#pragma once

#include <cstddef>
#include <functional>

namespace mmt {

// Thread count from an explicit value, else MMT_THREADS, else 1.
unsigned resolve_threads(int requested);
void set_default_threads(unsigned n);
unsigned default_threads();

// Calls fn(i) for i in [0, n). Each index must write only its own output slot,
// so results do not depend on scheduling.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn,
                  unsigned threads = 0);

}  // namespace mmt
