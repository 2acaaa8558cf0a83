#pragma once

#include <cstddef>
#include <functional>

namespace repel {

// Default worker count; 0 selects hardware concurrency.
void set_default_threads(unsigned n);
unsigned default_threads();

// Runs fn(i) for i in [0, n) across `threads` workers (0 = default). Output
// determinism is the caller's job: index results by i, seed by i.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn, unsigned threads = 0);

}  // namespace repel
