#pragma once

#include <cstddef>
#include <functional>

namespace edens {

/// Caps the worker threads used by quadrature and searches (>= 1).
void set_worker_count(int workers);
int worker_count();

/// Runs body(i) for i in [0, n).  Work is split into contiguous static
/// chunks; callers write into slot i so reductions stay in a fixed order and
/// results are bit-identical for any worker count.  Nested calls run inline.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace edens
