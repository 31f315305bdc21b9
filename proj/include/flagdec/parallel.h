#pragma once

#include <cstddef>
#include <functional>

namespace flagdec {

int resolve_threads(int requested);

// Static contiguous chunking; fn(begin, end) must only write to slots it owns.
void parallel_for(size_t n, int threads, const std::function<void(size_t, size_t)>& fn);

}  // namespace flagdec
