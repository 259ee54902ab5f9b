#pragma once

#include <cstddef>
#include <functional>

namespace vwlab {

void set_thread_count(int k);
int thread_count();

// Static block partition of [0, n); fn(i) must only write to slot i.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

}  // namespace vwlab
