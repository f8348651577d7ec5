#pragma once

#include <cstddef>
#include <functional>

namespace drselect {

// Worker cap for library-internal parallel loops. Results never depend on it:
// tasks carry their own derived seeds and write to index-addressed slots.
void set_max_threads(std::size_t n);
std::size_t max_threads();

// Runs body(i) for i in [0, count). The first exception (lowest index) is
// rethrown after all workers finish. Nested calls run serially.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body);

}  // namespace drselect
