#pragma once

#include <functional>

namespace pdc {

// Runs fn(0..n-1) on up to `workers` threads. Work items must write only to
// their own index's results so the outcome is schedule-independent.
// Exceptions from items are captured and the first one rethrown.
void parallel_for(int n, int workers, const std::function<void(int)>& fn);

}  // namespace pdc
