#pragma once

#include <functional>

namespace twirl {

/// Worker cap for internal loops. Defaults to the TWIRL_LAB_THREADS
/// environment variable, else the hardware concurrency.
int max_threads();
void set_max_threads(int n);

/// Runs body(i) for i in [0, n). Bodies must write only to slots owned by i;
/// callers reduce afterwards in index order so results do not depend on
/// scheduling.
void parallel_for(int n, const std::function<void(int)>& body);

}  // namespace twirl
