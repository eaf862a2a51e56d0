#pragma once

#include <cstdint>
#include <functional>

namespace hetkg {

// Worker cap for the few embarrassingly parallel loops (candidate ranking).
// 1 forces fully serial execution; results are identical either way because
// parallel work never shares accumulators.
void set_thread_cap(int n);
int thread_cap();

// Runs fn(begin, end) over disjoint chunks of [0, n), possibly on worker
// threads.
void parallel_for(std::int64_t n, const std::function<void(std::int64_t, std::int64_t)>& fn);

}  // namespace hetkg
