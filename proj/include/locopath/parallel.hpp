#pragma once

#include <cstddef>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace locopath {

enum class Exec { serial, parallel };

// Runs body(i) for i in [0, n). With Exec::parallel the iterations are
// distributed over OpenMP threads; each iteration must only write to its own
// slot of any shared output so results do not depend on the schedule.
// Nested calls fall back to serial.
template <typename Body>
void parallel_for(Exec exec, std::size_t n, Body&& body) {
#ifdef _OPENMP
    if (exec == Exec::parallel && !omp_in_parallel()) {
        #pragma omp parallel for schedule(dynamic, 1)
        for (long long i = 0; i < static_cast<long long>(n); ++i) {
            body(static_cast<std::size_t>(i));
        }
        return;
    }
#else
    (void)exec;
#endif
    for (std::size_t i = 0; i < n; ++i) {
        body(i);
    }
}

}  // namespace locopath
