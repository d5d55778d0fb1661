#pragma once

#include <cstddef>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace notchbench {

/// Run fn(i) for i in [0, n). When parallel is set and OpenMP is available the
/// iterations are distributed over threads; each iteration must write only to
/// its own output slot so the result is identical to the serial loop.
template <typename Fn>
void parallel_for_index(std::size_t n, bool parallel, Fn&& fn) {
#ifdef _OPENMP
    if (parallel) {
#pragma omp parallel for schedule(dynamic)
        for (long long i = 0; i < static_cast<long long>(n); ++i) {
            fn(static_cast<std::size_t>(i));
        }
        return;
    }
#else
    (void)parallel;
#endif
    for (std::size_t i = 0; i < n; ++i) fn(i);
}

inline int hardware_threads() {
#ifdef _OPENMP
    return omp_get_max_threads();
#else
    return 1;
#endif
}

inline void set_max_threads(int n) {
#ifdef _OPENMP
    if (n > 0) omp_set_num_threads(n);
#else
    (void)n;
#endif
}

}  // namespace notchbench
