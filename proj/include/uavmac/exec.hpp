#pragma once

#include <cstddef>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace uavmac {

// Number of worker threads the parallel kernels will use.
// UAVMAC_THREADS (if set) overrides the OpenMP default.
int max_threads();

void apply_thread_env();

// Data-parallel index map. `parallel = false` runs the plain serial loop,
// which is the reference implementation the tests compare against.
template <class F>
void parallel_for(std::size_t n, F&& body, bool parallel = true) {
#ifdef _OPENMP
    if (parallel && n > 1) {
        #pragma omp parallel for schedule(dynamic)
        for (long long i = 0; i < static_cast<long long>(n); ++i) {
            body(static_cast<std::size_t>(i));
        }
        return;
    }
#else
    (void)parallel;
#endif
    for (std::size_t i = 0; i < n; ++i) body(i);
}

}  // namespace uavmac
