#pragma once

#include <cstddef>
#include <cstdlib>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace yamabe {

// Thread count used by the parallel kernels: YAMABE_THREADS env var wins,
// otherwise the OpenMP default. Returns 1 in non-OpenMP builds.
inline int worker_threads() {
#ifdef _OPENMP
    if (const char* env = std::getenv("YAMABE_THREADS")) {
        const int v = std::atoi(env);
        if (v > 0) return v;
    }
    return omp_get_max_threads();
#else
    return 1;
#endif
}

// Runs fn(i) for i in [0, n). Each iteration writes only its own slot, so
// parallel and serial execution produce identical results; `serial` is the
// reference path kept for testing and benchmark comparison.
template <class F>
void parallel_for_indexed(std::size_t n, F&& fn, bool serial = false) {
#ifdef _OPENMP
    if (!serial && n > 1) {
        const int threads = worker_threads();
        #pragma omp parallel for schedule(dynamic) num_threads(threads)
        for (long long i = 0; i < static_cast<long long>(n); ++i) {
            fn(static_cast<std::size_t>(i));
        }
        return;
    }
#else
    (void)serial;
#endif
    for (std::size_t i = 0; i < n; ++i) fn(i);
}

} // namespace yamabe
