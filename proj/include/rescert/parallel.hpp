#pragma once

#include <cstddef>
#include <exception>
#include <mutex>

#ifdef RESCERT_HAVE_OPENMP
#include <omp.h>
#endif

namespace rescert {

inline void set_workers(int workers) {
#ifdef RESCERT_HAVE_OPENMP
    if (workers > 0) omp_set_num_threads(workers);
#else
    (void)workers;
#endif
}

inline int worker_count() {
#ifdef RESCERT_HAVE_OPENMP
    return omp_get_max_threads();
#else
    return 1;
#endif
}

// Runs body(i) for i in [0, n). Results must be written to per-index slots so
// the outcome does not depend on scheduling. The exception from the lowest
// failing index is rethrown.
template <class Body>
void parallel_for(std::size_t n, Body&& body) {
    std::exception_ptr first;
    std::size_t first_index = n;
    std::mutex guard;
#ifdef RESCERT_HAVE_OPENMP
#pragma omp parallel for schedule(dynamic, 1)
#endif
    for (long long i = 0; i < static_cast<long long>(n); ++i) {
        try {
            body(static_cast<std::size_t>(i));
        } catch (...) {
            std::lock_guard<std::mutex> lock(guard);
            if (static_cast<std::size_t>(i) < first_index) {
                first_index = static_cast<std::size_t>(i);
                first = std::current_exception();
            }
        }
    }
    if (first) std::rethrow_exception(first);
}

}  // namespace rescert
