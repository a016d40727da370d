#pragma once

#include <cstddef>
#include <cstdlib>
#include <exception>
#include <string>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace ctap {

// Resolve a worker count: an explicit request wins, then the CTAP_JOBS
// environment variable, then the OpenMP default; 1 when built without
// OpenMP.  jobs <= 1 always selects the serial reference path.
inline int effective_jobs(int requested = 0) {
    if (requested > 0) return requested;
    if (const char* env = std::getenv("CTAP_JOBS")) {
        int j = std::atoi(env);
        if (j > 0) return j;
    }
#ifdef _OPENMP
    return omp_get_max_threads();
#else
    return 1;
#endif
}

// Data-parallel loop over [0, n).  The body must write results keyed by
// its index (no shared mutable state), which makes the output identical
// for every worker count — asserted by the test suite.  Exceptions thrown
// by the body are captured and rethrown on the calling thread.
template <class F>
void parallel_for(std::size_t n, F&& body, int jobs = 0) {
    const int j = effective_jobs(jobs);
#ifdef _OPENMP
    if (j > 1 && n > 1) {
        std::exception_ptr first_error = nullptr;
#pragma omp parallel for schedule(dynamic) num_threads(j)
        for (long long i = 0; i < static_cast<long long>(n); ++i) {
            try {
                body(static_cast<std::size_t>(i));
            } catch (...) {
#pragma omp critical(ctap_parallel_for_error)
                if (!first_error) first_error = std::current_exception();
            }
        }
        if (first_error) std::rethrow_exception(first_error);
        return;
    }
#else
    (void)j;
#endif
    for (std::size_t i = 0; i < n; ++i) body(i);
}

} // namespace ctap
