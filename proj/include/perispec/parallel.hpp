#pragma once

#include <cstdlib>
#include <string>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace perispec {

// Thread budget: OpenMP's maximum, capped by the PERISPEC_THREADS env var.
inline int thread_budget() {
    int budget = 1;
#ifdef _OPENMP
    budget = omp_get_max_threads();
#endif
    if (const char* env = std::getenv("PERISPEC_THREADS")) {
        const int cap = std::atoi(env);
        if (cap >= 1 && cap < budget) budget = cap;
    }
    return budget;
}

// Data-parallel loop over independent tasks. Each task writes only its own
// slot, so results are identical to the serial reference regardless of
// scheduling. `parallel = false` forces the serial path (kept for testing).
template <class F>
void parallel_for(int count, F&& task, bool parallel = true) {
    const int budget = parallel ? thread_budget() : 1;
    if (budget <= 1 || count <= 1) {
        for (int i = 0; i < count; ++i) task(i);
        return;
    }
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic) num_threads(budget)
    for (int i = 0; i < count; ++i) task(i);
#else
    for (int i = 0; i < count; ++i) task(i);
#endif
}

} // namespace perispec
