#pragma once

#include <cstdlib>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace treespace {

/// Worker cap: TREESPACE_THREADS when set (clamped to >=1), otherwise the
/// OpenMP default; 1 in serial builds.
inline int max_workers() {
#ifdef _OPENMP
  int n = omp_get_max_threads();
#else
  int n = 1;
#endif
  if (const char* env = std::getenv("TREESPACE_THREADS")) {
    int cap = std::atoi(env);
    if (cap >= 1 && cap < n) n = cap;
  }
  return n < 1 ? 1 : n;
}

inline int worker_id() {
#ifdef _OPENMP
  return omp_get_thread_num();
#else
  return 0;
#endif
}

/// Data-parallel map over [0,n): body(i) must only write to slot i of its
/// outputs, so results do not depend on the schedule. `parallel=false` gives
/// the serial reference path.
template <typename F>
void parallel_for(int n, bool parallel, F&& body) {
#ifdef _OPENMP
  if (parallel && max_workers() > 1) {
#pragma omp parallel for schedule(dynamic, 1) num_threads(max_workers())
    for (int i = 0; i < n; ++i) body(i);
    return;
  }
#endif
  (void)parallel;
  for (int i = 0; i < n; ++i) body(i);
}

}  // namespace treespace
