#pragma once
// Execution policy shared by the parallel kernels.  Exec::Serial is the
// reference path; Exec::Parallel runs the same loop body under OpenMP.
// Loop bodies write results by index, so both paths produce identical output.

#include <cstddef>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace qk {

enum class Exec { Serial, Parallel };

template <class F>
void parallel_for(std::size_t n, Exec policy, F&& body) {
#ifdef _OPENMP
  if (policy == Exec::Parallel) {
#pragma omp parallel for schedule(static)
    for (long long i = 0; i < static_cast<long long>(n); ++i)
      body(static_cast<std::size_t>(i));
    return;
  }
#else
  (void)policy;
#endif
  for (std::size_t i = 0; i < n; ++i) body(i);
}

inline int max_threads() {
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

}  // namespace qk
