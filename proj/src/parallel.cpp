#include "polar_iga/parallel.hpp"

#include <cstdlib>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace polar_iga {

int max_threads() {
#ifdef _OPENMP
  static const int cached = [] {
    int n = omp_get_max_threads();
    if (const char* env = std::getenv("POLAR_IGA_THREADS")) {
      const int cap = std::atoi(env);
      if (cap >= 1 && cap < n) n = cap;
    }
    return n;
  }();
  return cached;
#else
  return 1;
#endif
}

}  // namespace polar_iga
