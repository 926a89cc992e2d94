#include "finsler/parallel.hpp"

#include <cstdlib>
#include <string>

namespace finsler {

int default_thread_count() {
  if (const char* env = std::getenv("FINSLER_THREADS")) {
    int t = std::atoi(env);
    if (t > 0) return t;
  }
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

void set_thread_count(int threads) {
#ifdef _OPENMP
  if (threads > 0) omp_set_num_threads(threads);
#else
  (void)threads;
#endif
}

}  // namespace finsler
