#include "jetham/parallel.hpp"

#include <cstdlib>
#include <exception>
#include <string>

#ifdef JETHAM_HAVE_OPENMP
#include <omp.h>
#endif

namespace jetham {

int effective_threads() {
  int cap = 0;
  if (const char* env = std::getenv("JETHAM_THREADS")) {
    try {
      cap = std::stoi(env);
    } catch (...) {
      cap = 0;
    }
  }
#ifdef JETHAM_HAVE_OPENMP
  int hw = omp_get_max_threads();
  if (cap > 0 && cap < hw) return cap;
  return hw;
#else
  (void)cap;
  return 1;
#endif
}

void parallel_for(int count, ExecMode mode, const std::function<void(int)>& body) {
  if (mode == ExecMode::Serial) {
    for (int k = 0; k < count; ++k) body(k);
    return;
  }
#ifdef JETHAM_HAVE_OPENMP
  std::exception_ptr first_error = nullptr;
  int threads = effective_threads();
#pragma omp parallel for schedule(dynamic) num_threads(threads)
  for (int k = 0; k < count; ++k) {
    try {
      body(k);
    } catch (...) {
#pragma omp critical
      if (!first_error) first_error = std::current_exception();
    }
  }
  if (first_error) std::rethrow_exception(first_error);
#else
  for (int k = 0; k < count; ++k) body(k);
#endif
}

}  // namespace jetham
