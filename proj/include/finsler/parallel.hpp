#pragma once

// Sample-loop kernels. Every kernel has a serial reference path and an OpenMP
// path; both evaluate fn(i) per index into a slot and reduce in index order,
// so the two paths return bit-identical results.

#include <cstddef>
#include <exception>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace finsler {

enum class Exec { serial, parallel };

/// Thread count from FINSLER_THREADS if set, otherwise the OpenMP default.
int default_thread_count();
void set_thread_count(int threads);

template <class T, class Fn>
std::vector<T> map_indexed(std::size_t count, Fn&& fn, Exec exec = Exec::parallel) {
  std::vector<T> out(count);
  if (exec == Exec::serial || count < 2) {
    for (std::size_t i = 0; i < count; ++i) out[i] = fn(i);
    return out;
  }
  std::vector<std::exception_ptr> errors(count);
  const long n = static_cast<long>(count);
#pragma omp parallel for schedule(dynamic)
  for (long i = 0; i < n; ++i) {
    try {
      out[static_cast<std::size_t>(i)] = fn(static_cast<std::size_t>(i));
    } catch (...) {
      errors[static_cast<std::size_t>(i)] = std::current_exception();
    }
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
  return out;
}

/// Index-ordered sum of fn(i) for i in [0, count).
template <class T, class Fn>
T ordered_sum(std::size_t count, Fn&& fn, T zero, Exec exec = Exec::parallel) {
  auto parts = map_indexed<T>(count, std::forward<Fn>(fn), exec);
  T acc = zero;
  for (auto& p : parts) acc = acc + p;
  return acc;
}

}  // namespace finsler
