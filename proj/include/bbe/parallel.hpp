#pragma once

#include <exception>
#include <vector>

namespace bbe {

// Execution policy for the grid kernels. Serial is the reference path the
// tests compare against; Parallel distributes independent indices with
// OpenMP and must produce identical results.
enum class Exec { Serial, Parallel };

// Worker count: BBE_THREADS if set and positive, else the OpenMP default.
int threadCount();

// Runs body(k) for k in [0, n). Each index writes only its own slot, so the
// merge is by index and deterministic. The first exception by index is
// rethrown after the loop.
template <class Body>
void forEachIndex(int n, Exec exec, Body&& body) {
  std::vector<std::exception_ptr> errors(static_cast<size_t>(n > 0 ? n : 0));
  const bool par = exec == Exec::Parallel && n > 1 && threadCount() > 1;
#pragma omp parallel for schedule(dynamic, 1) num_threads(threadCount()) if (par)
  for (int k = 0; k < n; ++k) {
    try {
      body(k);
    } catch (...) {
      errors[k] = std::current_exception();
    }
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

}  // namespace bbe
