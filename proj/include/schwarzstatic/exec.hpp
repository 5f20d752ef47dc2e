#pragma once

#include <cstddef>
#include <exception>

namespace schwarzstatic {

/// Execution policy for node- and radius-parallel kernels.
/// Serial is the reference path; Parallel must produce identical results.
enum class Exec { Serial, Parallel };

namespace detail {

/// Run body(i) for i in [0, n). Iterations must be independent. An exception from any
/// iteration is rethrown after the loop.
template <class F>
void for_each_index(Exec exec, std::ptrdiff_t n, F&& body) {
  if (exec == Exec::Serial) {
    for (std::ptrdiff_t i = 0; i < n; ++i) body(i);
    return;
  }
  std::exception_ptr err;
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    try {
      body(i);
    } catch (...) {
#pragma omp critical(schwarzstatic_for_each_index)
      if (!err) err = std::current_exception();
    }
  }
  if (err) std::rethrow_exception(err);
}

}  // namespace detail
}  // namespace schwarzstatic
