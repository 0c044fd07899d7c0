#pragma once

#include <cstddef>
#include <exception>

namespace tasep::detail {

// body(i) for i in [0, n); the first exception is rethrown on the calling thread
template <class F>
void parallel_for(std::ptrdiff_t n, F&& body) {
  std::exception_ptr err;
#pragma omp parallel for schedule(dynamic)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    try {
      body(i);
    } catch (...) {
#pragma omp critical(tasep_parallel_error)
      if (!err) err = std::current_exception();
    }
  }
  if (err) std::rethrow_exception(err);
}

}  // namespace tasep::detail
