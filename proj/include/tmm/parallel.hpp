#pragma once

// Deterministic parallel map. Each index is computed independently and the
// results land in index order, so any reduction over the returned vector is
// independent of the worker count and of scheduling.

#include <cstddef>
#include <exception>
#include <span>
#include <type_traits>
#include <vector>

namespace tmm {

/// Worker count actually used for `requested` (<= 0 means "all available").
int resolve_workers(int requested);

/// Serial reference implementation, kept for testing the parallel kernel.
template <class F>
auto serial_map(std::size_t count, F&& f) -> std::vector<std::invoke_result_t<F&, std::size_t>> {
  std::vector<std::invoke_result_t<F&, std::size_t>> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) out.push_back(f(i));
  return out;
}

/// OpenMP parallel map. The first exception by index is rethrown.
template <class F>
auto parallel_map(std::size_t count, F&& f, int workers) -> std::vector<std::invoke_result_t<F&, std::size_t>> {
  using R = std::invoke_result_t<F&, std::size_t>;
  const int threads = resolve_workers(workers);
  if (threads == 1 || count < 2) return serial_map(count, f);
  std::vector<R> out(count);
  std::vector<std::exception_ptr> errors(count);
  const auto n = static_cast<long long>(count);
#pragma omp parallel for schedule(dynamic, 16) num_threads(threads)
  for (long long i = 0; i < n; ++i) {
    try {
      out[static_cast<std::size_t>(i)] = f(static_cast<std::size_t>(i));
    } catch (...) {
      errors[static_cast<std::size_t>(i)] = std::current_exception();
    }
  }
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);
  return out;
}

/// Summary statistics with a fixed (index-order) reduction.
struct MarginStats {
  std::size_t count = 0;
  double min = 0.0;
  double max = 0.0;
  double mean = 0.0;
  std::size_t argmin = 0;
};

MarginStats summarize(std::span<const double> margins);

}  // namespace tmm
