#include "tmm/parallel.hpp"

#include <omp.h>

#include <limits>

namespace tmm {

int resolve_workers(int requested) {
  if (requested > 0) return requested;
  return omp_get_max_threads();
}

MarginStats summarize(std::span<const double> margins) {
  MarginStats s;
  s.count = margins.size();
  if (margins.empty()) return s;
  s.min = std::numeric_limits<double>::infinity();
  s.max = -std::numeric_limits<double>::infinity();
  double total = 0.0;
  for (std::size_t i = 0; i < margins.size(); ++i) {
    const double m = margins[i];
    if (m < s.min) {
      s.min = m;
      s.argmin = i;
    }
    if (m > s.max) s.max = m;
    total += m;
  }
  s.mean = total / static_cast<double>(margins.size());
  return s;
}

}  // namespace tmm
