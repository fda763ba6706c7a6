#pragma once

// Laguerre-Polya Hadamard products
//   h(x) = x^k exp(-a - b x - c x^2) prod_i (1 - x/rho_i)^{m_i} exp(m_i x / rho_i),  c >= 0.

#include <filesystem>
#include <optional>
#include <vector>

#include "tmm/scalar_function.hpp"
#include "tmm/series.hpp"

namespace tmm {

struct Root {
  double rho = 1.0;  ///< nonzero real root
  int multiplicity = 1;
};

/// Power sums sum_{i > M} rho_i^{-p} of the roots left out of a truncated
/// product, when known. Used to correct and bound truncation error.
struct TailSums {
  double s2 = 0.0;
  double s3 = 0.0;
  double s4_bound = 0.0;  ///< upper bound on sum |rho_i|^{-4}
};

struct HadamardProduct {
  int k = 0;
  double a = 0.0;
  double b = 0.0;
  double cq = 0.0;  ///< quadratic exponent, >= 0
  std::vector<Root> roots;
  std::optional<TailSums> tail;

  /// Throws InvalidInput unless cq >= 0, k >= 0 and roots are real, nonzero,
  /// with positive multiplicity.
  void validate() const;
  int truncation() const { return static_cast<int>(roots.size()); }
};

struct ProductValue {
  double value = 0.0;
  double log_abs = 0.0;  ///< -inf at a root
  int sign = 1;
  /// Relative error bound from truncation; nullopt when no tail data is known.
  std::optional<double> truncation_bound;
};

/// Log-domain evaluation of the (tail-corrected, when tail sums are known)
/// truncated product.
ProductValue eval_product(const HadamardProduct& h, double x);

/// 1/Gamma(x) = x e^{gamma x} prod_{n>=1} (1 + x/n) e^{-x/n}, truncated at
/// M roots, with exact tail power sums.
HadamardProduct reciprocal_gamma_product(int truncation);

/// Taylor coefficients of -log h about `center` from the listed roots.
/// Requires h(center) > 0.
PowerSeries neg_log_series(const HadamardProduct& h, double center, int order);

/// The product as a ScalarFunction on `interval`, with two derivatives and
/// Taylor access.
ScalarFunction product_function(const HadamardProduct& h, const Interval& interval);

/// Min eigenvalue of the weighted Hankel (start 2, given size) built from
/// the series of -log(g)/n_root at the interval midpoint. g must be positive
/// there and have Taylor access.
double radical_membership_margin(const ScalarFunction& g, const Interval& interval, int n_root, int size = 4,
                                 int order = 0);

/// One real root per line, '#' comments allowed.
std::vector<double> load_root_csv(const std::filesystem::path& path);

}  // namespace tmm
