#pragma once

// Truncated power series and the Hankel-matrix tests for trace minmaxity.

#include <filesystem>
#include <span>
#include <vector>

#include "tmm/linalg.hpp"

namespace tmm {

/// Truncated Taylor series sum_{n<=N} coeffs[n] (x - center)^n.
struct PowerSeries {
  double center = 0.0;
  std::vector<double> coeffs;

  PowerSeries() = default;
  PowerSeries(double c, std::vector<double> a) : center(c), coeffs(std::move(a)) {}

  int order() const { return static_cast<int>(coeffs.size()) - 1; }
  double operator[](int n) const { return coeffs.at(static_cast<std::size_t>(n)); }

  /// Horner evaluation at x, in powers of x - center.
  double eval(double x) const;
  PowerSeries derivative() const;
  PowerSeries truncated(int order) const;
};

PowerSeries operator+(const PowerSeries& a, const PowerSeries& b);
PowerSeries operator*(const PowerSeries& a, const PowerSeries& b);
PowerSeries operator*(double s, const PowerSeries& a);

/// Coefficients of -log g to the same order. Requires g[0] > 0.
PowerSeries series_log_neg(const PowerSeries& g);

/// Same, accumulating the recurrence in double-double arithmetic.
PowerSeries series_log_neg_compensated(const PowerSeries& g);

/// First-order propagation of absolute coefficient errors through -log g.
/// Returns error bars for each coefficient of series_log_neg(g).
std::vector<double> series_log_neg_error(const PowerSeries& g, std::span<const double> g_err);

/// Coefficients of exp(g) to the same order.
PowerSeries series_exp(const PowerSeries& g);

/// Reads one coefficient per line (blank lines and '#' comments skipped).
PowerSeries load_series_csv(const std::filesystem::path& path, double center = 0.0);
void save_series_csv(const std::filesystem::path& path, const PowerSeries& p);

/// Index window of a Hankel truncation: entries use coefficient index
/// start + i + j for 0 <= i, j < size.
struct HankelSpec {
  int start = 2;
  int size = 2;
  bool weighted = true;

  /// Largest size supported in plain double precision.
  static constexpr int kMaxDoubleSize = 12;
  static constexpr int kMaxCompensatedSize = 20;

  /// start even and >= 2, size >= 1, and start + 2(size-1) <= order.
  void validate(int series_order) const;
};

enum class HankelPrecision { Double, Compensated };

/// M_ij = (s+i+j) a_{s+i+j} when weighted, a_{s+i+j} otherwise.
HermitianMatrix build_hankel(const PowerSeries& p, const HankelSpec& spec);

struct HankelVerdict {
  bool psd = false;
  double min_eig = 0.0;
  double max_eig = 0.0;
  double threshold = 0.0;  ///< verdict requires min_eig >= -threshold
  std::vector<double> eigenvalues;
};

/// PSD verdict on the size x size truncation. The tolerance is relative to
/// the largest entry magnitude. Compensated precision runs a double-double
/// Jacobi eigensolver and admits sizes up to kMaxCompensatedSize.
HankelVerdict hankel_psd_test(const PowerSeries& p, const HankelSpec& spec, double tol,
                              HankelPrecision precision = HankelPrecision::Double);

/// Eigenvalues of a real symmetric matrix via cyclic Jacobi in double-double.
std::vector<double> symmetric_eigenvalues_compensated(const Eigen::MatrixXd& m);

/// Hilbert-type matrix [1 / (s + i + j)]_{i,j < m}.
Eigen::MatrixXd hilbert_matrix(int s, int m);

/// Max entrywise deviation between [1/(s+i+j)] o (weighted Hankel) and the
/// unweighted Hankel.
double weighted_to_unweighted_check(const PowerSeries& p, int s, int m);

struct ShiftSearch {
  int first_passing_k = 0;  ///< 0 when no k in 1..k_max passes
  std::vector<HankelVerdict> verdicts;  ///< index k-1
};

/// Tests shifts s = 2k for k = 1..k_max and reports the first passing k.
ShiftSearch first_passing_shift(const PowerSeries& p, int size, int k_max, bool weighted, double tol);

}  // namespace tmm
