#pragma once

// Hermitian matrices, spectral decomposition and the Loewner order.

#include <complex>
#include <memory>
#include <mutex>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace tmm {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using RVector = Eigen::VectorXd;

/// Eigenvalues ascending; eigenvectors are the columns of a unitary matrix.
struct SpectralDecomposition {
  RVector eigenvalues;
  CMatrix eigenvectors;

  CMatrix reconstruct() const;
};

/// Square self-adjoint complex matrix. Immutable; the spectral decomposition
/// is computed on first use and shared between copies.
class HermitianMatrix {
 public:
  /// Absolute symmetry tolerance, scaled by max(1, max |entry|).
  static constexpr double kSymmetryTol = 1e-14;

  HermitianMatrix();
  /// Validates squareness and Hermitian symmetry, then symmetrizes exactly.
  explicit HermitianMatrix(CMatrix entries);
  explicit HermitianMatrix(const Eigen::MatrixXd& entries);

  /// Skips the symmetry check; for results of algebra on Hermitian inputs
  /// whose asymmetry is pure rounding.
  static HermitianMatrix symmetrize(const CMatrix& m);

  static HermitianMatrix identity(int n);
  static HermitianMatrix zero(int n);
  static HermitianMatrix diagonal(std::span<const double> values);
  static HermitianMatrix diagonal(std::initializer_list<double> values);

  int dim() const { return static_cast<int>(entries_.rows()); }
  const CMatrix& entries() const { return entries_; }
  Complex operator()(int i, int j) const { return entries_(i, j); }

  const SpectralDecomposition& eigen() const;
  const RVector& eigenvalues() const { return eigen().eigenvalues; }
  double min_eigenvalue() const { return eigenvalues()(0); }
  double max_eigenvalue() const { return eigenvalues()(dim() - 1); }
  /// max |lambda|, which for a Hermitian matrix is also the operator 2-norm.
  double spectral_radius() const;

  double trace() const;
  double frobenius_norm() const { return entries_.norm(); }
  double max_abs_entry() const;

  /// U^* X U for a (not necessarily validated) square U.
  HermitianMatrix conjugate_by(const CMatrix& u) const;

  friend HermitianMatrix operator+(const HermitianMatrix& a, const HermitianMatrix& b);
  friend HermitianMatrix operator-(const HermitianMatrix& a, const HermitianMatrix& b);
  friend HermitianMatrix operator*(double s, const HermitianMatrix& a);
  HermitianMatrix operator-() const { return (-1.0) * *this; }

 private:
  struct Cache {
    std::once_flag once;
    SpectralDecomposition value;
  };

  CMatrix entries_;
  std::shared_ptr<Cache> cache_;
};

/// Spectral decomposition with ascending eigenvalues.
SpectralDecomposition eigh(const HermitianMatrix& x);

/// True iff min eigenvalue >= -tol * max(1, max |entry|).
bool is_psd(const HermitianMatrix& x, double tol);

/// A <= B in the Loewner order, i.e. is_psd(B - A, tol).
bool loewner_leq(const HermitianMatrix& a, const HermitianMatrix& b, double tol);

/// Block-diagonal direct sum X1 (+) X2.
HermitianMatrix direct_sum(const HermitianMatrix& x1, const HermitianMatrix& x2);

/// Max entrywise |U^* U - I|.
double unitarity_defect(const CMatrix& u);

/// Max entrywise modulus of a - b.
double max_abs_diff(const CMatrix& a, const CMatrix& b);

}  // namespace tmm
