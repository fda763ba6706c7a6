#include "tmm/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "tmm/error.hpp"

namespace tmm {

CMatrix SpectralDecomposition::reconstruct() const {
  return eigenvectors * eigenvalues.cast<Complex>().asDiagonal() * eigenvectors.adjoint();
}

HermitianMatrix::HermitianMatrix() : HermitianMatrix(CMatrix(CMatrix::Zero(1, 1))) {}

HermitianMatrix::HermitianMatrix(CMatrix entries) : cache_(std::make_shared<Cache>()) {
  if (entries.rows() != entries.cols()) {
    std::ostringstream os;
    os << "matrix is not square (" << entries.rows() << "x" << entries.cols() << ")";
    throw InvalidInput(os.str());
  }
  if (entries.rows() < 1) throw InvalidInput("matrix dimension must be at least 1");
  if (!entries.allFinite()) throw InvalidInput("matrix has non-finite entries");
  const double scale = std::max(1.0, entries.cwiseAbs().maxCoeff());
  const double asym = (entries - entries.adjoint()).cwiseAbs().maxCoeff();
  if (asym > kSymmetryTol * scale) {
    std::ostringstream os;
    os << "matrix is not Hermitian (max |X - X^*| = " << asym << ")";
    throw InvalidInput(os.str());
  }
  entries_ = 0.5 * (entries + entries.adjoint());
}

HermitianMatrix::HermitianMatrix(const Eigen::MatrixXd& entries)
    : HermitianMatrix(CMatrix(entries.cast<Complex>())) {}

HermitianMatrix HermitianMatrix::symmetrize(const CMatrix& m) {
  HermitianMatrix out;
  out.entries_ = 0.5 * (m + m.adjoint());
  out.cache_ = std::make_shared<Cache>();
  return out;
}

HermitianMatrix HermitianMatrix::identity(int n) {
  return HermitianMatrix(CMatrix(CMatrix::Identity(n, n)));
}

HermitianMatrix HermitianMatrix::zero(int n) {
  return HermitianMatrix(CMatrix(CMatrix::Zero(n, n)));
}

HermitianMatrix HermitianMatrix::diagonal(std::span<const double> values) {
  const int n = static_cast<int>(values.size());
  CMatrix m = CMatrix::Zero(n, n);
  for (int i = 0; i < n; ++i) m(i, i) = values[i];
  return HermitianMatrix(std::move(m));
}

HermitianMatrix HermitianMatrix::diagonal(std::initializer_list<double> values) {
  return diagonal(std::span<const double>(values.begin(), values.size()));
}

const SpectralDecomposition& HermitianMatrix::eigen() const {
  std::call_once(cache_->once, [this] {
    Eigen::SelfAdjointEigenSolver<CMatrix> solver(entries_, Eigen::ComputeEigenvectors);
    if (solver.info() != Eigen::Success) throw InvalidInput("eigensolver did not converge");
    cache_->value.eigenvalues = solver.eigenvalues();
    cache_->value.eigenvectors = solver.eigenvectors();
  });
  return cache_->value;
}

double HermitianMatrix::spectral_radius() const {
  const RVector& ev = eigenvalues();
  return std::max(std::abs(ev(0)), std::abs(ev(ev.size() - 1)));
}

double HermitianMatrix::trace() const { return entries_.trace().real(); }

double HermitianMatrix::max_abs_entry() const { return entries_.cwiseAbs().maxCoeff(); }

HermitianMatrix HermitianMatrix::conjugate_by(const CMatrix& u) const {
  if (u.rows() != dim() || u.cols() != dim()) throw InvalidInput("conjugating matrix has wrong shape");
  return symmetrize(u.adjoint() * entries_ * u);
}

namespace {
void require_same_dim(const HermitianMatrix& a, const HermitianMatrix& b) {
  if (a.dim() != b.dim()) {
    std::ostringstream os;
    os << "dimension mismatch: " << a.dim() << " vs " << b.dim();
    throw InvalidInput(os.str());
  }
}
}  // namespace

HermitianMatrix operator+(const HermitianMatrix& a, const HermitianMatrix& b) {
  require_same_dim(a, b);
  return HermitianMatrix::symmetrize(a.entries_ + b.entries_);
}

HermitianMatrix operator-(const HermitianMatrix& a, const HermitianMatrix& b) {
  require_same_dim(a, b);
  return HermitianMatrix::symmetrize(a.entries_ - b.entries_);
}

HermitianMatrix operator*(double s, const HermitianMatrix& a) {
  return HermitianMatrix::symmetrize(s * a.entries_);
}

SpectralDecomposition eigh(const HermitianMatrix& x) { return x.eigen(); }

bool is_psd(const HermitianMatrix& x, double tol) {
  if (tol < 0) throw PreconditionError("PSD tolerance must be nonnegative");
  return x.min_eigenvalue() >= -tol * std::max(1.0, x.max_abs_entry());
}

bool loewner_leq(const HermitianMatrix& a, const HermitianMatrix& b, double tol) {
  require_same_dim(a, b);
  return is_psd(b - a, tol);
}

HermitianMatrix direct_sum(const HermitianMatrix& x1, const HermitianMatrix& x2) {
  const int n1 = x1.dim();
  const int n2 = x2.dim();
  CMatrix m = CMatrix::Zero(n1 + n2, n1 + n2);
  m.topLeftCorner(n1, n1) = x1.entries();
  m.bottomRightCorner(n2, n2) = x2.entries();
  return HermitianMatrix(std::move(m));
}

double unitarity_defect(const CMatrix& u) {
  if (u.rows() != u.cols()) return INFINITY;
  const CMatrix eye = CMatrix::Identity(u.rows(), u.cols());
  return (u.adjoint() * u - eye).cwiseAbs().maxCoeff();
}

double max_abs_diff(const CMatrix& a, const CMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) throw InvalidInput("shape mismatch");
  return (a - b).cwiseAbs().maxCoeff();
}

}  // namespace tmm
