#include "tmm/funcalc.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "tmm/error.hpp"

namespace tmm {

double divided_difference(const ScalarFunction& f, double x, double y, double scale) {
  if (std::abs(x - y) < kDividedDifferenceMerge * std::max(1.0, scale)) return f.deriv(0.5 * (x + y));
  return (f.eval(x) - f.eval(y)) / (x - y);
}

Eigen::MatrixXd loewner_matrix(const ScalarFunction& f, std::span<const double> points) {
  const int m = static_cast<int>(points.size());
  double scale = 1.0;
  for (double p : points) scale = std::max(scale, std::abs(p));
  Eigen::MatrixXd l(m, m);
  for (int i = 0; i < m; ++i) {
    for (int j = i; j < m; ++j) {
      l(i, j) = divided_difference(f, points[static_cast<std::size_t>(i)], points[static_cast<std::size_t>(j)], scale);
      l(j, i) = l(i, j);
    }
  }
  return l;
}

void require_spectrum_in_domain(const ScalarFunction& f, const HermitianMatrix& x) {
  const RVector& ev = x.eigenvalues();
  for (Eigen::Index i = 0; i < ev.size(); ++i) {
    if (!f.domain().contains(ev(i))) {
      std::ostringstream os;
      os.precision(17);
      os << "eigenvalue " << ev(i) << " outside domain (" << f.domain().lo << ", " << f.domain().hi << ") of '"
         << f.name() << "'";
      throw DomainError(os.str(), ev(i));
    }
  }
}

HermitianMatrix apply(const ScalarFunction& f, const HermitianMatrix& x) {
  require_spectrum_in_domain(f, x);
  const SpectralDecomposition& sd = x.eigen();
  Eigen::VectorXd fv(sd.eigenvalues.size());
  for (Eigen::Index i = 0; i < fv.size(); ++i) fv(i) = f.eval(sd.eigenvalues(i));
  return HermitianMatrix::symmetrize(sd.eigenvectors * fv.cast<Complex>().asDiagonal() * sd.eigenvectors.adjoint());
}

double trace_apply(const ScalarFunction& f, const HermitianMatrix& x) {
  require_spectrum_in_domain(f, x);
  const RVector& ev = x.eigenvalues();
  double acc = 0.0;
  for (Eigen::Index i = 0; i < ev.size(); ++i) acc += f.eval(ev(i));
  return acc;
}

HermitianMatrix frechet(const ScalarFunction& f, const HermitianMatrix& x, const HermitianMatrix& h) {
  if (h.dim() != x.dim()) throw InvalidInput("perturbation dimension differs from base point");
  require_spectrum_in_domain(f, x);
  const SpectralDecomposition& sd = x.eigen();
  const std::span<const double> lambda(sd.eigenvalues.data(), static_cast<std::size_t>(sd.eigenvalues.size()));
  const Eigen::MatrixXd l = loewner_matrix(f, lambda);
  const CMatrix& u = sd.eigenvectors;
  const CMatrix rotated = u.adjoint() * h.entries() * u;
  const CMatrix schur = l.cast<Complex>().cwiseProduct(rotated);
  return HermitianMatrix::symmetrize(u * schur * u.adjoint());
}

double trace_duality_residual(const ScalarFunction& f, const HermitianMatrix& x, const HermitianMatrix& h) {
  const double lhs = frechet(f, x, h).trace();
  const HermitianMatrix fp = apply(f.derivative(), x);
  const double rhs = (h.entries() * fp.entries()).trace().real();
  return std::abs(lhs - rhs) / std::max(1.0, std::abs(rhs));
}

namespace {
void require_perturbed_spectra(const ScalarFunction& f, const HermitianMatrix& x, const HermitianMatrix& h,
                               const HermitianMatrix& k, double step) {
  for (double t : {-step, step}) {
    for (double s : {-step, step}) require_spectrum_in_domain(f, x + t * h + s * k);
  }
}
}  // namespace

double second_derivative_trace(const ScalarFunction& f, const HermitianMatrix& x, const HermitianMatrix& h,
                               const HermitianMatrix& k, double step) {
  if (h.dim() != x.dim() || k.dim() != x.dim()) throw InvalidInput("perturbation dimension differs from base point");
  require_perturbed_spectra(f, x, h, k, step);
  const HermitianMatrix dk = frechet(f.derivative(), x, k);
  return (h.entries() * dk.entries()).trace().real();
}

double second_derivative_trace_fd(const ScalarFunction& f, const HermitianMatrix& x, const HermitianMatrix& h,
                                  const HermitianMatrix& k, double step) {
  require_perturbed_spectra(f, x, h, k, step);
  auto g = [&](double t, double s) { return trace_apply(f, x + t * h + s * k); };
  return (g(step, step) - g(step, -step) - g(-step, step) + g(-step, -step)) / (4.0 * step * step);
}

double unitary_equivariance_residual(const ScalarFunction& f, const HermitianMatrix& x, const CMatrix& u) {
  if (u.rows() != x.dim() || u.cols() != x.dim()) throw InvalidInput("unitary has wrong shape");
  const double defect = unitarity_defect(u);
  if (defect > 1e-12) {
    std::ostringstream os;
    os << "matrix is not unitary (max |U^*U - I| = " << defect << ")";
    throw PreconditionError(os.str());
  }
  const HermitianMatrix lhs = apply(f, x.conjugate_by(u));
  const CMatrix rhs = u.adjoint() * apply(f, x).entries() * u;
  return max_abs_diff(lhs.entries(), rhs);
}

}  // namespace tmm
