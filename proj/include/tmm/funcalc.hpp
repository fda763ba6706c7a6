#pragma once

// Matrix functional calculus f(X) and its Frechet derivatives.

#include <span>

#include "tmm/linalg.hpp"
#include "tmm/scalar_function.hpp"

namespace tmm {

/// Eigenvalue pairs closer than this (relative to max(1, |spectrum|)) use the
/// midpoint derivative in place of the divided difference.
inline constexpr double kDividedDifferenceMerge = 1e-8;

/// f[x, y] with f[x, x] = f'(x).
double divided_difference(const ScalarFunction& f, double x, double y, double scale = 1.0);

/// Loewner matrix [f[x_i, x_j]].
Eigen::MatrixXd loewner_matrix(const ScalarFunction& f, std::span<const double> points);

/// Throws DomainError naming the first eigenvalue of x outside f's domain.
void require_spectrum_in_domain(const ScalarFunction& f, const HermitianMatrix& x);

/// f(X) = U diag(f(lambda_i)) U^*.
HermitianMatrix apply(const ScalarFunction& f, const HermitianMatrix& x);

/// tr f(X) from the eigenvalues alone.
double trace_apply(const ScalarFunction& f, const HermitianMatrix& x);

/// Df(X)[H] in Daleckii-Krein form.
HermitianMatrix frechet(const ScalarFunction& f, const HermitianMatrix& x, const HermitianMatrix& h);

/// |tr Df(X)[H] - tr H f'(X)| / max(1, |tr H f'(X)|).
double trace_duality_residual(const ScalarFunction& f, const HermitianMatrix& x, const HermitianMatrix& h);

/// tr D^2 f(X)[H, K] = tr H Df'(X)[K]. Throws DomainError if the spectrum of
/// X + tH + sK leaves the domain for |t|, |s| <= step.
double second_derivative_trace(const ScalarFunction& f, const HermitianMatrix& x, const HermitianMatrix& h,
                               const HermitianMatrix& k, double step = 1e-4);

/// Mixed central difference of g(s, t) = tr f(X + tH + sK) at the origin.
double second_derivative_trace_fd(const ScalarFunction& f, const HermitianMatrix& x, const HermitianMatrix& h,
                                  const HermitianMatrix& k, double step = 1e-4);

/// Max entrywise |f(U^* X U) - U^* f(X) U|. U must be unitary within 1e-12.
double unitary_equivariance_residual(const ScalarFunction& f, const HermitianMatrix& x, const CMatrix& u);

}  // namespace tmm
