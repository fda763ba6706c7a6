#pragma once

// Reference computations that share no code with the library.

#include <cmath>
#include <complex>
#include <functional>

#include <Eigen/Dense>

namespace oracle {

using CMat = Eigen::MatrixXcd;

// exp(X) by scaling and squaring with a degree-18 Taylor polynomial.
inline CMat expm(const CMat& x) {
  const double norm = x.cwiseAbs().rowwise().sum().maxCoeff();
  int s = 0;
  while (norm / std::pow(2.0, s) > 0.25) ++s;
  const CMat y = x / std::pow(2.0, s);
  CMat term = CMat::Identity(x.rows(), x.cols());
  CMat acc = term;
  for (int k = 1; k <= 18; ++k) {
    term = term * y / static_cast<double>(k);
    acc += term;
  }
  for (int i = 0; i < s; ++i) acc = acc * acc;
  return acc;
}

// Central first derivative.
inline double diff(const std::function<double(double)>& f, double x, double h = 1e-5) {
  return (f(x + h) - f(x - h)) / (2.0 * h);
}

// Five-point second derivative.
inline double diff2(const std::function<double(double)>& f, double x, double h = 1e-3) {
  return (-f(x + 2 * h) + 16 * f(x + h) - 30 * f(x) + 16 * f(x - h) - f(x - 2 * h)) / (12 * h * h);
}

// Eigenvalues of a real symmetric 2x2 or general matrix via the
// characteristic-free power of Eigen's generic (non-selfadjoint) solver.
inline Eigen::VectorXd real_eigs(const Eigen::MatrixXd& m) {
  Eigen::EigenSolver<Eigen::MatrixXd> es(m);
  Eigen::VectorXd v = es.eigenvalues().real();
  std::sort(v.data(), v.data() + v.size());
  return v;
}

}  // namespace oracle
