#include "tmm/random.hpp"

#include <cmath>

namespace tmm {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

std::uint64_t trial_seed(std::uint64_t master, std::uint64_t index) {
  return splitmix64(splitmix64(master) ^ splitmix64(index + 0x632BE59BD9B4E019ULL));
}

CMatrix random_complex_gaussian(int n, int cols, Rng& rng) {
  std::normal_distribution<double> normal(0.0, std::sqrt(0.5));
  CMatrix g(n, cols);
  for (int j = 0; j < cols; ++j) {
    for (int i = 0; i < n; ++i) {
      const double re = normal(rng);
      const double im = normal(rng);
      g(i, j) = Complex(re, im);
    }
  }
  return g;
}

HermitianMatrix random_hermitian(int n, Rng& rng) {
  const CMatrix g = random_complex_gaussian(n, n, rng);
  return HermitianMatrix::symmetrize(g);
}

HermitianMatrix random_gram(int n, int rank, Rng& rng) {
  const CMatrix g = random_complex_gaussian(n, rank, rng);
  return HermitianMatrix::symmetrize(g * g.adjoint());
}

CMatrix random_unitary(int n, Rng& rng) {
  const CMatrix g = random_complex_gaussian(n, n, rng);
  Eigen::HouseholderQR<CMatrix> qr(g);
  CMatrix q = qr.householderQ();
  const CMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  // Fix the phase ambiguity so the distribution is Haar.
  for (int j = 0; j < n; ++j) {
    const double mag = std::abs(r(j, j));
    if (mag > 0) q.col(j) *= r(j, j) / mag;
  }
  return q;
}

CMatrix random_householder_unitary(int n, int reflections, Rng& rng) {
  CMatrix u = CMatrix::Identity(n, n);
  for (int k = 0; k < reflections; ++k) {
    Eigen::VectorXcd v = random_complex_gaussian(n, 1, rng).col(0);
    v /= v.norm();
    const CMatrix h = CMatrix::Identity(n, n) - 2.0 * v * v.adjoint();
    u = u * h;
  }
  return u;
}

}  // namespace tmm
