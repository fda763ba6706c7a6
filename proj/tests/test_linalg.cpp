#include <gtest/gtest.h>

#include "tmm/error.hpp"
#include "tmm/linalg.hpp"
#include "tmm/random.hpp"

#include "oracles.hpp"

using namespace tmm;

TEST(Hermitian, RejectsNonSquareAndAsymmetric) {
  EXPECT_THROW(HermitianMatrix(CMatrix(CMatrix::Zero(2, 3))), InvalidInput);
  Eigen::MatrixXd m(2, 2);
  m << 1, 2, 3, 4;
  EXPECT_THROW(HermitianMatrix{m}, InvalidInput);
  CMatrix c(2, 2);
  c << Complex(1, 0), Complex(0, 1), Complex(0, 1), Complex(2, 0);  // symmetric, not Hermitian
  EXPECT_THROW(HermitianMatrix{c}, InvalidInput);
  c(1, 0) = Complex(0, -1);
  EXPECT_NO_THROW(HermitianMatrix{c});
}

TEST(Hermitian, SymmetryToleranceScalesWithEntries) {
  Eigen::MatrixXd m(2, 2);
  m << 1e6, 1.0, 1.0 + 1e-9, 1e6;  // relative asymmetry 1e-15
  EXPECT_NO_THROW(HermitianMatrix{m});
  m(1, 0) = 1.0 + 1e-6;
  EXPECT_THROW(HermitianMatrix{m}, InvalidInput);
}

TEST(Hermitian, EigenvaluesMatchGenericSolver) {
  Rng rng(7);
  for (int n = 1; n <= 8; ++n) {
    const HermitianMatrix x = random_hermitian(n, rng);
    // Real 2n x 2n embedding [Re -Im; Im Re] doubles each eigenvalue.
    Eigen::MatrixXd emb(2 * n, 2 * n);
    emb << x.entries().real(), -x.entries().imag(), x.entries().imag(), x.entries().real();
    const Eigen::VectorXd ref = oracle::real_eigs(emb);
    for (int i = 0; i < n; ++i) EXPECT_NEAR(x.eigenvalues()(i), ref(2 * i), 1e-12);
    EXPECT_LT(max_abs_diff(x.eigen().reconstruct(), x.entries()), 1e-12);
    EXPECT_LT(unitarity_defect(x.eigen().eigenvectors), 1e-12);
  }
}

TEST(Hermitian, TraceNormsAndAlgebra) {
  const HermitianMatrix d = HermitianMatrix::diagonal({-3.0, 1.0, 2.0});
  EXPECT_DOUBLE_EQ(d.trace(), 0.0);
  EXPECT_DOUBLE_EQ(d.spectral_radius(), 3.0);
  EXPECT_DOUBLE_EQ(d.max_abs_entry(), 3.0);
  EXPECT_DOUBLE_EQ(d.frobenius_norm(), std::sqrt(14.0));
  const HermitianMatrix s = d + HermitianMatrix::identity(3);
  EXPECT_DOUBLE_EQ(s.min_eigenvalue(), -2.0);
  EXPECT_DOUBLE_EQ((2.0 * d - d).max_eigenvalue(), 2.0);
  EXPECT_DOUBLE_EQ((-d).max_eigenvalue(), 3.0);
  EXPECT_EQ(HermitianMatrix::zero(4).dim(), 4);
}

TEST(Hermitian, LoewnerOrderAndPsd) {
  Rng rng(3);
  const HermitianMatrix a = random_hermitian(5, rng);
  const HermitianMatrix g = random_gram(5, 2, rng);
  EXPECT_TRUE(is_psd(g, 1e-12));
  EXPECT_TRUE(loewner_leq(a, a + g, 1e-12));
  EXPECT_FALSE(loewner_leq(a + g, a, 1e-12));
  EXPECT_FALSE(is_psd(HermitianMatrix::diagonal({1.0, -1e-6}), 1e-10));
}

TEST(Hermitian, DirectSumAndConjugation) {
  const HermitianMatrix x = HermitianMatrix::diagonal({1.0, 2.0});
  const HermitianMatrix y = HermitianMatrix::diagonal({-1.0});
  const HermitianMatrix s = direct_sum(x, y);
  EXPECT_EQ(s.dim(), 3);
  EXPECT_DOUBLE_EQ(s.min_eigenvalue(), -1.0);
  EXPECT_EQ(s(0, 2), Complex(0.0));
  Rng rng(11);
  const CMatrix u = random_unitary(3, rng);
  EXPECT_LT(unitarity_defect(u), 1e-13);
  const HermitianMatrix c = s.conjugate_by(u);
  EXPECT_NEAR(c.trace(), s.trace(), 1e-13);
  EXPECT_NEAR(c.min_eigenvalue(), -1.0, 1e-13);
  const CMatrix h = random_householder_unitary(4, 3, rng);
  EXPECT_LT(unitarity_defect(h), 1e-13);
}

TEST(Hermitian, CopiesShareDecomposition) {
  Rng rng(5);
  const HermitianMatrix x = random_hermitian(4, rng);
  const HermitianMatrix y = x;
  EXPECT_EQ(&x.eigen(), &y.eigen());
}

TEST(Random, TrialSeedsDependOnlyOnIndex) {
  EXPECT_EQ(trial_seed(1, 5), trial_seed(1, 5));
  EXPECT_NE(trial_seed(1, 5), trial_seed(1, 6));
  EXPECT_NE(trial_seed(1, 5), trial_seed(2, 5));
}
