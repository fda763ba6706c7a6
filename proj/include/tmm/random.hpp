#pragma once

#include <cstdint>
#include <random>

#include "tmm/linalg.hpp"

namespace tmm {

using Rng = std::mt19937_64;

/// SplitMix64 finalizer.
std::uint64_t splitmix64(std::uint64_t x);

/// Per-trial seed derived from a master seed and a trial counter. Depends only
/// on (master, index), so results do not depend on how trials are scheduled.
std::uint64_t trial_seed(std::uint64_t master, std::uint64_t index);

/// n x n matrix with i.i.d. standard complex Gaussian entries
/// (real and imaginary parts each N(0, 1/2)).
CMatrix random_complex_gaussian(int n, int cols, Rng& rng);

/// GUE-style random Hermitian matrix, (G + G^*)/2.
HermitianMatrix random_hermitian(int n, Rng& rng);

/// G G^* for a complex Gaussian n x rank factor.
HermitianMatrix random_gram(int n, int rank, Rng& rng);

/// Haar-distributed unitary via QR of a complex Gaussian matrix.
CMatrix random_unitary(int n, Rng& rng);

/// Product of `reflections` random Householder reflectors.
CMatrix random_householder_unitary(int n, int reflections, Rng& rng);

}  // namespace tmm
