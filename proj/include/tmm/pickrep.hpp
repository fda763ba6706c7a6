#pragma once

// Integral representation of trace minmax functions,
//   f(z) = alpha + beta z + sum_i w_i k(t_i, z, c),
//   k(t, z, c) = (-log(1 - t(z - c)) - t(z - c)) / t^2,   k(0, z, c) = (z - c)^2 / 2,
// and recovery of the atoms from Taylor coefficients via the moment identity
// n a_n = int t^{n-2} dmu.

#include <filesystem>
#include <vector>

#include "json.hpp"

#include "tmm/scalar_function.hpp"
#include "tmm/series.hpp"

namespace tmm {

struct Atom {
  double t = 0.0;  ///< location in [1/(a-c), 1/(b-c)]
  double w = 0.0;  ///< weight > 0
};

struct PickRepresentation {
  double alpha = 0.0;
  double beta = 0.0;
  double center = 0.0;
  Interval interval;
  std::vector<Atom> atoms;

  /// Closed support interval [1/(a-c), 1/(b-c)] (0 at an infinite end).
  std::pair<double, double> support() const;
  /// Throws PreconditionError unless atoms lie in support() (within `slack`)
  /// with positive weights and the center lies in the interval.
  void validate(double slack = 1e-9) const;
};

/// The representation kernel; the t = 0 value is the series limit (z-c)^2/2.
double kernel(double t, double z, double c);

/// d/dz kernel = (z - c) / (1 - t(z - c)).
double kernel_derivative(double t, double z, double c);

double eval_representation(const PickRepresentation& r, double z);
double eval_representation_derivative(const PickRepresentation& r, double z);

/// Taylor coefficients of the representation about its center.
PowerSeries representation_taylor(const PickRepresentation& r, int count);

using MomentSequence = std::vector<double>;

/// m_k = (k + 2) a_{k+2} for k = 0..N-2.
MomentSequence coeffs_to_moments(const PowerSeries& p);

/// Moments int t^k dmu of an atomic measure, k = 0..count-1.
MomentSequence atomic_moments(const std::vector<Atom>& atoms, int count);

struct RecoveredMeasure {
  std::vector<Atom> atoms;  ///< ascending in t
  int requested = 0;
  bool rank_deficient = false;  ///< fewer atoms than requested
};

struct RecoveryOptions {
  /// Relative tolerance on Cholesky pivots of the moment Hankel matrix.
  double tol = 1e-8;
  /// On an indefinite Hankel, keep the leading PSD block instead of throwing.
  bool truncate_on_failure = false;
};

/// Gauss-quadrature extraction (Golub-Welsch): Cholesky of the moment Hankel,
/// three-term recurrence, Jacobi-matrix eigenvalues as atom locations and
/// m_0 |first eigenvector component|^2 as weights. Uses m_0..m_{2K-1}
/// (and m_{2K} when present, to detect indefiniteness one order further).
/// Throws NotAMomentSequence on an indefinite Hankel unless truncating.
RecoveredMeasure recover_measure(const MomentSequence& m, int k_atoms, const RecoveryOptions& options = {});

struct RoundTrip {
  PickRepresentation representation;
  RecoveredMeasure measure;
  double residual = 0.0;  ///< max |f - representation| on the grid
  double radius = 0.0;    ///< grid half-width
};

/// Taylor coefficients at c -> moments -> atoms -> max error over 50 points
/// on [c - rho, c + rho], rho = half the distance from c to the domain edge
/// (1 when the domain is the whole line).
RoundTrip roundtrip(const ScalarFunction& f, double c, int k_atoms, const RecoveryOptions& options = {});
double roundtrip_residual(const ScalarFunction& f, double c, int k_atoms);

nlohmann::json representation_to_json(const PickRepresentation& r);
PickRepresentation representation_from_json(const nlohmann::json& j);

}  // namespace tmm
