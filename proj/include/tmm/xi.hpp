#pragma once

// Riemann's Xi on the real axis via the cosine transform
//   Xi(z) = 2 int_0^inf Phi(u) cos(zu) du,
//   Phi(u) = 2 sum_n (2 pi^2 n^4 e^{9u/2} - 3 pi n^2 e^{5u/2}) exp(-pi n^2 e^{2u}),
// evaluated by the trapezoid rule over the whole line (Phi is even and
// analytic in a strip, so the rule converges exponentially in the step).

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "tmm/inequality.hpp"
#include "tmm/scalar_function.hpp"
#include "tmm/series.hpp"

namespace tmm {

struct XiQuadrature {
  double step = 1.0 / 256.0;
  double cutoff = 2.25;  ///< Phi(2.25) ~ 1e-120
  int theta_terms = 6;
};

class XiEvaluator {
 public:
  static constexpr double kMaxAbsZ = 50.0;
  static constexpr double kMaxAbsCenter = 14.0;

  explicit XiEvaluator(XiQuadrature q = {}, std::vector<double> zero_table = {});

  const XiQuadrature& quadrature() const { return q_; }
  int node_count() const { return static_cast<int>(phi_.size()); }
  const std::vector<double>& zero_table() const { return zeros_; }
  /// Same evaluator with the step halved.
  XiEvaluator refined() const;

  /// Phi at u (even in u).
  double phi(double u) const;

  /// Xi^{(k)}(z) = int_R Phi(u) u^k cos(zu + k pi/2) du, with an error bar
  /// |T(h) - T(2h)| + 10 eps h sum |integrand|.
  struct Value {
    double value = 0.0;
    double error = 0.0;
  };
  Value derivative(double z, int k) const;

  /// Throws DomainError for |z| > kMaxAbsZ.
  double eval(double z) const { return derivative(z, 0).value; }
  double deriv(double z) const { return derivative(z, 1).value; }
  double deriv2(double z) const { return derivative(z, 2).value; }

 private:
  XiQuadrature q_;
  std::vector<double> phi_;  ///< Phi(j h), j = 0..J
  std::vector<double> zeros_;
};

/// Evenness residual max |Xi(z) - Xi(-z)| / |Xi(0)| over a grid on [-z_max, z_max].
double xi_evenness_residual(const XiEvaluator& e, double z_max = 20.0, int points = 401);

/// Taylor series of Xi about r with per-coefficient error bars
/// (double-double accumulation past index 10). Requires |r| < 14.
struct SeriesWithError {
  PowerSeries series;
  std::vector<double> error;
};
SeriesWithError xi_taylor(const XiEvaluator& e, double r, int order);

/// Series of -log Xi(z + r) with propagated error bars.
SeriesWithError xi_neg_log_taylor(const XiEvaluator& e, double r, int order);

/// -log of the truncated model Xi(0) prod (1 - z^2/gamma_i^2) exp(-tail z^2)
/// about r, tail = sum_{i > M} 1/(1/4 + gamma_i^2). Error bars cover rounding
/// in this model only; it differs from -log Xi by the omitted zeros, about
/// sum_{i > M} gamma_i^-4 in each coefficient. `defect` replaces ordinate
/// `index` by the complex pair gamma +- i offset.
struct ZeroDefect {
  std::size_t index = 0;
  double offset = 3.0;
};
SeriesWithError product_neg_log_taylor(const std::vector<double>& zeros, double r, int order,
                                       std::optional<ZeroDefect> defect = std::nullopt);

enum class Verdict { Pass, Inconclusive, Fail };
std::string to_string(Verdict v);
/// PASS if min_eig >= -err, INCONCLUSIVE if within 3 err, FAIL otherwise.
Verdict classify(double min_eig, double err);
/// Worst of two verdicts.
Verdict combine(Verdict a, Verdict b);

struct HankelItem {
  int k = 1;  ///< shift 2k
  int m = 2;  ///< size
  bool weighted = true;
  double min_eig = 0.0;
  double error_bar = 0.0;
  Verdict verdict = Verdict::Pass;
  std::vector<double> eigenvalues;
};

struct RhHankelReport {
  double r = 0.0;
  int k_max = 0;
  int m_max = 0;
  SeriesWithError neg_log;
  std::vector<HankelItem> items;
  double schur_residual = 0.0;  ///< max weighted -> unweighted identity defect
  bool weighted_implies_unweighted = true;
  Verdict verdict = Verdict::Pass;
};

/// Hankel criteria on a -log series: weighted and unweighted matrices at
/// shifts 2k (k = 1..k_max) and sizes 2..m_max.
RhHankelReport hankel_report(const SeriesWithError& neg_log, int m_max, int k_max);
/// Same, on -log Xi(z + r) from the quadrature.
RhHankelReport rh_hankel_report(const XiEvaluator& e, double r, int m_max, int k_max);

/// f = -log Xi on `interval` (inside (-14.13, 14.13)) with three derivatives
/// and Taylor access.
ScalarFunction xi_neg_log_function(const XiEvaluator& e, const Interval& interval = {-13.0, 13.0});
/// Xi itself as a ScalarFunction (two derivatives).
ScalarFunction xi_function(const XiEvaluator& e, const Interval& interval = {-13.0, 13.0});

struct RhMatrixReport {
  int n = 0;
  std::size_t trials = 0;
  std::uint64_t seed = 0;
  Interval interval;
  double trace_minmax_min = 0.0;
  double convexity_min = 0.0;      ///< n = 1 quadruples
  double duality_max_residual = 0.0;  ///< |det margin of Xi - trace margin of -log Xi|
  double monotone_pair_min = 0.0;     ///< f' on sampled A <= B
  double monotone_loewner_min = 0.0;  ///< Loewner matrices of f'
};
RhMatrixReport rh_matrix_checks(const XiEvaluator& e, int n, std::size_t trials, std::uint64_t seed,
                                const Interval& interval = {-13.0, 13.0}, int workers = 1);

/// xi(1/2) = -(1/8) pi^{-1/4} Gamma(1/4) zeta(1/2), with zeta by Borwein's
/// alternating-series acceleration; independent of the quadrature.
double xi_at_zero_closed_form();
double zeta_borwein(double s, int terms = 40);

/// Sum over the positive ordinates gamma of 1/(1/4 + gamma^2), i.e. the sum
/// of 1/rho over all nontrivial zeros, 1 + gamma_E/2 - log(4 pi)/2.
double xi_reciprocal_zero_sum();

struct CrossRow {
  double z = 0.0;
  double quadrature = 0.0;
  double product = 0.0;
  double relative_difference = 0.0;
  double bound = 0.0;  ///< relative truncation bound of the product
  bool within = false;
};
struct CrossValidation {
  double xi0_quadrature = 0.0;
  double xi0_closed_form = 0.0;
  double tail_sum = 0.0;  ///< sum over omitted zeros of 1/(1/4 + gamma^2)
  std::vector<CrossRow> rows;
  bool all_within = true;
};
/// Xi(0) prod (1 - z^2/gamma_i^2) exp(-z^2 tail) against the quadrature.
double xi_product_eval(const std::vector<double>& zeros, double z, double xi0, double tail_sum);
CrossValidation cross_validate(const XiEvaluator& e, const std::vector<double>& zeros, double z_max = 10.0,
                               int points = 41);

/// Smallest positive root, bracketed on a 0.25 grid and bisected to `tol`.
double xi_first_root(const XiEvaluator& e, double tol = 1e-12);

/// Positive ascending ordinates, one per line.
std::vector<double> load_zero_table(const std::filesystem::path& path);

nlohmann::json to_json(const RhHankelReport& r);
nlohmann::json to_json(const RhMatrixReport& r);
nlohmann::json to_json(const CrossValidation& c);

}  // namespace tmm
