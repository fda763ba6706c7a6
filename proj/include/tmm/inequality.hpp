#pragma once

// Loewner-ordered quadruples A <= B <= C, D = A + C - B, and the margins of
// every inequality checked over them.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

#include "tmm/linalg.hpp"
#include "tmm/parallel.hpp"
#include "tmm/scalar_function.hpp"

namespace tmm {

class OrderedQuadruple {
 public:
  static constexpr double kOrderTol = 1e-12;

  /// Validates A <= B <= C and spectrum confinement; D is computed as A + C - B.
  OrderedQuadruple(HermitianMatrix a, HermitianMatrix b, HermitianMatrix c, Interval interval, std::uint64_t seed = 0);

  const HermitianMatrix& A() const { return a_; }
  const HermitianMatrix& B() const { return b_; }
  const HermitianMatrix& C() const { return c_; }
  const HermitianMatrix& D() const { return d_; }
  const Interval& interval() const { return interval_; }
  std::uint64_t seed() const { return seed_; }
  int dim() const { return a_.dim(); }

  /// (A, D, C, B): also ordered, since D - A = C - B and C - D = B - A.
  OrderedQuadruple swapped_bd() const;

 private:
  HermitianMatrix a_, b_, c_, d_;
  Interval interval_;
  std::uint64_t seed_;
};

/// Interval spectra are mapped into: 5% in from finite ends. Unbounded ends
/// use a reference window of width 4 (see sample_quadruple).
Interval sampling_window(const Interval& interval);

/// Random A, B = A + G1 G1^*, C = B + G2 G2^*, affinely mapped so that
/// spec(A) and spec(C) fill a random sub-window of sampling_window(interval).
OrderedQuadruple sample_quadruple(int n, const Interval& interval, std::uint64_t seed);

/// tr f(A) + tr f(C) - tr f(B) - tr f(D).
double trace_minmax_margin(const ScalarFunction& f, const OrderedQuadruple& q);

struct DetMargin {
  double margin = 0.0;
  bool degenerate = false;  ///< g vanished on a spectrum point; margin is -inf
};

/// sum log g(spec B) + sum log g(spec D) - sum log g(spec A) - sum log g(spec C).
DetMargin det_isoperimetric_margin(const ScalarFunction& g, const OrderedQuadruple& q);

/// Admissible open range (-1/||A||, 1/||C||) for the det-linear check; infinite ends when a
/// norm vanishes.
std::pair<double, double> det_linear_t_range(const OrderedQuadruple& q);

struct ElementaryReport {
  double t = 0.0;
  double linear_residual = 0.0;  ///< |tr A + tr C - tr B - tr D|
  double linear_scale = 1.0;     ///< max(1, sum of Frobenius norms)
  double frobenius_squared_margin = 0.0;  ///< |A|_F^2 + |C|_F^2 - |B|_F^2 - |D|_F^2
  double frobenius_plain_margin = 0.0;    ///< |A|_F + |C|_F - |B|_F - |D|_F (reported only)
  double det_linear_margin = 0.0;          ///< det margin of g = 1 - t x
};

ElementaryReport elementary_suite(const OrderedQuadruple& q, double t);

/// log det B + log det D - log det A - log det C. Requires 0 <= A.
DetMargin isoperimetric_check(const OrderedQuadruple& q);

struct MonotoneReport {
  double pair_margin = 0.0;     ///< min eig of g(B) - g(A) for sampled A <= B
  double loewner_margin = 0.0;  ///< min eig of the Loewner matrix at sampled points
  std::vector<double> points;
};

MonotoneReport matrix_monotone_margin(const ScalarFunction& g, const Interval& interval, int n, std::uint64_t seed);

/// min eig of (f(A) + f(B))/2 - f((A + B)/2) for random A, B.
double matrix_convex_margin(const ScalarFunction& f, const Interval& interval, int n, std::uint64_t seed);

// ---------------------------------------------------------------------------
// Campaigns

struct CampaignSpec {
  std::size_t trials = 1000;
  std::uint64_t master_seed = 1;
  int n_min = 1;
  int n_max = 8;
  Interval interval;
  int workers = 1;
  double tol = 1e-10;
};

/// Dimension used by trial i: cycles through n_min..n_max.
int trial_dimension(const CampaignSpec& spec, std::size_t i);

struct TrialReport {
  double margin = 0.0;
  std::uint64_t seed = 0;
  int dim = 0;
  bool degenerate = false;
  std::optional<OrderedQuadruple> witness;  ///< present when margin < -tol
};

struct CampaignResult {
  std::vector<double> margins;  ///< per trial; degenerate trials excluded from stats
  MarginStats stats;
  std::size_t violations = 0;
  std::size_t degenerate = 0;
  std::uint64_t worst_seed = 0;
  int worst_dim = 0;
  std::optional<OrderedQuadruple> witness;  ///< worst violating quadruple
};

enum class InequalityKind { TraceMinmax, DetIsoperimetric, Isoperimetric, LinearIdentity, Frobenius, DetLinear };

/// One trial of `kind` (the det-linear check uses `t_samples` values of t per quadruple and
/// reports the smallest margin).
TrialReport run_trial(InequalityKind kind, const ScalarFunction* f, const Interval& interval, int n,
                      std::uint64_t seed, double tol, int t_samples = 10);

/// Margin of `kind` on a given quadruple; the det-linear check draws its t values from
/// q.seed(), so a replayed witness reproduces the sampled margin exactly.
TrialReport evaluate_quadruple(InequalityKind kind, const ScalarFunction* f, const OrderedQuadruple& q, double tol,
                               int t_samples = 10);

/// Parallel campaign with deterministic reduction. `f` is unused for kinds
/// that have a fixed function.
CampaignResult run_campaign(InequalityKind kind, const ScalarFunction* f, const CampaignSpec& spec,
                            int t_samples = 10);

/// Same campaign on the serial reference path.
CampaignResult run_campaign_serial(InequalityKind kind, const ScalarFunction* f, const CampaignSpec& spec,
                                   int t_samples = 10);

std::string to_string(InequalityKind kind);
std::optional<InequalityKind> parse_inequality_kind(const std::string& name);

// ---------------------------------------------------------------------------
// Replay files

nlohmann::json quadruple_to_json(const OrderedQuadruple& q);
OrderedQuadruple quadruple_from_json(const nlohmann::json& j);
void save_quadruple(const std::filesystem::path& path, const OrderedQuadruple& q, const std::string& function = {},
                    std::optional<double> margin = std::nullopt);
OrderedQuadruple load_quadruple(const std::filesystem::path& path);

}  // namespace tmm
