#include "tmm/inequality.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "tmm/error.hpp"
#include "tmm/funcalc.hpp"
#include "tmm/random.hpp"

namespace tmm {

namespace {
constexpr double kReferenceWidth = 4.0;
constexpr double kEdgeFraction = 0.05;
constexpr double kInf = std::numeric_limits<double>::infinity();
}  // namespace

OrderedQuadruple::OrderedQuadruple(HermitianMatrix a, HermitianMatrix b, HermitianMatrix c, Interval interval,
                                   std::uint64_t seed)
    : a_(std::move(a)), b_(std::move(b)), c_(std::move(c)), interval_(interval), seed_(seed) {
  if (a_.dim() != b_.dim() || b_.dim() != c_.dim()) throw InvalidInput("quadruple matrices differ in dimension");
  if (!interval_.valid()) throw InvalidInput("quadruple interval is empty");
  if (!loewner_leq(a_, b_, kOrderTol)) throw PreconditionError("quadruple violates A <= B");
  if (!loewner_leq(b_, c_, kOrderTol)) throw PreconditionError("quadruple violates B <= C");
  if (!interval_.contains(a_.min_eigenvalue()) || !interval_.contains(c_.max_eigenvalue())) {
    std::ostringstream os;
    os.precision(17);
    os << "quadruple spectra [" << a_.min_eigenvalue() << ", " << c_.max_eigenvalue() << "] not inside ("
       << interval_.lo << ", " << interval_.hi << ")";
    throw PreconditionError(os.str());
  }
  d_ = HermitianMatrix::symmetrize(a_.entries() + c_.entries() - b_.entries());
}

OrderedQuadruple OrderedQuadruple::swapped_bd() const {
  OrderedQuadruple out = *this;
  std::swap(out.b_, out.d_);
  return out;
}

Interval sampling_window(const Interval& interval) {
  if (!interval.valid()) throw InvalidInput("interval is empty");
  Interval virt = interval;
  if (!std::isfinite(virt.lo) && !std::isfinite(virt.hi)) {
    virt = {-0.5 * kReferenceWidth, 0.5 * kReferenceWidth};
  } else if (!std::isfinite(virt.hi)) {
    virt.hi = virt.lo + kReferenceWidth;
  } else if (!std::isfinite(virt.lo)) {
    virt.lo = virt.hi - kReferenceWidth;
  }
  const double margin = kEdgeFraction * virt.width();
  return {virt.lo + margin, virt.hi - margin};
}

namespace {

// Random sub-window [start, start + width] of the sampling window.
std::pair<double, double> random_subwindow(const Interval& interval, Rng& rng) {
  const Interval w = sampling_window(interval);
  std::uniform_real_distribution<double> frac(0.25, 1.0);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const double width = frac(rng) * w.width();
  const double start = w.lo + unit(rng) * (w.width() - width);
  return {start, width};
}

HermitianMatrix affine(const HermitianMatrix& x, double alpha, double beta) {
  CMatrix m = alpha * x.entries();
  m.diagonal().array() += beta;
  return HermitianMatrix::symmetrize(m);
}

// Maps spec(x) onto [start, start + width].
HermitianMatrix fit_to_window(const HermitianMatrix& x, double start, double width) {
  const double lo = x.min_eigenvalue();
  const double hi = x.max_eigenvalue();
  const double alpha = hi > lo ? width / (hi - lo) : 0.0;
  const double beta = hi > lo ? start - alpha * lo : start + 0.5 * width - lo;
  return affine(x, hi > lo ? alpha : 1.0, beta);
}

double min_eig(const CMatrix& m) { return HermitianMatrix::symmetrize(m).min_eigenvalue(); }

}  // namespace

OrderedQuadruple sample_quadruple(int n, const Interval& interval, std::uint64_t seed) {
  if (n < 1) throw InvalidInput("dimension must be at least 1");
  Rng rng(seed);
  std::uniform_int_distribution<int> rank(1, n);
  const HermitianMatrix a0 = random_hermitian(n, rng);
  const HermitianMatrix b0 = a0 + random_gram(n, rank(rng), rng);
  const HermitianMatrix c0 = b0 + random_gram(n, rank(rng), rng);
  const auto [start, width] = random_subwindow(interval, rng);
  const double lo = a0.min_eigenvalue();
  const double hi = c0.max_eigenvalue();
  double alpha = 1.0;
  double beta = start + 0.5 * width - lo;
  if (hi > lo) {
    alpha = width / (hi - lo);
    beta = start - alpha * lo;
  }
  return OrderedQuadruple(affine(a0, alpha, beta), affine(b0, alpha, beta), affine(c0, alpha, beta), interval, seed);
}

double trace_minmax_margin(const ScalarFunction& f, const OrderedQuadruple& q) {
  const double outer = trace_apply(f, q.A()) + trace_apply(f, q.C());
  const double inner = trace_apply(f, q.B()) + trace_apply(f, q.D());
  return outer - inner;
}

namespace {
// sum_i log g(lambda_i); nullopt when g vanishes somewhere.
std::optional<double> log_det_apply(const ScalarFunction& g, const HermitianMatrix& x) {
  require_spectrum_in_domain(g, x);
  const RVector& ev = x.eigenvalues();
  double acc = 0.0;
  for (Eigen::Index i = 0; i < ev.size(); ++i) {
    const double v = g.eval(ev(i));
    if (v < 0.0) {
      std::ostringstream os;
      os << "'" << g.name() << "' is negative (" << v << ") at spectrum point " << ev(i);
      throw PreconditionError(os.str());
    }
    if (v == 0.0) return std::nullopt;
    acc += std::log(v);
  }
  return acc;
}
}  // namespace

DetMargin det_isoperimetric_margin(const ScalarFunction& g, const OrderedQuadruple& q) {
  const auto la = log_det_apply(g, q.A());
  const auto lb = log_det_apply(g, q.B());
  const auto lc = log_det_apply(g, q.C());
  const auto ld = log_det_apply(g, q.D());
  if (!la || !lb || !lc || !ld) return {-kInf, true};
  return {(*lb + *ld) - (*la + *lc), false};
}

std::pair<double, double> det_linear_t_range(const OrderedQuadruple& q) {
  const double na = q.A().spectral_radius();
  const double nc = q.C().spectral_radius();
  return {na > 0 ? -1.0 / na : -kInf, nc > 0 ? 1.0 / nc : kInf};
}

ElementaryReport elementary_suite(const OrderedQuadruple& q, double t) {
  const auto [tlo, thi] = det_linear_t_range(q);
  if (!(t > tlo && t < thi)) {
    std::ostringstream os;
    os << "t = " << t << " outside (" << tlo << ", " << thi << ")";
    throw PreconditionError(os.str());
  }
  ElementaryReport r;
  r.t = t;
  r.linear_residual = std::abs((q.A().trace() + q.C().trace()) - (q.B().trace() + q.D().trace()));
  const double fa = q.A().frobenius_norm();
  const double fb = q.B().frobenius_norm();
  const double fc = q.C().frobenius_norm();
  const double fd = q.D().frobenius_norm();
  r.linear_scale = std::max(1.0, fa + fb + fc + fd);
  r.frobenius_squared_margin = (fa * fa + fc * fc) - (fb * fb + fd * fd);
  r.frobenius_plain_margin = (fa + fc) - (fb + fd);
  const ScalarFunction g = fn::polynomial({1.0, -t}, "1-tx");
  r.det_linear_margin = det_isoperimetric_margin(g, q).margin;
  return r;
}

DetMargin isoperimetric_check(const OrderedQuadruple& q) {
  if (!is_psd(q.A(), OrderedQuadruple::kOrderTol)) throw PreconditionError("isoperimetric check requires 0 <= A");
  if (q.A().min_eigenvalue() <= 0.0) return {-kInf, true};
  const ScalarFunction g = fn::linear();
  return det_isoperimetric_margin(g, q);
}

MonotoneReport matrix_monotone_margin(const ScalarFunction& g, const Interval& interval, int n, std::uint64_t seed) {
  const OrderedQuadruple q = sample_quadruple(n, interval, seed);
  MonotoneReport r;
  r.pair_margin = min_eig(apply(g, q.B()).entries() - apply(g, q.A()).entries());
  Rng rng(splitmix64(seed ^ 0x4C4F45574E4552ULL));
  const auto [start, width] = random_subwindow(interval, rng);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const int m = std::max(2, n);
  for (int i = 0; i < m; ++i) r.points.push_back(start + width * unit(rng));
  std::sort(r.points.begin(), r.points.end());
  const Eigen::MatrixXd l = loewner_matrix(g, r.points);
  r.loewner_margin = HermitianMatrix(l).min_eigenvalue();
  return r;
}

double matrix_convex_margin(const ScalarFunction& f, const Interval& interval, int n, std::uint64_t seed) {
  if (n < 1) throw InvalidInput("dimension must be at least 1");
  Rng rng(seed);
  const auto [s1, w1] = random_subwindow(interval, rng);
  const HermitianMatrix a = fit_to_window(random_hermitian(n, rng), s1, w1);
  const auto [s2, w2] = random_subwindow(interval, rng);
  const HermitianMatrix b = fit_to_window(random_hermitian(n, rng), s2, w2);
  const HermitianMatrix mid = 0.5 * (a + b);
  const CMatrix gap = 0.5 * (apply(f, a).entries() + apply(f, b).entries()) - apply(f, mid).entries();
  return min_eig(gap);
}

// ---------------------------------------------------------------------------

int trial_dimension(const CampaignSpec& spec, std::size_t i) {
  const int span = spec.n_max - spec.n_min + 1;
  return spec.n_min + static_cast<int>(i % static_cast<std::size_t>(span));
}

std::optional<InequalityKind> parse_inequality_kind(const std::string& name) {
  for (InequalityKind k : {InequalityKind::TraceMinmax, InequalityKind::DetIsoperimetric, InequalityKind::Isoperimetric,
                           InequalityKind::LinearIdentity, InequalityKind::Frobenius, InequalityKind::DetLinear})
    if (to_string(k) == name) return k;
  return std::nullopt;
}

std::string to_string(InequalityKind kind) {
  switch (kind) {
    case InequalityKind::TraceMinmax: return "trace_minmax";
    case InequalityKind::DetIsoperimetric: return "det_isoperimetric";
    case InequalityKind::Isoperimetric: return "isoperimetric";
    case InequalityKind::LinearIdentity: return "linear";
    case InequalityKind::Frobenius: return "frobenius";
    case InequalityKind::DetLinear: return "detlinear";
  }
  return "unknown";
}

TrialReport evaluate_quadruple(InequalityKind kind, const ScalarFunction* f, const OrderedQuadruple& q, double tol,
                               int t_samples) {
  const bool needs_f = kind == InequalityKind::TraceMinmax || kind == InequalityKind::DetIsoperimetric;
  if (needs_f && f == nullptr) throw InvalidInput(to_string(kind) + " needs a function");
  const std::uint64_t seed = q.seed();
  TrialReport r;
  r.seed = seed;
  r.dim = q.dim();
  switch (kind) {
    case InequalityKind::TraceMinmax:
      r.margin = trace_minmax_margin(*f, q);
      break;
    case InequalityKind::DetIsoperimetric: {
      const DetMargin d = det_isoperimetric_margin(*f, q);
      r.margin = d.margin;
      r.degenerate = d.degenerate;
      break;
    }
    case InequalityKind::Isoperimetric: {
      const DetMargin d = isoperimetric_check(q);
      r.margin = d.margin;
      r.degenerate = d.degenerate;
      break;
    }
    case InequalityKind::LinearIdentity: {
      const ElementaryReport l = elementary_suite(q, 0.0);
      r.margin = -l.linear_residual / l.linear_scale;
      break;
    }
    case InequalityKind::Frobenius:
      r.margin = elementary_suite(q, 0.0).frobenius_squared_margin;
      break;
    case InequalityKind::DetLinear: {
      auto [lo, hi] = det_linear_t_range(q);
      lo = std::max(lo, -1e6);
      hi = std::min(hi, 1e6);
      Rng rng(splitmix64(seed ^ 0x7453414D504C45ULL));
      std::uniform_real_distribution<double> unit(0.025, 0.975);
      r.margin = kInf;
      for (int s = 0; s < t_samples; ++s) {
        const double t = lo + (hi - lo) * unit(rng);
        r.margin = std::min(r.margin, elementary_suite(q, t).det_linear_margin);
      }
      break;
    }
  }
  if (!r.degenerate && r.margin < -tol) r.witness = q;
  return r;
}

TrialReport run_trial(InequalityKind kind, const ScalarFunction* f, const Interval& interval, int n,
                      std::uint64_t seed, double tol, int t_samples) {
  const bool needs_f = kind == InequalityKind::TraceMinmax || kind == InequalityKind::DetIsoperimetric;
  if (needs_f && f == nullptr) throw InvalidInput(to_string(kind) + " needs a function");
  return evaluate_quadruple(kind, f, sample_quadruple(n, interval, seed), tol, t_samples);
}

namespace {
CampaignResult reduce(std::vector<TrialReport> trials) {
  CampaignResult out;
  out.margins.reserve(trials.size());
  std::vector<double> valid;
  valid.reserve(trials.size());
  std::vector<std::size_t> valid_index;
  for (std::size_t i = 0; i < trials.size(); ++i) {
    out.margins.push_back(trials[i].margin);
    if (trials[i].degenerate) {
      ++out.degenerate;
      continue;
    }
    valid.push_back(trials[i].margin);
    valid_index.push_back(i);
    if (trials[i].witness) ++out.violations;
  }
  out.stats = summarize(valid);
  if (!valid.empty()) {
    const std::size_t worst = valid_index[out.stats.argmin];
    out.stats.argmin = worst;
    out.worst_seed = trials[worst].seed;
    out.worst_dim = trials[worst].dim;
    out.witness = std::move(trials[worst].witness);
  }
  return out;
}

template <class Mapper>
CampaignResult campaign(InequalityKind kind, const ScalarFunction* f, const CampaignSpec& spec, int t_samples,
                        Mapper&& map) {
  if (spec.trials < 1) throw InvalidInput("trial count must be at least 1");
  if (spec.n_min < 1 || spec.n_max < spec.n_min) throw InvalidInput("bad dimension range");
  if (!(spec.tol > 0)) throw InvalidInput("tolerance must be positive");
  auto trial = [&](std::size_t i) {
    return run_trial(kind, f, spec.interval, trial_dimension(spec, i), trial_seed(spec.master_seed, i), spec.tol,
                     t_samples);
  };
  return reduce(map(spec.trials, trial));
}
}  // namespace

CampaignResult run_campaign(InequalityKind kind, const ScalarFunction* f, const CampaignSpec& spec, int t_samples) {
  return campaign(kind, f, spec, t_samples,
                  [&](std::size_t count, auto& trial) { return parallel_map(count, trial, spec.workers); });
}

CampaignResult run_campaign_serial(InequalityKind kind, const ScalarFunction* f, const CampaignSpec& spec,
                                   int t_samples) {
  return campaign(kind, f, spec, t_samples, [](std::size_t count, auto& trial) { return serial_map(count, trial); });
}

}  // namespace tmm
