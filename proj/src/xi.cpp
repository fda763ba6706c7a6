#include "tmm/xi.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <memory>
#include <numbers>
#include <sstream>

#include "tmm/ddouble.hpp"
#include "tmm/error.hpp"
#include "tmm/lpclass.hpp"
#include "tmm/parallel.hpp"
#include "tmm/random.hpp"

namespace tmm {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();
constexpr double kPi = std::numbers::pi;

// cos(x + k pi/2) with the phase taken exactly.
double shifted_cos(double x, int k) {
  switch (k & 3) {
    case 0: return std::cos(x);
    case 1: return -std::sin(x);
    case 2: return -std::cos(x);
    default: return std::sin(x);
  }
}

nlohmann::json bound_json(double v) { return std::isfinite(v) ? nlohmann::json(v) : nlohmann::json(nullptr); }

}  // namespace

XiEvaluator::XiEvaluator(XiQuadrature q, std::vector<double> zero_table) : q_(q), zeros_(std::move(zero_table)) {
  if (!(q_.step > 0.0 && q_.step <= 0.1)) throw InvalidInput("xi quadrature step must lie in (0, 0.1]");
  if (!(q_.cutoff >= 1.5)) throw InvalidInput("xi quadrature cutoff must be at least 1.5");
  if (q_.theta_terms < 3) throw InvalidInput("xi theta series needs at least 3 terms");
  const int nodes = static_cast<int>(std::ceil(q_.cutoff / q_.step));
  phi_.resize(static_cast<std::size_t>(nodes) + 1);
  for (int j = 0; j <= nodes; ++j) phi_[static_cast<std::size_t>(j)] = phi(j * q_.step);
}

XiEvaluator XiEvaluator::refined() const {
  XiQuadrature q = q_;
  q.step *= 0.5;
  return XiEvaluator(q, zeros_);
}

double XiEvaluator::phi(double u) const {
  u = std::abs(u);
  const double e2 = std::exp(2.0 * u);
  const double e9 = std::exp(4.5 * u);
  const double e5 = std::exp(2.5 * u);
  double acc = 0.0;
  for (int n = q_.theta_terms; n >= 1; --n) {
    const double n2 = static_cast<double>(n) * n;
    acc += (2.0 * kPi * kPi * n2 * n2 * e9 - 3.0 * kPi * n2 * e5) * std::exp(-kPi * n2 * e2);
  }
  return 2.0 * acc;
}

XiEvaluator::Value XiEvaluator::derivative(double z, int k) const {
  if (!(std::abs(z) <= kMaxAbsZ)) {
    std::ostringstream os;
    os << "Xi evaluated at " << z << ", outside the validated range |z| <= " << kMaxAbsZ;
    throw DomainError(os.str(), z);
  }
  if (k < 0) throw InvalidInput("derivative order must be nonnegative");
  const double h = q_.step;
  // Integrand is even in u: T(h) = h [G(0) + 2 sum_{j>=1} G(jh)].
  const double g0 = k == 0 ? phi_[0] : 0.0;
  auto integrand = [&](std::size_t j) {
    const double u = static_cast<double>(j) * h;
    return phi_[j] * std::pow(u, k) * shifted_cos(z * u, k);
  };
  double abs_sum = std::abs(g0);
  double result = 0.0;
  double coarse = 0.0;
  if (k > 10) {
    DDouble all(0.0), even(0.0);
    for (std::size_t j = 1; j < phi_.size(); ++j) {
      const double g = integrand(j);
      all += DDouble(g);
      if (j % 2 == 0) even += DDouble(g);
      abs_sum += 2.0 * std::abs(g);
    }
    result = h * (g0 + 2.0 * double(all));
    coarse = 2.0 * h * (g0 + 2.0 * double(even));
  } else {
    double all = 0.0, even = 0.0;
    for (std::size_t j = 1; j < phi_.size(); ++j) {
      const double g = integrand(j);
      all += g;
      if (j % 2 == 0) even += g;
      abs_sum += 2.0 * std::abs(g);
    }
    result = h * (g0 + 2.0 * all);
    coarse = 2.0 * h * (g0 + 2.0 * even);
  }
  return {result, std::abs(result - coarse) + 10.0 * kEps * h * abs_sum};
}

double xi_evenness_residual(const XiEvaluator& e, double z_max, int points) {
  const double xi0 = std::abs(e.eval(0.0));
  double worst = 0.0;
  for (int i = 0; i < points; ++i) {
    const double z = z_max * i / std::max(1, points - 1);
    worst = std::max(worst, std::abs(e.eval(z) - e.eval(-z)));
  }
  return worst / xi0;
}

SeriesWithError xi_taylor(const XiEvaluator& e, double r, int order) {
  if (!(std::abs(r) < XiEvaluator::kMaxAbsCenter)) {
    std::ostringstream os;
    os << "Taylor center " << r << " outside the nonvanishing range |r| < " << XiEvaluator::kMaxAbsCenter;
    throw DomainError(os.str(), r);
  }
  if (order < 0) throw InvalidInput("series order must be nonnegative");
  SeriesWithError out;
  out.series.center = r;
  double factorial = 1.0;
  for (int k = 0; k <= order; ++k) {
    if (k > 0) factorial *= k;
    const XiEvaluator::Value v = e.derivative(r, k);
    out.series.coeffs.push_back(v.value / factorial);
    out.error.push_back(v.error / factorial);
  }
  return out;
}

SeriesWithError xi_neg_log_taylor(const XiEvaluator& e, double r, int order) {
  const SeriesWithError g = xi_taylor(e, r, order);
  if (!(g.series.coeffs[0] > 0.0)) throw PreconditionError("Xi is not positive at the Taylor center");
  SeriesWithError out;
  out.series = series_log_neg_compensated(g.series);
  out.error = series_log_neg_error(g.series, g.error);
  // Rounding in the compensated recurrence, stated conservatively.
  const double g0 = g.series.coeffs[0];
  for (int n = 0; n <= order; ++n) {
    double mag = std::abs(out.series.coeffs[static_cast<std::size_t>(n)]) + std::abs(g.series.coeffs[static_cast<std::size_t>(n)]) / g0;
    for (int k = 1; k < n; ++k)
      mag += std::abs(out.series.coeffs[static_cast<std::size_t>(k)] * g.series.coeffs[static_cast<std::size_t>(n - k)]) / g0;
    out.error[static_cast<std::size_t>(n)] += 2.0 * kEps * mag;
  }
  return out;
}

SeriesWithError product_neg_log_taylor(const std::vector<double>& zeros, double r, int order,
                                       std::optional<ZeroDefect> defect) {
  if (order < 0) throw InvalidInput("series order must be nonnegative");
  if (defect && defect->index >= zeros.size()) throw InvalidInput("defect index outside the zero table");
  using C = std::complex<double>;
  std::vector<C> roots;
  double listed = 0.0;
  for (std::size_t i = 0; i < zeros.size(); ++i) {
    const double g = zeros[i];
    if (!(g > 0.0)) throw InvalidInput("zero ordinates must be positive");
    listed += 1.0 / (0.25 + g * g);
    if (defect && defect->index == i) {
      const C rho(g, defect->offset);
      for (C z : {rho, -rho, std::conj(rho), -std::conj(rho)}) roots.push_back(z);
    } else {
      roots.emplace_back(g, 0.0);
      roots.emplace_back(-g, 0.0);
    }
  }
  const double tail = xi_reciprocal_zero_sum() - listed;

  std::vector<double> a(static_cast<std::size_t>(order) + 1, 0.0);
  std::vector<double> mag(a.size(), 0.0);
  C a0 = -std::log(C(xi_at_zero_closed_form()));
  for (const C& rho : roots) {
    if (std::abs(rho - r) < 1e-12) throw PreconditionError("Taylor center on a zero of the product");
    a0 -= std::log(1.0 - r / rho);
    const C inv = 1.0 / (rho - C(r));
    C p = 1.0;
    for (int n = 1; n <= order; ++n) {
      p *= inv;
      const C term = p / static_cast<double>(n);
      a[static_cast<std::size_t>(n)] += term.real();
      mag[static_cast<std::size_t>(n)] += std::abs(term);
    }
  }
  a[0] = a0.real() + r * r * tail;
  mag[0] = std::abs(a[0]);
  if (order >= 1) a[1] += 2.0 * r * tail;
  if (order >= 2) a[2] += tail;

  SeriesWithError out;
  out.series = PowerSeries(r, std::move(a));
  for (double m : mag) out.error.push_back(8.0 * kEps * m);
  return out;
}

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::Pass: return "PASS";
    case Verdict::Inconclusive: return "INCONCLUSIVE";
    case Verdict::Fail: return "FAIL";
  }
  return "FAIL";
}

Verdict classify(double min_eig, double err) {
  if (min_eig >= -err) return Verdict::Pass;
  if (min_eig >= -3.0 * err) return Verdict::Inconclusive;
  return Verdict::Fail;
}

Verdict combine(Verdict a, Verdict b) { return static_cast<int>(a) >= static_cast<int>(b) ? a : b; }

RhHankelReport hankel_report(const SeriesWithError& neg_log, int m_max, int k_max) {
  if (m_max < 2 || k_max < 1) throw InvalidInput("Hankel report needs m_max >= 2 and k_max >= 1");
  const PowerSeries& p = neg_log.series;
  if (neg_log.error.size() != p.coeffs.size()) throw InvalidInput("error bars do not match the series");
  const int needed = 2 * k_max + 2 * (m_max - 1);
  if (p.order() < needed) {
    std::ostringstream os;
    os << "series of order " << p.order() << " is too short; shifts up to " << 2 * k_max << " and size " << m_max
       << " need order " << needed;
    throw InvalidInput(os.str());
  }
  RhHankelReport rep;
  rep.r = p.center;
  rep.k_max = k_max;
  rep.m_max = m_max;
  rep.neg_log = neg_log;
  for (int k = 1; k <= k_max; ++k) {
    for (int m = 2; m <= m_max; ++m) {
      Verdict weighted_verdict = Verdict::Pass;
      for (bool weighted : {true, false}) {
        const HankelSpec spec{2 * k, m, weighted};
        const HermitianMatrix h = build_hankel(p, spec);
        double frob = 0.0;
        for (int i = 0; i < m; ++i)
          for (int j = 0; j < m; ++j) {
            const int idx = 2 * k + i + j;
            const double w = weighted ? idx : 1.0;
            const double e = w * neg_log.error[static_cast<std::size_t>(idx)];
            frob += e * e;
          }
        HankelItem item;
        item.k = k;
        item.m = m;
        item.weighted = weighted;
        const RVector ev = h.eigenvalues();
        item.eigenvalues.assign(ev.data(), ev.data() + ev.size());
        item.min_eig = ev.minCoeff();
        item.error_bar = std::sqrt(frob) + 4.0 * m * kEps * h.max_abs_entry();
        item.verdict = classify(item.min_eig, item.error_bar);
        if (weighted) weighted_verdict = item.verdict;
        else if (weighted_verdict == Verdict::Pass && item.verdict == Verdict::Fail)
          rep.weighted_implies_unweighted = false;
        rep.verdict = combine(rep.verdict, item.verdict);
        rep.items.push_back(std::move(item));
      }
      rep.schur_residual = std::max(rep.schur_residual, weighted_to_unweighted_check(p, 2 * k, m));
    }
  }
  return rep;
}

RhHankelReport rh_hankel_report(const XiEvaluator& e, double r, int m_max, int k_max) {
  if (m_max < 2 || k_max < 1) throw InvalidInput("Hankel report needs m_max >= 2 and k_max >= 1");
  return hankel_report(xi_neg_log_taylor(e, r, 2 * k_max + 2 * m_max), m_max, k_max);
}

ScalarFunction xi_neg_log_function(const XiEvaluator& e, const Interval& interval) {
  if (!(interval.lo >= -XiEvaluator::kMaxAbsCenter && interval.hi <= XiEvaluator::kMaxAbsCenter && interval.valid()))
    throw InvalidInput("-log Xi needs an interval inside (-14, 14), where Xi does not vanish");
  auto ev = std::make_shared<const XiEvaluator>(e);
  std::vector<ScalarFunction::Fn> ladder{
      [ev](double x) { return -std::log(ev->eval(x)); },
      [ev](double x) { return -ev->derivative(x, 1).value / ev->eval(x); },
      [ev](double x) {
        const double x0 = ev->eval(x), x1 = ev->derivative(x, 1).value, x2 = ev->derivative(x, 2).value;
        return (x1 * x1 - x0 * x2) / (x0 * x0);
      },
      [ev](double x) {
        const double x0 = ev->eval(x), x1 = ev->derivative(x, 1).value;
        const double x2 = ev->derivative(x, 2).value, x3 = ev->derivative(x, 3).value;
        return -(x3 * x0 * x0 - 3.0 * x0 * x1 * x2 + 2.0 * x1 * x1 * x1) / (x0 * x0 * x0);
      },
  };
  auto taylor = [ev](double c, int count) { return xi_neg_log_taylor(*ev, c, count - 1).series.coeffs; };
  return ScalarFunction("neglogxi", interval, std::move(ladder), std::move(taylor));
}

ScalarFunction xi_function(const XiEvaluator& e, const Interval& interval) {
  auto ev = std::make_shared<const XiEvaluator>(e);
  std::vector<ScalarFunction::Fn> ladder{
      [ev](double x) { return ev->eval(x); },
      [ev](double x) { return ev->derivative(x, 1).value; },
      [ev](double x) { return ev->derivative(x, 2).value; },
  };
  auto taylor = [ev](double c, int count) { return xi_taylor(*ev, c, count - 1).series.coeffs; };
  return ScalarFunction("xi", interval, std::move(ladder), std::move(taylor));
}

RhMatrixReport rh_matrix_checks(const XiEvaluator& e, int n, std::size_t trials, std::uint64_t seed,
                                const Interval& interval, int workers) {
  if (n < 1) throw InvalidInput("dimension must be at least 1");
  if (trials < 1) throw InvalidInput("trial count must be at least 1");
  const ScalarFunction f = xi_neg_log_function(e, interval);
  const ScalarFunction g = xi_function(e, interval);
  const ScalarFunction fp = f.derivative();

  RhMatrixReport rep;
  rep.n = n;
  rep.trials = trials;
  rep.seed = seed;
  rep.interval = interval;

  CampaignSpec spec;
  spec.trials = trials;
  spec.master_seed = seed;
  spec.n_min = 1;
  spec.n_max = n;
  spec.interval = interval;
  spec.workers = workers;
  spec.tol = 1e-7;
  rep.trace_minmax_min = run_campaign(InequalityKind::TraceMinmax, &f, spec).stats.min;

  CampaignSpec scalar = spec;
  scalar.master_seed = splitmix64(seed ^ 0x5343414C4152ULL);
  scalar.n_max = 1;
  rep.convexity_min = run_campaign(InequalityKind::TraceMinmax, &f, scalar).stats.min;

  const auto duality = parallel_map(
      trials,
      [&](std::size_t i) {
        const OrderedQuadruple q = sample_quadruple(trial_dimension(spec, i), interval, trial_seed(seed, i));
        return std::abs(det_isoperimetric_margin(g, q).margin - trace_minmax_margin(f, q));
      },
      workers);
  rep.duality_max_residual = *std::max_element(duality.begin(), duality.end());

  const std::uint64_t mono_seed = splitmix64(seed ^ 0x4D4F4E4FULL);
  const auto mono = parallel_map(
      trials,
      [&](std::size_t i) {
        return matrix_monotone_margin(fp, interval, trial_dimension(spec, i), trial_seed(mono_seed, i));
      },
      workers);
  rep.monotone_pair_min = std::numeric_limits<double>::infinity();
  rep.monotone_loewner_min = std::numeric_limits<double>::infinity();
  for (const MonotoneReport& m : mono) {
    rep.monotone_pair_min = std::min(rep.monotone_pair_min, m.pair_margin);
    rep.monotone_loewner_min = std::min(rep.monotone_loewner_min, m.loewner_margin);
  }
  return rep;
}

double zeta_borwein(double s, int terms) {
  if (s == 1.0) throw DomainError("zeta has a pole at s = 1", s);
  if (terms < 2) throw InvalidInput("Borwein acceleration needs at least 2 terms");
  const int n = terms;
  // d_k = n sum_{i<=k} (n+i-1)! 4^i / ((n-i)! (2i)!)
  std::vector<double> d(static_cast<std::size_t>(n) + 1);
  double term = 1.0 / n;
  double acc = 0.0;
  for (int i = 0; i <= n; ++i) {
    acc += term;
    d[static_cast<std::size_t>(i)] = n * acc;
    term *= 4.0 * (n + i) * (n - i) / ((2.0 * i + 1.0) * (2.0 * i + 2.0));
  }
  double eta = 0.0;
  for (int k = 0; k < n; ++k) {
    const double sign = (k % 2 == 0) ? 1.0 : -1.0;
    eta += sign * (d[static_cast<std::size_t>(k)] - d[static_cast<std::size_t>(n)]) / std::pow(k + 1.0, s);
  }
  eta = -eta / d[static_cast<std::size_t>(n)];
  return eta / (1.0 - std::pow(2.0, 1.0 - s));
}

double xi_at_zero_closed_form() {
  const double s = 0.5;
  return 0.5 * s * (s - 1.0) * std::pow(kPi, -s / 2.0) * std::tgamma(s / 2.0) * zeta_borwein(s);
}

double xi_reciprocal_zero_sum() { return 1.0 + std::numbers::egamma / 2.0 - std::log(4.0 * kPi) / 2.0; }

double xi_product_eval(const std::vector<double>& zeros, double z, double xi0, double tail_sum) {
  double log_abs = std::log(std::abs(xi0)) - z * z * tail_sum;
  int sign = xi0 < 0 ? -1 : 1;
  for (double g : zeros) {
    const double f = 1.0 - z * z / (g * g);
    if (f == 0.0) return 0.0;
    if (f < 0) sign = -sign;
    log_abs += std::log(std::abs(f));
  }
  return sign * std::exp(log_abs);
}

CrossValidation cross_validate(const XiEvaluator& e, const std::vector<double>& zeros, double z_max, int points) {
  if (points < 2) throw InvalidInput("cross-validation needs at least 2 points");
  CrossValidation out;
  out.xi0_quadrature = e.eval(0.0);
  out.xi0_closed_form = xi_at_zero_closed_form();
  double listed = 0.0;
  double gamma_max = 0.0;
  for (double g : zeros) {
    listed += 1.0 / (0.25 + g * g);
    gamma_max = std::max(gamma_max, g);
  }
  out.tail_sum = xi_reciprocal_zero_sum() - listed;
  // Omitted ordinates are >= gamma_max, so sum gamma^{-4} <= tail (1 + 1/(4 gamma_max^2)) / gamma_max^2.
  const double s4 = gamma_max > 0 ? out.tail_sum * (1.0 + 0.25 / (gamma_max * gamma_max)) / (gamma_max * gamma_max)
                                   : std::numeric_limits<double>::infinity();
  for (int i = 0; i < points; ++i) {
    CrossRow row;
    row.z = -z_max + 2.0 * z_max * i / (points - 1);
    row.quadrature = e.eval(row.z);
    row.product = xi_product_eval(zeros, row.z, out.xi0_closed_form, out.tail_sum);
    row.relative_difference = std::abs(row.quadrature - row.product) / std::abs(row.quadrature);
    const double z2 = row.z * row.z;
    const double ratio = gamma_max > 0 ? z2 / (gamma_max * gamma_max) : 1.0;
    const double log_bound =
        ratio < 1.0 ? (z2 / 4.0 + z2 * z2 / (2.0 * (1.0 - ratio))) * s4 : std::numeric_limits<double>::infinity();
    row.bound = std::expm1(log_bound) + 1e-12;
    row.within = row.relative_difference <= row.bound;
    out.all_within = out.all_within && row.within;
    out.rows.push_back(row);
  }
  return out;
}

double xi_first_root(const XiEvaluator& e, double tol) {
  double lo = 0.0;
  double flo = e.eval(lo);
  for (double hi = 0.25; hi <= XiEvaluator::kMaxAbsZ; hi += 0.25) {
    const double fhi = e.eval(hi);
    if ((flo > 0) != (fhi > 0)) {
      double a = lo, b = hi;
      while (b - a > tol) {
        const double mid = 0.5 * (a + b);
        if (mid <= a || mid >= b) break;
        if ((e.eval(mid) > 0) == (flo > 0)) a = mid;
        else b = mid;
      }
      return 0.5 * (a + b);
    }
    lo = hi;
    flo = fhi;
  }
  throw PreconditionError("no sign change of Xi found on [0, 50]");
}

std::vector<double> load_zero_table(const std::filesystem::path& path) {
  std::vector<double> z = load_root_csv(path);
  for (std::size_t i = 0; i < z.size(); ++i) {
    if (!(z[i] > 0.0)) throw InvalidInput(path.string() + ": zero ordinates must be positive");
    if (i > 0 && !(z[i] > z[i - 1])) throw InvalidInput(path.string() + ": zero ordinates must be ascending");
  }
  return z;
}

nlohmann::json to_json(const RhHankelReport& r) {
  using nlohmann::json;
  json items = json::array();
  for (const HankelItem& it : r.items)
    items.push_back({{"k", it.k},
                     {"shift", 2 * it.k},
                     {"m", it.m},
                     {"weighted", it.weighted},
                     {"min_eig", it.min_eig},
                     {"error_bar", it.error_bar},
                     {"verdict", to_string(it.verdict)},
                     {"eigenvalues", it.eigenvalues}});
  return {{"r", r.r},
          {"k_max", r.k_max},
          {"m_max", r.m_max},
          {"neg_log_coefficients", r.neg_log.series.coeffs},
          {"neg_log_errors", r.neg_log.error},
          {"items", std::move(items)},
          {"schur_residual", r.schur_residual},
          {"weighted_implies_unweighted", r.weighted_implies_unweighted},
          {"verdict", to_string(r.verdict)}};
}

nlohmann::json to_json(const RhMatrixReport& r) {
  return {{"n", r.n},
          {"trials", r.trials},
          {"seed", r.seed},
          {"interval", {bound_json(r.interval.lo), bound_json(r.interval.hi)}},
          {"trace_minmax_min", r.trace_minmax_min},
          {"convexity_min", r.convexity_min},
          {"duality_max_residual", r.duality_max_residual},
          {"monotone_pair_min", r.monotone_pair_min},
          {"monotone_loewner_min", r.monotone_loewner_min}};
}

nlohmann::json to_json(const CrossValidation& c) {
  using nlohmann::json;
  json rows = json::array();
  for (const CrossRow& r : c.rows)
    rows.push_back({{"z", r.z},
                    {"quadrature", r.quadrature},
                    {"product", r.product},
                    {"relative_difference", r.relative_difference},
                    {"bound", r.bound},
                    {"within", r.within}});
  return {{"xi0_quadrature", c.xi0_quadrature},
          {"xi0_closed_form", c.xi0_closed_form},
          {"tail_sum", c.tail_sum},
          {"all_within", c.all_within},
          {"rows", std::move(rows)}};
}

}  // namespace tmm
