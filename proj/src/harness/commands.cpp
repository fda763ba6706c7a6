#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "tmm/error.hpp"
#include "tmm/harness.hpp"
#include "tmm/parallel.hpp"
#include "tmm/pickrep.hpp"
#include "tmm/random.hpp"
#include "tmm/xi.hpp"

namespace tmm::harness {

using nlohmann::json;

namespace {

std::string num(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

// Registry interval for a named builtin, else its domain.
Interval default_interval(const ScalarFunction& f) {
  for (const RegistryEntry& e : trace_minmax_registry())
    if (e.f.name() == f.name()) return e.interval;
  for (const RegistryEntry& e : builtin_registry())
    if (e.f.name() == f.name()) return e.interval;
  return f.domain();
}

double default_center(const Interval& iv) {
  if (iv.bounded()) return 0.5 * (iv.lo + iv.hi);
  if (std::isfinite(iv.lo)) return iv.lo + 1.0;
  if (std::isfinite(iv.hi)) return iv.hi - 1.0;
  return 0.0;
}

void require_inside(const ScalarFunction& f, const Interval& iv) {
  if (!f.domain().covers(iv)) {
    std::ostringstream os;
    os << "interval (" << iv.lo << ", " << iv.hi << ") is not inside the domain of " << f.name() << " ("
       << f.domain().lo << ", " << f.domain().hi << ")";
    throw InvalidInput(os.str());
  }
}

InequalityKind resolve_check(const std::string& name) {
  if (name == "trace") return InequalityKind::TraceMinmax;
  if (name == "det") return InequalityKind::DetIsoperimetric;
  if (name == "iso") return InequalityKind::Isoperimetric;
  if (auto k = parse_inequality_kind(name)) return *k;
  throw InvalidInput("unknown check '" + name +
                     "' (expected trace, det, iso, linear, frobenius or detlinear)");
}

bool uses_function(InequalityKind k) {
  return k == InequalityKind::TraceMinmax || k == InequalityKind::DetIsoperimetric;
}

json stats_json(const MarginStats& s) {
  return {{"count", s.count}, {"min", s.min}, {"max", s.max}, {"mean", s.mean}, {"argmin", s.argmin}};
}

int rank(Exit e) {
  switch (e) {
    case Exit::Pass: return 0;
    case Exit::Inconclusive: return 1;
    case Exit::Violation: return 2;
    case Exit::Usage: return 3;
  }
  return 3;
}

Exit worse(Exit a, Exit b) { return rank(a) >= rank(b) ? a : b; }

Exit from_verdict(Verdict v) {
  switch (v) {
    case Verdict::Pass: return Exit::Pass;
    case Verdict::Inconclusive: return Exit::Inconclusive;
    case Verdict::Fail: return Exit::Violation;
  }
  return Exit::Violation;
}

}  // namespace

// ---------------------------------------------------------------------------

json to_json(const VerifyConfig& c) {
  json j{{"function", function_to_json(c.function)},
         {"interval", c.interval ? interval_to_json(*c.interval) : json(nullptr)},
         {"check", c.check},
         {"trials", c.trials},
         {"seed", c.seed},
         {"n_min", c.n_min},
         {"n_max", c.n_max},
         {"tol", c.tol},
         {"t_samples", c.t_samples},
         {"serial", c.serial}};
  if (!c.witness.empty()) j["witness"] = c.witness;
  if (!c.replay.empty()) j["replay"] = c.replay;
  return j;
}

Outcome cmd_verify(const VerifyConfig& c) {
  const InequalityKind kind = resolve_check(c.check);
  const ScalarFunction f = make_function(c.function);
  Interval iv = c.interval ? *c.interval
                           : (kind == InequalityKind::Isoperimetric ? Interval::positive() : default_interval(f));
  if (!iv.valid()) throw InvalidInput("interval is empty");
  if (kind == InequalityKind::Isoperimetric && iv.lo < 0.0)
    throw InvalidInput("the isoperimetric check needs an interval inside [0, inf)");
  if (uses_function(kind)) require_inside(f, iv);
  const ScalarFunction g = kind == InequalityKind::DetIsoperimetric ? fn::exp_of_neg(f) : f;
  const ScalarFunction* fp = uses_function(kind) ? &g : nullptr;

  Outcome o;
  if (!c.replay.empty()) {
    const OrderedQuadruple q = load_quadruple(c.replay);
    const TrialReport r = evaluate_quadruple(kind, fp, q, c.tol, c.t_samples);
    o.result = {{"mode", "replay"},       {"check", to_string(kind)}, {"function", g.name()},
                {"margin", r.margin},      {"degenerate", r.degenerate}, {"dimension", q.dim()},
                {"seed", q.seed()},        {"replay", c.replay}};
    o.exit = (!r.degenerate && r.margin < -c.tol) ? Exit::Violation : Exit::Pass;
    o.csv = {{"margin"}, {num(r.margin)}};
    return o;
  }

  CampaignSpec spec;
  spec.trials = c.trials;
  spec.master_seed = c.seed;
  spec.n_min = c.n_min;
  spec.n_max = c.n_max;
  spec.interval = iv;
  spec.workers = c.workers;
  spec.tol = c.tol;
  const CampaignResult res =
      c.serial ? run_campaign_serial(kind, fp, spec, c.t_samples) : run_campaign(kind, fp, spec, c.t_samples);

  o.result = {{"mode", "campaign"},
              {"check", to_string(kind)},
              {"function", uses_function(kind) ? json(g.name()) : json(nullptr)},
              {"interval", interval_to_json(iv)},
              {"trials", c.trials},
              {"stats", stats_json(res.stats)},
              {"violations", res.violations},
              {"degenerate", res.degenerate},
              {"worst_seed", res.worst_seed},
              {"worst_dim", res.worst_dim}};
  if (res.witness) {
    json w = quadruple_to_json(*res.witness);
    w["margin"] = res.stats.min;
    w["function"] = g.name();
    o.result["witness"] = std::move(w);
    if (!c.witness.empty()) save_quadruple(c.witness, *res.witness, g.name(), res.stats.min);
  }
  o.exit = res.violations > 0 ? Exit::Violation : Exit::Pass;
  o.csv.push_back({"trial", "seed", "dim", "margin"});
  for (std::size_t i = 0; i < res.margins.size(); ++i)
    o.csv.push_back({std::to_string(i), std::to_string(trial_seed(c.seed, i)),
                     std::to_string(trial_dimension(spec, i)), num(res.margins[i])});
  return o;
}

// ---------------------------------------------------------------------------

json to_json(const HankelConfig& c) {
  json j{{"size", c.size},     {"shift", c.shift},
         {"k_max", c.k_max},   {"weighting", c.weighting},
         {"tol", c.tol},       {"precision", c.compensated ? "compensated" : "double"},
         {"center", c.center ? json(*c.center) : json(nullptr)}};
  if (c.function) j["function"] = function_to_json(*c.function);
  if (!c.csv.empty()) j["coefficients_csv"] = c.csv;
  return j;
}

Outcome cmd_hankel(const HankelConfig& c) {
  if (c.size < 1) throw InvalidInput("Hankel size must be at least 1");
  if (c.weighting != "both" && c.weighting != "weighted" && c.weighting != "unweighted")
    throw InvalidInput("weighting must be weighted, unweighted or both");
  std::vector<int> shifts;
  if (c.k_max > 0)
    for (int k = 1; k <= c.k_max; ++k) shifts.push_back(2 * k);
  else
    shifts.push_back(c.shift);
  const int needed = *std::max_element(shifts.begin(), shifts.end()) + 2 * (c.size - 1);

  PowerSeries p;
  std::string source;
  if (c.function && !c.csv.empty()) throw InvalidInput("give either --function or --csv, not both");
  if (c.function) {
    const ScalarFunction f = make_function(*c.function);
    if (!f.has_taylor()) throw InvalidInput(f.name() + " has no Taylor coefficients");
    const double center = c.center.value_or(default_center(default_interval(f)));
    p = f.taylor(center, needed + 1);
    source = f.name();
  } else if (!c.csv.empty()) {
    p = load_series_csv(c.csv, c.center.value_or(0.0));
    source = c.csv;
    if (p.order() < needed) {
      std::ostringstream os;
      os << "series from " << c.csv << " has " << p.coeffs.size() << " coefficients; shift " << shifts.back()
         << " and size " << c.size << " need " << needed + 1;
      throw InvalidInput(os.str());
    }
  } else {
    throw InvalidInput("hankel needs --function or --csv");
  }

  std::vector<bool> weightings;
  if (c.weighting != "unweighted") weightings.push_back(true);
  if (c.weighting != "weighted") weightings.push_back(false);

  Outcome o;
  json items = json::array();
  o.csv.push_back({"shift", "weighted", "index", "eigenvalue"});
  bool all_pass = true;
  for (bool w : weightings) {
    bool some_pass = false;
    for (int s : shifts) {
      const HankelSpec spec{s, c.size, w};
      const HankelVerdict v =
          hankel_psd_test(p, spec, c.tol, c.compensated ? HankelPrecision::Compensated : HankelPrecision::Double);
      items.push_back({{"shift", s},
                       {"weighted", w},
                       {"size", c.size},
                       {"psd", v.psd},
                       {"min_eig", v.min_eig},
                       {"max_eig", v.max_eig},
                       {"threshold", v.threshold},
                       {"eigenvalues", v.eigenvalues}});
      for (std::size_t i = 0; i < v.eigenvalues.size(); ++i)
        o.csv.push_back({std::to_string(s), w ? "1" : "0", std::to_string(i), num(v.eigenvalues[i])});
      some_pass = some_pass || v.psd;
      if (c.k_max == 0) all_pass = all_pass && v.psd;
    }
    if (c.k_max > 0) all_pass = all_pass && some_pass;
  }
  double schur = 0.0;
  for (int s : shifts) schur = std::max(schur, weighted_to_unweighted_check(p, s, c.size));
  o.result = {{"source", source},
              {"center", p.center},
              {"coefficients", p.coeffs},
              {"mode", c.k_max > 0 ? "exists_shift" : "fixed_shift"},
              {"items", std::move(items)},
              {"schur_residual", schur}};
  o.exit = all_pass ? Exit::Pass : Exit::Violation;
  return o;
}

// ---------------------------------------------------------------------------

json to_json(const RepresentConfig& c) {
  return {{"function", function_to_json(c.function)},
          {"center", c.center ? json(*c.center) : json(nullptr)},
          {"atoms", c.atoms},
          {"tol", c.tol},
          {"truncate", c.truncate}};
}

Outcome cmd_represent(const RepresentConfig& c) {
  const ScalarFunction f = make_function(c.function);
  if (!f.has_taylor()) throw InvalidInput(f.name() + " has no Taylor coefficients");
  const double center = c.center.value_or(default_center(default_interval(f)));
  if (!f.domain().contains(center)) throw InvalidInput("center lies outside the domain of " + f.name());
  const MomentSequence moments = coeffs_to_moments(f.taylor(center, 2 * c.atoms + 3));
  Outcome o;
  try {
    const RoundTrip rt = roundtrip(f, center, c.atoms, {c.tol, c.truncate});
    json atoms = json::array();
    for (const Atom& a : rt.measure.atoms) atoms.push_back({{"t", a.t}, {"w", a.w}});
    o.result = {{"function", f.name()},
                {"center", center},
                {"moments", moments},
                {"atoms", std::move(atoms)},
                {"requested_atoms", c.atoms},
                {"rank_deficient", rt.measure.rank_deficient},
                {"residual", rt.residual},
                {"grid_radius", rt.radius},
                {"representation", representation_to_json(rt.representation)}};
    if (!c.output.empty()) {
      std::ofstream out(c.output);
      if (!out) throw InvalidInput("cannot write representation file: " + c.output);
      out << representation_to_json(rt.representation).dump(2) << '\n';
    }
    o.csv.push_back({"t", "w"});
    for (const Atom& a : rt.measure.atoms) o.csv.push_back({num(a.t), num(a.w)});
  } catch (const NotAMomentSequence& e) {
    o.result = {{"function", f.name()},
                {"center", center},
                {"moments", moments},
                {"diagnostic", "not trace minmax at this center"},
                {"detail", e.what()},
                {"failing_index", e.failing_index()},
                {"pivot", e.pivot()}};
    o.exit = Exit::Violation;
  }
  return o;
}

// ---------------------------------------------------------------------------

json to_json(const XiConfig& c) {
  json j{{"center", c.center},
         {"interval", interval_to_json(c.interval)},
         {"quadrature", {{"step", c.step}, {"cutoff", c.cutoff}, {"theta_terms", c.theta_terms}}}};
  if (c.coeffs > 0) j["coeffs"] = c.coeffs;
  if (c.hankel) j["hankel"] = {{"m", c.m}, {"k", c.k}};
  if (c.defect) j["defect"] = {{"index", c.defect_index}, {"offset", c.defect_offset}};
  if (c.matrix) j["matrix"] = {{"n", c.n}, {"trials", c.trials}, {"seed", c.seed}, {"tol", c.matrix_tol}};
  if (c.cross_validate) j["cross_validate"] = true;
  if (!c.zeros.empty()) j["zeros"] = c.zeros;
  return j;
}

Outcome cmd_xi(const XiConfig& c) {
  if (!(c.coeffs > 0 || c.hankel || c.matrix || c.cross_validate))
    throw InvalidInput("xi needs at least one of --coeffs, --hankel, --matrix, --cross-validate");
  std::vector<double> zeros;
  if (!c.zeros.empty()) zeros = load_zero_table(c.zeros);
  if ((c.defect || c.cross_validate) && zeros.empty())
    throw InvalidInput("--defect and --cross-validate need a zero table (--zeros)");
  const XiEvaluator e({c.step, c.cutoff, c.theta_terms}, zeros);

  Outcome o;
  o.result = json::object();
  o.result["xi0"] = e.eval(0.0);
  o.result["nodes"] = e.node_count();

  if (c.coeffs > 0) {
    const SeriesWithError t = xi_taylor(e, c.center, c.coeffs);
    const SeriesWithError l = xi_neg_log_taylor(e, c.center, c.coeffs);
    json rows = json::array();
    o.csv = {{"k", "xi_coefficient", "xi_error", "neglog_coefficient", "neglog_error"}};
    for (int k = 0; k <= c.coeffs; ++k) {
      const auto i = static_cast<std::size_t>(k);
      rows.push_back({{"k", k},
                      {"xi", t.series.coeffs[i]},
                      {"xi_error", t.error[i]},
                      {"neglog", l.series.coeffs[i]},
                      {"neglog_error", l.error[i]}});
      o.csv.push_back({std::to_string(k), num(t.series.coeffs[i]), num(t.error[i]), num(l.series.coeffs[i]),
                       num(l.error[i])});
    }
    o.result["coefficients"] = std::move(rows);
  }

  if (c.hankel) {
    const RhHankelReport rep =
        c.defect ? hankel_report(product_neg_log_taylor(zeros, c.center, 2 * c.k + 2 * c.m,
                                                        ZeroDefect{c.defect_index, c.defect_offset}),
                                 c.m, c.k)
                 : rh_hankel_report(e, c.center, c.m, c.k);
    json h = to_json(rep);
    h["source"] = c.defect ? "product_with_defect" : "quadrature";
    o.result["hankel"] = std::move(h);
    o.exit = worse(o.exit, from_verdict(rep.verdict));
    if (o.csv.empty()) {
      o.csv = {{"k", "m", "weighted", "min_eig", "error_bar", "verdict"}};
      for (const HankelItem& it : rep.items)
        o.csv.push_back({std::to_string(it.k), std::to_string(it.m), it.weighted ? "1" : "0", num(it.min_eig),
                         num(it.error_bar), to_string(it.verdict)});
    }
  }

  if (c.matrix) {
    const RhMatrixReport rep = rh_matrix_checks(e, c.n, c.trials, c.seed, c.interval, c.workers);
    o.result["matrix"] = to_json(rep);
    const double worst = std::min({rep.trace_minmax_min, rep.convexity_min, rep.monotone_pair_min,
                                   rep.monotone_loewner_min, -rep.duality_max_residual});
    o.result["matrix"]["tol"] = c.matrix_tol;
    o.result["matrix"]["pass"] = worst >= -c.matrix_tol;
    if (worst < -c.matrix_tol) o.exit = worse(o.exit, Exit::Violation);
  }

  if (c.cross_validate) {
    const CrossValidation cv = cross_validate(e, zeros);
    json j = to_json(cv);
    const double root = xi_first_root(e);
    j["first_root"] = root;
    j["first_table_ordinate"] = zeros.front();
    j["first_root_difference"] = std::abs(root - zeros.front());
    o.result["cross_validation"] = std::move(j);
    if (!cv.all_within) o.exit = worse(o.exit, Exit::Violation);
    if (o.csv.empty()) {
      o.csv = {{"z", "quadrature", "product", "relative_difference", "bound"}};
      for (const CrossRow& r : cv.rows)
        o.csv.push_back({num(r.z), num(r.quadrature), num(r.product), num(r.relative_difference), num(r.bound)});
    }
  }
  return o;
}

// ---------------------------------------------------------------------------

json to_json(const MatrixPropertyConfig& c) {
  return {{"function", function_to_json(c.function)},
          {"interval", c.interval ? interval_to_json(*c.interval) : json(nullptr)},
          {"derivative", c.derivative},
          {"n", c.n},
          {"trials", c.trials},
          {"seed", c.seed},
          {"tol", c.tol}};
}

namespace {

struct PropertySetup {
  ScalarFunction g;
  Interval interval;
};

PropertySetup property_setup(const MatrixPropertyConfig& c) {
  if (c.n < 1) throw InvalidInput("dimension must be at least 1");
  if (c.trials < 1) throw InvalidInput("trial count must be at least 1");
  const ScalarFunction f = make_function(c.function);
  const Interval iv = c.interval.value_or(default_interval(f));
  if (!iv.valid()) throw InvalidInput("interval is empty");
  require_inside(f, iv);
  return {c.derivative ? f.derivative() : f, iv};
}

}  // namespace

Outcome cmd_monotone(const MatrixPropertyConfig& c) {
  const PropertySetup s = property_setup(c);
  const auto reports = parallel_map(
      c.trials, [&](std::size_t i) { return matrix_monotone_margin(s.g, s.interval, c.n, trial_seed(c.seed, i)); },
      c.workers);
  std::vector<double> pair, loewner;
  Outcome o;
  o.csv.push_back({"trial", "pair_margin", "loewner_margin"});
  for (std::size_t i = 0; i < reports.size(); ++i) {
    pair.push_back(reports[i].pair_margin);
    loewner.push_back(reports[i].loewner_margin);
    o.csv.push_back({std::to_string(i), num(reports[i].pair_margin), num(reports[i].loewner_margin)});
  }
  const MarginStats ps = summarize(pair), ls = summarize(loewner);
  o.result = {{"function", s.g.name()},
              {"interval", interval_to_json(s.interval)},
              {"pair_stats", stats_json(ps)},
              {"loewner_stats", stats_json(ls)}};
  o.exit = std::min(ps.min, ls.min) >= -c.tol ? Exit::Pass : Exit::Violation;
  return o;
}

Outcome cmd_convex(const MatrixPropertyConfig& c) {
  const PropertySetup s = property_setup(c);
  const auto margins = parallel_map(
      c.trials, [&](std::size_t i) { return matrix_convex_margin(s.g, s.interval, c.n, trial_seed(c.seed, i)); },
      c.workers);
  Outcome o;
  o.csv.push_back({"trial", "margin"});
  for (std::size_t i = 0; i < margins.size(); ++i) o.csv.push_back({std::to_string(i), num(margins[i])});
  const MarginStats st = summarize(margins);
  o.result = {{"function", s.g.name()}, {"interval", interval_to_json(s.interval)}, {"stats", stats_json(st)}};
  o.exit = st.min >= -c.tol ? Exit::Pass : Exit::Violation;
  return o;
}

}  // namespace tmm::harness
