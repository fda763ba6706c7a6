#include <chrono>
#include <fstream>
#include <map>
#include <ostream>
#include <set>

#include "CLI11.hpp"

#include "tmm/error.hpp"
#include "tmm/harness.hpp"
#include "tmm/parallel.hpp"

namespace tmm::harness {

namespace {

struct Common {
  std::string report;
  std::string csv;
  std::string config;
  int workers = 0;
};

void add_common(CLI::App* sub, Common& c, bool parallel) {
  sub->add_option("--report", c.report, "Write the JSON report here instead of stdout");
  sub->add_option("--dump-csv", c.csv, "Write a CSV dump (margins, eigenvalues or coefficients)");
  sub->add_option("--config", c.config, "key = value file; keys are long flag names, flags win");
  if (parallel) sub->add_option("--workers", c.workers, "Worker threads (0 = all cores)");
}

struct FunctionArgs {
  std::string name;
  std::vector<std::string> params;
  std::vector<double> poly;
};

void add_function(CLI::App* sub, FunctionArgs& f, const std::string& fallback) {
  f.name = fallback;
  sub->add_option("--function,-f", f.name, "Builtin function name")->capture_default_str();
  sub->add_option("--param", f.params, "Function parameter key=value (repeatable)");
  sub->add_option("--poly", f.poly, "Polynomial coefficients a0,a1,... for --function poly")->delimiter(',');
}

// Fill options not given on the command line from the config file.
void apply_config(CLI::App* sub, const std::string& path) {
  std::set<const CLI::Option*> from_file;
  for (const auto& [key, value] : load_config_file(path)) {
    if (key == "config") throw InvalidInput("config files cannot include other config files");
    CLI::Option* opt = sub->get_option_no_throw("--" + key);
    if (opt == nullptr) throw InvalidInput("unknown config key '" + key + "' for " + sub->get_name());
    if (opt->count() > 0 && !from_file.contains(opt)) continue;
    opt->add_result(value);
    opt->run_callback();
    from_file.insert(opt);
  }
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Trace minmax functions: inequality campaigns, Hankel tests, integral representations, Xi checks",
               "tmm"};
  app.set_version_flag("--version", tool_version());
  app.require_subcommand(1);

  Common common;
  std::string interval;

  // verify
  VerifyConfig vc;
  FunctionArgs vf;
  auto* verify = app.add_subcommand("verify", "Randomized campaign over Loewner-ordered quadruples");
  add_function(verify, vf, "x2");
  verify->add_option("--interval", interval, "lo,hi (inf allowed); default: registry interval");
  verify->add_option("--check", vc.check, "trace, det, iso, linear, frobenius, detlinear")->capture_default_str();
  verify->add_option("--trials", vc.trials)->capture_default_str();
  verify->add_option("--seed", vc.seed)->capture_default_str();
  verify->add_option("--n-min", vc.n_min)->capture_default_str();
  verify->add_option("--n-max", vc.n_max)->capture_default_str();
  verify->add_option("--tol", vc.tol)->capture_default_str();
  verify->add_option("--t-samples", vc.t_samples, "t values per quadruple for detlinear")->capture_default_str();
  verify->add_flag("--serial", vc.serial, "Use the serial reference path");
  verify->add_option("--witness", vc.witness, "Save the worst violating quadruple here");
  verify->add_option("--replay", vc.replay, "Evaluate a saved quadruple instead of sampling");
  add_common(verify, common, true);

  // hankel
  HankelConfig hc;
  FunctionArgs hf;
  double h_center = 0.0;
  auto* hankel = app.add_subcommand("hankel", "Hankel positivity test on Taylor coefficients");
  add_function(hankel, hf, "");
  hankel->add_option("--csv,--coefficients", hc.csv, "Coefficient file, one per line");
  auto* hank_center = hankel->add_option("--center", h_center, "Expansion point");
  hankel->add_option("--size", hc.size)->capture_default_str();
  hankel->add_option("--shift", hc.shift, "Even start index s >= 2")->capture_default_str();
  hankel->add_option("--k-max", hc.k_max, "Search shifts 2..2k for a passing one");
  hankel->add_option("--weighting", hc.weighting, "weighted, unweighted or both")->capture_default_str();
  hankel->add_option("--tol", hc.tol)->capture_default_str();
  hankel->add_flag("--compensated", hc.compensated, "Double-double eigensolver (sizes up to 20)");
  add_common(hankel, common, false);

  // represent
  RepresentConfig rc;
  FunctionArgs rf;
  double r_center = 0.0;
  auto* represent = app.add_subcommand("represent", "Recover the integral representation from Taylor coefficients");
  add_function(represent, rf, "neglog1mx");
  auto* rep_center = represent->add_option("--center", r_center);
  represent->add_option("--atoms", rc.atoms)->capture_default_str();
  represent->add_option("--tol", rc.tol)->capture_default_str();
  represent->add_flag("--truncate", rc.truncate, "Keep the leading PSD block of an indefinite moment Hankel");
  represent->add_option("--output", rc.output, "Representation JSON");
  add_common(represent, common, false);

  // xi
  XiConfig xc;
  std::string xi_interval;
  auto* xi = app.add_subcommand("xi", "Riemann Xi: coefficients, Hankel criteria, matrix checks, cross-validation");
  xi->add_option("--center", xc.center)->capture_default_str();
  xi->add_option("--interval", xi_interval, "lo,hi for the matrix checks (default -13,13)");
  xi->add_option("--coeffs", xc.coeffs, "Report Taylor coefficients up to this order");
  xi->add_flag("--hankel", xc.hankel);
  xi->add_option("--m", xc.m, "Largest Hankel size")->capture_default_str();
  xi->add_option("--k", xc.k, "Largest shift index (shifts 2k)")->capture_default_str();
  xi->add_flag("--matrix", xc.matrix, "Trace minmax / duality / monotonicity campaigns for -log Xi");
  xi->add_option("--n", xc.n)->capture_default_str();
  xi->add_option("--trials", xc.trials)->capture_default_str();
  xi->add_option("--seed", xc.seed)->capture_default_str();
  xi->add_option("--matrix-tol", xc.matrix_tol)->capture_default_str();
  xi->add_flag("--cross-validate", xc.cross_validate);
  xi->add_option("--zeros", xc.zeros, "Zero table, one ordinate per line");
  xi->add_flag("--defect", xc.defect, "Hankel test on the product series with one complex pair");
  xi->add_option("--defect-index", xc.defect_index)->capture_default_str();
  xi->add_option("--defect-offset", xc.defect_offset)->capture_default_str();
  xi->add_option("--step", xc.step)->capture_default_str();
  xi->add_option("--cutoff", xc.cutoff)->capture_default_str();
  xi->add_option("--theta-terms", xc.theta_terms)->capture_default_str();
  add_common(xi, common, true);

  // monotone / convex
  MatrixPropertyConfig mc, cc;
  FunctionArgs mf, cf;
  std::string m_interval, c_interval;
  auto* monotone = app.add_subcommand("monotone", "Matrix monotonicity: A <= B pairs and Loewner matrices");
  add_function(monotone, mf, "x");
  monotone->add_option("--interval", m_interval);
  monotone->add_flag("--derivative", mc.derivative, "Test f' (monotone whenever f is trace minmax)");
  monotone->add_option("--n", mc.n)->capture_default_str();
  monotone->add_option("--trials", mc.trials)->capture_default_str();
  monotone->add_option("--seed", mc.seed)->capture_default_str();
  monotone->add_option("--tol", mc.tol)->capture_default_str();
  add_common(monotone, common, true);
  auto* convex = app.add_subcommand("convex", "Matrix convexity: midpoint inequality on random pairs");
  add_function(convex, cf, "x2");
  convex->add_option("--interval", c_interval);
  convex->add_flag("--derivative", cc.derivative, "Test f' instead of f");
  convex->add_option("--n", cc.n)->capture_default_str();
  convex->add_option("--trials", cc.trials)->capture_default_str();
  convex->add_option("--seed", cc.seed)->capture_default_str();
  convex->add_option("--tol", cc.tol)->capture_default_str();
  add_common(convex, common, true);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e, out, err);
    return rc == 0 ? 0 : static_cast<int>(Exit::Usage);
  }

  CLI::App* sub = app.get_subcommands().front();
  const std::string command = sub->get_name();
  try {
    if (!common.config.empty()) apply_config(sub, common.config);

    const auto start = std::chrono::steady_clock::now();
    Outcome outcome;
    nlohmann::json config;
    if (sub == verify) {
      vc.function = parse_function(vf.name, vf.params, vf.poly);
      if (!interval.empty()) vc.interval = parse_interval(interval);
      vc.workers = common.workers;
      outcome = cmd_verify(vc);
      config = to_json(vc);
    } else if (sub == hankel) {
      if (!hf.name.empty()) hc.function = parse_function(hf.name, hf.params, hf.poly);
      if (hank_center->count() > 0) hc.center = h_center;
      outcome = cmd_hankel(hc);
      config = to_json(hc);
    } else if (sub == represent) {
      rc.function = parse_function(rf.name, rf.params, rf.poly);
      if (rep_center->count() > 0) rc.center = r_center;
      outcome = cmd_represent(rc);
      config = to_json(rc);
    } else if (sub == xi) {
      if (!xi_interval.empty()) xc.interval = parse_interval(xi_interval);
      xc.workers = common.workers;
      outcome = cmd_xi(xc);
      config = to_json(xc);
    } else if (sub == monotone || sub == convex) {
      MatrixPropertyConfig& c = sub == monotone ? mc : cc;
      const FunctionArgs& f = sub == monotone ? mf : cf;
      const std::string& iv = sub == monotone ? m_interval : c_interval;
      c.function = parse_function(f.name, f.params, f.poly);
      if (!iv.empty()) c.interval = parse_interval(iv);
      c.workers = common.workers;
      outcome = sub == monotone ? cmd_monotone(c) : cmd_convex(c);
      config = to_json(c);
    }
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const nlohmann::json report = envelope(command, config, outcome, resolve_workers(common.workers), seconds);

    if (!common.csv.empty()) write_csv(common.csv, outcome.csv);
    if (!common.report.empty()) {
      std::ofstream f(common.report);
      if (!f) throw InvalidInput("cannot write report: " + common.report);
      f << report.dump(2) << '\n';
      out << command << ": " << exit_name(outcome.exit) << " (report: " << common.report << ")\n";
    } else {
      out << report.dump(2) << '\n';
    }
    return static_cast<int>(outcome.exit);
  } catch (const std::exception& e) {
    err << "tmm " << command << ": error: " << e.what() << '\n';
    return static_cast<int>(Exit::Usage);
  }
}

}  // namespace tmm::harness
