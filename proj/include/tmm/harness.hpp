#pragma once

// Command layer behind the `tmm` CLI: typed configs, report envelopes and
// exit codes. Every command returns its result as JSON so the CLI, the tests
// and the acceptance suite share one code path.

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

#include "tmm/inequality.hpp"
#include "tmm/scalar_function.hpp"
#include "tmm/series.hpp"

namespace tmm::harness {

inline constexpr int kSchemaVersion = 1;
const char* tool_version();

enum class Exit : int { Pass = 0, Violation = 1, Usage = 2, Inconclusive = 3 };

/// `key = value` lines; '#' starts a comment; surrounding quotes are stripped.
/// Keys are long flag names without the leading dashes.
std::vector<std::pair<std::string, std::string>> load_config_file(const std::filesystem::path& path);

/// "lo,hi" with "inf"/"-inf" allowed.
Interval parse_interval(const std::string& text);
/// "name" plus "key=value" parameters and optional polynomial coefficients.
FunctionSpec parse_function(const std::string& name, const std::vector<std::string>& params,
                            const std::vector<double>& poly);
nlohmann::json function_to_json(const FunctionSpec& f);
nlohmann::json interval_to_json(const Interval& i);

struct Outcome {
  nlohmann::json result;
  Exit exit = Exit::Pass;
  /// Rows for the optional CSV dump; first row is the header.
  std::vector<std::vector<std::string>> csv;
};

struct VerifyConfig {
  FunctionSpec function{"x2", {}, {}};
  std::optional<Interval> interval;  ///< defaults to the registry interval
  std::string check = "trace";        ///< trace, det, iso, linear, frobenius, detlinear
  std::size_t trials = 1000;
  std::uint64_t seed = 1;
  int n_min = 1;
  int n_max = 6;
  int workers = 0;
  double tol = 1e-10;
  int t_samples = 10;
  bool serial = false;
  std::string witness;  ///< path for the worst violating quadruple
  std::string replay;   ///< replay a saved quadruple instead of sampling
};
Outcome cmd_verify(const VerifyConfig& c);
nlohmann::json to_json(const VerifyConfig& c);

struct HankelConfig {
  std::optional<FunctionSpec> function;
  std::string csv;  ///< coefficient file, one per line
  std::optional<double> center;
  int size = 2;
  int shift = 2;
  int k_max = 0;  ///< > 0: search shifts 2, 4, .., 2 k_max for a passing one
  std::string weighting = "both";  ///< weighted, unweighted, both
  double tol = 1e-12;
  bool compensated = false;
};
Outcome cmd_hankel(const HankelConfig& c);
nlohmann::json to_json(const HankelConfig& c);

struct RepresentConfig {
  FunctionSpec function{"neglog1mx", {}, {}};
  std::optional<double> center;
  int atoms = 2;
  double tol = 1e-8;
  bool truncate = false;
  std::string output;  ///< representation JSON
};
Outcome cmd_represent(const RepresentConfig& c);
nlohmann::json to_json(const RepresentConfig& c);

struct XiConfig {
  double center = 0.0;
  Interval interval{-13.0, 13.0};
  int coeffs = 0;
  bool hankel = false;
  int m = 4;
  int k = 2;
  bool matrix = false;
  int n = 4;
  std::size_t trials = 1000;
  std::uint64_t seed = 1;
  int workers = 0;
  double matrix_tol = 1e-7;
  bool cross_validate = false;
  std::string zeros;
  bool defect = false;  ///< product-based control with one complex pair
  std::size_t defect_index = 0;
  double defect_offset = 3.0;
  double step = 1.0 / 256.0;
  double cutoff = 2.25;
  int theta_terms = 6;
};
Outcome cmd_xi(const XiConfig& c);
nlohmann::json to_json(const XiConfig& c);

struct MatrixPropertyConfig {
  FunctionSpec function{"x", {}, {}};
  std::optional<Interval> interval;
  bool derivative = false;  ///< test f' instead of f
  int n = 4;
  std::size_t trials = 1000;
  std::uint64_t seed = 1;
  int workers = 0;
  double tol = 1e-10;
};
Outcome cmd_monotone(const MatrixPropertyConfig& c);
Outcome cmd_convex(const MatrixPropertyConfig& c);
nlohmann::json to_json(const MatrixPropertyConfig& c);

/// Report envelope: schema, version, command, resolved config, result and
/// verdict. Execution details (workers, wall time) sit in a separate field so
/// that the rest is reproducible byte for byte.
nlohmann::json envelope(const std::string& command, const nlohmann::json& config, const Outcome& outcome,
                        int workers, double seconds);
std::string exit_name(Exit e);

void write_csv(const std::filesystem::path& path, const std::vector<std::vector<std::string>>& rows);

/// Full CLI; returns the process exit code.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace tmm::harness
