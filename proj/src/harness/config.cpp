#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "tmm/error.hpp"
#include "tmm/harness.hpp"

namespace tmm::harness {

using nlohmann::json;

const char* tool_version() { return TMM_VERSION; }

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double parse_bound(const std::string& text) {
  const std::string t = trim(text);
  if (t == "inf" || t == "+inf") return std::numeric_limits<double>::infinity();
  if (t == "-inf") return -std::numeric_limits<double>::infinity();
  try {
    std::size_t used = 0;
    const double v = std::stod(t, &used);
    if (used != t.size()) throw std::invalid_argument("trailing");
    return v;
  } catch (const std::exception&) {
    throw InvalidInput("cannot parse interval bound '" + t + "'");
  }
}

}  // namespace

std::vector<std::pair<std::string, std::string>> load_config_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInput("cannot open config file: " + path.string());
  std::vector<std::pair<std::string, std::string>> out;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw InvalidInput(path.string() + ":" + std::to_string(lineno) + ": expected 'key = value'");
    std::string key = trim(line.substr(0, eq));
    std::string value = trim(line.substr(eq + 1));
    while (key.rfind('-', 0) == 0) key.erase(0, 1);
    if (value.size() >= 2 && (value.front() == '"' || value.front() == '\'') && value.back() == value.front())
      value = value.substr(1, value.size() - 2);
    if (key.empty()) throw InvalidInput(path.string() + ":" + std::to_string(lineno) + ": empty key");
    out.emplace_back(std::move(key), std::move(value));
  }
  return out;
}

Interval parse_interval(const std::string& text) {
  const auto comma = text.find(',');
  if (comma == std::string::npos) throw InvalidInput("interval must be given as lo,hi");
  const Interval iv{parse_bound(text.substr(0, comma)), parse_bound(text.substr(comma + 1))};
  if (!iv.valid()) throw InvalidInput("interval '" + text + "' is empty");
  return iv;
}

FunctionSpec parse_function(const std::string& name, const std::vector<std::string>& params,
                            const std::vector<double>& poly) {
  FunctionSpec f;
  f.name = name;
  f.poly = poly;
  for (const std::string& p : params) {
    const auto eq = p.find('=');
    if (eq == std::string::npos) throw InvalidInput("function parameter '" + p + "' is not key=value");
    const std::string key = trim(p.substr(0, eq));
    const std::string value = trim(p.substr(eq + 1));
    try {
      std::size_t used = 0;
      f.params[key] = std::stod(value, &used);
      if (used != value.size()) throw std::invalid_argument("trailing");
    } catch (const std::exception&) {
      throw InvalidInput("function parameter '" + key + "' needs a number, got '" + value + "'");
    }
  }
  return f;
}

json interval_to_json(const Interval& i) {
  auto b = [](double v) { return std::isfinite(v) ? json(v) : json(v > 0 ? "inf" : "-inf"); };
  return json::array({b(i.lo), b(i.hi)});
}

json function_to_json(const FunctionSpec& f) {
  json j{{"name", f.name}, {"params", json::object()}};
  for (const auto& [k, v] : f.params) j["params"][k] = v;
  if (!f.poly.empty()) j["poly"] = f.poly;
  return j;
}

std::string exit_name(Exit e) {
  switch (e) {
    case Exit::Pass: return "PASS";
    case Exit::Violation: return "FAIL";
    case Exit::Usage: return "USAGE_ERROR";
    case Exit::Inconclusive: return "INCONCLUSIVE";
  }
  return "FAIL";
}

json envelope(const std::string& command, const json& config, const Outcome& outcome, int workers, double seconds) {
  return {{"schema_version", kSchemaVersion},
          {"tool", "tmm"},
          {"version", tool_version()},
          {"command", command},
          {"config", config},
          {"result", outcome.result},
          {"verdict", exit_name(outcome.exit)},
          {"exit_code", static_cast<int>(outcome.exit)},
          {"execution", {{"workers", workers}, {"wall_seconds", seconds}}}};
}

void write_csv(const std::filesystem::path& path, const std::vector<std::vector<std::string>>& rows) {
  std::ofstream out(path);
  if (!out) throw InvalidInput("cannot write CSV file: " + path.string());
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << row[i];
    out << '\n';
  }
}

}  // namespace tmm::harness
