#include <cmath>
#include <fstream>

#include "tmm/error.hpp"
#include "tmm/inequality.hpp"

namespace tmm {

using nlohmann::json;

namespace {

json matrix_to_json(const HermitianMatrix& m) {
  json re = json::array();
  json im = json::array();
  for (int i = 0; i < m.dim(); ++i) {
    json rr = json::array();
    json ri = json::array();
    for (int j = 0; j < m.dim(); ++j) {
      rr.push_back(m(i, j).real());
      ri.push_back(m(i, j).imag());
    }
    re.push_back(std::move(rr));
    im.push_back(std::move(ri));
  }
  return {{"re", std::move(re)}, {"im", std::move(im)}};
}

HermitianMatrix matrix_from_json(const json& j, int n, const char* name) {
  if (!j.is_object() || !j.contains("re") || !j.contains("im"))
    throw InvalidInput(std::string("replay file: matrix ") + name + " needs 're' and 'im'");
  const json& re = j.at("re");
  const json& im = j.at("im");
  CMatrix m(n, n);
  if (re.size() != static_cast<std::size_t>(n) || im.size() != static_cast<std::size_t>(n))
    throw InvalidInput(std::string("replay file: matrix ") + name + " has wrong row count");
  for (int i = 0; i < n; ++i) {
    if (re[i].size() != static_cast<std::size_t>(n) || im[i].size() != static_cast<std::size_t>(n))
      throw InvalidInput(std::string("replay file: matrix ") + name + " has wrong column count");
    for (int k = 0; k < n; ++k) m(i, k) = Complex(re[i][k].get<double>(), im[i][k].get<double>());
  }
  return HermitianMatrix(std::move(m));
}

json bound_to_json(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

double bound_from_json(const json& j, double infinite) { return j.is_null() ? infinite : j.get<double>(); }

}  // namespace

json quadruple_to_json(const OrderedQuadruple& q) {
  return {
      {"format", "tmm-quadruple"},
      {"version", 1},
      {"dimension", q.dim()},
      {"interval", {bound_to_json(q.interval().lo), bound_to_json(q.interval().hi)}},
      {"seed", q.seed()},
      {"A", matrix_to_json(q.A())},
      {"B", matrix_to_json(q.B())},
      {"C", matrix_to_json(q.C())},
      {"D", matrix_to_json(q.D())},
  };
}

OrderedQuadruple quadruple_from_json(const json& j) {
  try {
    if (j.value("format", std::string()) != "tmm-quadruple") throw InvalidInput("replay file: unknown format");
    if (j.value("version", 0) != 1) throw InvalidInput("replay file: unsupported version");
    const int n = j.at("dimension").get<int>();
    if (n < 1) throw InvalidInput("replay file: bad dimension");
    const json& iv = j.at("interval");
    const double inf = std::numeric_limits<double>::infinity();
    const Interval interval{bound_from_json(iv.at(0), -inf), bound_from_json(iv.at(1), inf)};
    OrderedQuadruple q(matrix_from_json(j.at("A"), n, "A"), matrix_from_json(j.at("B"), n, "B"),
                       matrix_from_json(j.at("C"), n, "C"), interval, j.at("seed").get<std::uint64_t>());
    if (j.contains("D")) {
      const HermitianMatrix d = matrix_from_json(j.at("D"), n, "D");
      if (max_abs_diff(d.entries(), q.D().entries()) != 0.0)
        throw InvalidInput("replay file: D differs from A + C - B");
    }
    return q;
  } catch (const json::exception& e) {
    throw InvalidInput(std::string("replay file: ") + e.what());
  }
}

void save_quadruple(const std::filesystem::path& path, const OrderedQuadruple& q, const std::string& function,
                    std::optional<double> margin) {
  json j = quadruple_to_json(q);
  if (!function.empty()) j["function"] = function;
  if (margin) j["margin"] = *margin;
  std::ofstream out(path);
  if (!out) throw InvalidInput("cannot write replay file: " + path.string());
  out << j.dump(2) << '\n';
}

OrderedQuadruple load_quadruple(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInput("cannot open replay file: " + path.string());
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw InvalidInput("replay file: " + std::string(e.what()));
  }
  return quadruple_from_json(j);
}

}  // namespace tmm
