#include "tmm/series.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>
#include <string>

#include "tmm/ddouble.hpp"
#include "tmm/error.hpp"

namespace tmm {

double PowerSeries::eval(double x) const {
  const double z = x - center;
  double acc = 0.0;
  for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) acc = acc * z + *it;
  return acc;
}

PowerSeries PowerSeries::derivative() const {
  std::vector<double> d;
  for (std::size_t n = 1; n < coeffs.size(); ++n) d.push_back(static_cast<double>(n) * coeffs[n]);
  if (d.empty()) d.push_back(0.0);
  return {center, std::move(d)};
}

PowerSeries PowerSeries::truncated(int order) const {
  std::vector<double> a(coeffs.begin(),
                        coeffs.begin() + std::min<std::size_t>(coeffs.size(), static_cast<std::size_t>(order) + 1));
  return {center, std::move(a)};
}

namespace {
void require_same_center(const PowerSeries& a, const PowerSeries& b) {
  if (a.center != b.center) throw InvalidInput("power series have different centers");
}
}  // namespace

PowerSeries operator+(const PowerSeries& a, const PowerSeries& b) {
  require_same_center(a, b);
  const std::size_t n = std::min(a.coeffs.size(), b.coeffs.size());
  std::vector<double> c(n);
  for (std::size_t i = 0; i < n; ++i) c[i] = a.coeffs[i] + b.coeffs[i];
  return {a.center, std::move(c)};
}

PowerSeries operator*(const PowerSeries& a, const PowerSeries& b) {
  require_same_center(a, b);
  const std::size_t n = std::min(a.coeffs.size(), b.coeffs.size());
  std::vector<double> c(n, 0.0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; i + j < n; ++j) c[i + j] += a.coeffs[i] * b.coeffs[j];
  return {a.center, std::move(c)};
}

PowerSeries operator*(double s, const PowerSeries& a) {
  PowerSeries out = a;
  for (double& x : out.coeffs) x *= s;
  return out;
}

// g * L' = -g'  gives  n g0 L_n = -n g_n - sum_{k=1}^{n-1} k L_k g_{n-k}.
PowerSeries series_log_neg(const PowerSeries& g) {
  if (g.coeffs.empty() || !(g.coeffs[0] > 0.0))
    throw PreconditionError("series_log_neg requires a positive constant term");
  const int order = g.order();
  std::vector<double> out(g.coeffs.size(), 0.0);
  out[0] = -std::log(g.coeffs[0]);
  for (int n = 1; n <= order; ++n) {
    double acc = static_cast<double>(n) * g.coeffs[n];
    for (int k = 1; k < n; ++k) acc += k * out[k] * g.coeffs[n - k];
    out[n] = -acc / (n * g.coeffs[0]);
  }
  return {g.center, std::move(out)};
}

PowerSeries series_log_neg_compensated(const PowerSeries& g) {
  if (g.coeffs.empty() || !(g.coeffs[0] > 0.0))
    throw PreconditionError("series_log_neg requires a positive constant term");
  const int order = g.order();
  std::vector<DDouble> out(g.coeffs.size());
  out[0] = DDouble(-std::log(g.coeffs[0]));
  const DDouble g0(g.coeffs[0]);
  for (int n = 1; n <= order; ++n) {
    DDouble acc = DDouble(static_cast<double>(n)) * DDouble(g.coeffs[n]);
    for (int k = 1; k < n; ++k) acc += DDouble(static_cast<double>(k)) * out[k] * DDouble(g.coeffs[n - k]);
    out[n] = -(acc / (DDouble(static_cast<double>(n)) * g0));
  }
  std::vector<double> res(out.size());
  for (std::size_t i = 0; i < out.size(); ++i) res[i] = static_cast<double>(out[i]);
  return {g.center, std::move(res)};
}

std::vector<double> series_log_neg_error(const PowerSeries& g, std::span<const double> g_err) {
  if (g_err.size() != g.coeffs.size()) throw InvalidInput("error vector length differs from series length");
  const PowerSeries l = series_log_neg(g);
  const double g0 = std::abs(g.coeffs[0]);
  const int order = g.order();
  std::vector<double> e(g.coeffs.size(), 0.0);
  e[0] = g_err[0] / g0;
  for (int n = 1; n <= order; ++n) {
    double acc = g_err[n];
    for (int k = 1; k < n; ++k) {
      const double w = static_cast<double>(k) / n;
      acc += w * (e[k] * std::abs(g.coeffs[n - k]) + std::abs(l.coeffs[k]) * g_err[n - k]);
    }
    acc += std::abs(l.coeffs[n]) * g_err[0];
    e[n] = acc / g0;
  }
  return e;
}

// E' = g' E  gives  n E_n = sum_{k=1}^{n} k g_k E_{n-k}.
PowerSeries series_exp(const PowerSeries& g) {
  if (g.coeffs.empty()) return g;
  const int order = g.order();
  std::vector<double> out(g.coeffs.size(), 0.0);
  out[0] = std::exp(g.coeffs[0]);
  for (int n = 1; n <= order; ++n) {
    double acc = 0.0;
    for (int k = 1; k <= n; ++k) acc += k * g.coeffs[k] * out[n - k];
    out[n] = acc / n;
  }
  return {g.center, std::move(out)};
}

PowerSeries load_series_csv(const std::filesystem::path& path, double center) {
  std::ifstream in(path);
  if (!in) throw InvalidInput("cannot open coefficient file: " + path.string());
  std::vector<double> coeffs;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos) continue;
    line = line.substr(first);
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(line, &used);
    } catch (const std::exception&) {
      throw InvalidInput(path.string() + ":" + std::to_string(lineno) + ": not a number");
    }
    if (line.find_first_not_of(" \t\r,", used) != std::string::npos)
      throw InvalidInput(path.string() + ":" + std::to_string(lineno) + ": expected one coefficient per line");
    if (!std::isfinite(v)) throw InvalidInput(path.string() + ":" + std::to_string(lineno) + ": non-finite coefficient");
    coeffs.push_back(v);
  }
  if (coeffs.empty()) throw InvalidInput("coefficient file is empty: " + path.string());
  return {center, std::move(coeffs)};
}

void save_series_csv(const std::filesystem::path& path, const PowerSeries& p) {
  std::ofstream out(path);
  if (!out) throw InvalidInput("cannot write coefficient file: " + path.string());
  out.precision(17);
  for (double a : p.coeffs) out << a << '\n';
}

void HankelSpec::validate(int series_order) const {
  if (start < 2 || start % 2 != 0) throw InvalidInput("Hankel start index must be an even integer >= 2");
  if (size < 1) throw InvalidInput("Hankel size must be at least 1");
  if (start + 2 * (size - 1) > series_order) {
    std::ostringstream os;
    os << "series of order " << series_order << " too short for Hankel start " << start << ", size " << size
       << " (needs order " << start + 2 * (size - 1) << ")";
    throw InvalidInput(os.str());
  }
}

namespace {
Eigen::MatrixXd hankel_entries(const PowerSeries& p, const HankelSpec& spec) {
  spec.validate(p.order());
  Eigen::MatrixXd m(spec.size, spec.size);
  for (int i = 0; i < spec.size; ++i) {
    for (int j = 0; j < spec.size; ++j) {
      const int idx = spec.start + i + j;
      m(i, j) = spec.weighted ? idx * p.coeffs[idx] : p.coeffs[idx];
    }
  }
  return m;
}
}  // namespace

HermitianMatrix build_hankel(const PowerSeries& p, const HankelSpec& spec) {
  return HermitianMatrix(hankel_entries(p, spec));
}

std::vector<double> symmetric_eigenvalues_compensated(const Eigen::MatrixXd& m) {
  const int n = static_cast<int>(m.rows());
  std::vector<DDouble> a(static_cast<std::size_t>(n * n));
  auto at = [&](int i, int j) -> DDouble& { return a[static_cast<std::size_t>(i * n + j)]; };
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) at(i, j) = DDouble(0.5 * (m(i, j) + m(j, i)));

  double norm = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) norm += m(i, j) * m(i, j);
  norm = std::sqrt(norm);

  for (int sweep = 0; sweep < 60; ++sweep) {
    double off = 0.0;
    for (int p = 0; p < n; ++p)
      for (int q = p + 1; q < n; ++q) off += at(p, q).hi * at(p, q).hi;
    if (std::sqrt(off) <= 1e-32 * norm || off == 0.0) break;
    for (int p = 0; p < n; ++p) {
      for (int q = p + 1; q < n; ++q) {
        const DDouble apq = at(p, q);
        if (apq.hi == 0.0) continue;
        const DDouble theta = (at(q, q) - at(p, p)) / (DDouble(2.0) * apq);
        DDouble t = DDouble(1.0) / (abs(theta) + sqrt(theta * theta + DDouble(1.0)));
        if (theta.hi < 0.0) t = -t;
        const DDouble c = DDouble(1.0) / sqrt(t * t + DDouble(1.0));
        const DDouble s = t * c;
        at(p, p) -= t * apq;
        at(q, q) += t * apq;
        at(p, q) = DDouble(0.0);
        at(q, p) = DDouble(0.0);
        for (int r = 0; r < n; ++r) {
          if (r == p || r == q) continue;
          const DDouble arp = at(r, p);
          const DDouble arq = at(r, q);
          at(r, p) = c * arp - s * arq;
          at(p, r) = at(r, p);
          at(r, q) = s * arp + c * arq;
          at(q, r) = at(r, q);
        }
      }
    }
  }
  std::vector<double> ev(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) ev[static_cast<std::size_t>(i)] = static_cast<double>(at(i, i));
  std::sort(ev.begin(), ev.end());
  return ev;
}

HankelVerdict hankel_psd_test(const PowerSeries& p, const HankelSpec& spec, double tol, HankelPrecision precision) {
  if (tol < 0) throw PreconditionError("tolerance must be nonnegative");
  const int cap = precision == HankelPrecision::Double ? HankelSpec::kMaxDoubleSize : HankelSpec::kMaxCompensatedSize;
  if (spec.size > cap) {
    std::ostringstream os;
    os << "Hankel size " << spec.size << " exceeds the " << cap << " supported at this precision";
    throw InvalidInput(os.str());
  }
  const Eigen::MatrixXd m = hankel_entries(p, spec);
  HankelVerdict v;
  if (precision == HankelPrecision::Double) {
    const HermitianMatrix h(m);
    const RVector& ev = h.eigenvalues();
    v.eigenvalues.assign(ev.data(), ev.data() + ev.size());
  } else {
    v.eigenvalues = symmetric_eigenvalues_compensated(m);
  }
  v.min_eig = v.eigenvalues.front();
  v.max_eig = v.eigenvalues.back();
  v.threshold = tol * m.cwiseAbs().maxCoeff();
  v.psd = v.min_eig >= -v.threshold;
  return v;
}

Eigen::MatrixXd hilbert_matrix(int s, int m) {
  if (s < 1 || m < 1) throw InvalidInput("Hilbert-type matrix needs s >= 1 and m >= 1");
  Eigen::MatrixXd h(m, m);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) h(i, j) = 1.0 / (s + i + j);
  return h;
}

double weighted_to_unweighted_check(const PowerSeries& p, int s, int m) {
  const Eigen::MatrixXd weighted = hankel_entries(p, {s, m, true});
  const Eigen::MatrixXd plain = hankel_entries(p, {s, m, false});
  const Eigen::MatrixXd schur = hilbert_matrix(s, m).cwiseProduct(weighted);
  return (schur - plain).cwiseAbs().maxCoeff();
}

ShiftSearch first_passing_shift(const PowerSeries& p, int size, int k_max, bool weighted, double tol) {
  if (k_max < 1) throw InvalidInput("k_max must be at least 1");
  ShiftSearch out;
  for (int k = 1; k <= k_max; ++k) {
    const HankelVerdict v = hankel_psd_test(p, {2 * k, size, weighted}, tol);
    if (v.psd && out.first_passing_k == 0) out.first_passing_k = k;
    out.verdicts.push_back(v);
  }
  return out;
}

}  // namespace tmm
