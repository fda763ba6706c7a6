#include "tmm/pickrep.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "tmm/error.hpp"

namespace tmm {

std::pair<double, double> PickRepresentation::support() const {
  const double lo = std::isfinite(interval.lo) ? 1.0 / (interval.lo - center) : 0.0;
  const double hi = std::isfinite(interval.hi) ? 1.0 / (interval.hi - center) : 0.0;
  return {lo, hi};
}

void PickRepresentation::validate(double slack) const {
  if (!interval.contains(center)) throw PreconditionError("representation center outside its interval");
  const auto [lo, hi] = support();
  for (const Atom& a : atoms) {
    if (!(a.w > 0.0)) throw PreconditionError("representation atom with nonpositive weight");
    if (a.t < lo - slack || a.t > hi + slack) {
      std::ostringstream os;
      os << "atom at t = " << a.t << " outside support [" << lo << ", " << hi << "]";
      throw PreconditionError(os.str());
    }
  }
}

double kernel(double t, double z, double c) {
  const double u = z - c;
  const double w = t * u;
  if (!(1.0 - w > 0.0)) {
    std::ostringstream os;
    os << "kernel: 1 - t(z - c) = " << 1.0 - w << " is not positive (t = " << t << ", z = " << z << ")";
    throw DomainError(os.str(), z);
  }
  if (std::abs(w) < 0.1) {
    // (z-c)^2 sum_{n>=0} w^n / (n + 2); 20 terms reach 1e-22 relative.
    double acc = 0.0;
    for (int n = 19; n >= 0; --n) acc = acc * w + 1.0 / (n + 2);
    return u * u * acc;
  }
  return (-std::log1p(-w) - w) / (t * t);
}

double kernel_derivative(double t, double z, double c) {
  const double u = z - c;
  const double denom = 1.0 - t * u;
  if (!(denom > 0.0)) throw DomainError("kernel derivative outside domain", z);
  return u / denom;
}

double eval_representation(const PickRepresentation& r, double z) {
  double acc = 0.0;
  for (const Atom& a : r.atoms) acc += a.w * kernel(a.t, z, r.center);
  return r.alpha + r.beta * z + acc;
}

double eval_representation_derivative(const PickRepresentation& r, double z) {
  double acc = r.beta;
  for (const Atom& a : r.atoms) acc += a.w * kernel_derivative(a.t, z, r.center);
  return acc;
}

PowerSeries representation_taylor(const PickRepresentation& r, int count) {
  std::vector<double> a(static_cast<std::size_t>(count), 0.0);
  if (count > 0) a[0] = r.alpha + r.beta * r.center;
  if (count > 1) a[1] = r.beta;
  for (int n = 2; n < count; ++n) {
    double acc = 0.0;
    for (const Atom& at : r.atoms) acc += at.w * std::pow(at.t, n - 2);
    a[static_cast<std::size_t>(n)] = acc / n;
  }
  return {r.center, std::move(a)};
}

MomentSequence coeffs_to_moments(const PowerSeries& p) {
  MomentSequence m;
  for (int k = 0; k + 2 <= p.order(); ++k) m.push_back((k + 2) * p.coeffs[static_cast<std::size_t>(k + 2)]);
  return m;
}

MomentSequence atomic_moments(const std::vector<Atom>& atoms, int count) {
  MomentSequence m(static_cast<std::size_t>(count), 0.0);
  for (const Atom& a : atoms) {
    double p = 1.0;
    for (int k = 0; k < count; ++k) {
      m[static_cast<std::size_t>(k)] += a.w * p;
      p *= a.t;
    }
  }
  return m;
}

RecoveredMeasure recover_measure(const MomentSequence& m, int k_atoms, const RecoveryOptions& options) {
  if (k_atoms < 1) throw InvalidInput("atom count must be at least 1");
  const int available = static_cast<int>(m.size());
  if (available < 2 * k_atoms) {
    std::ostringstream os;
    os << k_atoms << " atoms need moments m_0..m_" << 2 * k_atoms - 1 << " but only " << available << " given";
    throw InvalidInput(os.str());
  }
  for (double v : m)
    if (!std::isfinite(v)) throw InvalidInput("moment sequence has non-finite entries");

  RecoveredMeasure out;
  out.requested = k_atoms;
  // Pivot rows 0..k_atoms-1 need columns up to k_atoms; row k_atoms is only
  // checked for indefiniteness when m_{2K} is present.
  const int rows = available >= 2 * k_atoms + 1 ? k_atoms + 1 : k_atoms;
  const int cols = k_atoms + 1;
  auto hankel = [&](int i, int j) { return m[static_cast<std::size_t>(i + j)]; };
  Eigen::MatrixXd r = Eigen::MatrixXd::Zero(rows, cols);

  double scale = 0.0;
  for (int i = 0; i < std::min(available, rows + cols - 1); ++i) scale = std::max(scale, std::abs(m[static_cast<std::size_t>(i)]));
  if (scale == 0.0) scale = 1.0;

  auto reject = [&](int i, double pivot, const char* what) {
    std::ostringstream os;
    os << "not a moment sequence: Hankel pivot " << i << " " << what << " (pivot " << pivot << ", scale " << scale
       << ")";
    throw NotAMomentSequence(os.str(), i, pivot);
  };

  int rank = rows;
  for (int i = 0; i < rows; ++i) {
    double s = hankel(i, i);
    for (int k = 0; k < i; ++k) s -= r(k, i) * r(k, i);
    if (s < -options.tol * scale) {
      if (!options.truncate_on_failure) reject(i, s, "is negative");
      rank = i;
      break;
    }
    if (s <= options.tol * scale) {
      // A PSD matrix with a vanishing pivot has a vanishing residual row:
      // |v_ij|^2 <= s_i s_j.
      for (int j = i + 1; j < rows; ++j) {
        double v = hankel(i, j);
        for (int k = 0; k < i; ++k) v -= r(k, i) * r(k, j);
        if (std::abs(v) > std::sqrt(options.tol) * scale && !options.truncate_on_failure)
          reject(i, s, "vanishes with a nonzero residual row");
      }
      // ... and the rest of the Schur complement must itself be PSD.
      if (!options.truncate_on_failure && i + 1 < rows) {
        const int left = rows - i;
        Eigen::MatrixXd schur(left, left);
        for (int a = 0; a < left; ++a)
          for (int b = 0; b < left; ++b) {
            double v = hankel(i + a, i + b);
            for (int k = 0; k < i; ++k) v -= r(k, i + a) * r(k, i + b);
            schur(a, b) = v;
          }
        const double low = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(schur, Eigen::EigenvaluesOnly).eigenvalues()(0);
        if (low < -options.tol * scale) reject(i, low, "vanishes and the remaining Schur complement is indefinite");
      }
      rank = i;
      break;
    }
    r(i, i) = std::sqrt(s);
    for (int j = i + 1; j < cols; ++j) {
      double v = hankel(i, j);
      for (int k = 0; k < i; ++k) v -= r(k, i) * r(k, j);
      r(i, j) = v / r(i, i);
    }
  }

  const int n = std::min(rank, k_atoms);
  out.rank_deficient = n < k_atoms;
  if (n == 0) return out;

  Eigen::MatrixXd jacobi = Eigen::MatrixXd::Zero(n, n);
  for (int j = 0; j < n; ++j) {
    const double prev = j > 0 ? r(j - 1, j) / r(j - 1, j - 1) : 0.0;
    jacobi(j, j) = r(j, j + 1) / r(j, j) - prev;
    if (j + 1 < n) {
      jacobi(j, j + 1) = r(j + 1, j + 1) / r(j, j);
      jacobi(j + 1, j) = jacobi(j, j + 1);
    }
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(jacobi);
  for (int i = 0; i < n; ++i) {
    const double v0 = solver.eigenvectors()(0, i);
    out.atoms.push_back({solver.eigenvalues()(i), m[0] * v0 * v0});
  }
  return out;
}

RoundTrip roundtrip(const ScalarFunction& f, double c, int k_atoms, const RecoveryOptions& options) {
  const PowerSeries p = f.taylor(c, 2 * k_atoms + 3);
  RoundTrip out;
  out.measure = recover_measure(coeffs_to_moments(p), k_atoms, options);
  PickRepresentation& rep = out.representation;
  rep.beta = p.coeffs[1];
  rep.alpha = p.coeffs[0] - p.coeffs[1] * c;
  rep.center = c;
  rep.interval = f.domain();
  rep.atoms = out.measure.atoms;
  rep.validate();

  const double dist = f.domain().distance_to_boundary(c);
  out.radius = std::isfinite(dist) ? 0.5 * dist : 1.0;
  constexpr int kGrid = 50;
  for (int i = 0; i < kGrid; ++i) {
    const double z = c - out.radius + 2.0 * out.radius * i / (kGrid - 1);
    out.residual = std::max(out.residual, std::abs(f.eval(z) - eval_representation(rep, z)));
  }
  return out;
}

double roundtrip_residual(const ScalarFunction& f, double c, int k_atoms) { return roundtrip(f, c, k_atoms).residual; }

nlohmann::json representation_to_json(const PickRepresentation& r) {
  using nlohmann::json;
  auto bound = [](double v) { return std::isfinite(v) ? json(v) : json(nullptr); };
  json atoms = json::array();
  for (const Atom& a : r.atoms) atoms.push_back({{"t", a.t}, {"w", a.w}});
  return {{"format", "tmm-representation"},
          {"version", 1},
          {"alpha", r.alpha},
          {"beta", r.beta},
          {"center", r.center},
          {"interval", {bound(r.interval.lo), bound(r.interval.hi)}},
          {"kernel_t0", "(z-c)^2/2"},
          {"atoms", std::move(atoms)}};
}

PickRepresentation representation_from_json(const nlohmann::json& j) {
  try {
    if (j.value("format", std::string()) != "tmm-representation")
      throw InvalidInput("representation: unknown format");
    PickRepresentation r;
    r.alpha = j.at("alpha").get<double>();
    r.beta = j.at("beta").get<double>();
    r.center = j.at("center").get<double>();
    const auto& iv = j.at("interval");
    const double inf = std::numeric_limits<double>::infinity();
    r.interval = {iv.at(0).is_null() ? -inf : iv.at(0).get<double>(), iv.at(1).is_null() ? inf : iv.at(1).get<double>()};
    for (const auto& a : j.at("atoms")) r.atoms.push_back({a.at("t").get<double>(), a.at("w").get<double>()});
    r.validate();
    return r;
  } catch (const nlohmann::json::exception& e) {
    throw InvalidInput(std::string("representation: ") + e.what());
  }
}

}  // namespace tmm
