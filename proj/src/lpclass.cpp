#include "tmm/lpclass.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <numbers>
#include <sstream>
#include <string>

#include "tmm/ddouble.hpp"
#include "tmm/error.hpp"

namespace tmm {

void HadamardProduct::validate() const {
  if (k < 0) throw InvalidInput("Hadamard product: root order at 0 must be nonnegative");
  if (cq < 0) throw InvalidInput("Hadamard product: quadratic exponent must be >= 0");
  for (const Root& r : roots) {
    if (!(std::isfinite(r.rho) && r.rho != 0.0)) throw InvalidInput("Hadamard product: roots must be real and nonzero");
    if (r.multiplicity < 1) throw InvalidInput("Hadamard product: multiplicity must be positive");
  }
}

namespace {

// Largest listed |rho|: a lower bound for every omitted root.
double listed_radius(const HadamardProduct& h) {
  double r = 0.0;
  for (const Root& root : h.roots) r = std::max(r, std::abs(root.rho));
  return r;
}

// sum_{n >= m} n^{-p} by Euler-Maclaurin, p >= 2.
double hurwitz_tail(double p, double m) {
  double s = std::pow(m, 1.0 - p) / (p - 1.0) + 0.5 * std::pow(m, -p);
  s += p / 12.0 * std::pow(m, -p - 1.0);
  s -= p * (p + 1.0) * (p + 2.0) / 720.0 * std::pow(m, -p - 3.0);
  s += p * (p + 1.0) * (p + 2.0) * (p + 3.0) * (p + 4.0) / 30240.0 * std::pow(m, -p - 5.0);
  return s;
}

// log(1 + w) - w without cancellation for small w.
double log1p_minus(double w) {
  if (std::abs(w) < 0.05) {
    double acc = 0.0;
    for (int n = 16; n >= 2; --n) acc = acc * w + ((n % 2 == 0) ? -1.0 : 1.0) / n;
    return acc * w * w;
  }
  return std::log1p(w) - w;
}

}  // namespace

ProductValue eval_product(const HadamardProduct& h, double x) {
  h.validate();
  ProductValue out;
  int sign = 1;
  DDouble log_acc(-h.a - h.b * x - h.cq * x * x);
  bool zero = false;
  if (h.k > 0) {
    if (x == 0.0) zero = true;
    else {
      log_acc += DDouble(h.k * std::log(std::abs(x)));
      if (x < 0 && h.k % 2 == 1) sign = -sign;
    }
  }
  for (const Root& r : h.roots) {
    const double u = 1.0 - x / r.rho;
    if (u == 0.0) {
      zero = true;
      continue;
    }
    const double w = -x / r.rho;
    const double term = u > 0 ? log1p_minus(w) : std::log(std::abs(u)) - w;
    log_acc += DDouble(r.multiplicity * term);
    if (u < 0 && r.multiplicity % 2 == 1) sign = -sign;
  }
  if (h.tail) {
    log_acc += DDouble(-0.5 * x * x * h.tail->s2 - x * x * x * h.tail->s3 / 3.0);
    const double radius = listed_radius(h);
    const double ratio = radius > 0 ? std::abs(x) / radius : 1.0;
    if (ratio < 1.0) {
      const double bound_log = std::pow(x, 4) * h.tail->s4_bound / (4.0 * (1.0 - ratio));
      out.truncation_bound = std::expm1(bound_log);
    } else {
      out.truncation_bound = std::numeric_limits<double>::infinity();
    }
  }
  out.sign = sign;
  if (zero) {
    out.value = 0.0;
    out.log_abs = -std::numeric_limits<double>::infinity();
    return out;
  }
  const double log_abs = double(log_acc);
  // Rounding in the log-domain sum and the final exp.
  if (out.truncation_bound) *out.truncation_bound += 16.0 * std::numeric_limits<double>::epsilon() * (1.0 + std::abs(log_abs));
  out.log_abs = log_abs;
  out.value = sign * std::exp(log_abs);
  return out;
}

HadamardProduct reciprocal_gamma_product(int truncation) {
  if (truncation < 1) throw InvalidInput("truncation must be at least 1");
  HadamardProduct h;
  h.k = 1;
  h.b = -std::numbers::egamma;
  h.roots.reserve(static_cast<std::size_t>(truncation));
  for (int n = 1; n <= truncation; ++n) h.roots.push_back({-static_cast<double>(n), 1});
  const double m = truncation + 1.0;
  // rho = -n: rho^{-2} = n^{-2}, rho^{-3} = -n^{-3}.
  h.tail = TailSums{hurwitz_tail(2.0, m), -hurwitz_tail(3.0, m), hurwitz_tail(4.0, m)};
  return h;
}

PowerSeries neg_log_series(const HadamardProduct& h, double center, int order) {
  h.validate();
  if (order < 0) throw InvalidInput("series order must be nonnegative");
  const ProductValue v = eval_product(h, center);
  if (!(v.value > 0.0)) {
    std::ostringstream os;
    os << "product is not positive at center " << center << " (value " << v.value << ")";
    throw PreconditionError(os.str());
  }
  std::vector<double> a(static_cast<std::size_t>(order) + 1, 0.0);
  a[0] = h.a + h.b * center + h.cq * center * center;
  if (order >= 1) a[1] += h.b + 2.0 * h.cq * center;
  if (order >= 2) a[2] += h.cq;

  // Each factor contributes -log(1 - (c+z)/rho) - (c+z)/rho; the shifted root
  // rho - c gives sum_{n>=1} z^n / (n (rho - c)^n).
  auto add_root = [&](double rho, double mult, bool exponential) {
    const double shifted = rho - center;
    a[0] += mult * -std::log(std::abs(1.0 - center / rho));
    if (exponential) {
      a[0] -= mult * center / rho;
      if (order >= 1) a[1] -= mult / rho;
    }
    double p = 1.0;
    for (int n = 1; n <= order; ++n) {
      p /= shifted;
      a[static_cast<std::size_t>(n)] += mult * p / n;
    }
  };
  for (const Root& r : h.roots) add_root(r.rho, r.multiplicity, true);
  if (h.tail) {
    // Omitted roots: + x^2 s2/2 + x^3 s3/3 at x = c + z, as in eval_product.
    const double s2 = h.tail->s2, s3 = h.tail->s3, c = center;
    a[0] += c * c * s2 / 2.0 + c * c * c * s3 / 3.0;
    if (order >= 1) a[1] += c * s2 + c * c * s3;
    if (order >= 2) a[2] += s2 / 2.0 + c * s3;
    if (order >= 3) a[3] += s3 / 3.0;
  }
  if (h.k > 0) {
    // -k log(c + z) = -k log c - k log(1 + z/c): a root at 0 seen from c.
    a[0] -= h.k * std::log(center);
    double p = 1.0;
    for (int n = 1; n <= order; ++n) {
      p /= -center;
      a[static_cast<std::size_t>(n)] += h.k * p / n;
    }
  }
  return {center, std::move(a)};
}

ScalarFunction product_function(const HadamardProduct& h, const Interval& interval) {
  h.validate();
  // Logarithmic derivatives of the product.
  auto dlog = [h](double x) {
    double d = -h.b - 2.0 * h.cq * x;
    if (h.k > 0) d += h.k / x;
    for (const Root& r : h.roots) d += r.multiplicity * (1.0 / (x - r.rho) + 1.0 / r.rho);
    if (h.tail) d += -x * h.tail->s2 - x * x * h.tail->s3;
    return d;
  };
  auto d2log = [h](double x) {
    double d = -2.0 * h.cq;
    if (h.k > 0) d -= h.k / (x * x);
    for (const Root& r : h.roots) d -= r.multiplicity / ((x - r.rho) * (x - r.rho));
    if (h.tail) d += -h.tail->s2 - 2.0 * x * h.tail->s3;
    return d;
  };
  std::vector<ScalarFunction::Fn> ladder{
      [h](double x) { return eval_product(h, x).value; },
      [h, dlog](double x) { return eval_product(h, x).value * dlog(x); },
      [h, dlog, d2log](double x) {
        const double l1 = dlog(x);
        return eval_product(h, x).value * (d2log(x) + l1 * l1);
      },
  };
  auto taylor = [h](double c, int count) {
    PowerSeries l = neg_log_series(h, c, count - 1);
    return series_exp(-1.0 * l).coeffs;
  };
  return ScalarFunction("hadamard", interval, std::move(ladder), std::move(taylor));
}

double radical_membership_margin(const ScalarFunction& g, const Interval& interval, int n_root, int size, int order) {
  if (n_root < 1) throw InvalidInput("root order must be at least 1");
  if (!interval.bounded()) throw InvalidInput("radical membership test needs a bounded interval");
  const double mid = 0.5 * (interval.lo + interval.hi);
  const int needed = 2 + 2 * (size - 1);
  const int count = std::max(order, needed) + 1;
  const PowerSeries p = g.taylor(mid, count);
  if (!(p.coeffs[0] > 0.0)) throw PreconditionError("function is not positive at the interval midpoint");
  const PowerSeries l = (1.0 / n_root) * series_log_neg(p);
  return hankel_psd_test(l, {2, size, true}, 0.0).min_eig;
}

std::vector<double> load_root_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInput("cannot open root file: " + path.string());
  std::vector<double> roots;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos) continue;
    try {
      std::size_t used = 0;
      const double v = std::stod(line.substr(first), &used);
      if (line.find_first_not_of(" \t\r,", first + used) != std::string::npos) throw std::invalid_argument("trailing");
      roots.push_back(v);
    } catch (const std::exception&) {
      throw InvalidInput(path.string() + ":" + std::to_string(lineno) + ": expected one real number per line");
    }
  }
  return roots;
}

}  // namespace tmm
