#include "tmm/scalar_function.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "tmm/error.hpp"

namespace tmm {

double Interval::distance_to_boundary(double x) const { return std::min(x - lo, hi - x); }

ScalarFunction::ScalarFunction(std::string name, Interval domain, std::vector<Fn> derivatives, TaylorFn taylor)
    : name_(std::move(name)), domain_(domain), derivs_(std::move(derivatives)), taylor_(std::move(taylor)) {
  if (!domain_.valid()) throw InvalidInput("function '" + name_ + "' has an empty domain");
  if (derivs_.empty()) throw InvalidInput("function '" + name_ + "' has no evaluator");
}

double ScalarFunction::nth(int k, double x) const {
  if (k < 0 || k > derivative_count()) {
    std::ostringstream os;
    os << "derivative of order " << k << " not available for '" << name_ << "'";
    throw InvalidInput(os.str());
  }
  if (!domain_.contains(x)) {
    std::ostringstream os;
    os.precision(17);
    os << "point " << x << " outside domain (" << domain_.lo << ", " << domain_.hi << ") of '" << name_ << "'";
    throw DomainError(os.str(), x);
  }
  return derivs_[static_cast<std::size_t>(k)](x);
}

ScalarFunction ScalarFunction::derivative() const {
  if (derivative_count() < 1) throw InvalidInput("'" + name_ + "' has no derivative");
  std::vector<Fn> d(derivs_.begin() + 1, derivs_.end());
  TaylorFn t;
  if (taylor_) {
    t = [parent = taylor_](double c, int count) {
      const std::vector<double> a = parent(c, count + 1);
      std::vector<double> out(static_cast<std::size_t>(count));
      for (int k = 0; k < count; ++k) out[static_cast<std::size_t>(k)] = (k + 1) * a[static_cast<std::size_t>(k + 1)];
      return out;
    };
  }
  return ScalarFunction("d(" + name_ + ")", domain_, std::move(d), std::move(t));
}

PowerSeries ScalarFunction::taylor(double center, int count) const {
  if (!taylor_) throw InvalidInput("'" + name_ + "' has no Taylor coefficients");
  if (count < 1) throw InvalidInput("Taylor coefficient count must be positive");
  if (!domain_.contains(center)) {
    std::ostringstream os;
    os << "Taylor center " << center << " outside domain of '" << name_ << "'";
    throw DomainError(os.str(), center);
  }
  return {center, taylor_(center, count)};
}

ScalarFunction ScalarFunction::renamed(std::string name) const {
  ScalarFunction out = *this;
  out.name_ = std::move(name);
  return out;
}

namespace fn {
using Fn = ScalarFunction::Fn;
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double factorial(int k) { return std::tgamma(k + 1.0); }

double binom_general(double t, int k) {
  double b = 1.0;
  for (int j = 0; j < k; ++j) b *= (t - j) / (j + 1);
  return b;
}

Interval intersect(const Interval& a, const Interval& b) {
  return {std::max(a.lo, b.lo), std::min(a.hi, b.hi)};
}

std::string fmt_num(double v) {
  std::ostringstream os;
  os << v;
  return os.str();
}

}  // namespace

ScalarFunction polynomial(std::vector<double> coeffs, std::string name) {
  if (coeffs.empty()) coeffs.push_back(0.0);
  if (name.empty()) {
    std::ostringstream os;
    os << "poly(";
    for (std::size_t i = 0; i < coeffs.size(); ++i) os << (i ? "," : "") << coeffs[i];
    os << ")";
    name = os.str();
  }
  // k-th derivative coefficients, enough for the ladder below.
  auto derive = [](const std::vector<double>& a) {
    std::vector<double> d;
    for (std::size_t n = 1; n < a.size(); ++n) d.push_back(static_cast<double>(n) * a[n]);
    if (d.empty()) d.push_back(0.0);
    return d;
  };
  std::vector<Fn> ladder;
  std::vector<double> cur = coeffs;
  for (int k = 0; k <= 3; ++k) {
    ladder.push_back([cur](double x) {
      double acc = 0.0;
      for (auto it = cur.rbegin(); it != cur.rend(); ++it) acc = acc * x + *it;
      return acc;
    });
    cur = derive(cur);
  }
  auto taylor = [coeffs](double c, int count) {
    std::vector<double> out(static_cast<std::size_t>(count), 0.0);
    const int deg = static_cast<int>(coeffs.size()) - 1;
    for (int k = 0; k < count && k <= deg; ++k) {
      double acc = 0.0;
      for (int j = deg; j >= k; --j) {
        // C(j, k) c^{j-k}
        acc = acc * c + coeffs[static_cast<std::size_t>(j)] * binom_general(j, k);
      }
      out[static_cast<std::size_t>(k)] = acc;
    }
    return out;
  };
  return ScalarFunction(std::move(name), Interval::real_line(), std::move(ladder), std::move(taylor));
}

ScalarFunction linear() { return polynomial({0.0, 1.0}, "x"); }
ScalarFunction square() { return polynomial({0.0, 0.0, 1.0}, "x2"); }
ScalarFunction cube() { return polynomial({0.0, 0.0, 0.0, 1.0}, "x3"); }

ScalarFunction power(double t) {
  std::vector<Fn> ladder;
  for (int k = 0; k <= 3; ++k) {
    ladder.push_back([t, k](double x) { return binom_general(t, k) * factorial(k) * std::pow(x, t - k); });
  }
  auto taylor = [t](double c, int count) {
    std::vector<double> out(static_cast<std::size_t>(count));
    for (int k = 0; k < count; ++k) out[static_cast<std::size_t>(k)] = binom_general(t, k) * std::pow(c, t - k);
    return out;
  };
  return ScalarFunction("pow(" + fmt_num(t) + ")", Interval::positive(), std::move(ladder), std::move(taylor));
}

ScalarFunction exp() {
  std::vector<Fn> ladder(4, [](double x) { return std::exp(x); });
  auto taylor = [](double c, int count) {
    std::vector<double> out(static_cast<std::size_t>(count));
    for (int k = 0; k < count; ++k) out[static_cast<std::size_t>(k)] = std::exp(c) / factorial(k);
    return out;
  };
  return ScalarFunction("exp", Interval::real_line(), std::move(ladder), std::move(taylor));
}

ScalarFunction exp_neg() {
  std::vector<Fn> ladder;
  for (int k = 0; k <= 3; ++k) ladder.push_back([k](double x) { return (k % 2 ? -1.0 : 1.0) * std::exp(-x); });
  auto taylor = [](double c, int count) {
    std::vector<double> out(static_cast<std::size_t>(count));
    for (int k = 0; k < count; ++k) out[static_cast<std::size_t>(k)] = (k % 2 ? -1.0 : 1.0) * std::exp(-c) / factorial(k);
    return out;
  };
  return ScalarFunction("expneg", Interval::real_line(), std::move(ladder), std::move(taylor));
}

ScalarFunction neg_log_one_minus(double t, double c) {
  Interval dom = Interval::real_line();
  if (t > 0) dom.hi = c + 1.0 / t;
  if (t < 0) dom.lo = c + 1.0 / t;
  // d^k/dx^k [-log(1 - t(x-c))] = (k-1)! t^k / (1 - t(x-c))^k for k >= 1.
  std::vector<Fn> ladder;
  ladder.push_back([t, c](double x) { return -std::log1p(-t * (x - c)); });
  for (int k = 1; k <= 3; ++k) {
    ladder.push_back([t, c, k](double x) {
      const double u = 1.0 - t * (x - c);
      return factorial(k - 1) * std::pow(t / u, k);
    });
  }
  auto taylor = [t, c](double center, int count) {
    const double u = 1.0 - t * (center - c);
    std::vector<double> out(static_cast<std::size_t>(count));
    out[0] = -std::log(u);
    for (int k = 1; k < count; ++k) out[static_cast<std::size_t>(k)] = std::pow(t / u, k) / k;
    return out;
  };
  std::string name = "neglog1m(t=" + fmt_num(t) + ",c=" + fmt_num(c) + ")";
  return ScalarFunction(std::move(name), dom, std::move(ladder), std::move(taylor));
}

ScalarFunction neg_log() {
  std::vector<Fn> ladder;
  ladder.push_back([](double x) { return -std::log(x); });
  // (-log x)^{(k)} = (-1)^k (k-1)! / x^k
  for (int k = 1; k <= 3; ++k) {
    ladder.push_back([k](double x) { return (k % 2 ? -1.0 : 1.0) * factorial(k - 1) / std::pow(x, k); });
  }
  auto taylor = [](double c, int count) {
    std::vector<double> out(static_cast<std::size_t>(count));
    out[0] = -std::log(c);
    for (int k = 1; k < count; ++k) out[static_cast<std::size_t>(k)] = (k % 2 ? -1.0 : 1.0) / (k * std::pow(c, k));
    return out;
  };
  return ScalarFunction("neglog", Interval::positive(), std::move(ladder), std::move(taylor));
}

ScalarFunction gaussian() {
  std::vector<Fn> ladder{
      [](double x) { return std::exp(-x * x); },
      [](double x) { return -2.0 * x * std::exp(-x * x); },
      [](double x) { return (4.0 * x * x - 2.0) * std::exp(-x * x); },
      [](double x) { return (12.0 * x - 8.0 * x * x * x) * std::exp(-x * x); },
  };
  auto taylor = [](double c, int count) {
    std::vector<double> g(static_cast<std::size_t>(count), 0.0);
    g[0] = -c * c;
    if (count > 1) g[1] = -2.0 * c;
    if (count > 2) g[2] = -1.0;
    return series_exp(PowerSeries(c, std::move(g))).coeffs;
  };
  return ScalarFunction("gauss", Interval::real_line(), std::move(ladder), std::move(taylor));
}

ScalarFunction sum(const ScalarFunction& f, const ScalarFunction& g) {
  const int order = std::min(f.derivative_count(), g.derivative_count());
  std::vector<Fn> ladder;
  for (int k = 0; k <= order; ++k) ladder.push_back([f, g, k](double x) { return f.nth(k, x) + g.nth(k, x); });
  ScalarFunction::TaylorFn taylor;
  if (f.has_taylor() && g.has_taylor()) {
    taylor = [f, g](double c, int count) { return (f.taylor(c, count) + g.taylor(c, count)).coeffs; };
  }
  return ScalarFunction(f.name() + "+" + g.name(), intersect(f.domain(), g.domain()), std::move(ladder),
                        std::move(taylor));
}

ScalarFunction product(const ScalarFunction& f, const ScalarFunction& g) {
  const int order = std::min(f.derivative_count(), g.derivative_count());
  std::vector<Fn> ladder;
  for (int k = 0; k <= order; ++k) {
    ladder.push_back([f, g, k](double x) {
      double acc = 0.0;
      for (int j = 0; j <= k; ++j) acc += binom_general(k, j) * f.nth(j, x) * g.nth(k - j, x);
      return acc;
    });
  }
  ScalarFunction::TaylorFn taylor;
  if (f.has_taylor() && g.has_taylor()) {
    taylor = [f, g](double c, int count) { return (f.taylor(c, count) * g.taylor(c, count)).coeffs; };
  }
  return ScalarFunction(f.name() + "*" + g.name(), intersect(f.domain(), g.domain()), std::move(ladder),
                        std::move(taylor));
}

ScalarFunction scaled(double s, const ScalarFunction& f) {
  std::vector<Fn> ladder;
  for (int k = 0; k <= f.derivative_count(); ++k) ladder.push_back([s, f, k](double x) { return s * f.nth(k, x); });
  ScalarFunction::TaylorFn taylor;
  if (f.has_taylor()) taylor = [s, f](double c, int count) { return (s * f.taylor(c, count)).coeffs; };
  return ScalarFunction(fmt_num(s) + "*" + f.name(), f.domain(), std::move(ladder), std::move(taylor));
}

ScalarFunction exp_of_neg(const ScalarFunction& f) {
  std::vector<Fn> ladder;
  ladder.push_back([f](double x) { return std::exp(-f.eval(x)); });
  if (f.derivative_count() >= 1)
    ladder.push_back([f](double x) { return -f.deriv(x) * std::exp(-f.eval(x)); });
  if (f.derivative_count() >= 2) {
    ladder.push_back([f](double x) {
      const double d1 = f.deriv(x);
      return (d1 * d1 - f.deriv2(x)) * std::exp(-f.eval(x));
    });
  }
  if (f.derivative_count() >= 3) {
    ladder.push_back([f](double x) {
      const double d1 = f.deriv(x);
      return (-f.nth(3, x) + 3.0 * d1 * f.deriv2(x) - d1 * d1 * d1) * std::exp(-f.eval(x));
    });
  }
  ScalarFunction::TaylorFn taylor;
  if (f.has_taylor()) taylor = [f](double c, int count) { return series_exp(-1.0 * f.taylor(c, count)).coeffs; };
  return ScalarFunction("exp(-" + f.name() + ")", f.domain(), std::move(ladder), std::move(taylor));
}

}  // namespace fn

namespace {
double param_or(const FunctionSpec& spec, const std::string& key, double fallback) {
  const auto it = spec.params.find(key);
  return it == spec.params.end() ? fallback : it->second;
}
}  // namespace

ScalarFunction make_function(const FunctionSpec& spec) {
  const std::string& n = spec.name;
  const std::vector<std::string> allowed = n == "pow" ? std::vector<std::string>{"t"}
                                           : n == "neglog1mx" ? std::vector<std::string>{"t", "c"}
                                                              : std::vector<std::string>{};
  for (const auto& [key, value] : spec.params)
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end())
      throw InvalidInput("function '" + n + "' has no parameter '" + key + "'");
  if (!spec.poly.empty() && n != "poly") throw InvalidInput("coefficients are only accepted by function 'poly'");
  if (n == "x") return fn::linear();
  if (n == "x2") return fn::square();
  if (n == "x3") return fn::cube();
  if (n == "pow") {
    return fn::power(param_or(spec, "t", 1.5));
  }
  if (n == "exp") return fn::exp();
  if (n == "expneg") return fn::exp_neg();
  if (n == "neglog1mx") return fn::neg_log_one_minus(param_or(spec, "t", 1.0), param_or(spec, "c", 0.0));
  if (n == "neglog1m1px") {
    return fn::sum(fn::neg_log_one_minus(1.0, 0.0), fn::neg_log_one_minus(-1.0, 0.0)).renamed("neglog1m1px");
  }
  if (n == "neglog") return fn::neg_log();
  if (n == "gauss") return fn::gaussian();
  if (n == "poly") {
    if (spec.poly.empty()) throw InvalidInput("function 'poly' needs coefficients");
    return fn::polynomial(spec.poly);
  }
  throw InvalidInput("unknown function '" + n + "'");
}

std::vector<std::string> builtin_function_names() {
  return {"x", "x2", "x3", "pow", "exp", "expneg", "neglog1mx", "neglog1m1px", "neglog", "gauss", "poly"};
}

std::vector<RegistryEntry> trace_minmax_registry() {
  const Interval unit{-1.0, 1.0};
  std::vector<RegistryEntry> out;
  out.push_back({fn::square(), unit});
  for (double t : {-0.9, -0.4, 0.25, 0.6, 0.95}) out.push_back({fn::neg_log_one_minus(t, 0.1), unit});
  out.push_back({fn::power(1.5), Interval::positive()});
  out.push_back({fn::neg_log(), Interval::positive()});
  return out;
}

std::vector<RegistryEntry> builtin_registry() {
  std::vector<RegistryEntry> out = trace_minmax_registry();
  // Convex but not trace minmax: e^{+-x}' is not a Pick function.
  out.push_back({fn::exp(), {-2.0, 2.0}});
  out.push_back({fn::exp_neg(), {-2.0, 2.0}});
  out.push_back({fn::linear(), {-1.0, 1.0}});
  out.push_back({fn::cube(), {-1.0, 1.0}});
  out.push_back({fn::power(1.0), Interval::positive()});
  out.push_back({fn::power(2.0), Interval::positive()});
  out.push_back({fn::gaussian(), {-1.0, 1.0}});
  out.push_back({fn::polynomial({1.0, -0.5, 0.25, 0.1}), {-1.0, 1.0}});
  return out;
}

}  // namespace tmm
