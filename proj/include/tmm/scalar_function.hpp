#pragma once

#include <functional>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "tmm/series.hpp"

namespace tmm {

/// Open interval (lo, hi); either end may be infinite.
struct Interval {
  double lo = -std::numeric_limits<double>::infinity();
  double hi = std::numeric_limits<double>::infinity();

  static Interval real_line() { return {}; }
  static Interval positive() { return {0.0, std::numeric_limits<double>::infinity()}; }

  bool contains(double x) const { return x > lo && x < hi; }
  bool bounded() const { return std::isfinite(lo) && std::isfinite(hi); }
  bool valid() const { return lo < hi; }
  double width() const { return hi - lo; }
  double distance_to_boundary(double x) const;
  /// True iff [other.lo, other.hi] lies in this open interval's closure.
  bool covers(const Interval& other) const { return other.lo >= lo && other.hi <= hi; }
};

/// A real function on an open interval with analytic derivatives and optional
/// Taylor-coefficient access.
class ScalarFunction {
 public:
  using Fn = std::function<double(double)>;
  /// Returns coefficients a_0..a_{count-1} about `center`.
  using TaylorFn = std::function<std::vector<double>(double center, int count)>;

  /// derivatives[0] is f itself; derivatives[k] is the k-th derivative.
  ScalarFunction(std::string name, Interval domain, std::vector<Fn> derivatives, TaylorFn taylor = {});

  const std::string& name() const { return name_; }
  const Interval& domain() const { return domain_; }

  /// Number of derivatives available beyond f itself.
  int derivative_count() const { return static_cast<int>(derivs_.size()) - 1; }

  double operator()(double x) const { return eval(x); }
  double eval(double x) const { return nth(0, x); }
  double deriv(double x) const { return nth(1, x); }
  double deriv2(double x) const { return nth(2, x); }
  double nth(int k, double x) const;

  /// The derivative as a function in its own right (name "d(f)").
  ScalarFunction derivative() const;

  bool has_taylor() const { return static_cast<bool>(taylor_); }
  PowerSeries taylor(double center, int count) const;

  ScalarFunction renamed(std::string name) const;

 private:
  std::string name_;
  Interval domain_;
  std::vector<Fn> derivs_;
  TaylorFn taylor_;
};

namespace fn {

ScalarFunction linear();                       // x
ScalarFunction square();                       // x^2
ScalarFunction cube();                         // x^3
ScalarFunction power(double t);                // x^t on (0, inf)
ScalarFunction exp();                          // e^x
ScalarFunction exp_neg();                      // e^{-x}
ScalarFunction neg_log_one_minus(double t, double c = 0.0);  // -log(1 - t(x - c))
ScalarFunction neg_log();                      // -log x on (0, inf)
ScalarFunction gaussian();                     // e^{-x^2}
ScalarFunction polynomial(std::vector<double> coeffs, std::string name = {});

ScalarFunction sum(const ScalarFunction& f, const ScalarFunction& g);
ScalarFunction product(const ScalarFunction& f, const ScalarFunction& g);
ScalarFunction scaled(double s, const ScalarFunction& f);
/// e^{-f}; the duality between trace minmax and determinant isoperimetric.
ScalarFunction exp_of_neg(const ScalarFunction& f);

}  // namespace fn

/// Named builtins for the CLI: x, x2, x3, pow (param t), exp, expneg,
/// neglog1mx (params t, c; defaults 1, 0), neglog1m1px (-log(1-x)-log(1+x)),
/// neglog, gauss, poly (param coefficients).
struct FunctionSpec {
  std::string name;
  std::map<std::string, double> params;
  std::vector<double> poly;
};

ScalarFunction make_function(const FunctionSpec& spec);
std::vector<std::string> builtin_function_names();

/// Builtins that are trace minmax on their stated interval, with that interval.
struct RegistryEntry {
  ScalarFunction f;
  Interval interval;
};
std::vector<RegistryEntry> trace_minmax_registry();
/// Every builtin, with a representative interval (not all are trace minmax).
std::vector<RegistryEntry> builtin_registry();

}  // namespace tmm
