#pragma once

// Double-double ("compensated") arithmetic: value = hi + lo with |lo| <= ulp(hi)/2.

#include <cmath>

namespace tmm {

struct DDouble {
  double hi = 0.0;
  double lo = 0.0;

  constexpr DDouble() = default;
  constexpr DDouble(double h) : hi(h), lo(0.0) {}  // NOLINT(google-explicit-constructor)
  constexpr DDouble(double h, double l) : hi(h), lo(l) {}

  explicit operator double() const { return hi + lo; }
};

namespace dd_detail {
inline DDouble two_sum(double a, double b) {
  const double s = a + b;
  const double bb = s - a;
  const double e = (a - (s - bb)) + (b - bb);
  return {s, e};
}
inline DDouble quick_two_sum(double a, double b) {
  const double s = a + b;
  return {s, b - (s - a)};
}
inline DDouble two_prod(double a, double b) {
  const double p = a * b;
  return {p, std::fma(a, b, -p)};
}
}  // namespace dd_detail

inline DDouble operator+(DDouble a, DDouble b) {
  DDouble s = dd_detail::two_sum(a.hi, b.hi);
  DDouble t = dd_detail::two_sum(a.lo, b.lo);
  s.lo += t.hi;
  s = dd_detail::quick_two_sum(s.hi, s.lo);
  s.lo += t.lo;
  return dd_detail::quick_two_sum(s.hi, s.lo);
}

inline DDouble operator-(DDouble a) { return {-a.hi, -a.lo}; }
inline DDouble operator-(DDouble a, DDouble b) { return a + (-b); }

inline DDouble operator*(DDouble a, DDouble b) {
  DDouble p = dd_detail::two_prod(a.hi, b.hi);
  p.lo += a.hi * b.lo + a.lo * b.hi;
  return dd_detail::quick_two_sum(p.hi, p.lo);
}

inline DDouble operator/(DDouble a, DDouble b) {
  const double q1 = a.hi / b.hi;
  DDouble r = a - b * DDouble(q1);
  const double q2 = r.hi / b.hi;
  r = r - b * DDouble(q2);
  const double q3 = r.hi / b.hi;
  DDouble q = dd_detail::quick_two_sum(q1, q2);
  return q + DDouble(q3);
}

inline DDouble& operator+=(DDouble& a, DDouble b) { return a = a + b; }
inline DDouble& operator-=(DDouble& a, DDouble b) { return a = a - b; }
inline DDouble& operator*=(DDouble& a, DDouble b) { return a = a * b; }

inline DDouble sqrt(DDouble a) {
  if (a.hi <= 0.0) return DDouble(0.0);
  const double x = std::sqrt(a.hi);
  // One Newton step: x + (a - x^2) / (2x).
  const DDouble xx = dd_detail::two_prod(x, x);
  const double corr = (double(a - xx)) / (2.0 * x);
  return dd_detail::quick_two_sum(x, corr);
}

inline DDouble abs(DDouble a) { return a.hi < 0.0 ? -a : a; }
inline bool operator<(DDouble a, DDouble b) { return a.hi < b.hi || (a.hi == b.hi && a.lo < b.lo); }
inline bool operator>(DDouble a, DDouble b) { return b < a; }

}  // namespace tmm
