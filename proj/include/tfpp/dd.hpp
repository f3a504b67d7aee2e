#pragma once

#include <cmath>
#include <cstdlib>

namespace tfpp {

/// Unevaluated double-double: value = hi + lo, |lo| <= 0.5 ulp(hi).
/// Roughly 31 significant decimal digits. Used internally where a plain
/// double would lose the result to cancellation (alternating series whose
/// terms dwarf the sum). Not a general-purpose number type: only the
/// operations the series evaluations need are provided.
struct dd {
  double hi = 0.0;
  double lo = 0.0;

  constexpr dd() = default;
  constexpr dd(double h) : hi(h) {}
  constexpr dd(double h, double l) : hi(h), lo(l) {}

  explicit operator double() const { return hi + lo; }
};

namespace dd_detail {

inline dd two_sum(double a, double b) {
  double s = a + b;
  double bb = s - a;
  return {s, (a - (s - bb)) + (b - bb)};
}

// requires |a| >= |b| or a == 0
inline dd quick_two_sum(double a, double b) {
  double s = a + b;
  return {s, b - (s - a)};
}

inline dd two_prod(double a, double b) {
  double p = a * b;
  return {p, std::fma(a, b, -p)};
}

}  // namespace dd_detail

inline dd operator+(dd a, dd b) {
  dd s = dd_detail::two_sum(a.hi, b.hi);
  return dd_detail::quick_two_sum(s.hi, s.lo + (a.lo + b.lo));
}

inline dd operator-(dd a) { return {-a.hi, -a.lo}; }
inline dd operator-(dd a, dd b) { return a + (-b); }

inline dd operator*(dd a, dd b) {
  dd p = dd_detail::two_prod(a.hi, b.hi);
  return dd_detail::quick_two_sum(p.hi, p.lo + (a.hi * b.lo + a.lo * b.hi));
}

inline dd operator/(dd a, dd b) {
  double q1 = a.hi / b.hi;
  dd r = a - dd(q1) * b;
  double q2 = r.hi / b.hi;
  r = r - dd(q2) * b;
  double q3 = r.hi / b.hi;
  return dd_detail::quick_two_sum(q1, q2) + dd(q3);
}

inline dd& operator+=(dd& a, dd b) { return a = a + b; }
inline dd& operator-=(dd& a, dd b) { return a = a - b; }
inline dd& operator*=(dd& a, dd b) { return a = a * b; }
inline dd& operator/=(dd& a, dd b) { return a = a / b; }

inline dd fabs(dd a) { return a.hi < 0.0 ? -a : a; }
inline bool operator<(dd a, dd b) { return a.hi < b.hi || (a.hi == b.hi && a.lo < b.lo); }
inline bool operator>(dd a, dd b) { return b < a; }

inline constexpr dd dd_pi{3.141592653589793116e+00, 1.224646799147353207e-16};
inline constexpr dd dd_2pi{6.283185307179586232e+00, 2.449293598294706414e-16};
inline constexpr dd dd_ln2{6.931471805599452862e-01, 2.319046813846299558e-17};

inline dd sqrt(dd a) {
  if (a.hi <= 0.0) return dd(std::sqrt(a.hi));
  double y = std::sqrt(a.hi);
  // one Newton step in double-double doubles the accurate digits
  dd r = (dd(y) + a / dd(y)) * dd(0.5);
  return r;
}

/// exp in double-double; |result| relative error a few units in 1e-31.
/// Underflows to 0 below -745, saturates to +inf above 709.
inline dd exp(dd a) {
  if (a.hi > 709.9) return dd(HUGE_VAL);  // just above log(DBL_MAX)
  if (a.hi < -745.0) return dd(0.0);
  double m = std::nearbyint(a.hi / dd_ln2.hi);
  dd r = a - dd(m) * dd_ln2;
  // |r| <= ln2/2 + eps; Taylor series of exp on the reduced argument
  dd sum = dd(1.0);
  dd term = dd(1.0);
  for (int k = 1; k <= 26; ++k) {
    term = term * r / dd(double(k));
    sum += term;
  }
  return {std::ldexp(sum.hi, int(m)), std::ldexp(sum.lo, int(m))};
}

/// natural log in double-double via Newton on exp; requires a > 0.
inline dd log(dd a) {
  dd y = dd(std::log(a.hi));
  y = y + a * exp(-y) - dd(1.0);
  y = y + a * exp(-y) - dd(1.0);
  return y;
}

/// sin(pi*x) in double-double, exact symmetry through argument reduction.
inline dd sinpi(dd x) {
  double n = std::nearbyint(x.hi);
  dd s = x - dd(n);  // exact: |n| < 2^52 in all uses
  dd t = dd_pi * s;  // |t| <= pi/2
  dd t2 = t * t;
  dd sum = t;
  dd term = t;
  for (int k = 1; k <= 18; ++k) {
    term = term * t2 / dd(double((2 * k) * (2 * k + 1)));
    sum += (k % 2 == 1) ? -term : term;
  }
  bool flip = std::fmod(std::abs(n), 2.0) == 1.0;
  return flip ? -sum : sum;
}

}  // namespace tfpp
