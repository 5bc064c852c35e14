#pragma once

#include <cmath>

namespace ntkeoc {

// Minimal double-double arithmetic (error-free transforms) for the few spots
// where a subtraction cancels most of the 53-bit mantissa. Only what the
// expansion remainder needs; not a general extended-precision library.
struct DD {
  double hi = 0.0;
  double lo = 0.0;

  DD() = default;
  explicit DD(double x) : hi(x) {}
  DD(double h, double l) : hi(h), lo(l) {}

  double value() const { return hi + lo; }
};

inline DD dd_two_sum(double a, double b) {
  double s = a + b;
  double v = s - a;
  double e = (a - (s - v)) + (b - v);
  return {s, e};
}

inline DD dd_quick_two_sum(double a, double b) {
  double s = a + b;
  return {s, b - (s - a)};
}

inline DD dd_two_prod(double a, double b) {
  double p = a * b;
  return {p, std::fma(a, b, -p)};
}

inline DD dd_add(DD a, DD b) {
  DD s = dd_two_sum(a.hi, b.hi);
  DD t = dd_two_sum(a.lo, b.lo);
  s.lo += t.hi;
  s = dd_quick_two_sum(s.hi, s.lo);
  s.lo += t.lo;
  return dd_quick_two_sum(s.hi, s.lo);
}

inline DD dd_neg(DD a) { return {-a.hi, -a.lo}; }
inline DD dd_sub(DD a, DD b) { return dd_add(a, dd_neg(b)); }

inline DD dd_mul(DD a, DD b) {
  DD p = dd_two_prod(a.hi, b.hi);
  p.lo += a.hi * b.lo + a.lo * b.hi;
  return dd_quick_two_sum(p.hi, p.lo);
}

inline DD dd_div(DD a, DD b) {
  double q1 = a.hi / b.hi;
  DD r = dd_sub(a, dd_mul(DD(q1), b));
  double q2 = r.hi / b.hi;
  r = dd_sub(r, dd_mul(DD(q2), b));
  double q3 = r.hi / b.hi;
  DD q = dd_quick_two_sum(q1, q2);
  return dd_add(q, DD(q3));
}

inline DD dd_sqrt(DD a) {
  if (a.hi == 0.0) return DD(0.0);
  double x = std::sqrt(a.hi);
  // one Newton step on x -> (x + a/x)/2 in double-double
  DD ax = dd_div(a, DD(x));
  DD s = dd_add(DD(x), ax);
  return {s.hi * 0.5, s.lo * 0.5};
}

// pi to double-double precision
inline DD dd_pi() { return {3.141592653589793116, 1.2246467991473531772e-16}; }

}  // namespace ntkeoc
