#pragma once

// Double-double arithmetic: an unevaluated sum of two doubles giving
// ~31 significant digits.  Monomial Gram matrices on the interval are
// numerically singular in plain double well below the degrees we need,
// so Cholesky factorization and orthonormality residuals run at this
// precision (Dekker/Knuth error-free transforms, products via fma).

#include <cmath>

namespace equizero {

struct DD {
  double hi = 0.0;
  double lo = 0.0;

  constexpr DD() = default;
  constexpr DD(double h) : hi(h) {}
  constexpr DD(double h, double l) : hi(h), lo(l) {}

  double value() const { return hi + lo; }
};

namespace dd_detail {

inline DD two_sum(double a, double b) {
  const double s = a + b;
  const double bb = s - a;
  return {s, (a - (s - bb)) + (b - bb)};
}

// requires |a| >= |b| (or a == 0)
inline DD quick_two_sum(double a, double b) {
  const double s = a + b;
  return {s, b - (s - a)};
}

inline DD two_prod(double a, double b) {
  const double p = a * b;
  return {p, std::fma(a, b, -p)};
}

}  // namespace dd_detail

inline DD operator+(DD a, DD b) {
  DD s = dd_detail::two_sum(a.hi, b.hi);
  return dd_detail::quick_two_sum(s.hi, s.lo + a.lo + b.lo);
}

inline DD operator-(DD a) { return {-a.hi, -a.lo}; }
inline DD operator-(DD a, DD b) { return a + (-b); }

inline DD operator*(DD a, DD b) {
  DD p = dd_detail::two_prod(a.hi, b.hi);
  return dd_detail::quick_two_sum(p.hi, p.lo + a.hi * b.lo + a.lo * b.hi);
}

inline DD operator/(DD a, DD b) {
  const double q1 = a.hi / b.hi;
  DD r = a - DD(q1) * b;
  const double q2 = r.hi / b.hi;
  r = r - DD(q2) * b;
  const double q3 = r.hi / b.hi;
  return dd_detail::quick_two_sum(q1, q2) + DD(q3);
}

inline DD operator+(DD a, double b) { return a + DD(b); }
inline DD operator*(DD a, double b) { return a * DD(b); }

inline bool operator<(DD a, DD b) { return a.hi < b.hi || (a.hi == b.hi && a.lo < b.lo); }
inline bool operator>(DD a, DD b) { return b < a; }

inline DD dd_abs(DD a) { return a.hi < 0.0 ? -a : a; }

inline DD dd_sqrt(DD a) {
  if (a.hi <= 0.0) return DD(a.hi < 0.0 ? std::nan("") : 0.0);
  const double s = std::sqrt(a.hi);
  DD r = a - DD(s) * DD(s);
  return dd_detail::quick_two_sum(s, r.value() / (2.0 * s));
}

// complex double-double; divisions in our factorizations are always by
// real positive pivots, so no full complex division is provided
struct DDC {
  DD re, im;

  constexpr DDC() = default;
  constexpr DDC(DD r, DD i) : re(r), im(i) {}
  DDC(double r, double i) : re(r), im(i) {}
};

inline DDC operator+(DDC a, DDC b) { return {a.re + b.re, a.im + b.im}; }
inline DDC operator-(DDC a, DDC b) { return {a.re - b.re, a.im - b.im}; }
inline DDC operator-(DDC a) { return {-a.re, -a.im}; }
inline DDC operator*(DDC a, DDC b) {
  return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
}
inline DDC conj(DDC a) { return {a.re, -a.im}; }
inline DD sq_abs(DDC a) { return a.re * a.re + a.im * a.im; }
inline DDC operator/(DDC a, DD d) { return {a.re / d, a.im / d}; }
inline DDC operator*(DDC a, DD s) { return {a.re * s, a.im * s}; }

}  // namespace equizero
