#pragma once

#include <cmath>

namespace thinflow {

// Hyper-dual number a + b e1 + c e2 + d e1e2 with e1^2 = e2^2 = 0.
// Seeding (x, 1, 1, 0) gives f, f', f', f'' exactly; seeding two different
// variables with e1 and e2 gives the mixed second derivative in d12.
struct HyperDual {
  double v = 0.0;
  double d1 = 0.0;
  double d2 = 0.0;
  double d12 = 0.0;

  constexpr HyperDual() = default;
  constexpr HyperDual(double value) : v(value) {}  // NOLINT: implicit on purpose
  constexpr HyperDual(double value, double a, double b, double c) : v(value), d1(a), d2(b), d12(c) {}
};

inline HyperDual operator+(HyperDual a, HyperDual b) { return {a.v + b.v, a.d1 + b.d1, a.d2 + b.d2, a.d12 + b.d12}; }
inline HyperDual operator-(HyperDual a, HyperDual b) { return {a.v - b.v, a.d1 - b.d1, a.d2 - b.d2, a.d12 - b.d12}; }
inline HyperDual operator-(HyperDual a) { return {-a.v, -a.d1, -a.d2, -a.d12}; }
inline HyperDual operator*(HyperDual a, HyperDual b) {
  return {a.v * b.v, a.v * b.d1 + a.d1 * b.v, a.v * b.d2 + a.d2 * b.v,
          a.v * b.d12 + a.d1 * b.d2 + a.d2 * b.d1 + a.d12 * b.v};
}
inline HyperDual operator/(HyperDual a, HyperDual b) {
  const double inv = 1.0 / b.v;
  // 1/b expanded to second order
  HyperDual r{inv, -b.d1 * inv * inv, -b.d2 * inv * inv,
              -b.d12 * inv * inv + 2.0 * b.d1 * b.d2 * inv * inv * inv};
  return a * r;
}

// Chain rule helper: f(a) given f, f', f'' at a.v.
inline HyperDual lift(HyperDual a, double f, double fp, double fpp) {
  return {f, fp * a.d1, fp * a.d2, fp * a.d12 + fpp * a.d1 * a.d2};
}

inline HyperDual sin(HyperDual a) { return lift(a, std::sin(a.v), std::cos(a.v), -std::sin(a.v)); }
inline HyperDual cos(HyperDual a) { return lift(a, std::cos(a.v), -std::sin(a.v), -std::cos(a.v)); }
inline HyperDual exp(HyperDual a) {
  const double e = std::exp(a.v);
  return lift(a, e, e, e);
}
inline HyperDual sqrt(HyperDual a) {
  const double s = std::sqrt(a.v);
  return lift(a, s, 0.5 / s, -0.25 / (s * a.v));
}

inline double value_of(double x) { return x; }
inline double value_of(const HyperDual& x) { return x.v; }

}  // namespace thinflow
