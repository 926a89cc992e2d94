#pragma once

// Nested forward-mode dual numbers. Dual<Dual<Dual<double>>> carries one
// directional derivative per nesting level, which is enough to extract the
// third mixed partials of F^2 that the connection needs, exactly up to
// rounding.

#include <cmath>
#include <concepts>

namespace finsler {

template <class T>
struct Dual {
  T v{};  // value
  T d{};  // derivative along the seeded direction

  constexpr Dual() = default;
  constexpr Dual(double c) : v(c), d(0.0) {}  // NOLINT: implicit lift of constants
  constexpr Dual(T value, T deriv) : v(value), d(deriv) {}

  Dual& operator+=(const Dual& o) {
    v += o.v;
    d += o.d;
    return *this;
  }
  Dual& operator-=(const Dual& o) {
    v -= o.v;
    d -= o.d;
    return *this;
  }
  Dual& operator*=(const Dual& o) {
    d = d * o.v + v * o.d;
    v *= o.v;
    return *this;
  }
  Dual& operator/=(const Dual& o) { return *this = *this / o; }

  friend Dual operator+(Dual a, const Dual& b) { return a += b; }
  friend Dual operator-(Dual a, const Dual& b) { return a -= b; }
  friend Dual operator*(Dual a, const Dual& b) { return a *= b; }
  friend Dual operator/(const Dual& a, const Dual& b) {
    T inv = T(1.0) / b.v;
    return {a.v * inv, (a.d * b.v - a.v * b.d) * inv * inv};
  }
  friend Dual operator-(const Dual& a) { return {-a.v, -a.d}; }

  friend Dual operator+(Dual a, double c) { return a += Dual(c); }
  friend Dual operator+(double c, Dual a) { return a += Dual(c); }
  friend Dual operator-(Dual a, double c) { return a -= Dual(c); }
  friend Dual operator-(double c, const Dual& a) { return Dual(c) - a; }
  friend Dual operator*(const Dual& a, double c) { return {a.v * c, a.d * c}; }
  friend Dual operator*(double c, const Dual& a) { return {a.v * c, a.d * c}; }
  friend Dual operator/(const Dual& a, double c) { return {a.v / c, a.d / c}; }
  friend Dual operator/(double c, const Dual& a) { return Dual(c) / a; }
};

using D1 = Dual<double>;
using D2 = Dual<D1>;
using D3 = Dual<D2>;

inline double value_of(double x) { return x; }
template <class T>
double value_of(const Dual<T>& x) {
  return value_of(x.v);
}

using std::cos;
using std::exp;
using std::log;
using std::sin;
using std::sqrt;

template <class T>
Dual<T> sqrt(const Dual<T>& a) {
  T s = sqrt(a.v);
  return {s, a.d / (2.0 * s)};
}
template <class T>
Dual<T> sin(const Dual<T>& a) {
  return {sin(a.v), a.d * cos(a.v)};
}
template <class T>
Dual<T> cos(const Dual<T>& a) {
  return {cos(a.v), -(a.d * sin(a.v))};
}
template <class T>
Dual<T> exp(const Dual<T>& a) {
  T e = exp(a.v);
  return {e, a.d * e};
}
template <class T>
Dual<T> log(const Dual<T>& a) {
  return {log(a.v), a.d / a.v};
}

}  // namespace finsler
