#pragma once

#include <cmath>
#include <type_traits>

namespace jetham {

/// Forward-mode dual number carrying one directional derivative coefficient.
/// Nesting gives higher mixed derivatives: Dual<Dual<double>> differentiates
/// along two independently seeded directions, and so on. All arithmetic is
/// exact chain rule up to floating-point rounding.
template <class T>
struct Dual {
  T v{};  // value
  T d{};  // derivative along the seeded direction

  constexpr Dual() = default;
  constexpr Dual(const T& value) : v(value), d{} {}
  constexpr Dual(const T& value, const T& deriv) : v(value), d(deriv) {}

  // Broadcast a plain arithmetic value down to the innermost level.
  template <class S>
    requires(std::is_arithmetic_v<S> && !std::is_same_v<S, T>)
  constexpr Dual(S s) : v(static_cast<double>(s)), d{} {}

  friend constexpr Dual operator+(const Dual& a) { return a; }
  friend constexpr Dual operator-(const Dual& a) { return {-a.v, -a.d}; }

  friend constexpr Dual operator+(const Dual& a, const Dual& b) { return {a.v + b.v, a.d + b.d}; }
  friend constexpr Dual operator-(const Dual& a, const Dual& b) { return {a.v - b.v, a.d - b.d}; }
  friend constexpr Dual operator*(const Dual& a, const Dual& b) {
    return {a.v * b.v, a.v * b.d + a.d * b.v};
  }
  friend constexpr Dual operator/(const Dual& a, const Dual& b) {
    T q = a.v / b.v;
    return {q, (a.d - q * b.d) / b.v};
  }

  Dual& operator+=(const Dual& b) { return *this = *this + b; }
  Dual& operator-=(const Dual& b) { return *this = *this - b; }
  Dual& operator*=(const Dual& b) { return *this = *this * b; }
  Dual& operator/=(const Dual& b) { return *this = *this / b; }

  friend Dual sin(const Dual& x) {
    using std::cos;
    using std::sin;
    return {sin(x.v), cos(x.v) * x.d};
  }
  friend Dual cos(const Dual& x) {
    using std::cos;
    using std::sin;
    return {cos(x.v), -sin(x.v) * x.d};
  }
  friend Dual tan(const Dual& x) {
    using std::tan;
    T t = tan(x.v);
    return {t, (T(1.0) + t * t) * x.d};
  }
  friend Dual exp(const Dual& x) {
    using std::exp;
    T e = exp(x.v);
    return {e, e * x.d};
  }
  friend Dual log(const Dual& x) {
    using std::log;
    return {log(x.v), x.d / x.v};
  }
  friend Dual sqrt(const Dual& x) {
    using std::sqrt;
    T r = sqrt(x.v);
    return {r, x.d / (T(2.0) * r)};
  }
  friend Dual sinh(const Dual& x) {
    using std::cosh;
    using std::sinh;
    return {sinh(x.v), cosh(x.v) * x.d};
  }
  friend Dual cosh(const Dual& x) {
    using std::cosh;
    using std::sinh;
    return {cosh(x.v), sinh(x.v) * x.d};
  }
};

using D1 = Dual<double>;
using D2 = Dual<D1>;
using D3 = Dual<D2>;

/// Innermost (order-zero) value of an arbitrarily nested dual.
constexpr double leading(double x) { return x; }
template <class T>
constexpr double leading(const Dual<T>& x) {
  return leading(x.v);
}

/// x^e for integer e by repeated multiplication; valid for any base sign and
/// exact under the chain rule when T is a dual type.
template <class T>
T powi(T x, long long e) {
  if (e < 0) return T(1.0) / powi(x, -e);
  T acc(1.0);
  while (e > 0) {
    if (e & 1) acc = acc * x;
    x = x * x;
    e >>= 1;
  }
  return acc;
}

}  // namespace jetham
