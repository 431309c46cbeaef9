#pragma once

#include <cmath>

namespace sdfhoi {

// Minimal forward-mode dual number: carries one directional derivative.
// Enough for exact Jacobians of scalar-templated kinematics.
template <class T>
struct Dual {
  T v{};  // value
  T d{};  // derivative

  Dual() = default;
  Dual(T value) : v(value), d(T(0)) {}
  Dual(T value, T deriv) : v(value), d(deriv) {}

  Dual operator-() const { return {-v, -d}; }
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
};

template <class T>
Dual<T> operator+(Dual<T> a, const Dual<T>& b) {
  return {a.v + b.v, a.d + b.d};
}
template <class T>
Dual<T> operator-(Dual<T> a, const Dual<T>& b) {
  return {a.v - b.v, a.d - b.d};
}
template <class T>
Dual<T> operator*(const Dual<T>& a, const Dual<T>& b) {
  return {a.v * b.v, a.d * b.v + a.v * b.d};
}
template <class T>
Dual<T> operator/(const Dual<T>& a, const Dual<T>& b) {
  return {a.v / b.v, (a.d * b.v - a.v * b.d) / (b.v * b.v)};
}
template <class T>
Dual<T> operator*(T s, const Dual<T>& a) {
  return {s * a.v, s * a.d};
}
template <class T>
Dual<T> operator*(const Dual<T>& a, T s) {
  return {a.v * s, a.d * s};
}
template <class T>
Dual<T> operator+(const Dual<T>& a, T s) {
  return {a.v + s, a.d};
}
template <class T>
Dual<T> operator-(const Dual<T>& a, T s) {
  return {a.v - s, a.d};
}

template <class T>
Dual<T> sqrt(const Dual<T>& a) {
  const T r = std::sqrt(a.v);
  return {r, a.d / (T(2) * r)};
}
template <class T>
Dual<T> sin(const Dual<T>& a) {
  return {std::sin(a.v), a.d * std::cos(a.v)};
}
template <class T>
Dual<T> cos(const Dual<T>& a) {
  return {std::cos(a.v), -a.d * std::sin(a.v)};
}

template <class T>
bool operator<(const Dual<T>& a, T b) {
  return a.v < b;
}

// value() lets scalar-templated code read the primal part uniformly.
template <class T>
T value(const Dual<T>& a) {
  return a.v;
}
inline double value(double a) { return a; }
inline float value(float a) { return a; }

}  // namespace sdfhoi
