#pragma once

// Forward-mode automatic differentiation with a fixed number of directions,
// plus a minimal complex type that works over either double or Dual<N>.
// std::complex<T> is only specified for floating-point T, hence Cx.

#include <array>
#include <cmath>
#include <cstddef>

#include "gulps/matrix.hpp"

namespace gulps {

template <std::size_t N>
struct Dual {
  double v = 0.0;
  std::array<double, N> d{};

  Dual() = default;
  Dual(double value) : v(value) {}  // NOLINT: implicit lift of constants is the point
  static Dual variable(double value, std::size_t index) {
    Dual x(value);
    x.d[index] = 1.0;
    return x;
  }

  Dual& operator+=(const Dual& o) {
    v += o.v;
    for (std::size_t i = 0; i < N; ++i) d[i] += o.d[i];
    return *this;
  }
  Dual& operator-=(const Dual& o) {
    v -= o.v;
    for (std::size_t i = 0; i < N; ++i) d[i] -= o.d[i];
    return *this;
  }
  Dual& operator*=(const Dual& o) {
    for (std::size_t i = 0; i < N; ++i) d[i] = d[i] * o.v + v * o.d[i];
    v *= o.v;
    return *this;
  }
  Dual& operator*=(double s) {
    v *= s;
    for (auto& x : d) x *= s;
    return *this;
  }
};

template <std::size_t N>
Dual<N> operator+(Dual<N> a, const Dual<N>& b) { return a += b; }
template <std::size_t N>
Dual<N> operator-(Dual<N> a, const Dual<N>& b) { return a -= b; }
template <std::size_t N>
Dual<N> operator*(Dual<N> a, const Dual<N>& b) { return a *= b; }
template <std::size_t N>
Dual<N> operator*(Dual<N> a, double s) { return a *= s; }
template <std::size_t N>
Dual<N> operator*(double s, Dual<N> a) { return a *= s; }
template <std::size_t N>
Dual<N> operator+(Dual<N> a, double s) { a.v += s; return a; }
template <std::size_t N>
Dual<N> operator+(double s, Dual<N> a) { a.v += s; return a; }
template <std::size_t N>
Dual<N> operator-(Dual<N> a, double s) { a.v -= s; return a; }
template <std::size_t N>
Dual<N> operator-(double s, const Dual<N>& a) { return Dual<N>(s) - a; }
template <std::size_t N>
Dual<N> operator-(Dual<N> a) { return a *= -1.0; }

template <std::size_t N>
Dual<N> operator/(const Dual<N>& a, const Dual<N>& b) {
  Dual<N> out;
  out.v = a.v / b.v;
  const double inv2 = 1.0 / (b.v * b.v);
  for (std::size_t i = 0; i < N; ++i) out.d[i] = (a.d[i] * b.v - a.v * b.d[i]) * inv2;
  return out;
}
template <std::size_t N>
Dual<N> operator/(Dual<N> a, double s) { return a *= 1.0 / s; }

// Apply a scalar function with known derivative.
template <std::size_t N>
Dual<N> chain(const Dual<N>& a, double value, double slope) {
  Dual<N> out;
  out.v = value;
  for (std::size_t i = 0; i < N; ++i) out.d[i] = slope * a.d[i];
  return out;
}

template <std::size_t N>
Dual<N> sin(const Dual<N>& a) { return chain(a, std::sin(a.v), std::cos(a.v)); }
template <std::size_t N>
Dual<N> cos(const Dual<N>& a) { return chain(a, std::cos(a.v), -std::sin(a.v)); }
template <std::size_t N>
Dual<N> sqrt(const Dual<N>& a) {
  const double s = std::sqrt(a.v);
  return chain(a, s, 0.5 / s);
}

inline double value_of(double x) { return x; }
template <std::size_t N>
double value_of(const Dual<N>& x) { return x.v; }

/// Complex number over a real scalar type T (double or Dual<N>).
template <class T>
struct Cx {
  T re{};
  T im{};

  Cx() = default;
  Cx(T r, T i) : re(r), im(i) {}
  Cx(const Complex& c) : re(c.real()), im(c.imag()) {}  // NOLINT: constants lift implicitly

  Cx& operator+=(const Cx& o) {
    re += o.re;
    im += o.im;
    return *this;
  }
  Cx& operator-=(const Cx& o) {
    re -= o.re;
    im -= o.im;
    return *this;
  }
};

template <class T>
Cx<T> operator+(Cx<T> a, const Cx<T>& b) { return a += b; }
template <class T>
Cx<T> operator-(Cx<T> a, const Cx<T>& b) { return a -= b; }
template <class T>
Cx<T> operator*(const Cx<T>& a, const Cx<T>& b) {
  return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
}
// Constant × variable: avoids lifting the constant to a full Dual.
template <class T>
Cx<T> operator*(const Complex& a, const Cx<T>& b) {
  return {a.real() * b.re - a.imag() * b.im, a.real() * b.im + a.imag() * b.re};
}
template <class T>
Cx<T> operator*(const Cx<T>& a, const Complex& b) { return b * a; }

template <class T, std::size_t N>
using CxMat = std::array<Cx<T>, N * N>;

template <class T>
CxMat<T, 4> cx_kron(const CxMat<T, 2>& a, const CxMat<T, 2>& b) {
  CxMat<T, 4> m;
  for (std::size_t i = 0; i < 2; ++i)
    for (std::size_t j = 0; j < 2; ++j)
      for (std::size_t k = 0; k < 2; ++k)
        for (std::size_t l = 0; l < 2; ++l) m[(2 * i + k) * 4 + 2 * j + l] = a[i * 2 + j] * b[k * 2 + l];
  return m;
}

template <class T>
CxMat<T, 4> cx_mul(const Mat4& a, const CxMat<T, 4>& b) {
  CxMat<T, 4> m;
  for (std::size_t r = 0; r < 4; ++r)
    for (std::size_t k = 0; k < 4; ++k) {
      const Complex ark = a(r, k);
      if (ark == Complex{}) continue;
      for (std::size_t c = 0; c < 4; ++c) m[r * 4 + c] += ark * b[k * 4 + c];
    }
  return m;
}

template <class T>
CxMat<T, 4> cx_mul(const CxMat<T, 4>& a, const Mat4& b) {
  CxMat<T, 4> m;
  for (std::size_t r = 0; r < 4; ++r)
    for (std::size_t k = 0; k < 4; ++k) {
      const Cx<T>& ark = a[r * 4 + k];
      for (std::size_t c = 0; c < 4; ++c) {
        const Complex bkc = b(k, c);
        if (bkc == Complex{}) continue;
        m[r * 4 + c] += ark * bkc;
      }
    }
  return m;
}

template <class T>
CxMat<T, 4> cx_mul(const CxMat<T, 4>& a, const CxMat<T, 4>& b) {
  CxMat<T, 4> m;
  for (std::size_t r = 0; r < 4; ++r)
    for (std::size_t k = 0; k < 4; ++k)
      for (std::size_t c = 0; c < 4; ++c) m[r * 4 + c] += a[r * 4 + k] * b[k * 4 + c];
  return m;
}

/// exp(−i v·σ/2) over T; the small-angle branch is a series in |v|² so the
/// derivative stays finite at v = 0.
template <class T>
CxMat<T, 2> rv_gate_t(const T& x, const T& y, const T& z) {
  const T theta2 = x * x + y * y + z * z;
  T cos_half;
  T sinc_half;
  if (value_of(theta2) < 1e-8) {
    cos_half = 1.0 - theta2 * (1.0 / 8.0) + theta2 * theta2 * (1.0 / 384.0);
    sinc_half = 0.5 - theta2 * (1.0 / 48.0) + theta2 * theta2 * (1.0 / 3840.0);
  } else {
    using std::cos;
    using std::sin;
    using std::sqrt;
    const T theta = sqrt(theta2);
    const T half = theta * 0.5;
    cos_half = cos(half);
    sinc_half = sin(half) / theta;
  }
  const T sx = sinc_half * x;
  const T sy = sinc_half * y;
  const T sz = sinc_half * z;
  CxMat<T, 2> m;
  m[0] = {cos_half, -sz};
  m[3] = {cos_half, sz};
  m[1] = {-sy, -sx};
  m[2] = {sy, -sx};
  return m;
}

}  // namespace gulps
