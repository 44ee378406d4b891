#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <cstddef>

namespace gulps {

using Complex = std::complex<double>;

/// Dense N×N complex matrix stored row-major. Only N = 2 and N = 4 are used.
template <std::size_t N>
struct CMatrix {
  std::array<Complex, N * N> data{};

  static constexpr std::size_t size = N;

  Complex& operator()(std::size_t r, std::size_t c) { return data[r * N + c]; }
  const Complex& operator()(std::size_t r, std::size_t c) const { return data[r * N + c]; }

  static CMatrix identity() {
    CMatrix m;
    for (std::size_t i = 0; i < N; ++i) m(i, i) = 1.0;
    return m;
  }

  static CMatrix diagonal(const std::array<Complex, N>& d) {
    CMatrix m;
    for (std::size_t i = 0; i < N; ++i) m(i, i) = d[i];
    return m;
  }

  CMatrix adjoint() const {
    CMatrix m;
    for (std::size_t r = 0; r < N; ++r)
      for (std::size_t c = 0; c < N; ++c) m(c, r) = std::conj((*this)(r, c));
    return m;
  }

  CMatrix transpose() const {
    CMatrix m;
    for (std::size_t r = 0; r < N; ++r)
      for (std::size_t c = 0; c < N; ++c) m(c, r) = (*this)(r, c);
    return m;
  }

  CMatrix conj() const {
    CMatrix m;
    for (std::size_t i = 0; i < N * N; ++i) m.data[i] = std::conj(data[i]);
    return m;
  }

  Complex trace() const {
    Complex t = 0.0;
    for (std::size_t i = 0; i < N; ++i) t += (*this)(i, i);
    return t;
  }

  CMatrix& operator+=(const CMatrix& o) {
    for (std::size_t i = 0; i < N * N; ++i) data[i] += o.data[i];
    return *this;
  }
  CMatrix& operator-=(const CMatrix& o) {
    for (std::size_t i = 0; i < N * N; ++i) data[i] -= o.data[i];
    return *this;
  }
  CMatrix& operator*=(Complex s) {
    for (auto& x : data) x *= s;
    return *this;
  }

  bool operator==(const CMatrix&) const = default;
};

using Mat2 = CMatrix<2>;
using Mat4 = CMatrix<4>;
/// A Mat4 that callers promise is unitary; see is_unitary().
using Unitary4 = Mat4;

template <std::size_t N>
CMatrix<N> operator*(const CMatrix<N>& a, const CMatrix<N>& b) {
  CMatrix<N> m;
  for (std::size_t r = 0; r < N; ++r)
    for (std::size_t k = 0; k < N; ++k) {
      const Complex ark = a(r, k);
      for (std::size_t c = 0; c < N; ++c) m(r, c) += ark * b(k, c);
    }
  return m;
}

template <std::size_t N>
CMatrix<N> operator+(CMatrix<N> a, const CMatrix<N>& b) {
  return a += b;
}

template <std::size_t N>
CMatrix<N> operator-(CMatrix<N> a, const CMatrix<N>& b) {
  return a -= b;
}

template <std::size_t N>
CMatrix<N> operator*(Complex s, CMatrix<N> a) {
  return a *= s;
}

template <std::size_t N>
double frobenius_norm(const CMatrix<N>& m) {
  double s = 0.0;
  for (const auto& x : m.data) s += std::norm(x);
  return std::sqrt(s);
}

/// ‖M†M − I‖_F.
template <std::size_t N>
double unitarity_defect(const CMatrix<N>& m) {
  return frobenius_norm(m.adjoint() * m - CMatrix<N>::identity());
}

template <std::size_t N>
bool is_unitary(const CMatrix<N>& m, double tol) {
  return unitarity_defect(m) <= tol;
}

template <std::size_t N>
bool all_finite(const CMatrix<N>& m) {
  for (const auto& x : m.data)
    if (!std::isfinite(x.real()) || !std::isfinite(x.imag())) return false;
  return true;
}

inline Complex determinant(const Mat2& m) { return m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0); }

/// Determinant by Gaussian elimination with partial pivoting.
Complex determinant(const Mat4& m);

}  // namespace gulps
