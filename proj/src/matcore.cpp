#include "gulps/matcore.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "gulps/constants.hpp"
#include "gulps/errors.hpp"

namespace gulps {

namespace {

constexpr double kPi = std::numbers::pi;
const Complex kI{0.0, 1.0};

// Unitary G with G·(a, b)ᵀ = (r, 0)ᵀ, stored as its four entries.
struct Givens {
  Complex g00, g01, g10, g11;
};

Givens make_givens(Complex a, Complex b) {
  const double r = std::hypot(std::abs(a), std::abs(b));
  if (r == 0.0) return {1.0, 0.0, 0.0, 1.0};
  return {std::conj(a) / r, std::conj(b) / r, -b / r, a / r};
}

// Rows (p, p+1) ← G · rows, for columns [c0, 4).
void rotate_rows(Mat4& m, std::size_t p, const Givens& g, std::size_t c0) {
  for (std::size_t c = c0; c < 4; ++c) {
    const Complex x = m(p, c);
    const Complex y = m(p + 1, c);
    m(p, c) = g.g00 * x + g.g01 * y;
    m(p + 1, c) = g.g10 * x + g.g11 * y;
  }
}

// Columns (p, p+1) ← columns · G†, for rows [0, r1).
void rotate_cols(Mat4& m, std::size_t p, const Givens& g, std::size_t r1) {
  for (std::size_t r = 0; r < r1; ++r) {
    const Complex x = m(r, p);
    const Complex y = m(r, p + 1);
    m(r, p) = x * std::conj(g.g00) + y * std::conj(g.g01);
    m(r, p + 1) = x * std::conj(g.g10) + y * std::conj(g.g11);
  }
}

Complex wilkinson_shift(Complex a, Complex b, Complex c, Complex d) {
  const Complex half_tr = 0.5 * (a + d);
  const Complex disc = std::sqrt(0.25 * (a - d) * (a - d) + b * c);
  const Complex l1 = half_tr + disc;
  const Complex l2 = half_tr - disc;
  return std::abs(l1 - d) < std::abs(l2 - d) ? l1 : l2;
}

}  // namespace

Complex determinant(const Mat4& m) {
  Mat4 a = m;
  Complex det = 1.0;
  for (std::size_t k = 0; k < 4; ++k) {
    std::size_t piv = k;
    for (std::size_t r = k + 1; r < 4; ++r)
      if (std::abs(a(r, k)) > std::abs(a(piv, k))) piv = r;
    if (a(piv, k) == Complex{0.0, 0.0}) return 0.0;
    if (piv != k) {
      for (std::size_t c = 0; c < 4; ++c) std::swap(a(k, c), a(piv, c));
      det = -det;
    }
    det *= a(k, k);
    for (std::size_t r = k + 1; r < 4; ++r) {
      const Complex f = a(r, k) / a(k, k);
      for (std::size_t c = k; c < 4; ++c) a(r, c) -= f * a(k, c);
    }
  }
  return det;
}

bool CanonicalCoord::in_chamber(double tol) const {
  return c1 <= 0.5 + tol && c1 >= c2 - tol && c2 >= c3 - tol && c3 >= -tol &&
         c1 + c2 <= 0.5 + tol;
}

double Rng::uniform() {
  return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

double Rng::normal() {
  if (spare_) {
    const double v = *spare_;
    spare_.reset();
    return v;
  }
  double u1 = uniform();
  while (u1 <= 0.0) u1 = uniform();
  const double u2 = uniform();
  const double radius = std::sqrt(-2.0 * std::log(u1));
  spare_ = radius * std::sin(2.0 * kPi * u2);
  return radius * std::cos(2.0 * kPi * u2);
}

namespace pauli {
Mat2 i2() { return Mat2::identity(); }
Mat2 x() {
  Mat2 m;
  m(0, 1) = 1.0;
  m(1, 0) = 1.0;
  return m;
}
Mat2 y() {
  Mat2 m;
  m(0, 1) = -kI;
  m(1, 0) = kI;
  return m;
}
Mat2 z() { return Mat2::diagonal({1.0, -1.0}); }
Mat2 h() {
  const double s = 1.0 / std::sqrt(2.0);
  Mat2 m;
  m(0, 0) = s;
  m(0, 1) = s;
  m(1, 0) = s;
  m(1, 1) = -s;
  return m;
}
}  // namespace pauli

namespace gates {
Mat4 cnot() {
  Mat4 m;
  m(0, 0) = 1.0;
  m(1, 1) = 1.0;
  m(2, 3) = 1.0;
  m(3, 2) = 1.0;
  return m;
}
Mat4 cz() { return Mat4::diagonal({1.0, 1.0, 1.0, -1.0}); }
Mat4 swap() {
  Mat4 m;
  m(0, 0) = 1.0;
  m(1, 2) = 1.0;
  m(2, 1) = 1.0;
  m(3, 3) = 1.0;
  return m;
}
Mat4 iswap() {
  Mat4 m;
  m(0, 0) = 1.0;
  m(1, 2) = kI;
  m(2, 1) = kI;
  m(3, 3) = 1.0;
  return m;
}
}  // namespace gates

const Mat4& magic_basis() {
  static const Mat4 b = [] {
    const double s = 1.0 / std::sqrt(2.0);
    Mat4 m;
    m(0, 0) = s;
    m(0, 3) = s * kI;
    m(1, 1) = s * kI;
    m(1, 2) = s;
    m(2, 1) = s * kI;
    m(2, 2) = -s;
    m(3, 0) = s;
    m(3, 3) = -s * kI;
    return m;
  }();
  return b;
}

Mat4 kron(const Mat2& a, const Mat2& b) {
  Mat4 m;
  for (std::size_t i = 0; i < 2; ++i)
    for (std::size_t j = 0; j < 2; ++j)
      for (std::size_t k = 0; k < 2; ++k)
        for (std::size_t l = 0; l < 2; ++l) m(2 * i + k, 2 * j + l) = a(i, j) * b(k, l);
  return m;
}

Mat2 rv_gate(const std::array<double, 3>& v) {
  const double theta2 = v[0] * v[0] + v[1] * v[1] + v[2] * v[2];
  double cos_half;
  double sinc_half;  // sin(θ/2) / θ
  if (theta2 < 1e-8) {
    cos_half = 1.0 - theta2 / 8.0 + theta2 * theta2 / 384.0;
    sinc_half = 0.5 - theta2 / 48.0 + theta2 * theta2 / 3840.0;
  } else {
    const double theta = std::sqrt(theta2);
    cos_half = std::cos(0.5 * theta);
    sinc_half = std::sin(0.5 * theta) / theta;
  }
  // cos(θ/2) I − i sin(θ/2) n·σ with n = v/θ
  Mat2 m;
  m(0, 0) = Complex{cos_half, -sinc_half * v[2]};
  m(1, 1) = Complex{cos_half, sinc_half * v[2]};
  m(0, 1) = Complex{-sinc_half * v[1], -sinc_half * v[0]};
  m(1, 0) = Complex{sinc_half * v[1], -sinc_half * v[0]};
  return m;
}

Mat4 can_gate(const RawCoord& c) {
  std::array<Complex, 4> d;
  for (std::size_t j = 0; j < 4; ++j) {
    const auto& s = kMagicSigns[j];
    const double x = s[0] * c.c1 + s[1] * c.c2 + s[2] * c.c3;
    d[j] = std::polar(1.0, -kPi * x);
  }
  const Mat4& b = magic_basis();
  return b * Mat4::diagonal(d) * b.adjoint();
}

namespace {

// Ginibre draw followed by Gram–Schmidt QR; Q·diag(R_ii/|R_ii|) is Haar.
template <std::size_t N>
CMatrix<N> haar_unitary(Rng& rng) {
  CMatrix<N> g;
  const double s = 1.0 / std::sqrt(2.0);
  for (auto& x : g.data) {
    const double re = rng.normal();
    const double im = rng.normal();
    x = Complex{re * s, im * s};
  }
  CMatrix<N> q;
  for (std::size_t j = 0; j < N; ++j) {
    std::array<Complex, N> col;
    for (std::size_t r = 0; r < N; ++r) col[r] = g(r, j);
    // two passes of modified Gram–Schmidt
    for (int pass = 0; pass < 2; ++pass) {
      for (std::size_t k = 0; k < j; ++k) {
        Complex dot = 0.0;
        for (std::size_t r = 0; r < N; ++r) dot += std::conj(q(r, k)) * col[r];
        for (std::size_t r = 0; r < N; ++r) col[r] -= dot * q(r, k);
      }
    }
    double norm = 0.0;
    for (const auto& x : col) norm += std::norm(x);
    norm = std::sqrt(norm);
    // R_jj = <q_j, g_j>; its phase is folded into q_j
    Complex rjj = 0.0;
    for (std::size_t r = 0; r < N; ++r) rjj += std::conj(col[r] / norm) * g(r, j);
    const Complex phase = rjj / std::abs(rjj);
    for (std::size_t r = 0; r < N; ++r) q(r, j) = col[r] / norm * phase;
  }
  return q;
}

}  // namespace

Mat2 haar_random_su2(Rng& rng) {
  Mat2 u = haar_unitary<2>(rng);
  const Complex root = std::sqrt(determinant(u));
  return (1.0 / root) * u;
}

double su4_phase(const Mat4& m) {
  double angle = std::arg(determinant(m));
  // arg(−1 − 0i) is −π; keep the branch (−π, π] whatever the sign of zero
  if (angle <= -kPi) angle = kPi;
  return angle / 4.0;
}

Mat4 to_su4(const Mat4& m) {
  const Complex root = std::polar(std::pow(std::abs(determinant(m)), 0.25), su4_phase(m));
  return (1.0 / root) * m;
}

Mat4 haar_random_su4(Rng& rng) { return to_su4(haar_unitary<4>(rng)); }

Mat4 haar_random_su4(std::uint64_t seed) {
  Rng rng(seed);
  return haar_random_su4(rng);
}

EigenDecomp eig4(const Mat4& m) {
  constexpr double eps = std::numeric_limits<double>::epsilon();
  Mat4 h = m;
  Mat4 z = Mat4::identity();

  // Hessenberg form by Givens rotations.
  for (std::size_t j = 0; j + 2 < 4; ++j) {
    for (std::size_t i = 3; i >= j + 2; --i) {
      if (std::abs(h(i, j)) == 0.0) continue;
      const Givens g = make_givens(h(i - 1, j), h(i, j));
      rotate_rows(h, i - 1, g, 0);
      rotate_cols(h, i - 1, g, 4);
      rotate_cols(z, i - 1, g, 4);
      h(i, j) = 0.0;
    }
  }

  const double scale = std::max(frobenius_norm(h), std::numeric_limits<double>::min());
  int hi = 3;
  int iter = 0;
  int total = 0;
  constexpr int kMaxTotal = 30 * 4;
  while (hi > 0) {
    int l = hi;
    for (; l > 0; --l) {
      const double off = std::abs(h(l, l - 1));
      double ref = std::abs(h(l, l)) + std::abs(h(l - 1, l - 1));
      if (ref == 0.0) ref = scale;
      if (off <= eps * ref) {
        h(l, l - 1) = 0.0;
        break;
      }
    }
    if (l == hi) {
      --hi;
      iter = 0;
      continue;
    }
    if (++total > kMaxTotal) throw ConvergenceFailure("eig4: QR iteration did not converge");
    ++iter;

    Complex mu;
    if (iter % 11 == 10) {
      mu = h(hi, hi) + 0.75 * std::abs(h(hi, hi - 1));
    } else {
      mu = wilkinson_shift(h(hi - 1, hi - 1), h(hi - 1, hi), h(hi, hi - 1), h(hi, hi));
    }

    const auto lo = static_cast<std::size_t>(l);
    const auto top = static_cast<std::size_t>(hi);
    for (std::size_t k = lo; k <= top; ++k) h(k, k) -= mu;
    std::array<Givens, 3> rots{};
    for (std::size_t k = lo; k < top; ++k) {
      rots[k] = make_givens(h(k, k), h(k + 1, k));
      rotate_rows(h, k, rots[k], k);
      h(k + 1, k) = 0.0;
    }
    for (std::size_t k = lo; k < top; ++k) {
      rotate_cols(h, k, rots[k], k + 2);
      rotate_cols(z, k, rots[k], 4);
    }
    for (std::size_t k = lo; k <= top; ++k) h(k, k) += mu;
  }

  EigenDecomp out;
  for (std::size_t k = 0; k < 4; ++k) out.values[k] = h(k, k);

  // Eigenvectors of the triangular factor by back substitution.
  const double tiny = eps * scale;
  for (std::size_t k = 0; k < 4; ++k) {
    std::array<Complex, 4> y{};
    y[k] = 1.0;
    for (std::size_t jj = k; jj-- > 0;) {
      Complex acc = 0.0;
      for (std::size_t p = jj + 1; p <= k; ++p) acc += h(jj, p) * y[p];
      Complex denom = h(jj, jj) - out.values[k];
      if (std::abs(denom) < tiny) denom = tiny;
      y[jj] = -acc / denom;
    }
    std::array<Complex, 4> v{};
    for (std::size_t r = 0; r < 4; ++r)
      for (std::size_t p = 0; p < 4; ++p) v[r] += z(r, p) * y[p];
    double norm = 0.0;
    for (const auto& x : v) norm += std::norm(x);
    norm = std::sqrt(norm);
    for (std::size_t r = 0; r < 4; ++r) out.vectors(r, k) = v[r] / norm;
  }
  return out;
}

double phase_distance(const Mat4& u, const Mat4& v) {
  // The minimizing phase is arg tr(v†u); evaluating the norm directly avoids
  // the cancellation in sqrt(8 − 2|tr|) when u ≈ v.
  const Complex overlap = (v.adjoint() * u).trace();
  const Complex phase = std::abs(overlap) > 0.0 ? overlap / std::abs(overlap) : Complex{1.0, 0.0};
  return frobenius_norm(u - phase * v);
}

}  // namespace gulps
