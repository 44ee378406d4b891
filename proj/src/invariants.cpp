#include "gulps/invariants.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>

#include "gulps/constants.hpp"
#include "gulps/errors.hpp"

namespace gulps {

namespace {

constexpr double kPi = std::numbers::pi;
const Complex kI{0.0, 1.0};

using Real4 = std::array<std::array<double, 4>, 4>;

Mat2 pauli_by_index(int k) {
  switch (k) {
    case 0: return pauli::x();
    case 1: return pauli::y();
    default: return pauli::z();
  }
}

// Cyclic Jacobi for a real symmetric 4×4. Columns of v are eigenvectors.
void jacobi_symmetric(Real4 a, Real4& v) {
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) v[i][j] = i == j ? 1.0 : 0.0;

  for (int sweep = 0; sweep < 60; ++sweep) {
    double off = 0.0;
    double total = 0.0;
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) {
        total += a[i][j] * a[i][j];
        if (i != j) off += a[i][j] * a[i][j];
      }
    if (off <= 1e-32 * total || off == 0.0) return;

    for (int p = 0; p < 3; ++p) {
      for (int q = p + 1; q < 4; ++q) {
        if (a[p][q] == 0.0) continue;
        const double theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
        const double t = (theta >= 0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (int k = 0; k < 4; ++k) {
          const double akp = a[k][p];
          const double akq = a[k][q];
          a[k][p] = c * akp - s * akq;
          a[k][q] = s * akp + c * akq;
        }
        for (int k = 0; k < 4; ++k) {
          const double apk = a[p][k];
          const double aqk = a[q][k];
          a[p][k] = c * apk - s * aqk;
          a[q][k] = s * apk + c * aqk;
        }
        for (int k = 0; k < 4; ++k) {
          const double vkp = v[k][p];
          const double vkq = v[k][q];
          v[k][p] = c * vkp - s * vkq;
          v[k][q] = s * vkp + c * vkq;
        }
      }
    }
  }
}

// Carries CAN(raw) = e^{iφ} (al ⊗ ar) CAN(cur) (bl ⊗ br) through a sequence
// of Weyl moves. With track == false only the coordinates move.
class WeylTracker {
 public:
  WeylTracker(const RawCoord& raw, bool track) : c_{raw.c1, raw.c2, raw.c3}, track_(track) {}

  // c_j −= m/2, using CAN(c + m/2·e_j) = CAN(c) · (−i P_j P_j)^m.
  void shift(int j, long m) {
    if (m == 0) return;
    c_[j] -= 0.5 * static_cast<double>(m);
    if (!track_) return;
    phase_ -= 0.5 * kPi * static_cast<double>(m);
    if (m % 2 != 0) {
      // P ⊗ P = (iP) ⊗ (−iP), both factors in SU(2)
      const Mat2 p = pauli_by_index(j);
      bl_ = (kI * p) * bl_;
      br_ = (-kI * p) * br_;
    }
  }

  // Exchange c_j and c_k by conjugating with r ⊗ r, r = exp(−iπ/4 P_l).
  void swap(int j, int k) {
    std::swap(c_[j], c_[k]);
    if (!track_) return;
    const int l = 3 - j - k;
    std::array<double, 3> v{0.0, 0.0, 0.0};
    v[l] = 0.5 * kPi;
    const Mat2 r = rv_gate(v);
    const Mat2 rd = r.adjoint();
    al_ = al_ * rd;
    ar_ = ar_ * rd;
    bl_ = r * bl_;
    br_ = r * br_;
  }

  // Negate c_j and c_k by conjugating with P_l ⊗ I. Written with iP_l to stay
  // in SU(2), which costs a phase of π.
  void flip(int j, int k) {
    c_[j] = -c_[j];
    c_[k] = -c_[k];
    if (!track_) return;
    const Mat2 p = kI * pauli_by_index(3 - j - k);
    al_ = al_ * p;
    bl_ = p * bl_;
    phase_ += kPi;
  }

  void sort_descending() {
    if (c_[0] < c_[1]) swap(0, 1);
    if (c_[1] < c_[2]) swap(1, 2);
    if (c_[0] < c_[1]) swap(0, 1);
  }

  void canonicalize() {
    for (int j = 0; j < 3; ++j) shift(j, static_cast<long>(std::floor(c_[j] / 0.5)));
    sort_descending();
    if (c_[0] + c_[1] > 0.5) {
      flip(0, 1);
      shift(0, -1);
      shift(1, -1);
      sort_descending();
    }
    if (c_[2] <= tol::chamber_face && c_[0] > 0.25) reflect_base();
  }

  // (c1, c2, c3) → (1/2 − c1, c2, −c3)
  void reflect_base() {
    flip(0, 2);
    shift(0, -1);
  }

  RawCoord coord() const { return {c_[0], c_[1], c_[2]}; }

  KakRaw result() const {
    KakRaw k;
    k.after = {al_, ar_};
    k.coord = coord();
    k.before = {bl_, br_};
    k.global_phase = phase_;
    return k;
  }

 private:
  std::array<double, 3> c_;
  bool track_;
  double phase_ = 0.0;
  Mat2 al_ = Mat2::identity();
  Mat2 ar_ = Mat2::identity();
  Mat2 bl_ = Mat2::identity();
  Mat2 br_ = Mat2::identity();
};

// outer ∘ inner, where inner is a factorization of CAN(outer.coord).
KakRaw compose(const KakRaw& outer, const KakRaw& inner) {
  KakRaw k;
  k.after = {outer.after.left * inner.after.left, outer.after.right * inner.after.right};
  k.coord = inner.coord;
  k.before = {inner.before.left * outer.before.left, inner.before.right * outer.before.right};
  k.global_phase = outer.global_phase + inner.global_phase;
  return k;
}

double coord_dist(const RawCoord& a, const RawCoord& b) {
  return std::hypot(a.c1 - b.c1, a.c2 - b.c2, a.c3 - b.c3);
}

Mat4 gamma_matrix(const Mat4& su4) {
  const Mat4& b = magic_basis();
  const Mat4 ub = b.adjoint() * su4 * b;
  return ub.transpose() * ub;
}

// Deterministic angles for the real/imaginary blend in the KAK eigenbasis
// search; the first is generic, the rest are a golden-ratio sweep.
double blend_angle(int attempt) {
  const double golden = 0.6180339887498949;
  const double frac = std::fmod(0.1234 + golden * attempt, 1.0);
  return 2.0 * kPi * frac;
}

KakRaw kak_raw(const Mat4& u) {
  const double phase0 = su4_phase(u);
  const Mat4 us = to_su4(u);
  const Mat4& bm = magic_basis();
  const Mat4 up = bm.adjoint() * us * bm;
  const Mat4 m = up.transpose() * up;

  Real4 re{};
  Real4 im{};
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) {
      // symmetrize away rounding so Jacobi sees an exactly symmetric input
      const Complex x = 0.5 * (m(i, j) + m(j, i));
      re[i][j] = x.real();
      im[i][j] = x.imag();
    }

  Mat4 p;
  Mat4 d;
  bool found = false;
  for (int attempt = 0; attempt < 24 && !found; ++attempt) {
    const double th = blend_angle(attempt);
    const double cs = std::cos(th);
    const double sn = std::sin(th);
    Real4 blend{};
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) blend[i][j] = cs * re[i][j] + sn * im[i][j];
    Real4 v{};
    jacobi_symmetric(blend, v);
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) p(i, j) = v[i][j];
    d = p.transpose() * m * p;
    double off = 0.0;
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j)
        if (i != j) off = std::max(off, std::abs(d(i, j)));
    found = off <= 1e-9;
  }
  if (!found) throw NumericalDegeneracy("kak: no real eigenbasis for the Cartan double");

  if (determinant(p).real() < 0.0)
    for (int i = 0; i < 4; ++i) p(i, 0) = -p(i, 0);

  std::array<double, 4> theta{};
  for (int j = 0; j < 4; ++j) theta[j] = 0.5 * std::arg(d(j, j));
  // The half angles are fixed only up to π each; make Π e^{iθ} = +1.
  double sum = theta[0] + theta[1] + theta[2] + theta[3];
  if (std::cos(sum) < 0.0) theta[0] += kPi;

  std::array<Complex, 4> dbar;
  for (int j = 0; j < 4; ++j) dbar[j] = std::polar(1.0, -theta[j]);
  Mat4 k1 = up * p * Mat4::diagonal(dbar);
  for (auto& x : k1.data) x = Complex{x.real(), 0.0};

  std::array<double, 4> y{};
  for (int j = 0; j < 4; ++j) y[j] = -theta[j] / kPi;
  RawCoord c;
  double* cc[3] = {&c.c1, &c.c2, &c.c3};
  for (int k = 0; k < 3; ++k) {
    double s = 0.0;
    for (int j = 0; j < 4; ++j) s += kMagicSigns[j][k] * y[j];
    *cc[k] = 0.25 * s;
  }
  const double psi = -kPi * 0.25 * (y[0] + y[1] + y[2] + y[3]);

  double phase1 = 0.0;
  double phase2 = 0.0;
  const LocalPair left = split_local(bm * k1 * bm.adjoint(), phase1);
  const LocalPair right = split_local(bm * p.transpose() * bm.adjoint(), phase2);

  KakRaw outer;
  outer.after = left;
  outer.coord = c;
  outer.before = right;
  outer.global_phase = phase0 + psi + phase1 + phase2;

  WeylTracker tracker(c, true);
  tracker.canonicalize();
  return compose(outer, tracker.result());
}

}  // namespace

Mat4 KakDecomp::reconstruct() const {
  return std::polar(1.0, global_phase) * (after.matrix() * can_gate(coord) * before.matrix());
}

Mat4 KakRaw::reconstruct() const {
  return std::polar(1.0, global_phase) * (after.matrix() * can_gate(coord) * before.matrix());
}

LogSpec gamma_spectrum(const Mat4& u) {
  const EigenDecomp e = eig4(gamma_matrix(to_su4(u)));
  LogSpec s;
  for (int k = 0; k < 4; ++k) {
    double a = -std::arg(e.values[k]) / (2.0 * kPi);
    if (a <= -0.5) a += 1.0;  // branch (−1/2, 1/2]
    s.a[k] = a;
  }
  std::sort(s.a.begin(), s.a.end(), std::greater<>());
  // det γ = 1 forces an integer sum in [−2, 2]; move whole turns to reach 0
  const long excess = std::lround(s.a[0] + s.a[1] + s.a[2] + s.a[3]);
  if (excess > 0) {
    for (long i = 0; i < excess; ++i) s.a[i] -= 1.0;
  } else if (excess < 0) {
    for (long i = 0; i < -excess; ++i) s.a[3 - i] += 1.0;
  }
  std::sort(s.a.begin(), s.a.end(), std::greater<>());
  return s;
}

std::array<double, 4> coords_affine(const RawCoord& c) {
  return {c.c1 + c.c2 - c.c3, c.c1 - c.c2 + c.c3, -c.c1 + c.c2 + c.c3, -c.c1 - c.c2 - c.c3};
}

LogSpec coords_to_logspec(const RawCoord& c) {
  LogSpec s{coords_affine(c)};
  std::sort(s.a.begin(), s.a.end(), std::greater<>());
  return s;
}

RawCoord logspec_to_raw(const LogSpec& s) {
  return {0.5 * (s[0] + s[1]), 0.5 * (s[0] + s[2]), 0.5 * (s[1] + s[2])};
}

RawCoord rho_reflect(const CanonicalCoord& c) { return {0.5 - c.c1, c.c2, -c.c3}; }

CanonicalCoord weyl_canonicalize(const RawCoord& raw) {
  WeylTracker t(raw, false);
  t.canonicalize();
  const RawCoord c = t.coord();
  return {c.c1, c.c2, std::max(c.c3, 0.0)};
}

KakRaw weyl_canonicalize_tracked(const RawCoord& raw) {
  WeylTracker t(raw, true);
  t.canonicalize();
  return t.result();
}

CanonicalCoord canonical_coords(const Mat4& u) {
  return weyl_canonicalize(logspec_to_raw(gamma_spectrum(u)));
}

double chamber_distance(const CanonicalCoord& a, const CanonicalCoord& b) {
  return std::min(coord_dist(a.raw(), b.raw()), coord_dist(a.raw(), rho_reflect(b)));
}

MakhlinInv makhlin(const Mat4& u) {
  const Mat4& b = magic_basis();
  const Mat4 ub = b.adjoint() * u * b;
  const Mat4 m = ub.transpose() * ub;
  const Complex det = determinant(ub);
  const Complex tr = m.trace();
  const Complex tr2 = (m * m).trace();
  const Complex g1 = tr * tr / (16.0 * det);
  const Complex g2 = (tr * tr - tr2) / (4.0 * det);
  return {g1.real(), g1.imag(), g2.real()};
}

MakhlinInv makhlin_of_coords(const RawCoord& c) {
  Complex s1 = 0.0;
  Complex s2 = 0.0;
  for (const auto& s : kMagicSigns) {
    const double x = s[0] * c.c1 + s[1] * c.c2 + s[2] * c.c3;
    s1 += std::polar(1.0, -2.0 * kPi * x);
    s2 += std::polar(1.0, -4.0 * kPi * x);
  }
  const Complex g1 = s1 * s1 / 16.0;
  const Complex g2 = (s1 * s1 - s2) / 4.0;
  return {g1.real(), g1.imag(), g2.real()};
}

KakDecomp kak(const Mat4& u) {
  const KakRaw r = kak_raw(u);
  KakDecomp k;
  k.after = r.after;
  k.coord = {r.coord.c1, r.coord.c2, std::max(r.coord.c3, 0.0)};
  k.before = r.before;
  k.global_phase = r.global_phase;
  return k;
}

KakRaw kak_toward(const Mat4& u, const RawCoord& hint) {
  const KakRaw r = kak_raw(u);
  WeylTracker t(r.coord, true);
  t.reflect_base();
  if (coord_dist(t.coord(), hint) < coord_dist(r.coord, hint)) return compose(r, t.result());
  return r;
}

double local_equiv_distance(const Mat4& u, const Mat4& v) {
  const MakhlinInv a = makhlin(u);
  const MakhlinInv b = makhlin(v);
  return std::hypot(a.g1_re - b.g1_re, a.g1_im - b.g1_im, a.g2 - b.g2);
}

LocalPair split_local(const Mat4& m, double& phase) {
  std::size_t bi = 0;
  std::size_t bj = 0;
  double best = -1.0;
  for (std::size_t i = 0; i < 2; ++i)
    for (std::size_t j = 0; j < 2; ++j) {
      double n = 0.0;
      for (std::size_t r = 0; r < 2; ++r)
        for (std::size_t c = 0; c < 2; ++c) n += std::norm(m(2 * i + r, 2 * j + c));
      if (n > best) {
        best = n;
        bi = i;
        bj = j;
      }
    }
  auto block = [&](std::size_t i, std::size_t j) {
    Mat2 blk;
    for (std::size_t r = 0; r < 2; ++r)
      for (std::size_t c = 0; c < 2; ++c) blk(r, c) = m(2 * i + r, 2 * j + c);
    return blk;
  };
  const Mat2 pivot = block(bi, bj);
  const Mat2 b = (1.0 / std::sqrt(determinant(pivot))) * pivot;
  const Mat2 bd = b.adjoint();
  Mat2 a;
  for (std::size_t i = 0; i < 2; ++i)
    for (std::size_t j = 0; j < 2; ++j) a(i, j) = 0.5 * (bd * block(i, j)).trace();
  const Complex root = std::sqrt(determinant(a));
  phase = std::arg(root);
  return {(1.0 / root) * a, b};
}

}  // namespace gulps
