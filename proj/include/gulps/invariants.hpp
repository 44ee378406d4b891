#pragma once

#include <array>

#include "gulps/matcore.hpp"

namespace gulps {

/// Log spectrum of the Cartan double in full turns: the eigenvalues of
/// γ(U) are exp(−2πi·a[k]). Sorted non-increasing, summing to zero, with
/// a[0] − a[3] ≤ 1 (one point of the SU(4) alcove).
struct LogSpec {
  std::array<double, 4> a{};

  double operator[](std::size_t i) const { return a[i]; }
  bool operator==(const LogSpec&) const = default;
};

/// Makhlin invariants (Re g1, Im g1, g2).
struct MakhlinInv {
  double g1_re = 0.0;
  double g1_im = 0.0;
  double g2 = 0.0;
};

/// A single-qubit layer left ⊗ right; left acts on the more significant qubit.
struct LocalPair {
  Mat2 left = Mat2::identity();
  Mat2 right = Mat2::identity();

  Mat4 matrix() const { return kron(left, right); }
};

/// u = e^{i·global_phase} · after · CAN(coord) · before.
struct KakDecomp {
  LocalPair after;
  CanonicalCoord coord;
  LocalPair before;
  double global_phase = 0.0;

  Mat4 reconstruct() const;
};

/// Same factorization with an arbitrary (Weyl-equivalent) coordinate triple.
struct KakRaw {
  LocalPair after;
  RawCoord coord;
  LocalPair before;
  double global_phase = 0.0;

  Mat4 reconstruct() const;
};

/// Spectrum of γ(u) = u_Bᵀ u_B for the SU(4)-normalized u in the magic basis.
LogSpec gamma_spectrum(const Mat4& u);

/// Unsorted affine image (c1+c2−c3, c1−c2+c3, −c1+c2+c3, −c1−c2−c3). Inside
/// the alcove region (c1 ≥ c2 ≥ |c3|, c1 + c2 ≤ 1/2) it is already sorted.
std::array<double, 4> coords_affine(const RawCoord& c);

/// coords_affine re-sorted non-increasing.
LogSpec coords_to_logspec(const RawCoord& c);
inline LogSpec coords_to_logspec(const CanonicalCoord& c) { return coords_to_logspec(c.raw()); }

/// Inverse of coords_affine on sorted spectra: ((a0+a1)/2, (a0+a2)/2, (a1+a2)/2).
RawCoord logspec_to_raw(const LogSpec& s);

/// The other SU(4) lift of the same class: (1/2 − c1, c2, −c3).
RawCoord rho_reflect(const CanonicalCoord& c);

/// Applies the affine Weyl group (shifts by 1/2, permutations, paired sign
/// flips) to land in the chamber. On the base face c3 ≈ 0 the representative
/// with c1 ≤ 1/4 is chosen.
CanonicalCoord weyl_canonicalize(const RawCoord& raw);

/// Weyl moves with the local unitaries that realize them:
/// CAN(raw) = e^{i·global_phase} · after · CAN(coord) · before.
/// coord may carry a c3 of order chamber_face below zero.
KakRaw weyl_canonicalize_tracked(const RawCoord& raw);

/// Chamber-canonical coordinates via the gamma spectrum.
CanonicalCoord canonical_coords(const Mat4& u);

/// Distance between two chamber points that respects the base-face gluing.
double chamber_distance(const CanonicalCoord& a, const CanonicalCoord& b);

MakhlinInv makhlin(const Mat4& u);

/// Closed form of makhlin(can_gate(c)).
MakhlinInv makhlin_of_coords(const RawCoord& c);
inline MakhlinInv makhlin_of_coords(const CanonicalCoord& c) { return makhlin_of_coords(c.raw()); }

/// Cartan KAK decomposition. Locals land in SU(2); coord equals
/// canonical_coords(u) up to the base-face gluing.
/// Throws NumericalDegeneracy if no real eigenbasis can be extracted.
KakDecomp kak(const Mat4& u);

/// KAK whose coordinate triple is the exact Weyl equivalent of the canonical
/// one that lies closest to hint.
KakRaw kak_toward(const Mat4& u, const RawCoord& hint);

/// Euclidean distance between the Makhlin triples.
double local_equiv_distance(const Mat4& u, const Mat4& v);

/// Splits a 4×4 matrix that is (numerically) a ⊗ b into SU(2) factors,
/// returning the phase φ with m = e^{iφ} a ⊗ b.
LocalPair split_local(const Mat4& m, double& phase);

}  // namespace gulps
