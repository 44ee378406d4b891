#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <random>

#include "gulps/matrix.hpp"

namespace gulps {

/// Any real triple in units of π; not necessarily inside the Weyl chamber.
struct RawCoord {
  double c1 = 0.0;
  double c2 = 0.0;
  double c3 = 0.0;

  bool operator==(const RawCoord&) const = default;
};

/// A Weyl chamber point: 1/2 > c1 ≥ c2 ≥ c3 ≥ 0 and c1 + c2 ≤ 1/2, in units
/// of π. Produced by weyl_canonicalize() and canonical_coords().
struct CanonicalCoord {
  double c1 = 0.0;
  double c2 = 0.0;
  double c3 = 0.0;

  RawCoord raw() const { return {c1, c2, c3}; }
  bool in_chamber(double tol) const;
  bool operator==(const CanonicalCoord&) const = default;
};

/// Seedable generator used for every random draw in the project.
///
/// The engine is std::mt19937_64, whose output sequence is fixed by the
/// standard. Uniform doubles take the top 53 bits of one draw; normals use
/// the Box–Muller transform and cache the second variate. Neither depends on
/// the standard library's distribution implementations, so sequences are
/// identical across toolchains.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }
  /// Uniform on [0, 1).
  double uniform();
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  /// Standard normal.
  double normal();

 private:
  std::mt19937_64 engine_;
  std::optional<double> spare_;
};

namespace pauli {
Mat2 i2();
Mat2 x();
Mat2 y();
Mat2 z();
Mat2 h();
}  // namespace pauli

namespace gates {
Mat4 cnot();
Mat4 cz();
Mat4 swap();
Mat4 iswap();
}  // namespace gates

/// Bell-basis change matrix B with columns Φ+, iΨ+, Ψ−, iΦ−.
///
/// In this basis B†(a ⊗ b)B is real orthogonal for a, b ∈ SU(2), and
/// XX, YY, ZZ are simultaneously diagonal with sign patterns
/// (+,−,+), (+,+,−), (−,−,−), (−,+,+) on the four columns.
const Mat4& magic_basis();

/// Sign vectors (XX, YY, ZZ eigenvalues) of the magic basis columns.
inline constexpr std::array<std::array<int, 3>, 4> kMagicSigns{{
    {{1, -1, 1}},
    {{1, 1, -1}},
    {{-1, -1, -1}},
    {{-1, 1, 1}},
}};

Mat4 kron(const Mat2& a, const Mat2& b);

/// R(v) = exp(−i v·σ / 2), continuous through v = 0.
Mat2 rv_gate(const std::array<double, 3>& v);

/// exp(−iπ(c1 XX + c2 YY + c3 ZZ)), built in the magic basis.
Mat4 can_gate(const RawCoord& c);
inline Mat4 can_gate(const CanonicalCoord& c) { return can_gate(c.raw()); }

/// Haar-distributed SU(2) and SU(4) samples (Ginibre + QR with R-phase fix).
Mat2 haar_random_su2(Rng& rng);
Mat4 haar_random_su4(Rng& rng);
Mat4 haar_random_su4(std::uint64_t seed);

/// arg(det m)/4 with arg taken in (−π, π].
double su4_phase(const Mat4& m);

/// Divides by the principal fourth root of the determinant, so that
/// m = e^{i·su4_phase(m)} · to_su4(m) for unitary m.
Mat4 to_su4(const Mat4& m);

struct EigenDecomp {
  std::array<Complex, 4> values;
  /// Column k is a unit eigenvector for values[k].
  Mat4 vectors;
};

/// Eigenpairs of a 4×4 complex matrix via Hessenberg reduction and shifted
/// QR iteration to Schur form. Throws ConvergenceFailure if the iteration
/// does not settle.
EigenDecomp eig4(const Mat4& m);

/// min over φ of ‖u − e^{iφ} v‖_F (equals sqrt(8 − 2|tr(u†v)|) for unitaries).
double phase_distance(const Mat4& u, const Mat4& v);

}  // namespace gulps
