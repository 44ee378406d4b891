#include <algorithm>
#include <cmath>
#include <vector>

#include "doctest.h"
#include "gulps/constants.hpp"
#include "gulps/invariants.hpp"
#include "oracle.hpp"

using namespace gulps;

namespace {

RawCoord random_chamber(Rng& rng) {
  for (;;) {
    const double a = rng.uniform(0.0, 0.5);
    const double b = rng.uniform(0.0, 0.5);
    const double c = rng.uniform(0.0, 0.5);
    double v[3] = {a, b, c};
    std::sort(v, v + 3, std::greater<>());
    if (v[0] + v[1] <= 0.5) return {v[0], v[1], v[2]};
  }
}

Mat4 random_local(Rng& rng) { return kron(haar_random_su2(rng), haar_random_su2(rng)); }

double dist(const CanonicalCoord& a, const RawCoord& b) {
  return std::hypot(a.c1 - b.c1, a.c2 - b.c2, a.c3 - b.c3);
}

// Brute force over the affine Weyl group: every permutation, every even
// number of sign flips and every half-integer shift in a window, keeping the
// images that land in the chamber.
std::vector<RawCoord> chamber_images(const RawCoord& r) {
  std::vector<RawCoord> out;
  const double base[3] = {r.c1, r.c2, r.c3};
  int perm[3] = {0, 1, 2};
  do {
    for (int signs = 0; signs < 8; ++signs) {
      if (__builtin_popcount(signs) % 2) continue;
      double v[3];
      for (int k = 0; k < 3; ++k) v[k] = base[perm[k]] * ((signs >> k) & 1 ? -1.0 : 1.0);
      for (int s0 = -6; s0 <= 6; ++s0)
        for (int s1 = -6; s1 <= 6; ++s1)
          for (int s2 = -6; s2 <= 6; ++s2) {
            const RawCoord w{v[0] + 0.5 * s0, v[1] + 0.5 * s1, v[2] + 0.5 * s2};
            const double e = 1e-12;
            if (w.c1 < 0.5 + e && w.c1 >= w.c2 - e && w.c2 >= w.c3 - e && w.c3 >= -e &&
                w.c1 + w.c2 <= 0.5 + e)
              out.push_back(w);
          }
    }
  } while (std::next_permutation(perm, perm + 3));
  return out;
}

}  // namespace

TEST_CASE("gamma spectrum of named gates") {
  auto near = [](const LogSpec& s, std::array<double, 4> want) {
    for (int k = 0; k < 4; ++k)
      if (std::abs(s[k] - want[k]) > 1e-12) return false;
    return true;
  };
  CHECK(near(gamma_spectrum(gates::cnot()), {0.25, 0.25, -0.25, -0.25}));
  CHECK(near(gamma_spectrum(gates::swap()), {0.25, 0.25, 0.25, -0.75}));
  CHECK(near(gamma_spectrum(Mat4::identity()), {0.0, 0.0, 0.0, 0.0}));
  CHECK(near(gamma_spectrum(can_gate(RawCoord{0.3, 0.1, 0.05})), {0.35, 0.25, -0.15, -0.45}));
}

TEST_CASE("gamma spectrum of CAN(c) reproduces the affine log-spectrum map") {
  Rng rng(17);
  for (int t = 0; t < 500; ++t) {
    const RawCoord c = random_chamber(rng);
    const Mat4 u = random_local(rng) * can_gate(c) * random_local(rng);
    const LogSpec got = gamma_spectrum(u);
    const LogSpec want = coords_to_logspec(c);
    for (int k = 0; k < 4; ++k) CHECK(std::abs(got[k] - want[k]) < 1e-9);
    const RawCoord back = logspec_to_raw(want);
    CHECK(std::hypot(back.c1 - c.c1, back.c2 - c.c2, back.c3 - c.c3) < 1e-14);
  }
}

TEST_CASE("canonical coordinates of named gates") {
  auto at = [](const Mat4& u, RawCoord want) { return dist(canonical_coords(u), want) < 1e-9; };
  CHECK(at(Mat4::identity(), {0, 0, 0}));
  CHECK(at(gates::cnot(), {0.25, 0, 0}));
  CHECK(at(gates::cz(), {0.25, 0, 0}));
  CHECK(at(gates::iswap(), {0.25, 0.25, 0}));
  CHECK(at(gates::swap(), {0.25, 0.25, 0.25}));
  CHECK(at(can_gate(RawCoord{0.25, 0.125, 0}), {0.25, 0.125, 0}));
  // base-face gluing picks c1 ≤ 1/4
  CHECK(at(can_gate(RawCoord{0.4, 0.05, 0}), {0.1, 0.05, 0}));
}

TEST_CASE("canonical coordinates are invariant under locals and phase") {
  Rng rng(23);
  for (int t = 0; t < 500; ++t) {
    const RawCoord c = random_chamber(rng);
    const Mat4 u = std::polar(1.0, rng.uniform(0, 7)) * random_local(rng) * can_gate(c) *
                   random_local(rng);
    CHECK(chamber_distance(canonical_coords(u), weyl_canonicalize(c)) < 1e-9);
    CHECK(canonical_coords(u).in_chamber(1e-12));
  }
}

TEST_CASE("weyl_canonicalize agrees with brute-force search of the Weyl orbit") {
  Rng rng(29);
  for (int t = 0; t < 300; ++t) {
    const RawCoord raw{rng.uniform(-1.3, 1.3), rng.uniform(-1.3, 1.3), rng.uniform(-1.3, 1.3)};
    const CanonicalCoord got = weyl_canonicalize(raw);
    const auto images = chamber_images(raw);
    REQUIRE(!images.empty());
    double best = 1e9;
    for (const auto& w : images) best = std::min(best, dist(got, w));
    CHECK(best < 1e-12);
    CHECK(got.in_chamber(1e-12));
    // idempotent
    CHECK(dist(weyl_canonicalize(got.raw()), got.raw()) < 1e-15);
  }
}

TEST_CASE("tracked canonicalization carries exact local corrections") {
  Rng rng(31);
  for (int t = 0; t < 300; ++t) {
    const RawCoord raw{rng.uniform(-2, 2), rng.uniform(-2, 2), rng.uniform(-2, 2)};
    const KakRaw k = weyl_canonicalize_tracked(raw);
    CHECK(frobenius_norm(k.reconstruct() - can_gate(raw)) < 1e-12);
    CHECK(std::abs(determinant(k.after.left) - 1.0) < 1e-12);
    CHECK(std::abs(determinant(k.before.right) - 1.0) < 1e-12);
    CHECK(dist(weyl_canonicalize(raw), k.coord) < 1e-12);
  }
}

TEST_CASE("Makhlin invariants of reference gates") {
  auto near = [](MakhlinInv g, double a, double b, double c) {
    return std::abs(g.g1_re - a) < 1e-12 && std::abs(g.g1_im - b) < 1e-12 &&
           std::abs(g.g2 - c) < 1e-12;
  };
  CHECK(near(makhlin(Mat4::identity()), 1, 0, 3));
  CHECK(near(makhlin(gates::cnot()), 0, 0, 1));
  CHECK(near(makhlin(gates::swap()), -1, 0, -3));
  CHECK(near(makhlin(gates::iswap()), 0, 0, -1));
  CHECK(near(makhlin_of_coords(RawCoord{0.25, 0, 0}), 0, 0, 1));
}

TEST_CASE("Makhlin closed form matches the matrix form and ignores locals") {
  Rng rng(37);
  for (int t = 0; t < 300; ++t) {
    const RawCoord c = random_chamber(rng);
    const Mat4 u = std::polar(1.0, rng.uniform(0, 7)) * random_local(rng) * can_gate(c) *
                   random_local(rng);
    const MakhlinInv a = makhlin(u);
    const MakhlinInv b = makhlin_of_coords(c);
    CHECK(std::hypot(a.g1_re - b.g1_re, a.g1_im - b.g1_im, a.g2 - b.g2) < 1e-10);
    CHECK(local_equiv_distance(u, can_gate(c)) < 1e-10);
  }
}

TEST_CASE("split_local recovers both tensor factors") {
  Rng rng(41);
  for (int t = 0; t < 100; ++t) {
    const Mat2 a = haar_random_su2(rng);
    const Mat2 b = haar_random_su2(rng);
    const double phi = rng.uniform(-3, 3);
    double phase = 0.0;
    const LocalPair p = split_local(std::polar(1.0, phi) * kron(a, b), phase);
    CHECK(frobenius_norm(std::polar(1.0, phase) * p.matrix() - std::polar(1.0, phi) * kron(a, b)) <
          1e-12);
    CHECK(std::abs(determinant(p.left) - 1.0) < 1e-12);
    CHECK(std::abs(determinant(p.right) - 1.0) < 1e-12);
  }
}

TEST_CASE("KAK reconstructs Haar-random and degenerate unitaries") {
  Rng rng(43);
  std::vector<Mat4> cases;
  for (int t = 0; t < 1000; ++t) cases.push_back(haar_random_su4(rng));
  const RawCoord special[] = {{0, 0, 0},       {0.25, 0, 0},      {0.25, 0.25, 0},
                              {0.25, 0.25, 0.25}, {0.25, 0.125, 0}, {0.1, 0.1, 0.1},
                              {0.2, 0.2, 0},   {0.3, 0.2, 0},     {0.125, 0.125, 0.125},
                              {1e-9, 0, 0},    {0.25, 0.25, 1e-9}};
  for (const auto& c : special) {
    cases.push_back(can_gate(c));
    cases.push_back(random_local(rng) * can_gate(c) * random_local(rng));
  }
  cases.push_back(gates::cnot());
  cases.push_back(gates::cz());
  cases.push_back(gates::swap());
  cases.push_back(gates::iswap());
  cases.push_back(random_local(rng));
  cases.push_back(std::polar(1.0, 0.3) * Mat4::identity());
  for (const Mat4& u : cases) {
    const KakDecomp k = kak(u);
    CHECK(frobenius_norm(k.reconstruct() - u) < 1e-10);
    CHECK(k.coord.in_chamber(1e-12));
    CHECK(chamber_distance(k.coord, canonical_coords(u)) < 1e-9);
    CHECK(std::abs(determinant(k.after.left) - 1.0) < 1e-12);
    CHECK(std::abs(determinant(k.after.right) - 1.0) < 1e-12);
    CHECK(std::abs(determinant(k.before.left) - 1.0) < 1e-12);
    CHECK(std::abs(determinant(k.before.right) - 1.0) < 1e-12);
  }
}

TEST_CASE("kak_toward returns the reflected lift when that one is nearer") {
  Rng rng(47);
  const RawCoord c{0.3, 0.1, 0.05};
  const Mat4 u = random_local(rng) * can_gate(c) * random_local(rng);
  const KakRaw k = kak_toward(u, {0.21, 0.1, -0.05});
  CHECK(std::hypot(k.coord.c1 - 0.2, k.coord.c2 - 0.1, k.coord.c3 + 0.05) < 1e-9);
  CHECK(frobenius_norm(k.reconstruct() - u) < 1e-10);
  const KakRaw k2 = kak_toward(u, {0.29, 0.1, 0.05});
  CHECK(std::hypot(k2.coord.c1 - 0.3, k2.coord.c2 - 0.1, k2.coord.c3 - 0.05) < 1e-9);
}

TEST_CASE("reflected lift has the gamma spectrum of i·U") {
  Rng rng(53);
  for (int t = 0; t < 100; ++t) {
    const CanonicalCoord c = weyl_canonicalize(random_chamber(rng));
    const Mat4 u = can_gate(c);
    const LogSpec a = gamma_spectrum(Complex{0, 1} * u);
    const LogSpec b = coords_to_logspec(rho_reflect(c));
    for (int k = 0; k < 4; ++k) CHECK(std::abs(a[k] - b[k]) < 1e-9);
  }
}
