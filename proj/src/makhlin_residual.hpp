#pragma once

// Makhlin residual of a magic-basis matrix, written over any scalar type the
// Cx helpers accept. Shared by the segment and monolithic models.

#include "gulps/dual.hpp"
#include "gulps/invariants.hpp"

namespace gulps::detail {

/// (Re g1, Im g1, g2) of xb minus the target. xb is already in the magic
/// basis; inv16 = 1/(16 det), inv4 = 1/(4 det) for its determinant.
template <class T>
std::array<T, 3> makhlin_residual(const CxMat<T, 4>& xb, const Complex& inv16, const Complex& inv4,
                                  const MakhlinInv& target) {
  // m = xbᵀ xb; tr m = Σ xb_ij², tr m² = Σ m_jk²
  Cx<T> tr;
  for (const auto& x : xb) tr += x * x;
  Cx<T> tr_sq;
  for (std::size_t j = 0; j < 4; ++j)
    for (std::size_t k = j; k < 4; ++k) {
      Cx<T> m;
      for (std::size_t i = 0; i < 4; ++i) m += xb[i * 4 + j] * xb[i * 4 + k];
      const Cx<T> m2 = m * m;
      tr_sq += m2;
      if (k != j) tr_sq += m2;
    }
  const Cx<T> t2 = tr * tr;
  const Cx<T> g1 = inv16 * t2;
  const Cx<T> g2 = inv4 * (t2 - tr_sq);
  return {g1.re - target.g1_re, g1.im - target.g1_im, g2.re - target.g2};
}

}  // namespace gulps::detail
