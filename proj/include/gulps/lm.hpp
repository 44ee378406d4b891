#pragma once

#include <functional>
#include <vector>

#include "gulps/dual.hpp"

namespace gulps {

struct LmOptions {
  /// Stop once every residual component is at most this in magnitude.
  double tol = 1e-8;
  int max_iter = 2048;
  double lambda0 = 1e-3;
};

struct LmResult {
  std::vector<double> x;
  std::vector<double> residual;
  double residual_inf = 0.0;
  int iterations = 0;
  bool converged = false;
};

/// Evaluates r(x) into `r` and, when `jac` is non-null, the row-major
/// Jacobian (|r| × |x|) into *jac.
using ResidualFn = std::function<void(const std::vector<double>& x, std::vector<double>& r,
                                      std::vector<double>* jac)>;

/// Levenberg–Marquardt on ½‖r‖² with damping (JᵀJ + λI), λ ×10 on a
/// rejected step and ÷10 on an accepted one. Never throws on non-convergence;
/// the best point is returned with converged = false.
LmResult lm_minimize(const ResidualFn& f, std::vector<double> x0, const LmOptions& opts);

/// Jacobian by central differences, for cross-checking derivative code.
std::vector<double> central_difference_jacobian(const ResidualFn& f, const std::vector<double>& x,
                                                double h = 1e-7);

/// Wraps a residual written once over a generic scalar type T as a ResidualFn
/// whose Jacobian comes from Dual<M>. `g(const std::array<T, M>&)` must
/// return a container of T.
template <std::size_t M, class G>
ResidualFn autodiff_residual(G g) {
  return [g](const std::vector<double>& x, std::vector<double>& r, std::vector<double>* jac) {
    if (jac == nullptr) {
      std::array<double, M> xv{};
      for (std::size_t i = 0; i < M; ++i) xv[i] = x[i];
      const auto out = g(xv);
      r.assign(out.begin(), out.end());
      return;
    }
    std::array<Dual<M>, M> xd;
    for (std::size_t i = 0; i < M; ++i) xd[i] = Dual<M>::variable(x[i], i);
    const auto out = g(xd);
    r.resize(out.size());
    jac->assign(out.size() * M, 0.0);
    std::size_t row = 0;
    for (const auto& v : out) {
      r[row] = v.v;
      for (std::size_t j = 0; j < M; ++j) (*jac)[row * M + j] = v.d[j];
      ++row;
    }
  };
}

}  // namespace gulps
