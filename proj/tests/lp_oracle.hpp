#pragma once

#include <cmath>
#include <functional>
#include <limits>
#include <vector>

#include "gulps/lp.hpp"

namespace oracle {

using gulps::LpProblem;

// Brute-force vertex enumeration: solve every square subsystem by Gaussian
// elimination, keep feasible vertices. Problems are boxed so a nonempty
// feasible set always has one.
struct VertexOracle {
  bool feasible = false;
  double best = std::numeric_limits<double>::infinity();
};

inline bool solve_square(std::vector<std::vector<double>> m, std::vector<double> rhs, std::vector<double>& x) {
  const std::size_t n = rhs.size();
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t piv = c;
    for (std::size_t r = c + 1; r < n; ++r)
      if (std::abs(m[r][c]) > std::abs(m[piv][c])) piv = r;
    if (std::abs(m[piv][c]) < 1e-10) return false;
    std::swap(m[piv], m[c]);
    std::swap(rhs[piv], rhs[c]);
    for (std::size_t r = 0; r < n; ++r) {
      if (r == c) continue;
      const double f = m[r][c] / m[c][c];
      for (std::size_t k = c; k < n; ++k) m[r][k] -= f * m[c][k];
      rhs[r] -= f * rhs[c];
    }
  }
  x.resize(n);
  for (std::size_t i = 0; i < n; ++i) x[i] = rhs[i] / m[i][i];
  return true;
}

inline VertexOracle vertices(const LpProblem& p) {
  VertexOracle o;
  const int m = p.rows();
  const int n = p.vars;
  std::vector<int> pick(static_cast<std::size_t>(n));
  std::function<void(int, int)> rec = [&](int start, int depth) {
    if (depth == n) {
      std::vector<std::vector<double>> a;
      std::vector<double> b;
      for (int r : pick) {
        a.emplace_back(p.a.begin() + r * n, p.a.begin() + (r + 1) * n);
        b.push_back(p.b[static_cast<std::size_t>(r)]);
      }
      std::vector<double> x;
      if (!solve_square(a, b, x)) return;
      for (int r = 0; r < m; ++r)
        if (p.row_value(r, x) > p.b[static_cast<std::size_t>(r)] + 1e-9) return;
      o.feasible = true;
      double obj = 0.0;
      for (int j = 0; j < n; ++j) obj += (p.objective.empty() ? 0.0 : p.objective[static_cast<std::size_t>(j)]) * x[static_cast<std::size_t>(j)];
      o.best = std::min(o.best, obj);
      return;
    }
    for (int r = start; r < m; ++r) {
      pick[static_cast<std::size_t>(depth)] = r;
      rec(r + 1, depth + 1);
    }
  };
  rec(0, 0);
  return o;
}


}  // namespace oracle
