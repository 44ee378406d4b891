#pragma once

#include <limits>
#include <optional>
#include <utility>
#include <vector>

namespace gulps {

/// minimize objective·x subject to A x ≤ b and optional per-variable bounds.
struct LpProblem {
  int vars = 0;
  /// Row-major, rows × vars.
  std::vector<double> a;
  std::vector<double> b;
  /// Empty or all zero means pure feasibility.
  std::vector<double> objective;
  /// Empty means every variable is free; otherwise one [lo, hi] per variable
  /// (either end may be infinite).
  std::vector<std::pair<double, double>> var_bounds;

  explicit LpProblem(int num_vars = 0) : vars(num_vars) {}

  int rows() const { return static_cast<int>(b.size()); }
  void add_row(const std::vector<double>& coef, double rhs);
  double row_value(int r, const std::vector<double>& x) const;
};

enum class LpStatus { Feasible, Infeasible, Unbounded };

struct LpOutcome {
  LpStatus status = LpStatus::Infeasible;
  std::vector<double> x;
  /// max_r (A x − b)_r, clamped below at zero; zero when no x is returned.
  double max_violation = 0.0;
  /// Optimal Phase-I infeasibility (artificial variable level).
  double phase1_value = 0.0;
  /// Phase-I value fell in the grey band between the feasible and
  /// infeasible tolerances; the outcome is reported Feasible.
  bool degenerate = false;
  double objective_value = 0.0;
  int pivots = 0;
  /// Minimum slack b − A x (feasible_point only).
  double min_slack = 0.0;
};

/// Two-phase dense simplex with Bland's rule. Throws IterationLimit after
/// 50 × (rows + vars) pivots.
LpOutcome solve(const LpProblem& p);

/// A feasible point pushed away from the faces: maximizes the smallest
/// normalized slack, falling back to an average of extreme points when the
/// feasible set has no interior.
LpOutcome feasible_point(const LpProblem& p);

}  // namespace gulps
