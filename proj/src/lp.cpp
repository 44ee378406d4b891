#include "gulps/lp.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "gulps/constants.hpp"
#include "gulps/errors.hpp"

namespace gulps {

void LpProblem::add_row(const std::vector<double>& coef, double rhs) {
  if (static_cast<int>(coef.size()) != vars) throw InputError("LpProblem::add_row: coefficient count mismatch");
  a.insert(a.end(), coef.begin(), coef.end());
  b.push_back(rhs);
}

double LpProblem::row_value(int r, const std::vector<double>& x) const {
  double v = 0.0;
  for (int j = 0; j < vars; ++j) v += a[static_cast<std::size_t>(r * vars + j)] * x[static_cast<std::size_t>(j)];
  return v;
}

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Simplex dictionary: x_basic[i] = d(i, 0) + Σ_j d(i, j) x_nonbasic[j] for
// rows i ≥ 1, and the maximized objective z = d(0, 0) + Σ_j d(0, j) x_nonbasic[j].
class Dictionary {
 public:
  Dictionary(int rows, int cols) : m_(rows), n_(cols), d_(static_cast<std::size_t>((rows + 1) * (cols + 1)), 0.0) {}

  double& operator()(int i, int j) { return d_[static_cast<std::size_t>(i * (n_ + 1) + j)]; }
  double operator()(int i, int j) const { return d_[static_cast<std::size_t>(i * (n_ + 1) + j)]; }

  int rows() const { return m_; }
  int cols() const { return n_; }

  std::vector<int> basic;     // variable id per row (index 0 unused)
  std::vector<int> nonbasic;  // variable id per column (index 0 unused)

  void pivot(int r, int s) {
    const double a = (*this)(r, s);
    for (int j = 0; j <= n_; ++j) (*this)(r, j) = j == s ? 1.0 / a : -(*this)(r, j) / a;
    for (int i = 0; i <= m_; ++i) {
      if (i == r) continue;
      const double e = (*this)(i, s);
      if (e == 0.0) continue;
      for (int j = 0; j <= n_; ++j) (*this)(i, j) = j == s ? e * (*this)(r, s) : (*this)(i, j) + e * (*this)(r, j);
    }
    std::swap(basic[static_cast<std::size_t>(r)], nonbasic[static_cast<std::size_t>(s)]);
  }

  // Bland: lowest-id improving column.
  int entering() const {
    int best = -1;
    for (int j = 1; j <= n_; ++j)
      if ((*this)(0, j) > tol::lp_pivot && (best < 0 || nonbasic[static_cast<std::size_t>(j)] < nonbasic[static_cast<std::size_t>(best)]))
        best = j;
    return best;
  }

  // Minimum ratio, ties to the lowest basic id. −1 means unbounded.
  int leaving(int s) const {
    int best = -1;
    double best_ratio = kInf;
    for (int i = 1; i <= m_; ++i) {
      const double a = (*this)(i, s);
      if (a >= -tol::lp_pivot) continue;
      const double ratio = std::max((*this)(i, 0), 0.0) / -a;
      if (best < 0 || ratio < best_ratio - 1e-15) {
        best = i;
        best_ratio = ratio;
      } else if (ratio <= best_ratio + 1e-15 &&
                 basic[static_cast<std::size_t>(i)] < basic[static_cast<std::size_t>(best)]) {
        best = i;
      }
    }
    return best;
  }

 private:
  int m_;
  int n_;
  std::vector<double> d_;
};

// How an original variable is rebuilt from the nonnegative working ones.
struct VarMap {
  double offset = 0.0;
  std::vector<std::pair<int, double>> terms;  // (working index, sign)
};

struct StandardForm {
  int n = 0;  // working variables
  std::vector<std::vector<double>> a;
  std::vector<double> b;
  std::vector<VarMap> map;
};

StandardForm standardize(const LpProblem& p) {
  StandardForm s;
  const bool bounded = !p.var_bounds.empty();
  std::vector<std::pair<int, double>> upper_rows;  // (working index, width)
  for (int j = 0; j < p.vars; ++j) {
    VarMap vm;
    const double lo = bounded ? p.var_bounds[static_cast<std::size_t>(j)].first : -kInf;
    const double hi = bounded ? p.var_bounds[static_cast<std::size_t>(j)].second : kInf;
    if (std::isfinite(lo)) {
      vm.offset = lo;
      vm.terms.emplace_back(s.n, 1.0);
      if (std::isfinite(hi)) upper_rows.emplace_back(s.n, hi - lo);
      ++s.n;
    } else if (std::isfinite(hi)) {
      vm.offset = hi;
      vm.terms.emplace_back(s.n++, -1.0);
    } else {
      vm.terms.emplace_back(s.n++, 1.0);
      vm.terms.emplace_back(s.n++, -1.0);
    }
    s.map.push_back(vm);
  }
  for (int r = 0; r < p.rows(); ++r) {
    std::vector<double> row(static_cast<std::size_t>(s.n), 0.0);
    double rhs = p.b[static_cast<std::size_t>(r)];
    for (int j = 0; j < p.vars; ++j) {
      const double c = p.a[static_cast<std::size_t>(r * p.vars + j)];
      if (c == 0.0) continue;
      const VarMap& vm = s.map[static_cast<std::size_t>(j)];
      rhs -= c * vm.offset;
      for (const auto& [w, sign] : vm.terms) row[static_cast<std::size_t>(w)] += c * sign;
    }
    s.a.push_back(std::move(row));
    s.b.push_back(rhs);
  }
  for (const auto& [w, width] : upper_rows) {
    std::vector<double> row(static_cast<std::size_t>(s.n), 0.0);
    row[static_cast<std::size_t>(w)] = 1.0;
    s.a.push_back(std::move(row));
    s.b.push_back(width);
  }
  return s;
}

std::vector<double> recover(const StandardForm& s, const std::vector<double>& y) {
  std::vector<double> x;
  for (const VarMap& vm : s.map) {
    double v = vm.offset;
    for (const auto& [w, sign] : vm.terms) v += sign * y[static_cast<std::size_t>(w)];
    x.push_back(v);
  }
  return x;
}

double violation(const LpProblem& p, const std::vector<double>& x) {
  double worst = 0.0;
  for (int r = 0; r < p.rows(); ++r) worst = std::max(worst, p.row_value(r, x) - p.b[static_cast<std::size_t>(r)]);
  if (!p.var_bounds.empty())
    for (int j = 0; j < p.vars; ++j) {
      worst = std::max(worst, p.var_bounds[static_cast<std::size_t>(j)].first - x[static_cast<std::size_t>(j)]);
      worst = std::max(worst, x[static_cast<std::size_t>(j)] - p.var_bounds[static_cast<std::size_t>(j)].second);
    }
  return worst;
}

class Simplex {
 public:
  explicit Simplex(int limit) : limit_(limit) {}

  // Runs to optimality on the current objective row. Returns false if unbounded.
  bool optimize(Dictionary& d) {
    for (;;) {
      const int e = d.entering();
      if (e < 0) return true;
      const int l = d.leaving(e);
      if (l < 0) return false;
      step(d, l, e);
    }
  }

  void step(Dictionary& d, int r, int c) {
    if (++pivots_ > limit_)
      throw IterationLimit("simplex: exceeded " + std::to_string(limit_) + " pivots");
    d.pivot(r, c);
  }

  int pivots() const { return pivots_; }

 private:
  int limit_;
  int pivots_ = 0;
};

}  // namespace

LpOutcome solve(const LpProblem& p) {
  LpOutcome out;
  const StandardForm s = standardize(p);
  const int m = static_cast<int>(s.b.size());
  const int n = s.n;
  const int limit = 50 * (p.rows() + p.vars + 1);
  const bool has_objective =
      std::any_of(p.objective.begin(), p.objective.end(), [](double c) { return c != 0.0; });

  // Working ids: 0..n−1 structural, n..n+m−1 slacks, n+m the artificial.
  const int artificial = n + m;
  Dictionary d(m, n + 1);
  d.basic.assign(static_cast<std::size_t>(m + 1), -1);
  d.nonbasic.assign(static_cast<std::size_t>(n + 2), -1);
  for (int j = 1; j <= n; ++j) d.nonbasic[static_cast<std::size_t>(j)] = j - 1;
  d.nonbasic[static_cast<std::size_t>(n + 1)] = artificial;
  int most_negative = -1;
  for (int i = 1; i <= m; ++i) {
    d.basic[static_cast<std::size_t>(i)] = n + i - 1;
    d(i, 0) = s.b[static_cast<std::size_t>(i - 1)];
    for (int j = 1; j <= n; ++j) d(i, j) = -s.a[static_cast<std::size_t>(i - 1)][static_cast<std::size_t>(j - 1)];
    d(i, n + 1) = 1.0;
    if (d(i, 0) < 0.0 && (most_negative < 0 || d(i, 0) < d(most_negative, 0))) most_negative = i;
  }

  Simplex simplex(limit);
  // Phase I: maximize −x0.
  d(0, n + 1) = -1.0;
  if (most_negative > 0) {
    simplex.step(d, most_negative, n + 1);
    simplex.optimize(d);
  }
  out.phase1_value = std::max(0.0, -d(0, 0));
  if (out.phase1_value > tol::lp_infeasible) {
    out.status = LpStatus::Infeasible;
    out.pivots = simplex.pivots();
    return out;
  }
  out.degenerate = out.phase1_value > tol::verification;

  // Drive the artificial out of the basis, then delete its column.
  for (int i = 1; i <= m; ++i) {
    if (d.basic[static_cast<std::size_t>(i)] != artificial) continue;
    int col = -1;
    double best = 0.0;
    for (int j = 1; j <= n + 1; ++j)
      if (std::abs(d(i, j)) > best) {
        best = std::abs(d(i, j));
        col = j;
      }
    simplex.step(d, i, col);
  }
  int art_col = 0;
  for (int j = 1; j <= n + 1; ++j)
    if (d.nonbasic[static_cast<std::size_t>(j)] == artificial) art_col = j;
  for (int i = 0; i <= m; ++i) d(i, art_col) = 0.0;

  // Phase II objective: maximize −c·x, written over the current nonbasics.
  for (int j = 0; j <= n + 1; ++j) d(0, j) = 0.0;
  if (has_objective) {
    std::vector<double> cw(static_cast<std::size_t>(n), 0.0);
    double constant = 0.0;
    for (int j = 0; j < p.vars; ++j) {
      const double c = p.objective[static_cast<std::size_t>(j)];
      const VarMap& vm = s.map[static_cast<std::size_t>(j)];
      constant -= c * vm.offset;
      for (const auto& [w, sign] : vm.terms) cw[static_cast<std::size_t>(w)] -= c * sign;
    }
    d(0, 0) = constant;
    for (int j = 1; j <= n + 1; ++j) {
      const int id = d.nonbasic[static_cast<std::size_t>(j)];
      if (id >= 0 && id < n) d(0, j) += cw[static_cast<std::size_t>(id)];
    }
    for (int i = 1; i <= m; ++i) {
      const int id = d.basic[static_cast<std::size_t>(i)];
      if (id < 0 || id >= n || cw[static_cast<std::size_t>(id)] == 0.0) continue;
      for (int j = 0; j <= n + 1; ++j)
        if (j != art_col) d(0, j) += cw[static_cast<std::size_t>(id)] * d(i, j);
    }
    if (!simplex.optimize(d)) {
      out.status = LpStatus::Unbounded;
      out.pivots = simplex.pivots();
      return out;
    }
  }

  std::vector<double> y(static_cast<std::size_t>(n), 0.0);
  for (int i = 1; i <= m; ++i) {
    const int id = d.basic[static_cast<std::size_t>(i)];
    if (id >= 0 && id < n) y[static_cast<std::size_t>(id)] = std::max(d(i, 0), 0.0);
  }
  out.status = LpStatus::Feasible;
  out.x = recover(s, y);
  out.max_violation = violation(p, out.x);
  out.pivots = simplex.pivots();
  if (has_objective)
    for (int j = 0; j < p.vars; ++j) out.objective_value += p.objective[static_cast<std::size_t>(j)] * out.x[static_cast<std::size_t>(j)];
  return out;
}

LpOutcome feasible_point(const LpProblem& p) {
  LpProblem base = p;
  base.objective.clear();
  LpOutcome first = solve(base);
  if (first.status != LpStatus::Feasible || p.vars == 0) return first;

  // maximize t subject to a_i·x + ‖a_i‖ t ≤ b_i (bounds included as rows)
  LpProblem aug(p.vars + 1);
  auto push = [&](std::vector<double> coef, double rhs) {
    double norm = 0.0;
    for (double c : coef) norm += c * c;
    norm = std::sqrt(norm);
    if (norm == 0.0) return;
    coef.push_back(norm);
    aug.add_row(coef, rhs);
  };
  for (int r = 0; r < p.rows(); ++r)
    push(std::vector<double>(p.a.begin() + r * p.vars, p.a.begin() + (r + 1) * p.vars), p.b[static_cast<std::size_t>(r)]);
  if (!p.var_bounds.empty())
    for (int j = 0; j < p.vars; ++j) {
      const auto [lo, hi] = p.var_bounds[static_cast<std::size_t>(j)];
      std::vector<double> e(static_cast<std::size_t>(p.vars), 0.0);
      if (std::isfinite(hi)) {
        e[static_cast<std::size_t>(j)] = 1.0;
        push(e, hi);
      }
      if (std::isfinite(lo)) {
        e[static_cast<std::size_t>(j)] = -1.0;
        push(e, -lo);
      }
    }
  aug.var_bounds = p.var_bounds;
  if (aug.var_bounds.empty()) aug.var_bounds.assign(static_cast<std::size_t>(p.vars), {-kInf, kInf});
  aug.var_bounds.emplace_back(-1.0, 1.0);
  aug.objective.assign(static_cast<std::size_t>(p.vars + 1), 0.0);
  aug.objective.back() = -1.0;

  LpOutcome centered = solve(aug);
  if (centered.status == LpStatus::Feasible && centered.x.back() > tol::verification) {
    LpOutcome out = first;
    out.x.assign(centered.x.begin(), centered.x.end() - 1);
    out.max_violation = violation(p, out.x);
    out.min_slack = centered.x.back();
    out.pivots += centered.pivots;
    return out;
  }

  // No interior: average the extreme points in ± each coordinate direction.
  std::vector<double> mean(static_cast<std::size_t>(p.vars), 0.0);
  int count = 0;
  int pivots = first.pivots;
  for (int j = 0; j < p.vars; ++j)
    for (double sign : {1.0, -1.0}) {
      LpProblem q = base;
      q.objective.assign(static_cast<std::size_t>(p.vars), 0.0);
      q.objective[static_cast<std::size_t>(j)] = sign;
      const LpOutcome o = solve(q);
      pivots += o.pivots;
      if (o.status != LpStatus::Feasible) continue;
      for (int k = 0; k < p.vars; ++k) mean[static_cast<std::size_t>(k)] += o.x[static_cast<std::size_t>(k)];
      ++count;
    }
  LpOutcome out = first;
  if (count > 0) {
    for (double& v : mean) v /= count;
    out.x = mean;
  }
  out.max_violation = violation(p, out.x);
  out.min_slack = 0.0;
  out.pivots = pivots;
  return out;
}

}  // namespace gulps
