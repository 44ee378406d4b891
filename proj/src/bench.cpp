#include "gulps/bench.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numbers>
#include <ostream>

#include "gulps/errors.hpp"
#include "makhlin_residual.hpp"

namespace gulps {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

template <std::size_t M>
struct MonolithicModel {
  Mat4 gate;
  Mat4 b;
  Mat4 b_dag;
  Complex inv16;
  Complex inv4;
  MakhlinInv target;

  template <class T>
  std::array<T, 3> operator()(const std::array<T, M>& p) const {
    CxMat<T, 4> y;
    for (std::size_t i = 0; i < 16; ++i) y[i] = Cx<T>(gate(i / 4, i % 4));
    for (std::size_t l = 0; l < M / 6; ++l) {
      const std::size_t o = 6 * l;
      const CxMat<T, 4> k =
          cx_kron<T>(rv_gate_t<T>(p[o], p[o + 1], p[o + 2]), rv_gate_t<T>(p[o + 3], p[o + 4], p[o + 5]));
      y = cx_mul<T>(gate, cx_mul<T>(k, y));
    }
    const CxMat<T, 4> xb = cx_mul<T>(cx_mul<T>(b_dag, y), b);
    return detail::makhlin_residual(xb, inv16, inv4, target);
  }
};

template <std::size_t M>
ResidualFn make_monolithic(const Mat4& gate, int depth, const CanonicalCoord& target) {
  Complex det = 1.0;
  const Complex dg = determinant(gate);
  for (int i = 0; i < depth; ++i) det *= dg;
  MonolithicModel<M> m{gate, magic_basis(), magic_basis().adjoint(), 1.0 / (16.0 * det), 1.0 / (4.0 * det),
                       makhlin_of_coords(target.raw())};
  return autodiff_residual<M>(m);
}

}  // namespace

CanonicalCoord polytope_apex(const Isa& isa, const Sentence& s, ApexRule rule) {
  const int n = static_cast<int>(s.length());
  if (n < 1) throw InputError("polytope_apex: empty sentence");
  if (n == 1) return isa[s.gates[0]].coords;
  auto spec = [&](int i) { return coords_to_logspec(isa[s.gates[static_cast<std::size_t>(i - 1)]].coords); };
  // variables: C2..Cn, three each
  const int nvars = 3 * (n - 1);
  LpProblem p(nvars);
  auto offset = [](int i) { return 3 * (i - 2); };
  for (int i = 2; i <= n; ++i) {
    const std::optional<LogSpec> before = i == 2 ? std::optional<LogSpec>(spec(1)) : std::nullopt;
    const FreeDomain domain = rule == ApexRule::MaxCoordSum && i == n ? FreeDomain::Chamber : FreeDomain::Alcove;
    const SegmentConstraints seg = instantiate_segment(before, spec(i), std::nullopt, domain);
    auto place = [&](const AffineRow& row) {
      std::vector<double> coef(static_cast<std::size_t>(nvars), 0.0);
      int local = 0;
      if (seg.before_free) {
        for (int k = 0; k < 3; ++k) coef[static_cast<std::size_t>(offset(i - 1) + k)] -= row.coef[static_cast<std::size_t>(k)];
        local = 3;
      }
      for (int k = 0; k < 3; ++k) coef[static_cast<std::size_t>(offset(i) + k)] -= row.coef[static_cast<std::size_t>(local + k)];
      p.add_row(coef, row.constant);
    };
    for (const AffineRow& row : seg.qlr_rows) place(row);
    // the "after" triple's domain rows are the last four
    for (std::size_t r = seg.domain_rows.size() - 4; r < seg.domain_rows.size(); ++r) place(seg.domain_rows[r]);
  }
  p.var_bounds.assign(static_cast<std::size_t>(nvars), {-0.5, 0.5});
  const std::size_t last = static_cast<std::size_t>(offset(n));
  LpOutcome o;
  if (rule == ApexRule::MaxMinSlack) {
    o = feasible_point(p);
  } else {
    p.objective.assign(static_cast<std::size_t>(nvars), 0.0);
    for (std::size_t k = 0; k < 3; ++k) p.objective[last + k] = -1.0;
    o = solve(p);
  }
  if (o.status != LpStatus::Feasible) throw NumericalDegeneracy("polytope_apex: depth LP infeasible");
  return weyl_canonicalize(RawCoord{o.x[last], o.x[last + 1], o.x[last + 2]});
}

ResidualFn monolithic_residual(const Mat4& gate, int depth, const CanonicalCoord& target) {
  switch (depth) {
    case 2: return make_monolithic<6>(gate, depth, target);
    case 3: return make_monolithic<12>(gate, depth, target);
    case 4: return make_monolithic<18>(gate, depth, target);
    case 5: return make_monolithic<24>(gate, depth, target);
    case 6: return make_monolithic<30>(gate, depth, target);
    default: throw InputError("monolithic synthesis supports depths 2..6");
  }
}

ConvergenceRow convergence_at_depth(const GateDef& gate, int depth, const ConvergenceOptions& opts) {
  const auto t0 = std::chrono::steady_clock::now();
  Isa single({gate});
  Sentence s;
  s.gates.assign(static_cast<std::size_t>(depth), 0);
  s.total_cost = depth * gate.cost;

  ConvergenceRow row;
  row.depth = depth;
  row.target = polytope_apex(single, s, opts.apex);
  row.trials = opts.trials;
  const ResidualFn f = monolithic_residual(gate.matrix, depth, row.target);
  LmOptions lo;
  lo.tol = opts.tol;
  lo.max_iter = opts.max_iter;
  const std::size_t params = static_cast<std::size_t>(6 * (depth - 1));
  for (int t = 0; t < opts.trials; ++t) {
    Rng rng(mix_seed(opts.seed, static_cast<std::uint64_t>(depth) * 100003u + static_cast<std::uint64_t>(t)));
    for (int r = 0; r < opts.restarts; ++r) {
      std::vector<double> x0(params);
      for (double& x : x0) x = rng.uniform(-kTwoPi, kTwoPi);
      ++row.restarts_run;
      if (lm_minimize(f, x0, lo).converged) {
        ++row.restarts_converged;
        ++row.converged_trials;
        break;
      }
    }
  }
  row.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  return row;
}

SentenceTimeRow sentence_time(const Isa& isa, std::uint64_t seed, const SynthOptions& opts) {
  const CanonicalCoord c = canonical_coords(haar_random_su4(seed));
  SentenceTimeRow row;
  row.seed = seed;
  const SearchResult r = search_sentence(c, isa, opts);
  row.sentence = r.sentence.label(isa);
  row.length = r.sentence.length();
  row.cost = r.sentence.total_cost;
  row.search_ms = r.search_ms;
  row.rejected = r.rejected;
  return row;
}

double median(std::vector<double> values) {
  if (values.empty()) return 0.0;
  const std::size_t mid = values.size() / 2;
  std::nth_element(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(mid), values.end());
  double m = values[mid];
  if (values.size() % 2 == 0) m = 0.5 * (m + *std::max_element(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(mid)));
  return m;
}

void write_histogram_csv(std::ostream& os, const std::vector<double>& values, int bins) {
  if (bins < 1) throw InputError("histogram needs at least one bin");
  os << "bin_lo,bin_hi,count\n";
  if (values.empty()) return;
  const auto [lo_it, hi_it] = std::minmax_element(values.begin(), values.end());
  const double lo = *lo_it;
  const double hi = *hi_it > lo ? *hi_it : lo + 1.0;
  const double width = (hi - lo) / bins;
  std::vector<long> counts(static_cast<std::size_t>(bins), 0);
  for (double v : values) {
    auto b = static_cast<long>((v - lo) / width);
    counts[static_cast<std::size_t>(std::clamp(b, 0L, static_cast<long>(bins - 1)))]++;
  }
  for (int i = 0; i < bins; ++i)
    os << lo + i * width << ',' << lo + (i + 1) * width << ',' << counts[static_cast<std::size_t>(i)] << '\n';
}

}  // namespace gulps
