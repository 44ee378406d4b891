#include "gulps/synth.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <future>
#include <iostream>
#include <numbers>
#include <sstream>

#include "gulps/constants.hpp"
#include "gulps/errors.hpp"
#include "makhlin_residual.hpp"

namespace gulps {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * std::numbers::pi;

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

// splitmix64 finalizer; turns (seed, stream) into independent engine seeds.
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

LocalPair operator*(const LocalPair& a, const LocalPair& b) {
  return {a.left * b.left, a.right * b.right};
}

LocalPair adjoint(const LocalPair& a) { return {a.left.adjoint(), a.right.adjoint()}; }

double coord_sum(const RawCoord& c) { return c.c1 + c.c2 + c.c3; }

// Append the ≥-form rows of one segment to an Ax ≤ b problem, placing the
// segment's local variables at the given global offsets.
void append_rows(LpProblem& p, const std::vector<AffineRow>& rows, int before_offset, int after_offset,
                 const SegmentConstraints& seg) {
  for (const AffineRow& row : rows) {
    std::vector<double> coef(static_cast<std::size_t>(p.vars), 0.0);
    int local = 0;
    if (seg.before_free) {
      for (int k = 0; k < 3; ++k) coef[static_cast<std::size_t>(before_offset + k)] -= row.coef[static_cast<std::size_t>(local + k)];
      local += 3;
    }
    if (seg.after_free)
      for (int k = 0; k < 3; ++k) coef[static_cast<std::size_t>(after_offset + k)] -= row.coef[static_cast<std::size_t>(local + k)];
    p.add_row(coef, row.constant);
  }
}

// The residual written once over double and Dual<6>.
struct SegmentModel {
  Mat4 gb;  // B† G
  Mat4 cb;  // CAN(c_prev) B
  Complex inv16;
  Complex inv4;
  MakhlinInv target;

  SegmentModel(const Mat4& gate, const RawCoord& c_prev, const RawCoord& c_next) {
    const Mat4& b = magic_basis();
    gb = b.adjoint() * gate;
    cb = can_gate(c_prev) * b;
    const Complex det = determinant(gate);
    inv16 = 1.0 / (16.0 * det);
    inv4 = 1.0 / (4.0 * det);
    target = makhlin_of_coords(c_next);
  }

  template <class T>
  std::array<T, 3> operator()(const std::array<T, 6>& v) const {
    const CxMat<T, 2> r1 = rv_gate_t<T>(v[0], v[1], v[2]);
    const CxMat<T, 2> r2 = rv_gate_t<T>(v[3], v[4], v[5]);
    const CxMat<T, 4> xb = cx_mul<T>(cx_mul<T>(gb, cx_kron<T>(r1, r2)), cb);
    return detail::makhlin_residual(xb, inv16, inv4, target);
  }
};

SegmentSolution finish_segment(const LmResult& r, const Mat4& gate, const RawCoord& c_prev, int restarts,
                               int iterations) {
  SegmentSolution s;
  for (int k = 0; k < 3; ++k) {
    s.v1[static_cast<std::size_t>(k)] = r.x[static_cast<std::size_t>(k)];
    s.v2[static_cast<std::size_t>(k)] = r.x[static_cast<std::size_t>(3 + k)];
  }
  s.residual_norm = r.residual_inf;
  s.restarts_used = restarts;
  s.iterations = iterations;
  s.exterior = kak(segment_matrix(gate, c_prev, s.v1, s.v2));
  return s;
}

// Exact-match model: X(v) = e^{iφ} (A R(a) ⊗ B R(b)) CAN(c_next) (R(c) C ⊗ R(d) D)
// over 19 parameters, with A, B, C, D, φ0 frozen at a KAK of the start point.
// Unlike the Makhlin map it has no fold at degenerate classes (iSWAP, SWAP,
// faces of the chamber), where a 1e-8 invariant residual still leaves the
// class ~1e-5 away.
struct MatchModel {
  Mat4 gate;
  Mat4 can_prev;
  Mat4 outer_left;  // A ⊗ B
  Mat4 can_next;
  Mat4 outer_right;  // C ⊗ D
  double phase0 = 0.0;

  template <class T>
  std::array<T, 32> operator()(const std::array<T, 19>& p) const {
    const CxMat<T, 4> x =
        cx_mul<T>(cx_mul<T>(gate, cx_kron<T>(rv_gate_t<T>(p[0], p[1], p[2]), rv_gate_t<T>(p[3], p[4], p[5]))),
                  can_prev);
    const CxMat<T, 4> inner_left = cx_kron<T>(rv_gate_t<T>(p[6], p[7], p[8]), rv_gate_t<T>(p[9], p[10], p[11]));
    const CxMat<T, 4> inner_right =
        cx_kron<T>(rv_gate_t<T>(p[12], p[13], p[14]), rv_gate_t<T>(p[15], p[16], p[17]));
    const CxMat<T, 4> y = cx_mul<T>(
        cx_mul<T>(cx_mul<T>(cx_mul<T>(outer_left, inner_left), can_next), inner_right), outer_right);
    using std::cos;
    using std::sin;
    const T phi = p[18] + phase0;
    const Cx<T> ph{cos(phi), sin(phi)};
    std::array<T, 32> r;
    for (std::size_t i = 0; i < 16; ++i) {
      const Cx<T> d = x[i] - ph * y[i];
      r[2 * i] = d.re;
      r[2 * i + 1] = d.im;
    }
    return r;
  }
};

double class_gap(const Mat4& x, const RawCoord& c_next) {
  return chamber_distance(canonical_coords(x), weyl_canonicalize(c_next));
}

// Converged LM points sit where Makhlin residuals are ~1e-8; squeeze the
// invariants further, then close any remaining class gap with the
// exact-match model.
LmResult polish(const ResidualFn& f, const LmResult& r, const Mat4& gate, const RawCoord& c_prev,
                const RawCoord& c_next, const SynthOptions& opts) {
  LmOptions po;
  po.tol = opts.polish_tol;
  po.max_iter = opts.polish_iter;
  LmResult best = lm_minimize(f, r.x, po);
  if (best.residual_inf > r.residual_inf) best = r;

  auto v_of = [](const std::vector<double>& x, std::size_t o) { return std::array<double, 3>{x[o], x[o + 1], x[o + 2]}; };
  const Mat4 x0 = segment_matrix(gate, c_prev, v_of(best.x, 0), v_of(best.x, 3));
  const double gap0 = class_gap(x0, c_next);
  if (gap0 <= tol::construction) return best;

  const KakRaw k = kak_toward(x0, c_next);
  MatchModel m{gate, can_gate(c_prev), k.after.matrix(), can_gate(c_next), k.before.matrix(), k.global_phase};
  std::vector<double> p(19, 0.0);
  std::copy(best.x.begin(), best.x.end(), p.begin());
  LmOptions mo;
  mo.tol = 1e-14;
  mo.max_iter = opts.polish_iter;
  const LmResult fit = lm_minimize(autodiff_residual<19>(m), p, mo);

  std::vector<double> v(fit.x.begin(), fit.x.begin() + 6);
  const Mat4 x1 = segment_matrix(gate, c_prev, v_of(v, 0), v_of(v, 3));
  if (!(class_gap(x1, c_next) < gap0)) return best;
  LmResult out = best;
  out.x = v;
  f(v, out.residual, nullptr);
  out.residual_inf = 0.0;
  for (double e : out.residual) out.residual_inf = std::max(out.residual_inf, std::abs(e));
  out.converged = out.residual_inf <= opts.tol;
  out.iterations += fit.iterations;
  return out.converged ? out : best;
}

}  // namespace

// ---------------------------------------------------------------- ISA

Isa::Isa(std::vector<GateDef> gates) : gates_(std::move(gates)) {
  if (gates_.empty()) throw InputError("ISA must contain at least one gate");
  std::sort(gates_.begin(), gates_.end(), [](const GateDef& a, const GateDef& b) { return a.id < b.id; });
  for (std::size_t i = 0; i < gates_.size(); ++i) {
    if (!(gates_[i].cost > 0.0) || !std::isfinite(gates_[i].cost))
      throw InputError("ISA gate '" + gates_[i].id + "' must have a positive finite cost");
    if (i > 0 && gates_[i].id == gates_[i - 1].id) throw InputError("duplicate ISA gate id '" + gates_[i].id + "'");
  }
}

std::size_t Isa::index_of(const std::string& id) const {
  for (std::size_t i = 0; i < gates_.size(); ++i)
    if (gates_[i].id == id) return i;
  throw InputError("unknown gate id '" + id + "'");
}

std::vector<std::string> Sentence::ids(const Isa& isa) const {
  std::vector<std::string> out;
  for (std::size_t g : gates) out.push_back(isa[g].id);
  return out;
}

std::string Sentence::label(const Isa& isa) const {
  std::string s = "{";
  for (std::size_t i = 0; i < gates.size(); ++i) {
    if (i) s += ',';
    s += isa[gates[i]].id;
  }
  return s + "}";
}

// ---------------------------------------------------------------- sentences

bool SentenceEnumerator::Later::operator()(const Node& a, const Node& b) const {
  if (a.cost_key != b.cost_key) return a.cost_key > b.cost_key;
  if (a.sentence.length() != b.sentence.length()) return a.sentence.length() > b.sentence.length();
  return a.sentence.gates > b.sentence.gates;
}

SentenceEnumerator::SentenceEnumerator(const Isa& isa) : isa_(isa) {
  for (std::size_t g = 0; g < isa.size(); ++g) {
    Sentence s{{g}, isa[g].cost};
    visited_.insert(s.gates);
    frontier_.push({std::llround(s.total_cost * 1e9), s});
  }
}

Sentence SentenceEnumerator::next() {
  Node top = frontier_.top();
  frontier_.pop();
  // children append a gate no smaller than the last, so each multiset has
  // exactly one canonical spelling
  for (std::size_t g = top.sentence.gates.back(); g < isa_.size(); ++g) {
    Sentence child = top.sentence;
    child.gates.push_back(g);
    child.total_cost += isa_[g].cost;
    if (visited_.insert(child.gates).second) frontier_.push({std::llround(child.total_cost * 1e9), child});
  }
  return top.sentence;
}

std::vector<Sentence> enumerate_sentences(const Isa& isa, std::size_t count) {
  SentenceEnumerator e(isa);
  std::vector<Sentence> out;
  for (std::size_t i = 0; i < count; ++i) out.push_back(e.next());
  return out;
}

// ---------------------------------------------------------------- trajectory LP

TrajectoryLp build_trajectory_lp(const Isa& isa, const Sentence& s, const RawCoord& target_lift) {
  const int n = static_cast<int>(s.length());
  if (n < 1) throw InputError("build_trajectory_lp: empty sentence");
  const LogSpec target = coords_to_logspec(target_lift);
  auto spec = [&](int i) { return coords_to_logspec(isa[s.gates[static_cast<std::size_t>(i - 1)]].coords); };

  TrajectoryLp out;
  if (n == 1) {
    // coords(G1) = target as paired inequalities on a zero-variable problem
    const CanonicalCoord g = isa[s.gates[0]].coords;
    out.problem = LpProblem(0);
    const double gap = chamber_distance(g, weyl_canonicalize(target_lift));
    out.problem.add_row({}, tol::verification - gap - tol::row_slack);
    return out;
  }
  const int nvars = 3 * (n - 2);
  out.problem = LpProblem(nvars);
  auto offset = [](int i) { return 3 * (i - 2); };  // variable block of C_i, 2 ≤ i ≤ n−1

  for (int i = 2; i <= n; ++i) {
    const std::optional<LogSpec> before = i == 2 ? std::optional<LogSpec>(spec(1)) : std::nullopt;
    const std::optional<LogSpec> after = i == n ? std::optional<LogSpec>(target) : std::nullopt;
    const SegmentConstraints seg = instantiate_segment(before, spec(i), after, FreeDomain::Alcove);
    const int bo = i == 2 ? 0 : offset(i - 1);
    const int ao = i == n ? 0 : offset(i);
    append_rows(out.problem, seg.qlr_rows, bo, ao, seg);
    out.qlr_rows += seg.qlr_rows.size();
    // domain rows once per variable triple: attach them to the segment that
    // introduces C_i as its "after" slot
    if (seg.after_free) {
      SegmentConstraints only_after = seg;
      only_after.before_free = false;
      std::vector<AffineRow> rows = domain_rows(FreeDomain::Alcove, 3, 0);
      append_rows(out.problem, rows, 0, ao, only_after);
      out.domain_rows += rows.size();
    }
  }
  out.problem.var_bounds.assign(static_cast<std::size_t>(nvars), {-0.5, 0.5});
  return out;
}

std::optional<Trajectory> find_trajectory(const Isa& isa, const Sentence& s, const CanonicalCoord& target) {
  const int n = static_cast<int>(s.length());
  double budget = 0.0;  // Σ (c1+c2+c3) over the gates
  for (std::size_t g : s.gates) budget += coord_sum(isa[g].coords.raw());

  for (const bool reflected : {false, true}) {
    const RawCoord lift = reflected ? rho_reflect(target) : target.raw();
    if (n == 1 && reflected) break;
    // Chaining the degree-0 row on the smallest spectrum entry gives
    // c1+c2+c3 (target lift) ≤ Σ (c1+c2+c3) (gates); cheap necessary test.
    if (n >= 2 && coord_sum(lift) > budget + tol::row_slack) continue;

    const TrajectoryLp lp = build_trajectory_lp(isa, s, lift);
    std::vector<RawCoord> lifts{{0, 0, 0}, isa[s.gates[0]].coords.raw()};
    if (lp.problem.vars == 0) {
      const double worst = lp.problem.b.empty() ? 0.0 : *std::min_element(lp.problem.b.begin(), lp.problem.b.end());
      if (worst < -tol::row_slack) continue;
    } else {
      const LpOutcome o = feasible_point(lp.problem);
      if (o.status != LpStatus::Feasible) continue;
      if (o.degenerate)
        std::clog << "gulps: degenerate LP phase-I value " << o.phase1_value << " for " << s.label(isa) << '\n';
      for (int i = 2; i <= n - 1; ++i) {
        const std::size_t o3 = static_cast<std::size_t>(3 * (i - 2));
        lifts.push_back({o.x[o3], o.x[o3 + 1], o.x[o3 + 2]});
      }
    }
    if (n >= 2) lifts.push_back(lift);
    Trajectory t;
    t.reflected = reflected;
    t.lifts = lifts;
    for (std::size_t i = 0; i < lifts.size(); ++i)
      t.points.push_back(i + 1 == lifts.size() ? target : weyl_canonicalize(lifts[i]));
    return t;
  }
  return std::nullopt;
}

// ---------------------------------------------------------------- segments

Mat4 segment_matrix(const Mat4& gate, const RawCoord& c_prev, const std::array<double, 3>& v1,
                    const std::array<double, 3>& v2) {
  return gate * kron(rv_gate(v1), rv_gate(v2)) * can_gate(c_prev);
}

ResidualFn segment_residual(const Mat4& gate, const RawCoord& c_prev, const RawCoord& c_next) {
  return autodiff_residual<6>(SegmentModel(gate, c_prev, c_next));
}

SegmentSolution solve_segment(const RawCoord& c_prev, const GateDef& g, const RawCoord& c_next,
                              const SynthOptions& opts, std::uint64_t stream) {
  const ResidualFn f = segment_residual(g.matrix, c_prev, c_next);
  Rng rng(mix_seed(opts.seed, stream));
  LmOptions lo;
  lo.tol = opts.tol;
  lo.max_iter = opts.max_iter;
  double best = std::numeric_limits<double>::infinity();
  int iterations = 0;
  for (int r = 0; r < opts.restarts; ++r) {
    std::vector<double> x0(6);
    for (double& x : x0) x = rng.uniform(-kTwoPi, kTwoPi);
    const LmResult res = lm_minimize(f, x0, lo);
    iterations += res.iterations;
    best = std::min(best, res.residual_inf);
    if (res.converged) {
      const LmResult p = polish(f, res, g.matrix, c_prev, c_next, opts);
      return finish_segment(p, g.matrix, c_prev, r + 1, iterations + p.iterations);
    }
  }
  std::ostringstream msg;
  msg << "segment with gate '" << g.id << "' did not converge in " << opts.restarts << " restarts (best residual "
      << best << ")";
  throw SegmentNoConvergence(msg.str(), best);
}

// ---------------------------------------------------------------- assembly

Mat4 multiply_out(const Decomposition& d, const Isa& isa) {
  Mat4 m = d.local_layers.front().matrix();
  for (std::size_t i = 0; i < d.sentence.length(); ++i) {
    m = isa[d.sentence.gates[i]].matrix * m;
    m = d.local_layers[i + 1].matrix() * m;
  }
  return std::polar(1.0, d.global_phase) * m;
}

namespace {

struct Chain {
  std::vector<LocalPair> interior;  // L_1 … L_{n−1}
  Mat4 product;                     // G_n L_{n−1} ⋯ G_1
};

// Walks the sentence, re-expressing each partial product in KAK form so the
// next segment's ansatz can be attached to its CAN core. When `resolve` is
// set, each segment is re-solved from the realized class (warm started from
// the stored solution) instead of trusting the LP coordinate.
Chain build_chain(const Isa& isa, const Sentence& s, const Trajectory& t, std::vector<SegmentSolution>& segs,
                  const SynthOptions* resolve) {
  Chain c;
  const std::size_t n = s.length();
  c.product = isa[s.gates[0]].matrix;
  for (std::size_t i = 2; i <= n; ++i) {
    const KakRaw e = kak_toward(c.product, t.lifts[i - 1]);
    SegmentSolution& seg = segs[i - 2];
    const GateDef& g = isa[s.gates[i - 1]];
    if (resolve != nullptr) {
      const ResidualFn f = segment_residual(g.matrix, e.coord, t.lifts[i]);
      std::vector<double> x0{seg.v1[0], seg.v1[1], seg.v1[2], seg.v2[0], seg.v2[1], seg.v2[2]};
      LmOptions lo;
      lo.tol = resolve->tol;
      lo.max_iter = resolve->max_iter;
      LmResult r = lm_minimize(f, x0, lo);
      if (!r.converged) {
        SynthOptions o = *resolve;
        seg = solve_segment(e.coord, g, t.lifts[i], o, 1000 + i);
      } else {
        seg = finish_segment(polish(f, r, g.matrix, e.coord, t.lifts[i], *resolve), g.matrix, e.coord, 1,
                             r.iterations);
      }
    }
    const LocalPair rv{rv_gate(seg.v1), rv_gate(seg.v2)};
    const LocalPair layer = rv * adjoint(e.after);
    c.interior.push_back(layer);
    c.product = g.matrix * layer.matrix() * c.product;
  }
  return c;
}

Decomposition finish_assembly(const Isa& isa, const Sentence& s, const Trajectory& t,
                              std::vector<SegmentSolution> segs, const Chain& chain, const Mat4& target) {
  Decomposition d;
  d.sentence = s;
  d.trajectory = t;
  d.segments = std::move(segs);
  const KakDecomp kt = kak(target);
  const KakRaw kn = kak_toward(chain.product, kt.coord.raw());
  // target = e^{iφt} Et CAN Ft and product = e^{iφn} En CAN Fn, same CAN
  d.local_layers.push_back(adjoint(kn.before) * kt.before);
  for (const LocalPair& l : chain.interior) d.local_layers.push_back(l);
  d.local_layers.push_back(kt.after * adjoint(kn.after));
  d.global_phase = kt.global_phase - kn.global_phase;
  d.distance = phase_distance(multiply_out(d, isa), target);
  return d;
}

}  // namespace

Decomposition assemble(const Isa& isa, const Sentence& s, const Trajectory& t,
                       std::vector<SegmentSolution> segments, const Mat4& target) {
  Decomposition d;
  if (s.length() == 0) {
    double phase = 0.0;
    d.local_layers.push_back(split_local(target, phase));
    d.global_phase = phase;
    d.trajectory = t;
    d.distance = phase_distance(multiply_out(d, isa), target);
  } else {
    const Chain chain = build_chain(isa, s, t, segments, nullptr);
    d = finish_assembly(isa, s, t, std::move(segments), chain, target);
  }
  if (!(d.distance <= tol::assembly)) {
    std::ostringstream msg;
    msg << "assembled circuit misses the target by " << d.distance;
    throw AssemblyMismatch(msg.str(), d.distance);
  }
  return d;
}

// ---------------------------------------------------------------- pipeline

SearchResult search_sentence(const CanonicalCoord& target, const Isa& isa, const SynthOptions& opts) {
  const auto t0 = Clock::now();
  SearchResult out;
  SentenceEnumerator e(isa);
  for (std::size_t k = 0; k < opts.max_sentences; ++k) {
    Sentence s = e.next();
    if (s.total_cost > opts.max_cost + 1e-12) break;
    const auto l0 = Clock::now();
    std::optional<Trajectory> t = find_trajectory(isa, s, target);
    out.lp_ms += ms_since(l0);
    if (t) {
      out.sentence = std::move(s);
      out.trajectory = std::move(*t);
      out.search_ms = ms_since(t0);
      return out;
    }
    ++out.rejected;
  }
  throw BudgetExhausted("no feasible sentence within the sentence/cost budget");
}

Decomposition decompose(const Mat4& target, const Isa& isa, const SynthOptions& opts) {
  const CanonicalCoord ct = canonical_coords(target);
  if (chamber_distance(ct, {0, 0, 0}) <= tol::verification) {
    Trajectory t;
    t.points = {CanonicalCoord{}};
    t.lifts = {RawCoord{}};
    return assemble(isa, Sentence{}, t, {}, target);
  }

  const SearchResult found = search_sentence(ct, isa, opts);
  const Sentence& s = found.sentence;
  const Trajectory& t = found.trajectory;
  const std::size_t n = s.length();

  const auto m0 = Clock::now();
  auto solve_one = [&](std::size_t i) {
    const GateDef& g = isa[s.gates[i - 1]];
    try {
      return solve_segment(t.lifts[i - 1], g, t.lifts[i], opts, i);
    } catch (const SegmentNoConvergence&) {
      if (!opts.retry) throw;
      SynthOptions bigger = opts;
      bigger.restarts *= 4;
      return solve_segment(t.lifts[i - 1], g, t.lifts[i], bigger, 7919 + i);
    }
  };
  std::vector<SegmentSolution> segs;
  if (opts.parallel && n > 2) {
    std::vector<std::future<SegmentSolution>> jobs;
    for (std::size_t i = 2; i <= n; ++i) jobs.push_back(std::async(std::launch::async, solve_one, i));
    for (auto& j : jobs) segs.push_back(j.get());
  } else {
    for (std::size_t i = 2; i <= n; ++i) segs.push_back(solve_one(i));
  }

  Decomposition d;
  std::vector<SegmentSolution> work = segs;
  Chain chain = build_chain(isa, s, t, work, nullptr);
  d = finish_assembly(isa, s, t, work, chain, target);
  if (!(d.distance <= tol::assembly)) {
    // independent solves drifted; chain them from the realized classes
    work = segs;
    chain = build_chain(isa, s, t, work, &opts);
    d = finish_assembly(isa, s, t, work, chain, target);
  }
  d.rejected_sentences = found.rejected;
  d.timing.search_ms = found.search_ms;
  d.timing.lp_ms = found.lp_ms;
  d.timing.lm_ms = ms_since(m0);
  if (!(d.distance <= tol::assembly)) {
    std::ostringstream msg;
    msg << "assembled circuit misses the target by " << d.distance;
    throw AssemblyMismatch(msg.str(), d.distance);
  }
  return d;
}

VerifyReport verify(const Decomposition& d, const Isa& isa, const Mat4& target) {
  VerifyReport rep;
  rep.distance = phase_distance(multiply_out(d, isa), target);
  const Trajectory& t = d.trajectory;
  const std::size_t n = d.sentence.length();
  for (std::size_t i = 2; i <= n && i - 2 < d.segments.size(); ++i) {
    const SegmentSolution& seg = d.segments[i - 2];
    const ResidualFn f = segment_residual(isa[d.sentence.gates[i - 1]].matrix, t.lifts[i - 1], t.lifts[i]);
    std::vector<double> r;
    f({seg.v1[0], seg.v1[1], seg.v1[2], seg.v2[0], seg.v2[1], seg.v2[2]}, r, nullptr);
    double m = 0.0;
    for (double v : r) m = std::max(m, std::abs(v));
    rep.segment_residuals.push_back(m);
  }
  if (n >= 1 && t.lifts.size() == n + 1) {
    const TrajectoryLp lp = build_trajectory_lp(isa, d.sentence, t.lifts.back());
    std::vector<double> x;
    for (std::size_t i = 2; i + 1 <= n; ++i) {
      x.push_back(t.lifts[i].c1);
      x.push_back(t.lifts[i].c2);
      x.push_back(t.lifts[i].c3);
    }
    double worst = std::numeric_limits<double>::infinity();
    for (int r = 0; r < lp.problem.rows(); ++r)
      worst = std::min(worst, lp.problem.b[static_cast<std::size_t>(r)] - lp.problem.row_value(r, x));
    rep.min_slack = worst;
  }
  return rep;
}

// ---------------------------------------------------------------- named gates

namespace {

struct BaseGate {
  const char* name;
  RawCoord coords;
};

// Exact chamber coordinates of the base vocabulary.
constexpr BaseGate kBaseGates[] = {
    {"CX", {0.25, 0, 0}},     {"CNOT", {0.25, 0, 0}},       {"CZ", {0.25, 0, 0}},
    {"iSWAP", {0.25, 0.25, 0}}, {"SWAP", {0.25, 0.25, 0.25}}, {"B", {0.25, 0.125, 0}},
};

}  // namespace

Mat4 named_matrix(const std::string& name) {
  if (name == "CX" || name == "CNOT") return gates::cnot();
  if (name == "CZ") return gates::cz();
  if (name == "iSWAP") return gates::iswap();
  if (name == "SWAP") return gates::swap();
  if (name == "B") return can_gate(RawCoord{0.25, 0.125, 0});
  if (name == "I") return Mat4::identity();
  throw InputError("unknown gate name '" + name + "'");
}

GateDef named_gate(const std::string& spec, const std::string& id, double cost) {
  std::string base = spec;
  long k = 1;
  if (const auto caret = spec.find('^'); caret != std::string::npos) {
    base = spec.substr(0, caret);
    const std::string exponent = spec.substr(caret + 1);
    if (exponent.rfind("1/", 0) != 0) throw InputError("gate power must look like ^1/k: '" + spec + "'");
    try {
      std::size_t used = 0;
      k = std::stol(exponent.substr(2), &used);
      if (used != exponent.size() - 2) throw InputError("");
    } catch (const std::exception&) {
      throw InputError("bad gate power in '" + spec + "'");
    }
    if (k < 1) throw InputError("gate power needs k >= 1 in '" + spec + "'");
  }
  const BaseGate* found = nullptr;
  for (const auto& b : kBaseGates)
    if (base == b.name) found = &b;
  if (found == nullptr) throw InputError("unknown gate name '" + base + "'");

  const double kd = static_cast<double>(k);
  const RawCoord c{found->coords.c1 / kd, found->coords.c2 / kd, found->coords.c3 / kd};
  GateDef g;
  g.id = id;
  g.cost = cost;
  g.coords = weyl_canonicalize(c);
  // dress the fractional CAN with the base gate's own local frame
  const KakDecomp frame = kak(named_matrix(base));
  g.matrix = frame.after.matrix() * can_gate(c) * frame.before.matrix();
  return g;
}

}  // namespace gulps
