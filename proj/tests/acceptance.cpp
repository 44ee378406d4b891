// Acceptance suite: one PASS/FAIL line per criterion. Exit status is nonzero
// when any criterion fails. Thresholds below are part of the contract and
// must not be loosened to turn a line green.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "gulps/bench.hpp"
#include "gulps/constants.hpp"
#include "gulps/errors.hpp"
#include "gulps/synth.hpp"
#include "lp_oracle.hpp"

using namespace gulps;

namespace {

// ---- pinned thresholds
constexpr int kRoundTripTargets = 1000;
constexpr double kRoundTripDistance = 1e-6;
constexpr double kRoundTripWallSeconds = 600.0;
constexpr int kSoundnessCircuits = 10000;
constexpr double kRowSlack = 1e-9;
constexpr int kInteriorPoints = 100;
constexpr double kFirstTryRate = 0.99;
constexpr double kSegmentResidual = 1e-8;
constexpr int kCxHaarTargets = 200;
constexpr int kCxFaceTargets = 50;
constexpr int kOracleCircuits = 1000;
constexpr int kPermutationTargets = 50;
constexpr int kReflectionTargets = 100;
constexpr int kConvergenceTrials = 8;
constexpr double kDepth2Fraction = 0.9;
constexpr double kTrendSlack = 0.05;
constexpr double kDeepFraction = 0.2;
constexpr int kJacobianChecks = 100;
constexpr double kJacobianTol = 1e-5;
constexpr int kKakSamples = 1000;
constexpr double kKakTol = 1e-8;
constexpr int kRandomLps = 200;
constexpr double kMedianSearchMs = 50.0;
constexpr int kHistogramBins = 40;

struct Result {
  bool pass = false;
  std::string detail;
};

int failures = 0;

void report(int id, const char* title, const Result& r) {
  std::printf("criterion %2d %s  %s: %s\n", id, r.pass ? "PASS" : "FAIL", title, r.detail.c_str());
  std::fflush(stdout);
  if (!r.pass) ++failures;
}

template <class... Args>
std::string fmt(const char* f, Args... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

Mat4 random_local(Rng& rng) { return kron(haar_random_su2(rng), haar_random_su2(rng)); }

Isa cx_family() {
  return Isa({named_gate("CX", "CX", 1.0), named_gate("CX^1/2", "sqrt_cx", 0.5),
              named_gate("CX^1/3", "cbrt_cx", 1.0 / 3.0)});
}

Isa four_gate() {
  return Isa({named_gate("CX^1/2", "sqrt_cx", 0.5), named_gate("CX^1/3", "cbrt_cx", 1.0 / 3.0),
              named_gate("iSWAP^1/2", "sqrt_iswap", 1.0), named_gate("iSWAP^1/3", "cbrt_iswap", 2.0 / 3.0)});
}

SynthOptions serial_options() {
  SynthOptions o;
  o.parallel = false;
  return o;
}

bool lp_feasible(const Isa& isa, const Sentence& s, const CanonicalCoord& target) {
  for (const RawCoord& lift : {target.raw(), rho_reflect(target)}) {
    const TrajectoryLp lp = build_trajectory_lp(isa, s, lift);
    if (lp.problem.vars == 0) {
      if (std::all_of(lp.problem.b.begin(), lp.problem.b.end(), [](double b) { return b >= -kRowSlack; }))
        return true;
    } else if (solve(lp.problem).status == LpStatus::Feasible) {
      return true;
    }
  }
  return false;
}

// ---- criterion 1 (and the timing data of criterion 10)

struct Campaign {
  std::vector<double> search_ms;
  std::vector<double> costs;
  std::vector<Mat4> targets;
};

Result round_trip(Campaign& c) {
  const Isa isa = cx_family();
  const auto t0 = std::chrono::steady_clock::now();
  int ok = 0;
  double worst = 0.0;
  std::string first_error;
  for (int i = 0; i < kRoundTripTargets; ++i) {
    const Mat4 t = haar_random_su4(static_cast<std::uint64_t>(i));
    try {
      const Decomposition d = decompose(t, isa, serial_options());
      const VerifyReport v = verify(d, isa, t);
      worst = std::max(worst, v.distance);
      ok += v.distance <= kRoundTripDistance;
      c.search_ms.push_back(d.timing.search_ms);
      c.costs.push_back(d.sentence.total_cost);
      c.targets.push_back(t);
    } catch (const Error& e) {
      if (first_error.empty()) first_error = fmt("target %d: %s", i, e.what());
    }
  }
  const double wall = seconds_since(t0);
  Result r;
  r.pass = ok == kRoundTripTargets && wall <= kRoundTripWallSeconds;
  r.detail = fmt("%d/%d verified, worst distance %.3g, wall %.1f s", ok, kRoundTripTargets, worst, wall);
  if (!first_error.empty()) r.detail += "; " + first_error;
  return r;
}

// ---- criterion 2

Result soundness() {
  const Isa isa = four_gate();
  Rng rng(2024);
  double worst = 0.0;
  long violations = 0;
  for (std::size_t i = 0; i < isa.size(); ++i)
    for (std::size_t j = 0; j < isa.size(); ++j) {
      const LogSpec a = gamma_spectrum(isa[i].matrix);
      const LogSpec b = gamma_spectrum(isa[j].matrix);
      for (int t = 0; t < kSoundnessCircuits; ++t) {
        const LogSpec d = gamma_spectrum(isa[j].matrix * random_local(rng) * isa[i].matrix);
        for (const IneqRow& row : qlr_rows()) {
          const double v = row.evaluate(a, b, d);
          worst = std::min(worst, v);
          violations += v < -kRowSlack;
        }
      }
    }
  return {violations == 0, fmt("16 ordered pairs x %d circuits, %ld violations, least row value %.3g",
                               kSoundnessCircuits, violations, worst)};
}

// ---- criterion 3

// Relative-interior points of the depth-2 polytope: convex combinations of
// the max-min-slack centre with random LP vertices.
std::vector<RawCoord> interior_points(const LogSpec& g1, const LogSpec& g2, Rng& rng, int count) {
  const SegmentConstraints seg = instantiate_segment(g1, g2, std::nullopt, FreeDomain::Alcove);
  LpProblem p(3);
  for (const auto* rows : {&seg.qlr_rows, &seg.domain_rows})
    for (const AffineRow& row : *rows) p.add_row({-row.coef[0], -row.coef[1], -row.coef[2]}, row.constant);
  p.var_bounds.assign(3, {-0.5, 0.5});
  const LpOutcome centre = feasible_point(p);
  if (centre.status != LpStatus::Feasible) return {};
  std::vector<RawCoord> out;
  while (static_cast<int>(out.size()) < count) {
    LpProblem q = p;
    q.objective = {rng.normal(), rng.normal(), rng.normal()};
    const LpOutcome v = solve(q);
    if (v.status != LpStatus::Feasible) continue;
    const double w = rng.uniform(0.2, 0.95);
    out.push_back({w * centre.x[0] + (1 - w) * v.x[0], w * centre.x[1] + (1 - w) * v.x[1],
                   w * centre.x[2] + (1 - w) * v.x[2]});
  }
  return out;
}

Result completeness() {
  const Isa isa = four_gate();
  Rng rng(303);
  SynthOptions base;
  base.retry = false;
  SynthOptions big = base;
  big.restarts *= 4;
  int total = 0;
  int first_try = 0;
  int rescued = 0;
  double worst_gap = 0.0;
  std::uint64_t stream = 0;
  for (std::size_t i = 0; i < isa.size(); ++i)
    for (std::size_t j = 0; j < isa.size(); ++j) {
      const auto points = interior_points(coords_to_logspec(isa[i].coords), coords_to_logspec(isa[j].coords), rng,
                                          kInteriorPoints);
      for (const RawCoord& c : points) {
        ++total;
        const RawCoord prev = isa[i].coords.raw();
        auto gap = [&](const SegmentSolution& s) {
          return chamber_distance(canonical_coords(segment_matrix(isa[j].matrix, prev, s.v1, s.v2)),
                                  weyl_canonicalize(c));
        };
        try {
          const SegmentSolution s = solve_segment(prev, isa[j], c, base, ++stream);
          first_try += s.residual_norm <= kSegmentResidual;
          worst_gap = std::max(worst_gap, gap(s));
        } catch (const SegmentNoConvergence&) {
          try {
            const SegmentSolution s = solve_segment(prev, isa[j], c, big, ++stream + 1000000);
            rescued += s.residual_norm <= kSegmentResidual;
            worst_gap = std::max(worst_gap, gap(s));
          } catch (const SegmentNoConvergence&) {
          }
        }
      }
    }
  const double rate = total ? static_cast<double>(first_try) / total : 0.0;
  return {total == 16 * kInteriorPoints && rate >= kFirstTryRate && first_try + rescued == total,
          fmt("%d points, %.4f converged within 128 restarts, %d of %d rescued by 4x, worst class gap %.2g", total,
              rate, rescued, total - first_try, worst_gap)};
}

// ---- criterion 4

Result row_counts() {
  bool ok = qlr_rows().size() == 72;
  const Isa isa = four_gate();
  const CanonicalCoord t = canonical_coords(haar_random_su4(4));
  std::string seen;
  for (std::size_t n = 2; n <= 8; ++n) {
    Sentence s;
    for (std::size_t k = 0; k < n; ++k) s.gates.push_back(k % isa.size());
    const TrajectoryLp lp = build_trajectory_lp(isa, s, t.raw());
    ok = ok && lp.qlr_rows == 72 * (n - 1) && lp.problem.vars == static_cast<int>(3 * (n - 2));
    seen += fmt(" n=%zu:%zu/%d", n, lp.qlr_rows, lp.problem.vars);
  }
  const SegmentConstraints seg =
      instantiate_segment(coords_to_logspec(isa[0].coords), coords_to_logspec(isa[1].coords), std::nullopt);
  ok = ok && seg.qlr_rows.size() == 72;
  return {ok, "per-segment rows 72; rows/vars" + seen};
}

// ---- criterion 5

Result cx_structure() {
  const Isa cx = Isa({named_gate("CX", "CX", 1.0)});
  Rng rng(505);
  // oracle: every 2-CX circuit lands on c3 = 0, so c3 > 0 needs three
  double oracle_c3 = 0.0;
  for (int i = 0; i < kOracleCircuits; ++i)
    oracle_c3 = std::max(oracle_c3, canonical_coords(gates::cnot() * random_local(rng) * gates::cnot()).c3);

  int haar_three = 0;
  int haar_off_face = 0;
  for (int i = 0; i < kCxHaarTargets; ++i) {
    const Mat4 t = haar_random_su4(rng);
    haar_off_face += canonical_coords(t).c3 > 1e-6;
    const Decomposition d = decompose(t, cx, serial_options());
    haar_three += d.sentence.length() == 3 && d.distance <= kRoundTripDistance;
  }
  int face_two = 0;
  for (int i = 0; i < kCxFaceTargets; ++i) {
    const Mat4 t = random_local(rng) * gates::cnot() * random_local(rng) * gates::cnot() * random_local(rng);
    const Decomposition d = decompose(t, cx, serial_options());
    face_two += d.sentence.length() == 2 && d.distance <= kRoundTripDistance;
  }
  const Decomposition id = decompose(Mat4::identity(), cx, serial_options());
  const bool pass = oracle_c3 <= 1e-9 && haar_off_face == kCxHaarTargets && haar_three == kCxHaarTargets &&
                    face_two == kCxFaceTargets && id.sentence.length() == 0;
  return {pass, fmt("oracle max c3 over 2-CX circuits %.2g; Haar length 3: %d/%d; c3=0 length 2: %d/%d; identity "
                    "length %zu",
                    oracle_c3, haar_three, kCxHaarTargets, face_two, kCxFaceTargets, id.sentence.length())};
}

// ---- criterion 6

Result permutations() {
  const Isa isa = four_gate();
  Rng rng(606);
  long checked = 0;
  long mismatches = 0;
  long feasible = 0;
  for (int t = 0; t < kPermutationTargets; ++t) {
    const CanonicalCoord c = canonical_coords(haar_random_su4(rng));
    for (std::size_t a = 0; a < isa.size(); ++a)
      for (std::size_t b = a; b < isa.size(); ++b)
        for (std::size_t e = b; e < isa.size(); ++e) {
          std::vector<std::size_t> g{a, b, e};
          const bool want = lp_feasible(isa, Sentence{g, 0.0}, c);
          feasible += want;
          while (std::next_permutation(g.begin(), g.end())) {
            ++checked;
            mismatches += lp_feasible(isa, Sentence{g, 0.0}, c) != want;
          }
        }
  }
  return {mismatches == 0, fmt("%ld reorderings of 20 multisets x %d targets, %ld mismatches (%ld feasible multisets)",
                               checked, kPermutationTargets, mismatches, feasible)};
}

// ---- criterion 7

Result reflection(const Campaign& c) {
  const Isa isa = cx_family();
  int same = 0;
  const int n = std::min<int>(kReflectionTargets, static_cast<int>(c.targets.size()));
  for (int i = 0; i < n; ++i) {
    const Mat4 minus = -1.0 * c.targets[static_cast<std::size_t>(i)];
    try {
      const Decomposition d = decompose(minus, isa, serial_options());
      same += std::abs(d.sentence.total_cost - c.costs[static_cast<std::size_t>(i)]) < 1e-9 &&
              phase_distance(multiply_out(d, isa), minus) <= kRoundTripDistance;
    } catch (const Error&) {
    }
  }
  return {n == kReflectionTargets && same == n, fmt("%d/%d negated targets decomposed at equal cost", same, n)};
}

// ---- criterion 8

Result convergence() {
  const GateDef q = named_gate("iSWAP^1/4", "q", 1.0);
  ConvergenceOptions o;
  o.trials = kConvergenceTrials;
  o.apex = ApexRule::MaxCoordSum;
  std::vector<double> f;
  std::string line;
  for (int depth = 2; depth <= 6; ++depth) {
    const ConvergenceRow r = convergence_at_depth(q, depth, o);
    f.push_back(r.trial_fraction());
    line += fmt(" d%d=%.2f", depth, r.trial_fraction());
  }
  // the max-min-slack reading of "apex" is reported for comparison only
  ConvergenceOptions centre = o;
  centre.apex = ApexRule::MaxMinSlack;
  std::string centre_line;
  for (int depth = 2; depth <= 6; ++depth)
    centre_line += fmt(" d%d=%.2f", depth, convergence_at_depth(q, depth, centre).trial_fraction());
  std::printf("  info: max-min-slack target fractions:%s\n", centre_line.c_str());

  bool monotone = true;
  for (std::size_t k = 1; k < f.size(); ++k) monotone = monotone && f[k] <= f[k - 1] + kTrendSlack;
  const bool pass = f[0] >= kDepth2Fraction && monotone && f[3] <= kDeepFraction && f[4] <= kDeepFraction;
  return {pass, "vertex-apex trial fractions (" + std::to_string(kConvergenceTrials) + " trials x 128 restarts):" + line};
}

// ---- criterion 9

Result cross_checks() {
  Rng rng(909);
  const Isa isa = four_gate();
  double jac_err = 0.0;
  for (int t = 0; t < kJacobianChecks; ++t) {
    const GateDef& g = isa[rng.next() % isa.size()];
    const RawCoord prev{rng.uniform(0, 0.25), rng.uniform(0, 0.2), rng.uniform(-0.1, 0.1)};
    const RawCoord next{rng.uniform(0, 0.25), rng.uniform(0, 0.2), rng.uniform(0, 0.1)};
    const ResidualFn f = segment_residual(g.matrix, prev, next);
    std::vector<double> x(6);
    for (double& v : x) v = rng.uniform(-2 * std::numbers::pi, 2 * std::numbers::pi);
    std::vector<double> r;
    std::vector<double> jac;
    f(x, r, &jac);
    const std::vector<double> fd = central_difference_jacobian(f, x);
    for (std::size_t i = 0; i < jac.size(); ++i) jac_err = std::max(jac_err, std::abs(jac[i] - fd[i]));
  }
  double kak_err = 0.0;
  for (int t = 0; t < kKakSamples; ++t) {
    const Mat4 u = haar_random_su4(rng);
    kak_err = std::max(kak_err, phase_distance(kak(u).reconstruct(), u));
  }
  int agree = 0;
  for (int t = 0; t < kRandomLps; ++t) {
    const int n = 1 + static_cast<int>(rng.next() % 3);
    const int m = 2 + static_cast<int>(rng.next() % 6);
    LpProblem p(n);
    for (int r = 0; r < m; ++r) {
      std::vector<double> row(static_cast<std::size_t>(n));
      for (double& v : row) v = rng.uniform(-1, 1);
      p.add_row(row, rng.uniform(-0.6, 1.0));
    }
    for (int j = 0; j < n; ++j) {
      std::vector<double> e(static_cast<std::size_t>(n), 0.0);
      e[static_cast<std::size_t>(j)] = 1.0;
      p.add_row(e, 5.0);
      e[static_cast<std::size_t>(j)] = -1.0;
      p.add_row(e, 5.0);
    }
    agree += (solve(p).status == LpStatus::Feasible) == oracle::vertices(p).feasible;
  }
  const bool pass = jac_err <= kJacobianTol && kak_err <= kKakTol && agree == kRandomLps;
  return {pass, fmt("Jacobian max error %.2g, KAK max distance %.2g, LP status agreement %d/%d", jac_err, kak_err,
                    agree, kRandomLps)};
}

// ---- criterion 10

Result timing(const Campaign& c) {
  std::ostringstream csv;
  write_histogram_csv(csv, c.search_ms, kHistogramBins);
  std::istringstream in(csv.str());
  std::string line;
  bool well_formed = static_cast<bool>(std::getline(in, line)) && line == "bin_lo,bin_hi,count";
  long total = 0;
  int bins = 0;
  double last_hi = -1.0;
  while (well_formed && std::getline(in, line)) {
    double lo = 0;
    double hi = 0;
    long count = 0;
    well_formed = std::sscanf(line.c_str(), "%lf,%lf,%ld", &lo, &hi, &count) == 3 && hi > lo && count >= 0 &&
                  (bins == 0 || std::abs(lo - last_hi) <= 1e-9 * std::max(1.0, std::abs(hi)));
    last_hi = hi;
    total += count;
    ++bins;
  }
  well_formed = well_formed && bins == kHistogramBins && total == static_cast<long>(c.search_ms.size());
  const double med = median(c.search_ms);
  return {well_formed && !c.search_ms.empty() && med <= kMedianSearchMs,
          fmt("median sentence search %.3f ms over %zu targets; histogram %d bins, %s", med, c.search_ms.size(), bins,
              well_formed ? "well-formed" : "malformed")};
}

}  // namespace

int main() {
  const auto t0 = std::chrono::steady_clock::now();
  Campaign campaign;
  report(1, "end-to-end round trip", round_trip(campaign));
  report(2, "polytope soundness", soundness());
  report(3, "polytope completeness", completeness());
  report(4, "row and variable counts", row_counts());
  report(5, "CX structure", cx_structure());
  report(6, "permutation invariance", permutations());
  report(7, "reflection", reflection(campaign));
  report(8, "convergence vs depth", convergence());
  report(9, "numerical cross-checks", cross_checks());
  report(10, "sentence-search timing", timing(campaign));
  std::printf("%d of 10 criteria failed (%.1f s)\n", failures, seconds_since(t0));
  return failures == 0 ? 0 : 1;
}
