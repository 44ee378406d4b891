#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <queue>
#include <set>
#include <string>
#include <vector>

#include "gulps/invariants.hpp"
#include "gulps/lm.hpp"
#include "gulps/lp.hpp"
#include "gulps/monodromy.hpp"

namespace gulps {

struct GateDef {
  std::string id;
  CanonicalCoord coords;
  double cost = 1.0;
  Mat4 matrix;
};

/// Gates are kept sorted by id; sentence entries index into this order.
class Isa {
 public:
  Isa() = default;
  explicit Isa(std::vector<GateDef> gates);

  const std::vector<GateDef>& gates() const { return gates_; }
  const GateDef& operator[](std::size_t i) const { return gates_[i]; }
  std::size_t size() const { return gates_.size(); }
  /// Index of the gate with this id; throws InputError if absent.
  std::size_t index_of(const std::string& id) const;

 private:
  std::vector<GateDef> gates_;
};

/// A multiset of ISA gates in canonical (non-decreasing index) order.
struct Sentence {
  std::vector<std::size_t> gates;
  double total_cost = 0.0;

  std::size_t length() const { return gates.size(); }
  std::vector<std::string> ids(const Isa& isa) const;
  std::string label(const Isa& isa) const;
};

/// Best-first stream of sentences by (cost, length, ids). Infinite; the
/// caller bounds it.
class SentenceEnumerator {
 public:
  explicit SentenceEnumerator(const Isa& isa);
  Sentence next();

 private:
  struct Node {
    long long cost_key;
    Sentence sentence;
  };
  struct Later {
    bool operator()(const Node& a, const Node& b) const;
  };
  const Isa& isa_;
  std::priority_queue<Node, std::vector<Node>, Later> frontier_;
  std::set<std::vector<std::size_t>> visited_;
};

std::vector<Sentence> enumerate_sentences(const Isa& isa, std::size_t count);

struct Trajectory {
  /// C0..Cn as chamber points.
  std::vector<CanonicalCoord> points;
  /// The same points as the SU(4) lifts the LP actually fixed (c3 may be
  /// negative for the reflected lift).
  std::vector<RawCoord> lifts;
  bool reflected = false;
};

/// The trajectory LP for one sentence and one lift of the target spectrum.
/// For n ≥ 3 the variables are C2..C_{n−1}; for n ≤ 2 the problem has no
/// variables and holds the fixed rows only.
struct TrajectoryLp {
  LpProblem problem;
  std::size_t qlr_rows = 0;
  std::size_t domain_rows = 0;
};

TrajectoryLp build_trajectory_lp(const Isa& isa, const Sentence& s, const RawCoord& target_lift);

/// Solves for coords(T), then for the reflected lift. Returns nothing when
/// both are infeasible.
std::optional<Trajectory> find_trajectory(const Isa& isa, const Sentence& s, const CanonicalCoord& target);

struct SynthOptions {
  int restarts = 128;
  int max_iter = 2048;
  double tol = 1e-8;
  /// Tolerance of the polishing run after convergence.
  double polish_tol = 1e-14;
  int polish_iter = 200;
  std::uint64_t seed = 0;
  bool parallel = true;
  bool retry = true;
  std::size_t max_sentences = 100000;
  double max_cost = std::numeric_limits<double>::infinity();
};

struct SegmentSolution {
  std::array<double, 3> v1{};
  std::array<double, 3> v2{};
  double residual_norm = 0.0;
  int restarts_used = 0;
  int iterations = 0;
  /// KAK of the realized X = G·(R(v1)⊗R(v2))·CAN(c_prev).
  KakDecomp exterior;
};

/// X = G·(R(v1)⊗R(v2))·CAN(c_prev) as a matrix.
Mat4 segment_matrix(const Mat4& gate, const RawCoord& c_prev, const std::array<double, 3>& v1,
                    const std::array<double, 3>& v2);

/// Makhlin residual of the segment ansatz, exposed for derivative checks.
ResidualFn segment_residual(const Mat4& gate, const RawCoord& c_prev, const RawCoord& c_next);

/// Throws SegmentNoConvergence when every restart misses opts.tol.
SegmentSolution solve_segment(const RawCoord& c_prev, const GateDef& g, const RawCoord& c_next,
                              const SynthOptions& opts, std::uint64_t stream);

struct Timing {
  double search_ms = 0.0;
  double lp_ms = 0.0;
  double lm_ms = 0.0;
};

struct Decomposition {
  Sentence sentence;
  Trajectory trajectory;
  std::vector<SegmentSolution> segments;
  /// L_0 … L_n; the circuit is e^{iφ} L_n G_n L_{n−1} ⋯ G_1 L_0.
  std::vector<LocalPair> local_layers;
  double global_phase = 0.0;
  double distance = 0.0;
  std::size_t rejected_sentences = 0;
  Timing timing;
};

Mat4 multiply_out(const Decomposition& d, const Isa& isa);

/// Builds the local layers from solved segments. Throws AssemblyMismatch if
/// the product misses the target by more than tol::assembly.
Decomposition assemble(const Isa& isa, const Sentence& s, const Trajectory& t,
                       std::vector<SegmentSolution> segments, const Mat4& target);

struct SearchResult {
  Sentence sentence;
  Trajectory trajectory;
  std::size_t rejected = 0;
  double search_ms = 0.0;
  double lp_ms = 0.0;
};

/// Cheapest sentence with a feasible trajectory. Throws BudgetExhausted.
SearchResult search_sentence(const CanonicalCoord& target, const Isa& isa, const SynthOptions& opts);

Decomposition decompose(const Mat4& target, const Isa& isa, const SynthOptions& opts = {});

struct VerifyReport {
  double distance = 0.0;
  std::vector<double> segment_residuals;
  double min_slack = 0.0;
};

VerifyReport verify(const Decomposition& d, const Isa& isa, const Mat4& target);

/// Named gates: CX, CZ, iSWAP, SWAP, B and "G^1/k". Throws InputError.
GateDef named_gate(const std::string& spec, const std::string& id, double cost);
/// Unitary for a named target such as "CNOT", "CX", "SWAP" or "I".
Mat4 named_matrix(const std::string& name);

}  // namespace gulps
