#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "gulps/synth.hpp"

namespace gulps {

enum class ApexRule {
  /// Target coordinates of the point maximizing the least row slack over the
  /// target and every intermediate point together.
  MaxMinSlack,
  /// A vertex of the circuit polytope (target kept in the chamber) that
  /// maximizes c1 + c2 + c3.
  MaxCoordSum,
};

/// Worst-case target for monolithic synthesis of a sentence.
CanonicalCoord polytope_apex(const Isa& isa, const Sentence& s, ApexRule rule = ApexRule::MaxMinSlack);

/// Makhlin residual of the whole circuit G·L_{d−1}·G ⋯ L_1·G against the
/// target, over 6(d−1) rotation parameters. Depths 2..6.
ResidualFn monolithic_residual(const Mat4& gate, int depth, const CanonicalCoord& target);

struct ConvergenceOptions {
  int trials = 10;
  int restarts = 128;
  int max_iter = 2048;
  double tol = 1e-8;
  std::uint64_t seed = 0;
  ApexRule apex = ApexRule::MaxMinSlack;
};

struct ConvergenceRow {
  int depth = 0;
  CanonicalCoord target;
  int trials = 0;
  /// Trials in which some restart reached the tolerance.
  int converged_trials = 0;
  long restarts_run = 0;
  long restarts_converged = 0;
  double wall_ms = 0.0;

  double trial_fraction() const { return trials ? static_cast<double>(converged_trials) / trials : 0.0; }
  double restart_fraction() const {
    return restarts_run ? static_cast<double>(restarts_converged) / static_cast<double>(restarts_run) : 0.0;
  }
};

/// Monolithic synthesis of the depth-d apex target for a single-gate ISA.
/// A trial stops at its first converged restart.
ConvergenceRow convergence_at_depth(const GateDef& gate, int depth, const ConvergenceOptions& opts);

struct SentenceTimeRow {
  std::uint64_t seed = 0;
  std::string sentence;
  std::size_t length = 0;
  double cost = 0.0;
  double search_ms = 0.0;
  std::size_t rejected = 0;
};

/// Sentence search only, for the Haar target drawn from `seed`.
SentenceTimeRow sentence_time(const Isa& isa, std::uint64_t seed, const SynthOptions& opts);

/// Equal-width histogram of `values` as CSV: bin_lo,bin_hi,count.
void write_histogram_csv(std::ostream& os, const std::vector<double>& values, int bins);

double median(std::vector<double> values);

}  // namespace gulps
