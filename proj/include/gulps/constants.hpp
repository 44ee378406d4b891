#pragma once

// Numerical tolerances shared by every module. Anything that compares two
// floating-point quantities against a threshold should pull it from here.

namespace gulps::tol {

// ‖U†U − I‖_F bound enforced on freshly constructed unitaries.
inline constexpr double construction = 1e-10;
// Bound used when verifying products and round trips.
inline constexpr double verification = 1e-9;
// Per-pair eigen residual ‖M v − λ v‖.
inline constexpr double eigen_residual = 1e-8;
// Inputs read from files are rejected above this unitarity defect.
inline constexpr double input_unitarity = 1e-8;

// A linear inequality counts as satisfied down to this (negative) slack.
inline constexpr double row_slack = 1e-9;
// Phase-I objective above which an LP is certified infeasible.
inline constexpr double lp_infeasible = 1e-7;
// Pivot magnitudes below this are treated as zero in the simplex.
inline constexpr double lp_pivot = 1e-11;

// Points with c3 below this are treated as lying on the chamber base, where
// (c1, c2, 0) and (1/2 − c1, c2, 0) name the same class.
inline constexpr double chamber_face = 1e-12;

// Per-term Makhlin residual accepted by segment synthesis.
inline constexpr double segment_residual = 1e-8;
// Multiply-out distance an assembled decomposition must meet.
inline constexpr double assembly = 1e-6;

}  // namespace gulps::tol
