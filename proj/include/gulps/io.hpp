#pragma once

// File formats: JSON for ISAs, targets and decompositions; CSV for
// trajectories. Every JSON document carries "format_version": 1.

#include <iosfwd>
#include <string>
#include <vector>

#include "gulps/synth.hpp"
#include "json.hpp"

namespace gulps::io {

using nlohmann::json;

inline constexpr int kFormatVersion = 1;
inline constexpr const char* kToolVersion = "0.1.0";

/// 4×4 (or 2×2) matrix as rows of [re, im] pairs.
json to_json(const Mat4& m);
json to_json(const Mat2& m);
Mat4 mat4_from_json(const json& j);
Mat2 mat2_from_json(const json& j);

/// Unitary check shared by every matrix input; throws InputError naming the
/// defect.
void require_unitary(const Mat4& m, const std::string& what);

/// Gate entries carry an id, a cost and exactly one of "spec" (named gate),
/// "coords" (units of π) or "matrix". A bare array of entries is accepted.
Isa isa_from_json(const json& j);
json isa_to_json(const Isa& isa);
Isa load_isa(const std::string& path);

/// "name:CNOT", "haar:SEED", a JSON file holding a matrix (bare or under
/// "matrix"), or a bare gate name.
Mat4 resolve_target(const std::string& spec);

json decomposition_to_json(const Decomposition& d, const Isa& isa, const Mat4& target);

struct LoadedDecomposition {
  Isa isa;
  Decomposition decomposition;
  Mat4 target;
};

LoadedDecomposition decomposition_from_json(const json& j);

/// step,c1,c2,c3 over the trajectory's lifts, 17 significant digits.
void write_trajectory_csv(std::ostream& os, const Trajectory& t);
std::vector<RawCoord> read_trajectory_csv(std::istream& is);

json read_json_file(const std::string& path);
std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

}  // namespace gulps::io
