#include "gulps/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "gulps/constants.hpp"
#include "gulps/errors.hpp"

namespace gulps::io {

namespace {

template <std::size_t N>
json matrix_json(const CMatrix<N>& m) {
  json rows = json::array();
  for (std::size_t r = 0; r < N; ++r) {
    json row = json::array();
    for (std::size_t c = 0; c < N; ++c) row.push_back({m(r, c).real(), m(r, c).imag()});
    rows.push_back(row);
  }
  return rows;
}

template <std::size_t N>
CMatrix<N> matrix_from(const json& j) {
  if (!j.is_array() || j.size() != N) throw InputError("matrix must be an array of " + std::to_string(N) + " rows");
  CMatrix<N> m;
  for (std::size_t r = 0; r < N; ++r) {
    const json& row = j[r];
    if (!row.is_array() || row.size() != N)
      throw InputError("matrix row " + std::to_string(r) + " must have " + std::to_string(N) + " entries");
    for (std::size_t c = 0; c < N; ++c) {
      const json& e = row[c];
      if (e.is_number()) {
        m(r, c) = e.get<double>();
      } else if (e.is_array() && e.size() == 2 && e[0].is_number() && e[1].is_number()) {
        m(r, c) = Complex(e[0].get<double>(), e[1].get<double>());
      } else {
        throw InputError("matrix entry (" + std::to_string(r) + "," + std::to_string(c) + ") must be [re, im]");
      }
    }
  }
  if (!all_finite(m)) throw InputError("matrix has non-finite entries");
  return m;
}

std::array<double, 3> triple(const json& j, const char* what) {
  if (!j.is_array() || j.size() != 3) throw InputError(std::string(what) + " must be a 3-array");
  std::array<double, 3> a{};
  for (std::size_t k = 0; k < 3; ++k) {
    if (!j[k].is_number()) throw InputError(std::string(what) + " entries must be numbers");
    a[k] = j[k].get<double>();
  }
  return a;
}

json coord_json(double c1, double c2, double c3) { return json::array({c1, c2, c3}); }

void check_version(const json& j, const char* what) {
  if (j.is_object() && j.contains("format_version") && j["format_version"] != kFormatVersion)
    throw InputError(std::string(what) + ": unsupported format_version " + j["format_version"].dump());
}

GateDef gate_from_json(const json& e) {
  if (!e.is_object()) throw InputError("ISA entry must be an object");
  if (!e.contains("id") || !e["id"].is_string()) throw InputError("ISA entry needs a string \"id\"");
  const std::string id = e["id"].get<std::string>();
  if (!e.contains("cost") || !e["cost"].is_number()) throw InputError("ISA gate '" + id + "' needs a numeric \"cost\"");
  const double cost = e["cost"].get<double>();
  const int forms = static_cast<int>(e.contains("spec")) + static_cast<int>(e.contains("coords")) +
                    static_cast<int>(e.contains("matrix"));
  // written decompositions store both coords and matrix; the matrix wins
  if (forms == 0) throw InputError("ISA gate '" + id + "' needs one of spec, coords or matrix");
  if (e.contains("spec") && forms > 1) throw InputError("ISA gate '" + id + "' mixes spec with coords or matrix");

  if (e.contains("spec")) {
    if (!e["spec"].is_string()) throw InputError("ISA gate '" + id + "': spec must be a string");
    return named_gate(e["spec"].get<std::string>(), id, cost);
  }
  GateDef g;
  g.id = id;
  g.cost = cost;
  if (e.contains("matrix")) {
    g.matrix = mat4_from_json(e["matrix"]);
    require_unitary(g.matrix, "ISA gate '" + id + "'");
    g.coords = canonical_coords(g.matrix);
    if (e.contains("coords")) {
      const auto c = triple(e["coords"], "coords");
      if (chamber_distance(weyl_canonicalize(RawCoord{c[0], c[1], c[2]}), g.coords) > tol::verification)
        throw InputError("ISA gate '" + id + "': coords disagree with its matrix");
    }
  } else {
    const auto c = triple(e["coords"], "coords");
    const RawCoord raw{c[0], c[1], c[2]};
    g.coords = weyl_canonicalize(raw);
    g.matrix = can_gate(g.coords);
  }
  return g;
}

}  // namespace

json to_json(const Mat4& m) { return matrix_json(m); }
json to_json(const Mat2& m) { return matrix_json(m); }
Mat4 mat4_from_json(const json& j) { return matrix_from<4>(j); }
Mat2 mat2_from_json(const json& j) { return matrix_from<2>(j); }

void require_unitary(const Mat4& m, const std::string& what) {
  const double defect = unitarity_defect(m);
  if (!(defect <= tol::input_unitarity)) {
    std::ostringstream msg;
    msg << what << " is not unitary: ||U†U − I|| = " << defect << " exceeds " << tol::input_unitarity;
    throw InputError(msg.str());
  }
}

Isa isa_from_json(const json& j) {
  check_version(j, "ISA");
  const json* list = &j;
  if (j.is_object()) {
    if (!j.contains("gates")) throw InputError("ISA object needs a \"gates\" array");
    list = &j["gates"];
  }
  if (!list->is_array()) throw InputError("ISA gates must be an array");
  std::vector<GateDef> gates;
  for (const json& e : *list) gates.push_back(gate_from_json(e));
  return Isa(std::move(gates));
}

json isa_to_json(const Isa& isa) {
  json gates = json::array();
  for (const GateDef& g : isa.gates())
    gates.push_back({{"id", g.id},
                     {"cost", g.cost},
                     {"coords", coord_json(g.coords.c1, g.coords.c2, g.coords.c3)},
                     {"matrix", to_json(g.matrix)}});
  return {{"format_version", kFormatVersion}, {"gates", gates}};
}

Isa load_isa(const std::string& path) { return isa_from_json(read_json_file(path)); }

Mat4 resolve_target(const std::string& spec) {
  Mat4 m;
  std::string what = "target '" + spec + "'";
  if (spec.rfind("name:", 0) == 0) {
    m = named_matrix(spec.substr(5));
  } else if (spec.rfind("haar:", 0) == 0) {
    const std::string digits = spec.substr(5);
    std::size_t used = 0;
    unsigned long long seed = 0;
    try {
      seed = std::stoull(digits, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (digits.empty() || used != digits.size()) throw InputError("haar target needs an integer seed: '" + spec + "'");
    m = haar_random_su4(seed);
  } else if (std::ifstream(spec).good()) {
    const json j = read_json_file(spec);
    check_version(j, "target");
    m = mat4_from_json(j.is_object() && j.contains("matrix") ? j["matrix"] : j);
  } else {
    m = named_matrix(spec);
  }
  require_unitary(m, what);
  return m;
}

json decomposition_to_json(const Decomposition& d, const Isa& isa, const Mat4& target) {
  json points = json::array();
  for (const CanonicalCoord& p : d.trajectory.points) points.push_back(coord_json(p.c1, p.c2, p.c3));
  json lifts = json::array();
  for (const RawCoord& p : d.trajectory.lifts) lifts.push_back(coord_json(p.c1, p.c2, p.c3));
  json segments = json::array();
  for (std::size_t i = 0; i < d.segments.size(); ++i) {
    const SegmentSolution& s = d.segments[i];
    segments.push_back({{"gate", isa[d.sentence.gates[i + 1]].id},
                        {"v1", s.v1},
                        {"v2", s.v2},
                        {"residual", s.residual_norm},
                        {"restarts", s.restarts_used},
                        {"iterations", s.iterations}});
  }
  json layers = json::array();
  for (const LocalPair& l : d.local_layers) layers.push_back({{"left", to_json(l.left)}, {"right", to_json(l.right)}});
  return {{"format_version", kFormatVersion},
          {"isa", isa_to_json(isa)},
          {"target", to_json(target)},
          {"sentence", {{"gates", d.sentence.ids(isa)}, {"total_cost", d.sentence.total_cost}}},
          {"trajectory", {{"reflected", d.trajectory.reflected}, {"points", points}, {"lifts", lifts}}},
          {"segments", segments},
          {"local_layers", layers},
          {"global_phase", d.global_phase},
          {"distance", d.distance},
          {"rejected_sentences", d.rejected_sentences},
          {"timing", {{"search_ms", d.timing.search_ms}, {"lp_ms", d.timing.lp_ms}, {"lm_ms", d.timing.lm_ms}}}};
}

LoadedDecomposition decomposition_from_json(const json& j) {
  if (!j.is_object()) throw InputError("decomposition must be a JSON object");
  check_version(j, "decomposition");
  try {
    LoadedDecomposition out;
    out.isa = isa_from_json(j.at("isa"));
    out.target = mat4_from_json(j.at("target"));
    Decomposition& d = out.decomposition;
    for (const json& id : j.at("sentence").at("gates")) d.sentence.gates.push_back(out.isa.index_of(id.get<std::string>()));
    d.sentence.total_cost = j.at("sentence").at("total_cost").get<double>();
    const json& t = j.at("trajectory");
    d.trajectory.reflected = t.at("reflected").get<bool>();
    for (const json& p : t.at("points")) {
      const auto c = triple(p, "trajectory point");
      d.trajectory.points.push_back(CanonicalCoord{c[0], c[1], c[2]});
    }
    for (const json& p : t.at("lifts")) {
      const auto c = triple(p, "trajectory lift");
      d.trajectory.lifts.push_back(RawCoord{c[0], c[1], c[2]});
    }
    const std::size_t n = d.sentence.length();
    if (j.at("segments").size() != (n >= 2 ? n - 1 : 0)) throw InputError("segment count does not match the sentence");
    if (j.at("local_layers").size() != n + 1) throw InputError("local layer count must be sentence length + 1");
    for (std::size_t i = 0; i < j.at("segments").size(); ++i) {
      const json& s = j.at("segments")[i];
      SegmentSolution seg;
      seg.v1 = triple(s.at("v1"), "v1");
      seg.v2 = triple(s.at("v2"), "v2");
      seg.residual_norm = s.at("residual").get<double>();
      seg.restarts_used = s.value("restarts", 0);
      seg.iterations = s.value("iterations", 0);
      if (t.at("lifts").size() == n + 1)
        seg.exterior = kak(segment_matrix(out.isa[d.sentence.gates[i + 1]].matrix, d.trajectory.lifts[i + 1], seg.v1, seg.v2));
      d.segments.push_back(seg);
    }
    for (const json& l : j.at("local_layers")) d.local_layers.push_back({mat2_from_json(l.at("left")), mat2_from_json(l.at("right"))});
    d.global_phase = j.at("global_phase").get<double>();
    d.distance = j.at("distance").get<double>();
    d.rejected_sentences = j.value("rejected_sentences", std::size_t{0});
    if (j.contains("timing")) {
      d.timing.search_ms = j["timing"].value("search_ms", 0.0);
      d.timing.lp_ms = j["timing"].value("lp_ms", 0.0);
      d.timing.lm_ms = j["timing"].value("lm_ms", 0.0);
    }
    return out;
  } catch (const json::exception& e) {
    throw InputError(std::string("malformed decomposition: ") + e.what());
  }
}

void write_trajectory_csv(std::ostream& os, const Trajectory& t) {
  os << "step,c1,c2,c3\n";
  char buf[128];
  for (std::size_t i = 0; i < t.lifts.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%zu,%.17g,%.17g,%.17g\n", i, t.lifts[i].c1, t.lifts[i].c2, t.lifts[i].c3);
    os << buf;
  }
}

std::vector<RawCoord> read_trajectory_csv(std::istream& is) {
  std::string line;
  if (!std::getline(is, line) || line.rfind("step,c1,c2,c3", 0) != 0) throw InputError("trajectory CSV needs a step,c1,c2,c3 header");
  std::vector<RawCoord> out;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::size_t step = 0;
    RawCoord c;
    if (std::sscanf(line.c_str(), "%zu,%lf,%lf,%lf", &step, &c.c1, &c.c2, &c.c3) != 4 || step != out.size())
      throw InputError("malformed trajectory CSV line: " + line);
    out.push_back(c);
  }
  return out;
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot read '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

json read_json_file(const std::string& path) {
  try {
    return json::parse(read_text_file(path));
  } catch (const json::parse_error& e) {
    throw InputError("'" + path + "' is not valid JSON: " + e.what());
  }
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write '" + path + "'");
  out << text;
  if (!out) throw InputError("failed writing '" + path + "'");
}

}  // namespace gulps::io
