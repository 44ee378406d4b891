// gulps: command-line front end for decomposition, trajectory export,
// verification, polytope queries and benchmark campaigns.
//
// Exit codes: 0 success, 1 input error (including failed verification),
// 2 budget exhausted, 3 numerical failure inside the synthesizer.

#include <cstdlib>
#include <fstream>
#include <future>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "gulps/bench.hpp"
#include "gulps/constants.hpp"
#include "gulps/errors.hpp"
#include "gulps/io.hpp"
#include "gulps/synth.hpp"

using namespace gulps;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInput = 1;
constexpr int kExitBudget = 2;
constexpr int kExitNumerical = 3;

std::uint64_t default_seed() {
  if (const char* env = std::getenv("GULPS_SEED")) {
    try {
      return std::stoull(env);
    } catch (const std::exception&) {
      throw InputError(std::string("GULPS_SEED must be an unsigned integer, got '") + env + "'");
    }
  }
  return 0;
}

std::string flag_line(int argc, char** argv) {
  std::string s;
  for (int i = 0; i < argc; ++i) {
    if (i) s += ' ';
    s += argv[i];
  }
  return s;
}

void emit(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-")
    std::cout << text;
  else
    io::write_text_file(path, text);
}

// Bench CSVs may be appended to: every run adds its own comment header, the
// column line is written only into a fresh file.
std::ofstream open_bench_csv(const std::string& path, const std::string& columns, const std::string& flags) {
  bool fresh = true;
  {
    std::ifstream probe(path, std::ios::binary | std::ios::ate);
    fresh = !probe || probe.tellg() == 0;
  }
  std::ofstream out(path, std::ios::app);
  if (!out) throw InputError("cannot write '" + path + "'");
  out << "# gulps " << io::kToolVersion << " format_version " << io::kFormatVersion << '\n';
  out << "# flags: " << flags << '\n';
  if (fresh) out << columns << '\n';
  return out;
}

std::vector<double> parse_csv_doubles(const std::string& text, std::size_t expect, const char* what) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw InputError(std::string(what) + ": '" + item + "' is not a number");
    }
  }
  if (out.size() != expect) throw InputError(std::string(what) + " needs " + std::to_string(expect) + " values");
  return out;
}

struct BudgetFlags {
  int restarts = 128;
  int max_iter = 2048;
  double tol = 1e-8;
  std::uint64_t seed = 0;
  std::size_t max_sentences = 100000;
  double max_cost = std::numeric_limits<double>::infinity();
  bool serial = false;

  void attach(CLI::App* cmd) {
    cmd->add_option("--restarts", restarts, "LM restarts per segment")->check(CLI::PositiveNumber);
    cmd->add_option("--max-iter", max_iter, "LM iterations per restart")->check(CLI::PositiveNumber);
    cmd->add_option("--tol", tol, "per-term residual threshold")->check(CLI::PositiveNumber);
    cmd->add_option("--seed", seed, "RNG seed (default: $GULPS_SEED or 0)");
    cmd->add_option("--max-sentences", max_sentences, "sentence budget")->check(CLI::PositiveNumber);
    cmd->add_option("--max-cost", max_cost, "largest sentence cost to try")->check(CLI::PositiveNumber);
    cmd->add_flag("--serial", serial, "solve segments one after another");
  }

  SynthOptions options() const {
    SynthOptions o;
    o.restarts = restarts;
    o.max_iter = max_iter;
    o.tol = tol;
    o.seed = seed;
    o.max_sentences = max_sentences;
    o.max_cost = max_cost;
    o.parallel = !serial;
    return o;
  }
};

// ---------------------------------------------------------------- commands

int cmd_decompose(const std::string& isa_path, const std::string& target_spec, const std::string& out,
                  const BudgetFlags& budget) {
  const Isa isa = io::load_isa(isa_path);
  const Mat4 target = io::resolve_target(target_spec);
  const Decomposition d = decompose(target, isa, budget.options());
  emit(out, io::decomposition_to_json(d, isa, target).dump(2) + "\n");
  std::cerr << "sentence " << d.sentence.label(isa) << " cost " << d.sentence.total_cost << " distance "
            << d.distance << " (search " << d.timing.search_ms << " ms, lm " << d.timing.lm_ms << " ms)\n";
  return kExitOk;
}

int cmd_trajectory(const std::string& in, const std::string& out) {
  const io::LoadedDecomposition l = io::decomposition_from_json(io::read_json_file(in));
  std::ostringstream csv;
  io::write_trajectory_csv(csv, l.decomposition.trajectory);
  emit(out, csv.str());
  const VerifyReport rep = verify(l.decomposition, l.isa, l.target);
  if (rep.min_slack < -tol::row_slack) {
    std::cerr << "trajectory violates its segment rows (min slack " << rep.min_slack << ")\n";
    return kExitInput;
  }
  return kExitOk;
}

int cmd_verify(const std::string& in, const std::string& trajectory_csv, double tol) {
  const io::LoadedDecomposition l = io::decomposition_from_json(io::read_json_file(in));
  const VerifyReport rep = verify(l.decomposition, l.isa, l.target);
  bool ok = rep.distance <= tol && rep.min_slack >= -tol::row_slack;

  io::json report = {{"distance", rep.distance},
                     {"stored_distance", l.decomposition.distance},
                     {"segment_residuals", rep.segment_residuals},
                     {"min_slack", rep.min_slack}};
  if (!trajectory_csv.empty()) {
    std::ifstream csv(trajectory_csv);
    if (!csv) throw InputError("cannot read '" + trajectory_csv + "'");
    const std::vector<RawCoord> rows = io::read_trajectory_csv(csv);
    const auto& lifts = l.decomposition.trajectory.lifts;
    bool same = rows.size() == lifts.size();
    for (std::size_t i = 0; same && i < rows.size(); ++i)
      same = rows[i].c1 == lifts[i].c1 && rows[i].c2 == lifts[i].c2 && rows[i].c3 == lifts[i].c3;
    report["trajectory_matches"] = same;
    ok = ok && same;
  }
  report["ok"] = ok;
  std::cout << report.dump(2) << '\n';
  return ok ? kExitOk : kExitInput;
}

int cmd_polytope(const std::string& isa_path, const std::string& sentence, bool dump, const std::string& contains,
                 const std::string& out) {
  const Isa isa = io::load_isa(isa_path);
  std::vector<std::size_t> ids;
  std::stringstream ss(sentence);
  std::string id;
  while (std::getline(ss, id, ',')) ids.push_back(isa.index_of(id));
  if (ids.size() != 2) throw InputError("polytope queries need a sentence of exactly two gates");
  const LogSpec g1 = coords_to_logspec(isa[ids[0]].coords);
  const LogSpec g2 = coords_to_logspec(isa[ids[1]].coords);

  if (dump == !contains.empty()) throw InputError("give exactly one of --dump or --contains");
  if (!contains.empty()) {
    const auto c = parse_csv_doubles(contains, 3, "--contains");
    const CanonicalCoord point = weyl_canonicalize(RawCoord{c[0], c[1], c[2]});
    std::cout << (polytope_contains(g1, g2, point) ? "true" : "false") << '\n';
    return kExitOk;
  }
  const SegmentConstraints seg = instantiate_segment(g1, g2, std::nullopt, FreeDomain::Chamber);
  std::ostringstream csv;
  csv << "kind,coef_c1,coef_c2,coef_c3,constant\n";
  csv.precision(17);
  auto row = [&](const char* kind, const AffineRow& r) {
    csv << kind << ',' << r.coef[0] << ',' << r.coef[1] << ',' << r.coef[2] << ',' << r.constant << '\n';
  };
  for (const AffineRow& r : seg.qlr_rows) row("qlr", r);
  for (const AffineRow& r : seg.domain_rows) row("chamber", r);
  emit(out, csv.str());
  return kExitOk;
}

struct BenchFlags {
  std::string isa_path;
  std::string mode = "sentence-time";
  int n = 100;
  std::uint64_t seed = 0;
  std::string out;
  std::string histogram;
  int bins = 40;
  int jobs = 1;
  std::vector<int> depths{2, 3, 4, 5, 6};
  int trials = 10;
  std::string apex = "vertex";
};

int bench_sentence_time(const BenchFlags& f, const BudgetFlags& budget, const std::string& flags) {
  if (f.isa_path.empty()) throw InputError("sentence-time mode needs --isa");
  const Isa isa = io::load_isa(f.isa_path);
  const SynthOptions opts = budget.options();
  std::vector<SentenceTimeRow> rows(static_cast<std::size_t>(f.n));
  const std::size_t jobs = static_cast<std::size_t>(std::max(1, f.jobs));
  for (std::size_t start = 0; start < rows.size(); start += jobs) {
    std::vector<std::future<SentenceTimeRow>> batch;
    for (std::size_t i = start; i < std::min(rows.size(), start + jobs); ++i)
      batch.push_back(std::async(jobs > 1 ? std::launch::async : std::launch::deferred,
                                 [&, i] { return sentence_time(isa, f.seed + i, opts); }));
    for (std::size_t k = 0; k < batch.size(); ++k) rows[start + k] = batch[k].get();
  }

  std::ofstream csv = open_bench_csv(f.out, "seed,sentence,length,cost,search_ms,rejected", flags);
  csv.precision(17);
  std::vector<double> times;
  for (const SentenceTimeRow& r : rows) {
    std::string label = r.sentence.substr(1, r.sentence.size() - 2);
    std::replace(label.begin(), label.end(), ',', ' ');
    csv << r.seed << ',' << label << ',' << r.length << ',' << r.cost << ',' << r.search_ms << ',' << r.rejected
        << '\n';
    times.push_back(r.search_ms);
  }
  if (!f.histogram.empty()) {
    std::ostringstream h;
    write_histogram_csv(h, times, f.bins);
    io::write_text_file(f.histogram, h.str());
  }
  std::cerr << f.n << " targets, median sentence search " << median(times) << " ms\n";
  return kExitOk;
}

int bench_convergence(const BenchFlags& f, const BudgetFlags& budget, const std::string& flags) {
  GateDef gate = named_gate("iSWAP^1/4", "iSWAP^1/4", 1.0);
  if (!f.isa_path.empty()) {
    const Isa isa = io::load_isa(f.isa_path);
    if (isa.size() != 1) throw InputError("convergence mode needs a single-gate ISA");
    gate = isa[0];
  }
  ConvergenceOptions o;
  o.trials = f.trials;
  o.restarts = budget.restarts;
  o.max_iter = budget.max_iter;
  o.tol = budget.tol;
  o.seed = f.seed;
  if (f.apex == "vertex")
    o.apex = ApexRule::MaxCoordSum;
  else if (f.apex == "slack")
    o.apex = ApexRule::MaxMinSlack;
  else
    throw InputError("--apex must be vertex or slack");

  std::ofstream csv = open_bench_csv(
      f.out,
      "depth,target_c1,target_c2,target_c3,trials,converged_trials,trial_fraction,restarts_run,restarts_converged,"
      "restart_fraction,wall_ms",
      flags);
  csv.precision(17);
  for (int depth : f.depths) {
    const ConvergenceRow r = convergence_at_depth(gate, depth, o);
    csv << r.depth << ',' << r.target.c1 << ',' << r.target.c2 << ',' << r.target.c3 << ',' << r.trials << ','
        << r.converged_trials << ',' << r.trial_fraction() << ',' << r.restarts_run << ',' << r.restarts_converged
        << ',' << r.restart_fraction() << ',' << r.wall_ms << '\n';
    csv.flush();
    std::cerr << "depth " << depth << ": " << r.converged_trials << "/" << r.trials << " trials converged\n";
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"GULPS two-qubit synthesis: LP-planned trajectories stitched by numeric segments"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string("gulps ") + io::kToolVersion);

  BudgetFlags budget;

  auto* dec = app.add_subcommand("decompose", "decompose a target over an ISA");
  std::string isa_path;
  std::string target;
  std::string out;
  dec->add_option("--isa", isa_path, "ISA JSON file")->required();
  dec->add_option("--target", target, "name:NAME, haar:SEED, or a JSON matrix file")->required();
  dec->add_option("--out", out, "output JSON (default stdout)");
  budget.attach(dec);

  auto* traj = app.add_subcommand("trajectory", "export a decomposition's Weyl-chamber trajectory as CSV");
  std::string in;
  traj->add_option("--in", in, "decomposition JSON")->required();
  traj->add_option("--out", out, "output CSV (default stdout)");

  auto* ver = app.add_subcommand("verify", "recompute a decomposition's distance, residuals and slack");
  std::string traj_csv;
  double verify_tol = tol::assembly;
  ver->add_option("--in", in, "decomposition JSON")->required();
  ver->add_option("--trajectory", traj_csv, "trajectory CSV to compare with the stored one");
  ver->add_option("--tol", verify_tol, "largest acceptable distance");

  auto* poly = app.add_subcommand("polytope", "depth-2 circuit polytope rows and membership");
  std::string sentence;
  bool dump = false;
  std::string contains;
  poly->add_option("--isa", isa_path, "ISA JSON file")->required();
  poly->add_option("--sentence", sentence, "two gate ids, comma-separated")->required();
  poly->add_flag("--dump", dump, "write the instantiated rows as CSV");
  poly->add_option("--contains", contains, "chamber point c1,c2,c3 (units of pi)");
  poly->add_option("--out", out, "CSV for --dump (default stdout)");

  auto* bench = app.add_subcommand("bench", "benchmark campaigns");
  BenchFlags bf;
  bench->add_option("--isa", bf.isa_path, "ISA JSON file");
  bench->add_option("--mode", bf.mode, "sentence-time | convergence")
      ->check(CLI::IsMember({"sentence-time", "convergence"}));
  bench->add_option("--n", bf.n, "number of Haar targets")->check(CLI::PositiveNumber);
  bench->add_option("--seed", bf.seed, "first target seed (default: $GULPS_SEED or 0)");
  bench->add_option("--out", bf.out, "CSV to append to")->required();
  bench->add_option("--histogram", bf.histogram, "search-time histogram CSV");
  bench->add_option("--bins", bf.bins, "histogram bins")->check(CLI::PositiveNumber);
  bench->add_option("--jobs", bf.jobs, "targets processed concurrently")->check(CLI::PositiveNumber);
  bench->add_option("--depths", bf.depths, "convergence depths")->check(CLI::Range(2, 6));
  bench->add_option("--trials", bf.trials, "convergence trials per depth")->check(CLI::PositiveNumber);
  bench->add_option("--apex", bf.apex, "vertex | slack");
  bench->add_option("--restarts", budget.restarts, "LM restarts")->check(CLI::PositiveNumber);
  bench->add_option("--max-iter", budget.max_iter, "LM iterations")->check(CLI::PositiveNumber);
  bench->add_option("--tol", budget.tol, "per-term residual threshold")->check(CLI::PositiveNumber);

  try {
    budget.seed = default_seed();
    bf.seed = budget.seed;
    app.parse(argc, argv);
    if (*dec) return cmd_decompose(isa_path, target, out, budget);
    if (*traj) return cmd_trajectory(in, out);
    if (*ver) return cmd_verify(in, traj_csv, verify_tol);
    if (*poly) return cmd_polytope(isa_path, sentence, dump, contains, out);
    if (*bench) {
      const std::string flags = flag_line(argc, argv);
      return bf.mode == "convergence" ? bench_convergence(bf, budget, flags) : bench_sentence_time(bf, budget, flags);
    }
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitInput;
  } catch (const InputError& e) {
    std::cerr << "gulps: " << e.what() << '\n';
    return kExitInput;
  } catch (const BudgetExhausted& e) {
    std::cerr << "gulps: " << e.what() << '\n';
    return kExitBudget;
  } catch (const Error& e) {
    std::cerr << "gulps: " << e.what() << '\n';
    return kExitNumerical;
  }
  return kExitOk;
}
