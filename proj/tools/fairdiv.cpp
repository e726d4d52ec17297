// fairdiv command-line tool.
//
//   fairdiv gen    -n 3 -m 8 --dist uniform --lo 1 --hi 50 --seed 7 > inst.json
//   fairdiv mms    --instance inst.json [--epsilon 1/12]
//   fairdiv solve  --instance inst.json --goal ef1-mms [--epsilon p/q] [--delta p/q]
//   fairdiv verify --instance inst.json --allocation report.json [--alpha p/q] [--notion efx|ef1|mms]
//   fairdiv bench  --corpus dir [--goals mms,efx-mms,ef1-mms] [--jobs 4]
//   fairdiv scale  --instance raw.json --bound 100
//
// Exit codes: 0 ok, 1 usage, 2 validation, 3 invariant breach.

#include <iostream>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "fairdiv/io.hpp"
#include "fairdiv/solvers.hpp"
#include "fairdiv/verify.hpp"
#include "fairdiv/workbench.hpp"

using namespace fairdiv;
namespace wb = fairdiv::workbench;

namespace {

struct Globals {
  int exact_cap = kDefaultExactCap;
  std::string trace_path;
};

void emit(const std::string& text, const std::string& out_path) {
  if (out_path.empty() || out_path == "-") {
    std::cout << text;
  } else {
    io::write_text_file(out_path, text);
  }
}

std::string pretty(const io::Json& j) { return j.dump(2) + "\n"; }

Instance load_instance(const std::string& path) { return io::instance_from_json(io::read_json_file(path)); }

Ratio ratio_arg(const std::string& text) { return text.empty() ? Ratio(0) : Ratio::parse(text); }

std::vector<Value> exact_shares(const Instance& inst, int cap) {
  std::vector<Value> out;
  for (AgentId i = 0; i < inst.agents(); ++i) out.push_back(mms_exact(inst, i, inst.agents(), cap).value);
  return out;
}

int fail(int code, const char* kind, const std::string& message) {
  io::Json j{{"error", kind}, {"message", message}};
  std::cerr << j.dump() << "\n";
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Fair allocation of indivisible goods: MMS, EFX and EF1 solvers and checkers"};
  app.require_subcommand(1);
  Globals globals;
  app.add_option("--exact-cap", globals.exact_cap, "Largest number of goods for the exact MMS engine")
      ->check(CLI::NonNegativeNumber);
  app.add_option("--trace", globals.trace_path, "Write the solver trace as JSON to this file");
  app.fallthrough();

  // gen
  auto* gen = app.add_subcommand("gen", "Generate a random instance");
  wb::GenSpec spec;
  std::string dist = "uniform", prob = "1/2", gen_out;
  gen->add_option("-n,--agents", spec.n, "Number of agents")->default_val(3);
  gen->add_option("-m,--goods", spec.m, "Number of goods")->default_val(8);
  gen->add_option("--dist", dist, "uniform | bivalued | identical")->default_val("uniform");
  gen->add_option("--lo", spec.lo, "Smallest value (uniform, identical)")->default_val(1);
  gen->add_option("--hi", spec.hi, "Largest value (uniform, identical)")->default_val(50);
  gen->add_option("--a", spec.a, "Bivalued value taken with probability p")->default_val(1);
  gen->add_option("--b", spec.b, "Bivalued value taken otherwise")->default_val(2);
  gen->add_option("--p", prob, "Bivalued probability as p/q")->default_val("1/2");
  gen->add_option("--seed", spec.seed, "Random seed")->default_val(0);
  gen->add_option("-o,--out", gen_out, "Output file (default stdout)");

  // mms
  auto* mms = app.add_subcommand("mms", "Maximin shares with witness partitions");
  std::string mms_inst, mms_eps, mms_out;
  int mms_parts = 0;
  mms->add_option("-i,--instance", mms_inst, "Instance JSON")->required();
  mms->add_option("--epsilon", mms_eps, "Use the approximate engine with this p/q slack");
  mms->add_option("--parts", mms_parts, "Number of parts (default: number of agents)");
  mms->add_option("-o,--out", mms_out, "Output file (default stdout)");

  // solve
  auto* solve = app.add_subcommand("solve", "Compute an allocation");
  std::string solve_inst, goal = "ef1-mms", solve_eps, solve_delta, solve_out;
  bool envy_all = false;
  solve->add_option("-i,--instance", solve_inst, "Instance JSON")->required();
  solve->add_option("--goal", goal, "mms | efx-mms | ef1-mms")->default_val("ef1-mms");
  solve->add_option("--epsilon", solve_eps, "MMS slack as p/q (0 means exact 2/3)");
  solve->add_option("--delta", solve_delta, "EFX/EF1 slack as p/q");
  solve->add_flag("--strict-envy", envy_all, "Let unallocated agents take part in refinement (experimental)");
  solve->add_option("-o,--out", solve_out, "Output file (default stdout)");

  // verify
  auto* verify = app.add_subcommand("verify", "Check an allocation");
  std::string ver_inst, ver_alloc, ver_alpha = "1", notion, ver_out;
  verify->add_option("-i,--instance", ver_inst, "Instance JSON")->required();
  verify->add_option("-a,--allocation", ver_alloc, "Allocation JSON or a solve report")->required();
  verify->add_option("--alpha", ver_alpha, "Approximation factor as p/q")->default_val("1");
  verify->add_option("--notion", notion, "efx | ef1 | mms (default: all)")
      ->check(CLI::IsMember({"efx", "ef1", "mms"}));
  verify->add_option("-o,--out", ver_out, "Output file (default stdout)");

  // bench
  auto* bench = app.add_subcommand("bench", "Run solvers over a corpus and report CSV");
  std::string corpus, goals = "mms,efx-mms,ef1-mms", bench_eps, bench_delta, bench_out;
  int jobs = 1;
  bool no_timing = false;
  bench->add_option("-c,--corpus", corpus, "Directory of instance JSON files")->required();
  bench->add_option("--goals", goals, "Comma-separated goals")->default_val("mms,efx-mms,ef1-mms");
  bench->add_option("--epsilon", bench_eps, "MMS slack as p/q");
  bench->add_option("--delta", bench_delta, "EFX/EF1 slack as p/q");
  bench->add_option("-j,--jobs", jobs, "Worker threads across instances")->default_val(1)->check(CLI::PositiveNumber);
  bench->add_flag("--no-timing", no_timing, "Write 0 in the wall_millis column");
  bench->add_option("-o,--out", bench_out, "Output file (default stdout)");

  // scale
  auto* scale = app.add_subcommand("scale", "Turn decimal or fractional valuations into integers");
  std::string scale_inst, scale_out;
  std::int64_t bound = 1000;
  scale->add_option("-i,--instance", scale_inst, "Instance JSON with numeric strings")->required();
  scale->add_option("--bound", bound, "Largest allowed denominator")->default_val(1000);
  scale->add_option("-o,--out", scale_out, "Output file (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (*gen) {
      spec.distribution = wb::parse_distribution(dist);
      spec.p = Ratio::parse(prob);
      emit(wb::cmd_gen(spec), gen_out);
    } else if (*mms) {
      Instance inst = load_instance(mms_inst);
      int parts = mms_parts > 0 ? mms_parts : inst.agents();
      io::Json out = io::Json::array();
      for (AgentId i = 0; i < inst.agents(); ++i) {
        MmsRecord r = mms_eps.empty() ? mms_exact(inst, i, parts, globals.exact_cap)
                                      : mms_approx(inst, i, parts, Ratio::parse(mms_eps), globals.exact_cap);
        out.push_back(io::record_to_json(r));
      }
      emit(pretty(out), mms_out);
    } else if (*solve) {
      Instance inst = load_instance(solve_inst);
      SolverConfig cfg;
      cfg.epsilon = ratio_arg(solve_eps);
      cfg.delta = ratio_arg(solve_delta);
      cfg.exact_cap = globals.exact_cap;
      cfg.trace = !globals.trace_path.empty();
      if (envy_all) cfg.envy_scope = EnvyScope::AllAgents;
      SolveReport rep = wb::run_goal(wb::parse_goal(goal), inst, cfg);
      io::Json j{{"goal", goal}, {"epsilon", cfg.epsilon.str()}, {"delta", cfg.delta.str()}};
      j.update(io::report_to_json(rep));
      if (cfg.trace) io::write_text_file(globals.trace_path, pretty(io::trace_to_json(rep.trace)));
      emit(pretty(j), solve_out);
    } else if (*verify) {
      Instance inst = load_instance(ver_inst);
      io::Json aj = io::read_json_file(ver_alloc);
      PartialAllocation x = io::allocation_from_json(aj.contains("allocation") ? aj.at("allocation") : aj);
      if (auto bad = validate_allocation(inst, x)) throw ValidationError("allocation invalid: " + *bad);
      Ratio alpha = Ratio::parse(ver_alpha);
      std::optional<std::vector<Value>> shares;
      if (notion.empty() || notion == "mms") {
        try {
          shares = exact_shares(inst, globals.exact_cap);
        } catch (const ValidationError&) {
          if (notion == "mms") throw;
        }
      }
      FairnessReport rep = shares ? fairness_report(inst, x, alpha, std::span<const Value>(*shares))
                                  : fairness_report(inst, x, alpha);
      io::Json j = io::fairness_to_json(rep);
      if (shares) j["mms"] = *shares;
      if (!notion.empty()) {
        io::Json narrowed{{"notion", notion}, {"alpha", j["alpha"]}};
        if (notion == "efx") {
          narrowed["pass"] = j["efx_pass"];
          narrowed["factor"] = j["efx_factor"];
          narrowed["witnesses"] = j["efx_witnesses"];
        } else if (notion == "ef1") {
          narrowed["pass"] = j["ef1_pass"];
          narrowed["factor"] = j["ef1_factor"];
          narrowed["witnesses"] = j["ef1_witnesses"];
        } else {
          narrowed["pass"] = j["mms_pass"];
          narrowed["ratio"] = j["mms_ratio"];
          narrowed["mms"] = j["mms"];
        }
        j = narrowed;
      }
      emit(pretty(j), ver_out);
    } else if (*bench) {
      wb::BenchOptions opts;
      opts.goals.clear();
      std::stringstream ss(goals);
      for (std::string g; std::getline(ss, g, ',');) {
        if (!g.empty()) opts.goals.push_back(wb::parse_goal(g));
      }
      opts.epsilon = ratio_arg(bench_eps);
      opts.delta = ratio_arg(bench_delta);
      opts.jobs = jobs;
      opts.exact_cap = globals.exact_cap;
      emit(wb::cmd_bench(corpus, opts, no_timing), bench_out);
    } else if (*scale) {
      emit(wb::cmd_scale(io::read_json_file(scale_inst), bound), scale_out);
    }
  } catch (const InvariantError& e) {
    return fail(3, "invariant", e.what());
  } catch (const ValidationError& e) {
    return fail(2, "validation", e.what());
  } catch (const nlohmann::json::exception& e) {
    return fail(2, "validation", e.what());
  } catch (const std::exception& e) {
    return fail(3, "internal", e.what());
  }
  return 0;
}
