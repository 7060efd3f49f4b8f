// stocon: alignment-based conformance checking for stochastically known logs.

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "stocon/stocon.hpp"

namespace {

using namespace stocon;

bool looks_like_xml(const std::string& bytes) {
  for (char c : bytes) {
    if (c == ' ' || c == '\n' || c == '\r' || c == '\t') continue;
    return c == '<';
  }
  return false;
}

SystemNet load_net(const std::string& path, const std::string& final_marking) {
  const std::string bytes = read_file(path);
  std::optional<Marking> fm;
  if (!final_marking.empty()) fm = parse_marking_spec(final_marking);
  if (looks_like_xml(bytes)) return import_pnml(bytes, fm);
  SystemNet net = parse_net(bytes);
  if (fm) {
    net.final_marking = *fm;
    if (auto report = validate_net(net); !report.empty()) throw ParseError(report.front());
  }
  return net;
}

StochasticLog load_log(const std::string& path) {
  const std::string bytes = read_file(path);
  StochasticLog log;
  if (looks_like_xml(bytes)) {
    auto imported = import_xes(bytes);
    if (imported.skipped_events > 0)
      std::cerr << "warning: skipped " << imported.skipped_events << " event(s) without concept:name\n";
    log = std::move(imported.log);
  } else {
    log = parse_log(bytes);
  }
  for (const auto& w : timestamp_warnings(log)) std::cerr << "warning: " << w << "\n";
  return log;
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::string item;
  for (char c : s + ",") {
    if (c == ',') {
      if (!item.empty()) out.push_back(item);
      item.clear();
    } else if (c != ' ') {
      item += c;
    }
  }
  return out;
}

struct AlignArgs {
  std::string net, log, out, dump, final_marking;
  std::string profile = "stochastic";
  double tau_cost = 0.0;
  bool heuristic = false;
  std::size_t node_cap = 1'000'000;
};

int cmd_align(const AlignArgs& a) {
  const SystemNet model = load_net(a.net, a.final_marking);
  const StochasticLog log = load_log(a.log);
  CostProfile profile{parse_profile_kind(a.profile), a.tau_cost, 1.0};
  profile.validate();
  const auto result = align_log(model, log, profile, SearchOptions{a.heuristic, a.node_cap}, resolve_threads());
  write_file(a.out, result_csv(result, profile.kind));
  if (!a.dump.empty()) {
    std::string dump;
    for (const auto& o : result.outcomes) {
      dump += "# case " + o.case_id + "\n";
      if (o.alignment) dump += alignment_dump(*o.alignment);
      else dump += "# error: " + o.error + "\n";
    }
    write_file(a.dump, dump);
  }
  for (const auto& o : result.outcomes)
    if (!o.alignment) std::cerr << "case " << o.case_id << ": " << o.error << "\n";
  std::cerr << result.aligned() << " aligned, " << result.failures << " failed, mean cost "
            << format_number(result.mean_cost) << "\n";
  return result.failures == 0 ? 0 : 2;
}

struct PerturbArgs {
  std::string log, out, provenance;
  unsigned nt = 2;
  double pf = 0.75, tp = 1.0, fraction = 0.3;
  std::string mode = "none", split = "simplex";
  std::uint64_t seed = 0;
};

int cmd_perturb(const PerturbArgs& a) {
  const StochasticLog log = load_log(a.log);
  PerturbConfig cfg;
  cfg.n_parallel = a.nt;
  cfg.original_prob = a.pf;
  cfg.uncertain_portion = a.tp;
  cfg.mode = parse_perturb_mode(a.mode);
  cfg.mode_fraction = a.fraction;
  cfg.seed = a.seed;
  if (a.split == "simplex") cfg.split = SplitRule::Simplex;
  else if (a.split == "equal") cfg.split = SplitRule::Equal;
  else throw DomainError("unknown split rule '" + a.split + "'");
  const auto generated = generate_experiment_log(log, cfg, resolve_threads());
  write_file(a.out, serialize_log(generated.log));
  write_file(a.provenance.empty() ? a.out + ".provenance.json" : a.provenance,
             serialize_provenance(generated, cfg));
  return 0;
}

struct SweepArgs {
  std::string net, log, out_dir, final_marking;
  std::string pf = "0.55,0.75,0.95", nt = "2,3,4", modes = "none", profiles = "stochastic,lower-bound";
  double tp_step = 0.05, fraction = 0.3;
  std::uint64_t seed = 0;
  unsigned reps = 1;
  bool no_heuristic = false;
  std::size_t node_cap = 1'000'000;
};

int cmd_sweep(const SweepArgs& a) {
  const SystemNet model = load_net(a.net, a.final_marking);
  const StochasticLog log = load_log(a.log);
  SweepSpec spec;
  spec.pf.clear();
  for (const auto& s : split_list(a.pf)) spec.pf.push_back(std::stod(s));
  spec.nt.clear();
  for (const auto& s : split_list(a.nt)) spec.nt.push_back(static_cast<unsigned>(std::stoul(s)));
  spec.modes.clear();
  for (const auto& s : split_list(a.modes)) spec.modes.push_back(parse_perturb_mode(s));
  spec.profiles.clear();
  for (const auto& s : split_list(a.profiles)) spec.profiles.push_back(parse_profile_kind(s));
  spec.tp_step = a.tp_step;
  spec.mode_fraction = a.fraction;
  spec.seed = a.seed;
  spec.repetitions = a.reps;
  spec.search = SearchOptions{!a.no_heuristic, a.node_cap};
  const auto result = run_sweep(model, log, spec, resolve_threads());
  write_sweep(result, a.out_dir);
  for (const auto& c : result.checks)
    std::cerr << (c.passed ? "PASS " : "FAIL ") << c.name << " [" << c.scope << "] " << c.detail << "\n";
  if (!result.errors.empty()) std::cerr << result.errors.size() << " error(s), see errors.csv\n";
  return result.all_checks_passed() && result.errors.empty() ? 0 : 2;
}

struct OracleArgs {
  std::string net, log, final_marking;
  std::string profile = "stochastic";
  double tau_cost = 0.0;
  std::uint64_t cap = 4096;
};

int cmd_oracle(const OracleArgs& a) {
  const SystemNet model = load_net(a.net, a.final_marking);
  const StochasticLog log = load_log(a.log);
  CostProfile profile{parse_profile_kind(a.profile), a.tau_cost, 1.0};
  std::size_t failed = 0;
  for (const auto& trace : log.traces) {
    std::string line = trace.case_id + "\t";
    try {
      const double search = align_trace(model, trace, profile, SearchOptions{true}).total_cost;
      const double brute = brute_force_alignment(model, trace, profile, a.cap).total_cost;
      const bool ok = std::abs(search - brute) <= 1e-9;
      failed += ok ? 0 : 1;
      line += "search=" + format_number(search) + "\tbrute=" + format_number(brute) + "\t" + (ok ? "PASS" : "FAIL");
    } catch (const std::exception& e) {
      ++failed;
      line += std::string("ERROR\t") + e.what();
    }
    std::cout << line << "\n";
  }
  std::cout << (failed == 0 ? "PASS" : "FAIL") << ": " << log.traces.size() - failed << "/" << log.traces.size()
            << " traces agree within 1e-9\n";
  return failed == 0 ? 0 : 2;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Conformance checking over stochastically known event logs"};
  app.require_subcommand(1);

  AlignArgs align;
  auto* sa = app.add_subcommand("align", "Align every trace of a log against a model");
  sa->add_option("--net", align.net, "Model net (JSON or PNML)")->required();
  sa->add_option("--log", align.log, "Stochastic log (JSON) or XES")->required();
  sa->add_option("--profile", align.profile, "stochastic | deterministic | lower-bound");
  sa->add_option("--tau-cost", align.tau_cost, "Cost of silent model moves");
  sa->add_flag("--heuristic", align.heuristic, "Use A* with the remaining-events heuristic");
  sa->add_option("--node-cap", align.node_cap, "Max explored markings per trace");
  sa->add_option("--final-marking", align.final_marking, "Final marking, e.g. p9:1 (required for PNML without one)");
  sa->add_option("--dump", align.dump, "Write per-move alignment details here");
  sa->add_option("--out", align.out, "Result CSV")->required();

  PerturbArgs perturb;
  auto* sp = app.add_subcommand("perturb", "Generate a stochastic log from a deterministic one");
  sp->add_option("--log", perturb.log)->required();
  sp->add_option("--nt", perturb.nt, "Alternatives per uncertain event")->required();
  sp->add_option("--pf", perturb.pf, "Probability kept by the original activity")->required();
  sp->add_option("--tp", perturb.tp, "Portion of events made uncertain")->required();
  sp->add_option("--mode", perturb.mode, "none | relabel | swap | duplicate | all");
  sp->add_option("--fraction", perturb.fraction, "Portion of events touched by the mode");
  sp->add_option("--split", perturb.split, "simplex | equal");
  sp->add_option("--seed", perturb.seed)->required();
  sp->add_option("--provenance", perturb.provenance, "Sidecar path (default: OUT.provenance.json)");
  sp->add_option("--out", perturb.out)->required();

  SweepArgs sweep;
  auto* sw = app.add_subcommand("sweep", "Run the experiment grid and write figure CSVs");
  sw->add_option("--net", sweep.net)->required();
  sw->add_option("--log", sweep.log, "Deterministic log")->required();
  sw->add_option("--pf", sweep.pf, "Comma-separated P_f values");
  sw->add_option("--tp-step", sweep.tp_step, "T_p grid step");
  sw->add_option("--nt", sweep.nt, "Comma-separated N_t values");
  sw->add_option("--modes", sweep.modes, "Comma-separated modes");
  sw->add_option("--profiles", sweep.profiles, "Comma-separated profiles");
  sw->add_option("--fraction", sweep.fraction, "Portion of events touched by the mode");
  sw->add_option("--reps", sweep.reps, "Repetitions (seeds SEED..SEED+reps-1)");
  sw->add_option("--final-marking", sweep.final_marking);
  sw->add_option("--node-cap", sweep.node_cap);
  sw->add_flag("--no-heuristic", sweep.no_heuristic, "Plain Dijkstra");
  sw->add_option("--seed", sweep.seed)->required();
  sw->add_option("--out-dir", sweep.out_dir)->required();

  OracleArgs oracle;
  auto* so = app.add_subcommand("oracle", "Compare search against brute-force enumeration");
  so->add_option("--net", oracle.net)->required();
  so->add_option("--log", oracle.log)->required();
  so->add_option("--profile", oracle.profile);
  so->add_option("--tau-cost", oracle.tau_cost);
  so->add_option("--final-marking", oracle.final_marking);
  so->add_option("--cap", oracle.cap, "Max realizations per trace");

  std::string plot_csv, plot_out, plot_x, plot_y = "mean_cost";
  auto* pl = app.add_subcommand("plot", "Render a sweep CSV as an SVG line chart");
  pl->add_option("--csv", plot_csv)->required();
  pl->add_option("--x", plot_x, "x column (default: first numeric column)");
  pl->add_option("--y", plot_y, "y column");
  pl->add_option("--out", plot_out)->required();

  std::string xes_in, xes_out;
  auto* ix = app.add_subcommand("import-xes", "Convert an XES log to the stochastic log format");
  ix->add_option("--xes", xes_in)->required();
  ix->add_option("--out", xes_out)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 1;
  }

  try {
    if (*sa) return cmd_align(align);
    if (*sp) return cmd_perturb(perturb);
    if (*sw) return cmd_sweep(sweep);
    if (*so) return cmd_oracle(oracle);
    if (*pl) {
      PlotOptions opt;
      opt.x_column = plot_x;
      opt.y_column = plot_y;
      write_file(plot_out, render_line_chart(parse_csv(read_file(plot_csv)), opt));
      return 0;
    }
    if (*ix) {
      auto imported = import_xes(read_file(xes_in));
      if (imported.skipped_events > 0)
        std::cerr << "warning: skipped " << imported.skipped_events << " event(s) without concept:name\n";
      write_file(xes_out, serialize_log(imported.log));
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
