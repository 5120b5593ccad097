// Command-line front end: run scenario files under the simulator and
// verify the traces they produce.

#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "rwc/export.hpp"
#include "rwc/sim.hpp"
#include "rwc/verifier.hpp"

namespace {

struct RunOptions {
  std::string scenario_path;
  std::string trace_path;
  std::string dot_path;
  std::optional<std::uint64_t> seed;
  std::optional<int> m;
  std::optional<std::string> variant;
  std::uint64_t horizon = 10000;
  std::uint64_t snapshot_every = 0;
  std::string delay = "1:10";
  std::string awaken = "1:10";
  bool fifo = false;
  bool quiet = false;
};

std::pair<rwc::SimTime, rwc::SimTime> parse_range(const std::string& s) {
  auto colon = s.find(':');
  if (colon == std::string::npos)
    throw CLI::ValidationError("range must be lo:hi");
  return {std::stoll(s.substr(0, colon)), std::stoll(s.substr(colon + 1))};
}

int cmd_run(const RunOptions& opt) {
  rwc::Scenario sc;
  try {
    sc = rwc::parse_scenario_file(opt.scenario_path);
    if (opt.seed) sc.seed = *opt.seed;
    if (opt.m) sc.m = *opt.m;
    if (opt.variant)
      sc.variant = *opt.variant == "mobile" ? rwc::Variant::Mobile
                                            : rwc::Variant::Static;
    rwc::validate_scenario(sc);
  } catch (const rwc::ScenarioError& e) {
    std::cerr << "scenario error: " << opt.scenario_path << ":" << e.what()
              << "\n";
    return 1;
  }

  rwc::RunConfig cfg;
  cfg.seed = sc.seed;
  cfg.m = sc.m;
  cfg.variant = sc.variant;
  cfg.horizon_events = opt.horizon;
  std::tie(cfg.delay_lo, cfg.delay_hi) = parse_range(opt.delay);
  std::tie(cfg.awaken_lo, cfg.awaken_hi) = parse_range(opt.awaken);
  cfg.fifo_links = opt.fifo;

  const std::string trace_path =
      opt.trace_path.empty() ? opt.scenario_path + ".trace" : opt.trace_path;
  std::ofstream trace_out(trace_path);
  if (!trace_out) {
    std::cerr << "cannot write trace file " << trace_path << "\n";
    return 1;
  }
  rwc::TraceWriter writer(&trace_out);

  rwc::Simulator sim(sc, cfg, &writer);
  bool legitimate = false;
  std::optional<std::uint64_t> legit_ev, correct_ev;
  while (sim.step()) {
    if (opt.snapshot_every && sim.events() % opt.snapshot_every == 0)
      writer.snapshot(sim.snapshot(), sim.events(), sim.now());
    if (!correct_ev && rwc::is_correct(sim.snapshot()).ok)
      correct_ev = sim.events();
    if (rwc::is_legitimate(sim.snapshot(), sc.m).ok) {
      if (!legit_ev) legit_ev = sim.events();
      if (!sim.mobility_pending()) {
        legitimate = true;
        break;
      }
    }
  }
  if (!legitimate) legitimate = rwc::is_legitimate(sim.snapshot(), sc.m).ok;
  sim.write_footer(legitimate);
  writer.snapshot(sim.snapshot(), sim.events(), sim.now());

  auto ec = rwc::make_clustering(sim.snapshot(), sc.m, sc.variant);
  if (!opt.quiet) {
    std::cout << emit_clustering(ec);
    std::cout << "# events=" << sim.events() << " t=" << sim.now()
              << " converged=" << (legitimate ? 1 : 0);
    if (legit_ev) std::cout << " legitimate_at=" << *legit_ev;
    if (correct_ev) std::cout << " correct_at=" << *correct_ev;
    std::cout << "\n# trace: " << trace_path << "\n";
  }
  if (!opt.dot_path.empty()) {
    std::ofstream dot(opt.dot_path);
    if (!dot) {
      std::cerr << "cannot write " << opt.dot_path << "\n";
      return 1;
    }
    dot << rwc::emit_dot(ec, sim.snapshot().topo);
  }
  return legitimate ? 0 : 2;
}

int cmd_verify(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    std::cerr << "cannot open trace file " << path << "\n";
    return 2;
  }
  std::vector<rwc::TraceLine> lines;
  rwc::TraceCheckResult res;
  try {
    lines = rwc::parse_trace(in);
    res = rwc::verify_trace(lines);
  } catch (const rwc::ScenarioError& e) {
    std::cerr << "malformed trace: " << path << ":" << e.what() << "\n";
    return 2;
  }
  if (!res.ok) {
    std::cout << "violation at event " << res.ev_index << " (line " << res.line
              << "): " << res.violation << "\n";
    return 1;
  }
  std::cout << "ok: " << res.events << " events";
  if (res.first_correct_ev) std::cout << ", correct from event " << *res.first_correct_ev;
  if (res.first_legitimate_ev)
    std::cout << ", legitimate from event " << *res.first_legitimate_ev;
  std::cout << ", final correct=" << (res.final_correct ? 1 : 0)
            << " legitimate=" << (res.final_legitimate ? 1 : 0) << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"random-walk token clustering simulator"};
  app.require_subcommand(1);

  RunOptions run;
  auto* run_cmd = app.add_subcommand("run", "simulate a scenario file");
  run_cmd->add_option("scenario", run.scenario_path, "scenario file")->required();
  run_cmd->add_option("--trace", run.trace_path, "trace output path");
  run_cmd->add_option("--seed", run.seed, "override the scenario seed");
  run_cmd->add_option("--m", run.m, "override the minimum cluster size");
  run_cmd->add_option("--variant", run.variant, "override the variant")
      ->check(CLI::IsMember({"static", "mobile"}));
  run_cmd->add_option("--horizon", run.horizon, "event budget");
  run_cmd->add_option("--snapshot-every", run.snapshot_every,
                      "emit a snapshot block every N events");
  run_cmd->add_option("--export-dot", run.dot_path, "write a graphviz rendering");
  run_cmd->add_option("--delay", run.delay, "message delay range lo:hi");
  run_cmd->add_option("--awaken", run.awaken, "awakening interval range lo:hi");
  run_cmd->add_flag("--fifo", run.fifo, "per-link FIFO delivery");
  run_cmd->add_flag("--quiet", run.quiet, "suppress the stdout summary");

  std::string verify_path;
  auto* verify_cmd = app.add_subcommand("verify", "replay and check a trace");
  verify_cmd->add_option("trace", verify_path, "trace file")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (run_cmd->parsed()) return cmd_run(run);
    return cmd_verify(verify_path);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
