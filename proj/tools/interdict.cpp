// interdict: command-line front end.
//
//   interdict solve-opf   --out DIR [--heatwave-factor F]
//   interdict attack      --out DIR --budget B [--cost-ratio R] [--heatwave-factor F]
//   interdict scenario    --config FILE --out DIR
//   interdict sweep-gamma --config FILE --out DIR
//   interdict sweep-beta  --config FILE --out DIR
//   interdict verify      --solution DIR
//
// Exit codes: 0 success, 1 bad input or usage, 2 solver failure or a run
// that does not verify.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "interdict/attacker.hpp"
#include "interdict/dcopf.hpp"
#include "interdict/network.hpp"
#include "interdict/report.hpp"
#include "interdict/scenario.hpp"

#ifndef INTERDICT_DATA_DIR
#define INTERDICT_DATA_DIR "data"
#endif

namespace {

using namespace interdict;

struct Args {
  std::string network, demand, config, out, solution, kind;
  std::optional<double> budget, cost_ratio, heatwave_factor;
  std::optional<unsigned> seed;
  bool dump_lp = false;
  double tol = 1e-5;
};

struct Inputs {
  ScenarioConfig cfg;
  PowerNetwork net;
  DemandProfile demand;
  RunInputs paths;
};

std::string absolute(const std::string& p) { return std::filesystem::absolute(p).lexically_normal().string(); }

Inputs load_inputs(const Args& a) {
  Inputs in;
  if (!a.config.empty()) in.cfg = load_config(a.config);
  if (!a.kind.empty()) in.cfg.kind = parse_scenario_kind(a.kind);
  if (a.budget) in.cfg.budget = *a.budget;
  if (a.cost_ratio) in.cfg.cost_ratio = *a.cost_ratio;
  if (a.heatwave_factor) in.cfg.heatwave_factor = *a.heatwave_factor;
  in.cfg.validate();
  std::string net = !a.network.empty() ? a.network : in.cfg.network;
  std::string dem = !a.demand.empty() ? a.demand : in.cfg.demand;
  if (net.empty()) net = std::string(INTERDICT_DATA_DIR) + "/synthetic16.json";
  if (dem.empty()) dem = std::string(INTERDICT_DATA_DIR) + "/synthetic16_demand.csv";
  in.net = load_network(net);
  in.demand = load_demand(dem, in.net);
  in.paths = {absolute(net), absolute(dem)};
  return in;
}

void print_result(const ScenarioResult& r, const std::string& out, std::size_t files) {
  std::printf("%s: unserved %s MWh (%s%% of demand), customers affected %lld\n", to_string(r.kind),
              csv::fmt6(r.unserved_energy).c_str(), csv::fmt6(r.percent_unserved).c_str(), r.customers_affected);
  if (r.peak_shed > 0.0)
    std::printf("  peak shed %s MW at %s hour %d\n", csv::fmt6(r.peak_shed).c_str(), r.seasons[r.peak_season].c_str(),
                r.peak_hour);
  if (has_attacker(r.kind))
    std::printf("  budget %s, %zu attack components, %ld MILP solves\n", csv::fmt6(r.budget).c_str(),
                r.strategy.size(), r.milp_solves);
  std::printf("  wrote %zu files to %s\n", files, out.c_str());
}

void dump_lp_file(const std::filesystem::path& path, const LpProblem& p, const std::vector<int>& bins = {}) {
  std::ofstream f(path);
  if (!f) throw std::runtime_error("cannot write '" + path.string() + "'");
  write_lp(f, p, bins);
}

int cmd_solve_opf(const Args& a) {
  auto in = load_inputs(a);
  in.cfg.kind = a.heatwave_factor && *a.heatwave_factor != 1.0 ? ScenarioKind::heatwave : ScenarioKind::baseline;
  const auto r = run_scenario(in.cfg, in.net, in.demand);
  const auto files = export_results(r, in.net, a.out, in.paths);
  if (a.dump_lp) {
    const auto dir = std::filesystem::path(a.out) / "lp";
    std::filesystem::create_directories(dir);
    const auto d = has_heat(r.kind) ? apply_heatwave(in.demand, in.cfg.heatwave_factor) : in.demand;
    for (int s = 0; s < d.num_seasons(); ++s)
      for (int h = 0; h < d.num_hours(); ++h)
        dump_lp_file(dir / ("opf_" + d.seasons()[s] + "_h" + std::to_string(h) + ".lp"), build_dcopf(in.net, d, s, h));
  }
  print_result(r, a.out, files.size());
  return 0;
}

int cmd_attack(const Args& a) {
  auto in = load_inputs(a);
  in.cfg.kind =
      a.heatwave_factor && *a.heatwave_factor != 1.0 ? ScenarioKind::compound : ScenarioKind::cyberattack;
  const auto r = run_scenario(in.cfg, in.net, in.demand);
  const auto files = export_results(r, in.net, a.out, in.paths);
  if (a.dump_lp) {
    // The hourly models at the even budget split, as the decomposition starts.
    const auto dir = std::filesystem::path(a.out) / "lp";
    std::filesystem::create_directories(dir);
    const auto d = has_heat(r.kind) ? apply_heatwave(in.demand, in.cfg.heatwave_factor) : in.demand;
    const auto costs = uniform_attack_costs(in.net, in.cfg.gen_cost, in.cfg.cost_ratio, in.cfg.budget);
    const auto M = default_bigm(in.net, d.max_voll());
    for (int s = 0; s < d.num_seasons(); ++s)
      for (int h = 0; h < d.num_hours(); ++h) {
        const auto m = build_hourly_attack_milp(in.net, hour_data(d, s, h), costs, in.cfg.budget / d.num_hours(), M);
        dump_lp_file(dir / ("attack_" + d.seasons()[s] + "_h" + std::to_string(h) + ".lp"), m.lp, m.binaries);
      }
  }
  print_result(r, a.out, files.size());
  return 0;
}

int cmd_scenario(const Args& a) {
  auto in = load_inputs(a);
  const auto r = run_scenario(in.cfg, in.net, in.demand);
  const auto files = export_results(r, in.net, a.out, in.paths);
  print_result(r, a.out, files.size());
  return 0;
}

int cmd_sweep(const Args& a, bool gamma) {
  auto in = load_inputs(a);
  const auto pts = gamma ? gamma_sweep(in.cfg, in.net, in.demand) : beta_sweep(in.cfg, in.net, in.demand);
  export_sweep(pts, gamma ? "gamma" : "beta", in.net, a.out, in.paths);
  std::printf("%-9s %-10s %-10s %-10s %-16s %-16s\n", "iteration", gamma ? "gamma" : "beta", "gen_cost", "flow_cost",
              "cyber_mwh", "compound_mwh");
  for (const auto& p : pts)
    std::printf("%-9d %-10s %-10s %-10s %-16s %-16s\n", p.iteration, csv::fmt6(p.multiplier).c_str(),
                csv::fmt6(p.gen_cost).c_str(), csv::fmt6(p.flow_cost).c_str(),
                csv::fmt6(p.cyberattack.unserved_energy).c_str(), csv::fmt6(p.compound.unserved_energy).c_str());
  std::printf("wrote %s/sweep_summary.csv\n", a.out.c_str());
  return 0;
}

int cmd_verify(const Args& a) {
  const auto rep = verify_run(a.solution, a.tol, a.network, a.demand);
  std::printf("checked %d operator points, %d failed, worst residual %.3g (%s)\n", rep.checked, rep.failed, rep.worst,
              rep.worst_at.c_str());
  return rep.failed == 0 && rep.checked > 0 ? 0 : 2;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Cyber-physical interdiction planner on a DC power network"};
  app.require_subcommand(1);
  Args a;

  auto common = [&](CLI::App* c) {
    c->add_option("--network", a.network, "network JSON (default: bundled synthetic16)");
    c->add_option("--demand", a.demand, "demand CSV: season,hour,node,demand_mw,voll");
    c->add_option("--config", a.config, "scenario config (key = value)");
    c->add_option("--budget", a.budget, "attacker budget per season");
    c->add_option("--cost-ratio", a.cost_ratio, "flow attack cost / generation attack cost");
    c->add_option("--heatwave-factor", a.heatwave_factor, "demand multiplier for the heatwave");
    c->add_option("--seed", a.seed, "seed for randomized checks (runs themselves are deterministic)");
    c->add_flag("--dump-lp", a.dump_lp, "also write the LP/MILP models as text under OUT/lp");
  };
  auto with_out = [&](CLI::App* c) {
    common(c);
    c->add_option("--out", a.out, "output directory")->required();
  };

  auto* opf = app.add_subcommand("solve-opf", "plain DC-OPF for every hour");
  with_out(opf);
  auto* att = app.add_subcommand("attack", "attacker on baseline demand (compound with --heatwave-factor)");
  with_out(att);
  auto* scn = app.add_subcommand("scenario", "one named scenario from a config file");
  with_out(scn);
  scn->add_option("--kind", a.kind, "baseline, heatwave, cyberattack or compound (overrides the config)");
  auto* sg = app.add_subcommand("sweep-gamma", "six-step attack-cost ladder, both attack scenarios");
  with_out(sg);
  auto* sb = app.add_subcommand("sweep-beta", "six-step budget ladder, both attack scenarios");
  with_out(sb);
  auto* ver = app.add_subcommand("verify", "KKT check of a saved run directory");
  ver->add_option("--solution", a.solution, "run directory written by another subcommand")->required();
  ver->add_option("--tol", a.tol, "residual tolerance")->capture_default_str();
  ver->add_option("--network", a.network, "override the network recorded in the manifest");
  ver->add_option("--demand", a.demand, "override the demand recorded in the manifest");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  try {
    if (*opf) return cmd_solve_opf(a);
    if (*att) return cmd_attack(a);
    if (*scn) return cmd_scenario(a);
    if (*sg) return cmd_sweep(a, true);
    if (*sb) return cmd_sweep(a, false);
    if (*ver) return cmd_verify(a);
  } catch (const SolverError& e) {
    std::fprintf(stderr, "solver failure: %s\n", e.what());
    return 2;
  } catch (const ValidationError& e) {
    std::fprintf(stderr, "invalid input: %s\n", e.what());
    return 1;
  } catch (const ParseError& e) {
    std::fprintf(stderr, "invalid input: %s\n", e.what());
    return 1;
  } catch (const DimensionError& e) {
    std::fprintf(stderr, "invalid input: %s\n", e.what());
    return 1;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 1;
}
