#ifndef INTERDICT_SCENARIO_HPP
#define INTERDICT_SCENARIO_HPP

// The four named scenarios and the two sensitivity ladders.
//
//   Baseline      plain DC-OPF on the demand file
//   Heatwave      plain DC-OPF on demand scaled by the heatwave factor
//   Cyberattack   attacker (decomposition + refinement) on baseline demand
//   Compound      attacker on heatwave demand
//
// Each season gets its own budget; hours within a season share it.

#include <algorithm>
#include <cctype>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "interdict/attacker.hpp"
#include "interdict/csv.hpp"
#include "interdict/dcopf.hpp"
#include "interdict/errors.hpp"
#include "interdict/network.hpp"

namespace interdict {

enum class ScenarioKind { baseline, heatwave, cyberattack, compound };

inline const char* to_string(ScenarioKind k) {
  switch (k) {
    case ScenarioKind::baseline: return "baseline";
    case ScenarioKind::heatwave: return "heatwave";
    case ScenarioKind::cyberattack: return "cyberattack";
    case ScenarioKind::compound: return "compound";
  }
  return "?";
}

inline ScenarioKind parse_scenario_kind(std::string s) {
  for (auto& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  if (s == "baseline") return ScenarioKind::baseline;
  if (s == "heatwave") return ScenarioKind::heatwave;
  if (s == "cyberattack" || s == "cyber") return ScenarioKind::cyberattack;
  if (s == "compound") return ScenarioKind::compound;
  throw ValidationError("unknown scenario kind '" + s + "' (baseline, heatwave, cyberattack, compound)");
}

inline bool has_attacker(ScenarioKind k) { return k == ScenarioKind::cyberattack || k == ScenarioKind::compound; }
inline bool has_heat(ScenarioKind k) { return k == ScenarioKind::heatwave || k == ScenarioKind::compound; }

struct ScenarioConfig {
  ScenarioKind kind = ScenarioKind::baseline;
  double heatwave_factor = 1.09;
  double cost_ratio = 5.0;  // flow cost / generation cost
  double gen_cost = 1.0;    // budget units per MW of generation
  double budget = 0.0;      // per season
  int gamma_iterations = 6;
  int beta_iterations = 6;
  int refine_steps = 2;
  // Optional input paths; relative paths are taken from the config file's directory.
  std::string network;
  std::string demand;

  void validate() const {
    if (!(heatwave_factor > 0.0) || !std::isfinite(heatwave_factor))
      throw ValidationError("heatwave_factor must be positive");
    if (!(cost_ratio > 0.0) || !std::isfinite(cost_ratio)) throw ValidationError("cost_ratio must be positive");
    if (!(gen_cost > 0.0) || !std::isfinite(gen_cost)) throw ValidationError("gen_cost must be positive");
    if (!(budget >= 0.0) || !std::isfinite(budget)) throw ValidationError("budget must be nonnegative");
    // Flow cost reaches zero at iteration 11.
    if (gamma_iterations < 1 || gamma_iterations > 10) throw ValidationError("gamma_iterations must be in 1..10");
    if (beta_iterations < 1) throw ValidationError("beta_iterations must be at least 1");
    if (refine_steps < 1) throw ValidationError("refine_steps must be at least 1");
  }
};

/// Flat `key = value` text, one per line, `#` starts a comment.
inline ScenarioConfig parse_config(std::istream& in, const std::string& where) {
  ScenarioConfig c;
  std::string line;
  int lineno = 0;
  auto number = [&](const std::string& v, const std::string& at) {
    try {
      return csv::to_double(v, at);
    } catch (const ParseError&) {
      throw ValidationError(at + ": not a number: '" + v + "'");
    }
  };
  auto integer = [&](const std::string& v, const std::string& at) {
    try {
      return csv::to_int(v, at);
    } catch (const ParseError&) {
      throw ValidationError(at + ": not an integer: '" + v + "'");
    }
  };
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    if (csv::trim(line).empty()) continue;
    const std::string at = where + ":" + std::to_string(lineno);
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ValidationError(at + ": expected key = value");
    const std::string key = csv::trim(std::string_view(line).substr(0, eq));
    const std::string val = csv::trim(std::string_view(line).substr(eq + 1));
    if (key == "kind") c.kind = parse_scenario_kind(val);
    else if (key == "heatwave_factor") c.heatwave_factor = number(val, at);
    else if (key == "cost_ratio") c.cost_ratio = number(val, at);
    else if (key == "gen_cost") c.gen_cost = number(val, at);
    else if (key == "budget") c.budget = number(val, at);
    else if (key == "gamma_iterations") c.gamma_iterations = integer(val, at);
    else if (key == "beta_iterations") c.beta_iterations = integer(val, at);
    else if (key == "refine_steps") c.refine_steps = integer(val, at);
    else if (key == "network") c.network = val;
    else if (key == "demand") c.demand = val;
    else throw ValidationError(at + ": unknown key '" + key + "'");
  }
  c.validate();
  return c;
}

inline ScenarioConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open config '" + path + "'");
  auto c = parse_config(in, path);
  const auto dir = std::filesystem::path(path).parent_path();
  for (auto* p : {&c.network, &c.demand})
    if (!p->empty() && std::filesystem::path(*p).is_relative()) *p = (dir / *p).lexically_normal().string();
  return c;
}

inline std::string config_text(const ScenarioConfig& c) {
  std::ostringstream o;
  o << "kind = " << to_string(c.kind) << "\n"
    << "heatwave_factor = " << csv::fmt_exact(c.heatwave_factor) << "\n"
    << "cost_ratio = " << csv::fmt_exact(c.cost_ratio) << "\n"
    << "gen_cost = " << csv::fmt_exact(c.gen_cost) << "\n"
    << "budget = " << csv::fmt_exact(c.budget) << "\n"
    << "gamma_iterations = " << c.gamma_iterations << "\n"
    << "beta_iterations = " << c.beta_iterations << "\n"
    << "refine_steps = " << c.refine_steps << "\n";
  if (!c.network.empty()) o << "network = " << c.network << "\n";
  if (!c.demand.empty()) o << "demand = " << c.demand << "\n";
  return o.str();
}

struct ShockRow {
  std::string region;
  std::string sector = "Utilities";
  double percent_reduction = 0.0;
};

/// One component of an attack, as exported.
struct StrategyRow {
  std::string season;
  int hour = 0;
  std::string type;  // gen, flow, angle
  std::string entity;
  double z = 0.0;
  double spend = 0.0;
};

struct ScenarioResult {
  ScenarioKind kind = ScenarioKind::baseline;
  double demand_factor = 1.0;  // scaling actually applied to the demand file
  double budget = 0.0;
  double gen_cost = 0.0, flow_cost = 0.0;
  std::vector<std::string> seasons;
  std::vector<std::string> nodes;
  // [season][hour][node], MW
  std::vector<std::vector<std::vector<double>>> unserved;
  std::vector<std::vector<std::vector<double>>> demand;
  std::vector<std::vector<OpfSolution>> opf;       // [season][hour]
  std::vector<std::vector<HourAttack>> attacks;    // [season][hour], empty without an attacker
  std::vector<StrategyRow> strategy;
  double unserved_energy = 0.0;  // MWh over every season's 24 hours
  double demand_energy = 0.0;
  double percent_unserved = 0.0;
  long long customers_affected = 0;
  double peak_shed = 0.0;  // MW, summed over nodes
  int peak_season = 0, peak_hour = 0;
  std::vector<ShockRow> shock;
  long milp_solves = 0;
  bool bigm_valid = true;
  std::vector<std::vector<int>> bigm_attempts;  // [season][hour], empty without an attacker
  std::vector<std::vector<double>> allotments;  // [season][hour] budget share, empty without an attacker

  double season_unserved(int s) const {
    double t = 0.0;
    for (const auto& h : unserved.at(s))
      for (double u : h) t += u;
    return t;
  }
};

namespace detail {

// Solver noise below this many MW is reported as zero shed.
inline constexpr double kShedFloor = 1e-9;

inline std::vector<double> shed_of(const std::vector<double>& u) {
  std::vector<double> out(u);
  for (double& x : out)
    if (x < kShedFloor) x = 0.0;
  return out;
}

// Re-throws `fn`'s solver errors with the scenario name in front.
template <class F>
auto with_context(const std::string& ctx, F&& fn) {
  try {
    return fn();
  } catch (const BigMInvalidError& e) {
    throw BigMInvalidError(ctx + ": " + e.what());
  } catch (const SolverError& e) {
    throw SolverError(ctx + ": " + e.what());
  }
}

inline void summarize(const PowerNetwork& net, ScenarioResult& r) {
  const int S = static_cast<int>(r.seasons.size()), N = net.num_nodes();
  r.unserved_energy = r.demand_energy = 0.0;
  r.peak_shed = 0.0;
  r.peak_season = r.peak_hour = 0;
  std::vector<double> zu(N, 0.0), zd(N, 0.0);
  for (int s = 0; s < S; ++s)
    for (int h = 0; h < DemandProfile::kHours; ++h) {
      double shed = 0.0;
      for (int n = 0; n < N; ++n) {
        shed += r.unserved[s][h][n];
        zu[n] += r.unserved[s][h][n];
        zd[n] += r.demand[s][h][n];
        r.demand_energy += r.demand[s][h][n];
      }
      r.unserved_energy += shed;
      if (shed > r.peak_shed) r.peak_shed = shed, r.peak_season = s, r.peak_hour = h;
    }
  r.percent_unserved = r.demand_energy > 0.0 ? 100.0 * r.unserved_energy / r.demand_energy : 0.0;
  r.customers_affected =
      r.demand_energy > 0.0 ? std::llround(r.unserved_energy / r.demand_energy * net.total_customers) : 0;
  r.shock.clear();
  for (int n = 0; n < N; ++n) {
    ShockRow row;
    row.region = net.nodes[n].id;
    row.percent_reduction = zd[n] > 0.0 ? std::clamp(100.0 * zu[n] / zd[n], 0.0, 100.0) : 0.0;
    r.shock.push_back(row);
  }
  std::sort(r.shock.begin(), r.shock.end(), [](const ShockRow& a, const ShockRow& b) { return a.region < b.region; });
}

inline void collect_strategy(const PowerNetwork& net, const AttackCosts& c, ScenarioResult& r) {
  r.strategy.clear();
  const double tiny = 1e-9;
  for (std::size_t s = 0; s < r.attacks.size(); ++s)
    for (std::size_t h = 0; h < r.attacks[s].size(); ++h) {
      const auto& a = r.attacks[s][h];
      for (int k = 0; k < net.num_generators(); ++k)
        if (a.zg[k] > tiny)
          r.strategy.push_back({r.seasons[s], static_cast<int>(h), "gen", net.generators[k].id, a.zg[k], c.gen[k] * a.zg[k]});
      for (int e = 0; e < net.num_edges(); ++e) {
        if (a.zf[e] > tiny)
          r.strategy.push_back({r.seasons[s], static_cast<int>(h), "flow", net.edges[e].id, a.zf[e], c.flow[e] * a.zf[e]});
        if (a.zth[e] > tiny)
          r.strategy.push_back(
              {r.seasons[s], static_cast<int>(h), "angle", net.edges[e].id, a.zth[e], c.angle[e] * a.zth[e]});
      }
    }
}

}  // namespace detail

/// Runs one scenario with explicit attack costs (the sweeps vary them).
inline ScenarioResult run_scenario_with(ScenarioKind kind, double heat, int refine_steps, const AttackCosts& costs,
                                        const PowerNetwork& net, const DemandProfile& base,
                                        const AttackOptions& opt = {}) {
  const std::string ctx = to_string(kind);
  const DemandProfile d = has_heat(kind) ? apply_heatwave(base, heat) : base;
  ScenarioResult r;
  r.kind = kind;
  r.demand_factor = has_heat(kind) ? heat : 1.0;
  r.budget = costs.budget;
  r.gen_cost = costs.gen.empty() ? 0.0 : costs.gen[0];
  r.flow_cost = costs.flow.empty() ? 0.0 : costs.flow[0];
  r.seasons = d.seasons();
  for (const auto& n : net.nodes) r.nodes.push_back(n.id);
  const int S = d.num_seasons(), H = d.num_hours(), N = net.num_nodes();
  r.unserved.assign(S, std::vector<std::vector<double>>(H, std::vector<double>(N, 0.0)));
  r.demand = r.unserved;
  r.opf.assign(S, {});
  for (int s = 0; s < S; ++s) {
    std::vector<HourData> hours;
    for (int h = 0; h < H; ++h) hours.push_back(hour_data(d, s, h));
    for (int h = 0; h < H; ++h) r.demand[s][h] = hours[h].demand;
    if (!has_attacker(kind)) {
      for (int h = 0; h < H; ++h) {
        auto o = detail::with_context(ctx, [&] { return solve_dcopf(net, hours[h]); });
        o.season = s;
        o.hour = h;
        r.unserved[s][h] = detail::shed_of(o.u);
        r.opf[s].push_back(std::move(o));
      }
      continue;
    }
    const std::string sctx = ctx + " (season " + r.seasons[s] + ")";
    HourlyAttacker attacker(net, hours, costs, default_bigm(net, d.max_voll()), opt);
    AttackPlan plan = detail::with_context(sctx, [&] { return solve_decomposition(attacker, costs.budget, refine_steps); });
    r.milp_solves += plan.milp_solves;
    r.bigm_valid = r.bigm_valid && plan.bigm_valid;
    for (int h = 0; h < H; ++h) {
      plan.opf[h].season = s;
      plan.opf[h].hour = h;
      r.unserved[s][h] = detail::shed_of(plan.opf[h].u);
    }
    r.opf[s] = std::move(plan.opf);
    r.attacks.push_back(std::move(plan.hours));
    r.bigm_attempts.push_back(std::move(plan.bigm_attempts));
    r.allotments.push_back(std::move(plan.allotment));
  }
  detail::collect_strategy(net, costs, r);
  detail::summarize(net, r);
  return r;
}

inline ScenarioResult run_scenario(const ScenarioConfig& cfg, const PowerNetwork& net, const DemandProfile& d,
                                   const AttackOptions& opt = {}) {
  cfg.validate();
  d.validate(net);
  const auto costs = uniform_attack_costs(net, cfg.gen_cost, cfg.cost_ratio, cfg.budget);
  return run_scenario_with(cfg.kind, cfg.heatwave_factor, cfg.refine_steps, costs, net, d, opt);
}

/// One rung of a sensitivity ladder, with both attack scenarios.
struct SweepPoint {
  int iteration = 1;
  double multiplier = 1.0;  // gamma^(i) or beta^(i)
  double gen_cost = 0.0, flow_cost = 0.0, budget = 0.0;
  ScenarioResult cyberattack, compound;

  double gen_over_flow() const { return gen_cost / flow_cost; }
};

/// (1 - 0.1 (i-1)) / (1 + 0.1 (i-1)): the factor on the flow-to-generation
/// price ratio at iteration i.
inline double gamma_multiplier(int i) { return (1.0 - 0.1 * (i - 1)) / (1.0 + 0.1 * (i - 1)); }
inline double beta_multiplier(int i) { return 1.0 + 0.2 * (i - 1); }

namespace detail {

inline SweepPoint sweep_point(int i, double mult, double gen_cost, double ratio, double budget, const ScenarioConfig& cfg,
                              const PowerNetwork& net, const DemandProfile& d, const AttackOptions& opt) {
  SweepPoint p;
  p.iteration = i;
  p.multiplier = mult;
  const auto costs = uniform_attack_costs(net, gen_cost, ratio, budget);
  p.gen_cost = costs.gen.empty() ? gen_cost : costs.gen[0];
  p.flow_cost = costs.flow.empty() ? gen_cost * ratio : costs.flow[0];
  p.budget = budget;
  p.cyberattack = run_scenario_with(ScenarioKind::cyberattack, cfg.heatwave_factor, cfg.refine_steps, costs, net, d, opt);
  p.compound = run_scenario_with(ScenarioKind::compound, cfg.heatwave_factor, cfg.refine_steps, costs, net, d, opt);
  return p;
}

}  // namespace detail

/// Generation price times (1 + 0.1 (i-1)), flow price times (1 - 0.1 (i-1)).
inline std::vector<SweepPoint> gamma_sweep(const ScenarioConfig& cfg, const PowerNetwork& net, const DemandProfile& d,
                                           const AttackOptions& opt = {}) {
  cfg.validate();
  d.validate(net);
  std::vector<SweepPoint> out;
  for (int i = 1; i <= cfg.gamma_iterations; ++i) {
    const double up = 1.0 + 0.1 * (i - 1), down = 1.0 - 0.1 * (i - 1);
    const double gen = cfg.gen_cost * up;
    const double ratio = cfg.cost_ratio * down / up;
    out.push_back(detail::sweep_point(i, gamma_multiplier(i), gen, ratio, cfg.budget, cfg, net, d, opt));
  }
  return out;
}

/// Budget times 1 + 0.2 (i-1).
inline std::vector<SweepPoint> beta_sweep(const ScenarioConfig& cfg, const PowerNetwork& net, const DemandProfile& d,
                                          const AttackOptions& opt = {}) {
  cfg.validate();
  d.validate(net);
  std::vector<SweepPoint> out;
  for (int i = 1; i <= cfg.beta_iterations; ++i) {
    const double m = beta_multiplier(i);
    out.push_back(detail::sweep_point(i, m, cfg.gen_cost, cfg.cost_ratio, cfg.budget * m, cfg, net, d, opt));
  }
  return out;
}

}  // namespace interdict

#endif
