#ifndef INTERDICT_REPORT_HPP
#define INTERDICT_REPORT_HPP

// Result files. Everything a person reads is written with six significant
// digits; the two files `verify` re-checks (opf_solution.csv, attack_z.csv)
// keep full precision. Layouts are listed in docs/formats.md.

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <map>
#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

#include "interdict/csv.hpp"
#include "interdict/dcopf.hpp"
#include "interdict/errors.hpp"
#include "interdict/kkt.hpp"
#include "interdict/milp.hpp"
#include "interdict/network.hpp"
#include "interdict/scenario.hpp"

namespace interdict {

/// Where the inputs of a run came from; recorded in manifest.json so that
/// `verify` can rebuild the operator problem.
struct RunInputs {
  std::string network;
  std::string demand;
};

struct ManifestEntry {
  std::string file;
  long rows = 0;  // data rows, header excluded
};

namespace detail {

class CsvOut {
public:
  CsvOut(const std::filesystem::path& path, const std::string& header) : path_(path), out_(path) {
    if (!out_) throw std::runtime_error("cannot write '" + path.string() + "'");
    out_ << header << '\n';
  }
  template <class... T>
  void row(const T&... cells) {
    bool first = true;
    ((out_ << (first ? "" : ",") << cells, first = false), ...);
    out_ << '\n';
    ++rows_;
  }
  ManifestEntry close() {
    out_.close();
    if (!out_) throw std::runtime_error("write failed for '" + path_.string() + "'");
    return {path_.filename().string(), rows_};
  }

private:
  std::filesystem::path path_;
  std::ofstream out_;
  long rows_ = 0;
};

inline std::vector<int> node_order(const ScenarioResult& r) {
  std::vector<int> ix(r.nodes.size());
  for (std::size_t i = 0; i < ix.size(); ++i) ix[i] = static_cast<int>(i);
  std::sort(ix.begin(), ix.end(), [&](int a, int b) { return r.nodes[a] < r.nodes[b]; });
  return ix;
}

inline void ensure_dir(const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec || !std::filesystem::is_directory(dir))
    throw std::runtime_error("cannot create directory '" + dir.string() + "'");
}

inline void write_json(const std::filesystem::path& path, const nlohmann::json& j) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
  out << j.dump(2) << '\n';
  if (!out) throw std::runtime_error("write failed for '" + path.string() + "'");
}

}  // namespace detail

/// Writes every result file of one scenario into `dir` and returns the
/// manifest (also written as manifest.json).
inline std::vector<ManifestEntry> export_results(const ScenarioResult& r, const PowerNetwork& net,
                                                 const std::string& dir, const RunInputs& inputs = {}) {
  namespace fs = std::filesystem;
  const fs::path root(dir);
  detail::ensure_dir(root);
  using csv::fmt6;
  std::vector<ManifestEntry> files;
  const auto order = detail::node_order(r);
  const int S = static_cast<int>(r.seasons.size());

  {
    detail::CsvOut f(root / "unserved_timeseries.csv", "season,hour,node,unserved_mw");
    for (int s = 0; s < S; ++s)
      for (int n : order)
        for (std::size_t h = 0; h < r.unserved[s].size(); ++h)
          f.row(r.seasons[s], h, r.nodes[n], fmt6(r.unserved[s][h][n]));
    files.push_back(f.close());
  }
  {
    detail::CsvOut f(root / "zonal_summary.csv",
                     "node,demand_mwh,unserved_mwh,percent_unserved,peak_unserved_mw,customers_affected");
    for (int n : order) {
      double dem = 0.0, uns = 0.0, peak = 0.0;
      for (int s = 0; s < S; ++s)
        for (std::size_t h = 0; h < r.unserved[s].size(); ++h) {
          dem += r.demand[s][h][n];
          uns += r.unserved[s][h][n];
          peak = std::max(peak, r.unserved[s][h][n]);
        }
      const double pct = dem > 0.0 ? 100.0 * uns / dem : 0.0;
      const long long cust = r.demand_energy > 0.0
                                 ? std::llround(uns / r.demand_energy * net.total_customers)
                                 : 0;
      f.row(r.nodes[n], fmt6(dem), fmt6(uns), fmt6(pct), fmt6(peak), cust);
    }
    files.push_back(f.close());
  }
  {
    auto rows = r.strategy;
    std::stable_sort(rows.begin(), rows.end(), [&](const StrategyRow& a, const StrategyRow& b) {
      const auto sa = std::find(r.seasons.begin(), r.seasons.end(), a.season);
      const auto sb = std::find(r.seasons.begin(), r.seasons.end(), b.season);
      if (sa != sb) return sa < sb;
      if (a.hour != b.hour) return a.hour < b.hour;
      if (a.type != b.type) return a.type < b.type;
      return a.entity < b.entity;
    });
    detail::CsvOut f(root / "attack_strategy.csv", "season,hour,type,entity,z,spend");
    for (const auto& x : rows) f.row(x.season, x.hour, x.type, x.entity, fmt6(x.z), fmt6(x.spend));
    files.push_back(f.close());
    detail::CsvOut g(root / "attack_z.csv", "season,hour,type,entity,z");
    for (const auto& x : rows) g.row(x.season, x.hour, x.type, x.entity, csv::fmt_exact(x.z));
    files.push_back(g.close());
  }
  {
    detail::CsvOut f(root / "shock.csv", "region,sector,percent_reduction");
    for (const auto& x : r.shock) f.row(x.region, x.sector, fmt6(x.percent_reduction));
    files.push_back(f.close());
  }
  {
    std::vector<OpfSolution> all;
    for (const auto& v : r.opf) all.insert(all.end(), v.begin(), v.end());
    save_opf_solutions((root / "opf_solution.csv").string(), net, r.seasons, all);
    files.push_back({"opf_solution.csv", static_cast<long>(all.size()) *
                                             (3L * net.num_generators() + 6L * net.num_edges() + 5L * net.num_nodes() + 2)});
  }

  nlohmann::json j;
  j["scenario"] = to_string(r.kind);
  j["network"] = inputs.network;
  j["demand"] = inputs.demand;
  j["demand_factor"] = r.demand_factor;
  j["budget"] = r.budget;
  j["gen_cost"] = r.gen_cost;
  j["flow_cost"] = r.flow_cost;
  j["seasons"] = r.seasons;
  j["unserved_mwh"] = csv::round6(r.unserved_energy);
  j["demand_mwh"] = csv::round6(r.demand_energy);
  j["percent_unserved"] = csv::round6(r.percent_unserved);
  j["customers_affected"] = r.customers_affected;
  j["peak_shed_mw"] = csv::round6(r.peak_shed);
  j["peak_season"] = r.seasons.empty() ? "" : r.seasons[r.peak_season];
  j["peak_hour"] = r.peak_hour;
  j["milp_solves"] = r.milp_solves;
  j["bigm_valid"] = r.bigm_valid;
  j["files"] = nlohmann::json::array();
  for (const auto& f : files) j["files"].push_back({{"file", f.file}, {"rows", f.rows}});
  detail::write_json(root / "manifest.json", j);
  files.push_back({"manifest.json", 0});
  return files;
}

/// One subdirectory per iteration (iter_1, iter_2, ... each holding a
/// cyberattack/ and compound/ export) plus sweep_summary.csv.
inline std::vector<ManifestEntry> export_sweep(const std::vector<SweepPoint>& pts, const char* param,
                                               const PowerNetwork& net, const std::string& dir,
                                               const RunInputs& inputs = {}) {
  namespace fs = std::filesystem;
  const fs::path root(dir);
  detail::ensure_dir(root);
  using csv::fmt6;
  for (const auto& p : pts) {
    const auto sub = root / ("iter_" + std::to_string(p.iteration));
    export_results(p.cyberattack, net, (sub / "cyberattack").string(), inputs);
    export_results(p.compound, net, (sub / "compound").string(), inputs);
  }
  detail::CsvOut f(root / "sweep_summary.csv", std::string("iteration,") + param +
                                                   ",gen_cost,flow_cost,budget,gen_over_flow,"
                                                   "cyberattack_unserved_mwh,compound_unserved_mwh");
  for (const auto& p : pts)
    f.row(p.iteration, fmt6(p.multiplier), fmt6(p.gen_cost), fmt6(p.flow_cost), fmt6(p.budget), fmt6(p.gen_over_flow()),
          fmt6(p.cyberattack.unserved_energy), fmt6(p.compound.unserved_energy));
  std::vector<ManifestEntry> files{f.close()};
  nlohmann::json j;
  j["sweep"] = param;
  j["iterations"] = static_cast<int>(pts.size());
  j["files"] = nlohmann::json::array();
  for (const auto& e : files) j["files"].push_back({{"file", e.file}, {"rows", e.rows}});
  for (const auto& p : pts) j["files"].push_back({{"file", "iter_" + std::to_string(p.iteration)}, {"rows", 0}});
  detail::write_json(root / "manifest.json", j);
  return files;
}

// ---------------------------------------------------------------------------
// Readers (round-trip checks and `verify`).

struct UnservedRow {
  std::string season;
  int hour = 0;
  std::string node;
  double mw = 0.0;
};

inline std::vector<UnservedRow> read_unserved(const std::string& path) {
  const auto t = csv::read(path, {"season", "hour", "node", "unserved_mw"});
  std::vector<UnservedRow> out;
  for (std::size_t i = 0; i < t.rows.size(); ++i) {
    const auto& r = t.rows[i];
    const auto at = path + ":" + std::to_string(t.line_numbers[i]);
    out.push_back({r[0], csv::to_int(r[1], at), r[2], csv::to_double(r[3], at)});
  }
  return out;
}

inline std::vector<ShockRow> read_shock(const std::string& path) {
  const auto t = csv::read(path, {"region", "sector", "percent_reduction"});
  std::vector<ShockRow> out;
  for (std::size_t i = 0; i < t.rows.size(); ++i) {
    const auto& r = t.rows[i];
    out.push_back({r[0], r[1], csv::to_double(r[2], path + ":" + std::to_string(t.line_numbers[i]))});
  }
  return out;
}

inline std::vector<StrategyRow> read_strategy(const std::string& path) {
  const auto t = csv::read(path, {"season", "hour", "type", "entity", "z", "spend"});
  std::vector<StrategyRow> out;
  for (std::size_t i = 0; i < t.rows.size(); ++i) {
    const auto& r = t.rows[i];
    const auto at = path + ":" + std::to_string(t.line_numbers[i]);
    out.push_back({r[0], csv::to_int(r[1], at), r[2], r[3], csv::to_double(r[4], at), csv::to_double(r[5], at)});
  }
  return out;
}

/// attack_z.csv back into per-hour attacks, [season][hour].
inline std::vector<std::vector<HourAttack>> read_attacks(const std::string& path, const PowerNetwork& net,
                                                         const std::vector<std::string>& seasons) {
  const auto t = csv::read(path, {"season", "hour", "type", "entity", "z"});
  const HourAttack zero{std::vector<double>(net.num_generators(), 0.0), std::vector<double>(net.num_edges(), 0.0),
                        std::vector<double>(net.num_edges(), 0.0), 0.0};
  std::vector<std::vector<HourAttack>> out(seasons.size(), std::vector<HourAttack>(DemandProfile::kHours, zero));
  for (std::size_t i = 0; i < t.rows.size(); ++i) {
    const auto& r = t.rows[i];
    const auto at = path + ":" + std::to_string(t.line_numbers[i]);
    const auto sit = std::find(seasons.begin(), seasons.end(), r[0]);
    if (sit == seasons.end()) throw ValidationError(at + ": unknown season '" + r[0] + "'");
    const int h = csv::to_int(r[1], at);
    if (h < 0 || h >= DemandProfile::kHours) throw ValidationError(at + ": hour must be in 0..23");
    auto& a = out[sit - seasons.begin()][h];
    const double z = csv::to_double(r[4], at);
    if (r[2] == "gen") {
      const int k = net.generator_index(r[3]);
      if (k < 0) throw ValidationError(at + ": unknown generator '" + r[3] + "'");
      a.zg[k] = z;
    } else if (r[2] == "flow" || r[2] == "angle") {
      const int e = net.edge_index(r[3]);
      if (e < 0) throw ValidationError(at + ": unknown edge '" + r[3] + "'");
      (r[2] == "flow" ? a.zf : a.zth)[e] = z;
    } else {
      throw ValidationError(at + ": unknown component type '" + r[2] + "'");
    }
  }
  return out;
}

struct VerifyReport {
  int checked = 0;
  int failed = 0;
  double worst = 0.0;
  std::string worst_at;
};

/// Re-checks every saved operator point of a run directory against the KKT
/// conditions of its (possibly attacked) hour.
inline VerifyReport verify_run(const std::string& dir, double tol = 1e-5, const std::string& network_override = {},
                               const std::string& demand_override = {}) {
  namespace fs = std::filesystem;
  const fs::path root(dir);
  std::ifstream in(root / "manifest.json");
  if (!in) throw ValidationError("no manifest.json in '" + dir + "'");
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError((root / "manifest.json").string() + ": " + e.what());
  }
  auto str = [&](const char* k) { return j.contains(k) && j[k].is_string() ? j[k].get<std::string>() : std::string(); };
  const std::string net_path = network_override.empty() ? str("network") : network_override;
  const std::string dem_path = demand_override.empty() ? str("demand") : demand_override;
  if (net_path.empty() || dem_path.empty()) throw ValidationError("manifest does not name the network and demand files");
  const auto net = load_network(net_path);
  auto d = load_demand(dem_path, net);
  const double factor = j.value("demand_factor", 1.0);
  if (factor != 1.0) d = apply_heatwave(d, factor);
  const auto sols = load_opf_solutions((root / "opf_solution.csv").string(), net, d.seasons());
  std::vector<std::vector<HourAttack>> attacks;
  if (fs::exists(root / "attack_z.csv")) attacks = read_attacks((root / "attack_z.csv").string(), net, d.seasons());
  VerifyReport rep;
  for (const auto& o : sols) {
    const HourAttack* a = attacks.empty() ? nullptr : &attacks[o.season][o.hour];
    const auto res = kkt_residuals(net, d, o, a);
    const double m = res.max_norm();
    ++rep.checked;
    if (!verify_equilibrium(res, tol)) ++rep.failed;
    if (m >= rep.worst) {
      rep.worst = m;
      rep.worst_at = d.seasons()[o.season] + " hour " + std::to_string(o.hour);
    }
  }
  return rep;
}

// ---------------------------------------------------------------------------
// LP text (CPLEX-like) for --dump-lp.

inline void write_lp(std::ostream& out, const LpProblem& p, const std::vector<int>& binaries = {}) {
  auto nm = [&](const std::string& s, char kind, int i) {
    std::string o = s.empty() ? std::string(1, kind) + std::to_string(i) : s;
    for (char& c : o)
      if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '.' || c == '[' || c == ']' || c == '@'))
        c = '_';
    return o;
  };
  auto expr = [&](const std::vector<Term>& terms) {
    std::string s;
    for (const auto& t : terms) {
      if (t.coef == 0.0) continue;
      s += (t.coef < 0 ? " - " : (s.empty() ? " " : " + "));
      s += csv::fmt_exact(std::abs(t.coef)) + " " + nm(p.col_names[t.col], 'x', t.col);
    }
    return s.empty() ? std::string(" 0") : s;
  };
  out << (p.sense == Sense::maximize ? "Maximize" : "Minimize") << "\n obj:";
  std::vector<Term> obj;
  for (int j = 0; j < p.num_cols(); ++j)
    if (p.cost[j] != 0.0) obj.push_back({j, p.cost[j]});
  out << expr(obj) << "\nSubject To\n";
  for (int i = 0; i < p.num_rows(); ++i) {
    const std::string name = nm(p.row_names[i], 'r', i);
    const double lo = p.row_lower[i], hi = p.row_upper[i];
    const std::string e = expr(p.rows[i]);
    if (lo == hi) out << ' ' << name << ':' << e << " = " << csv::fmt_exact(hi) << '\n';
    else if (lo == -kInf) out << ' ' << name << ':' << e << " <= " << csv::fmt_exact(hi) << '\n';
    else if (hi == kInf) out << ' ' << name << ':' << e << " >= " << csv::fmt_exact(lo) << '\n';
    else out << ' ' << name << ": " << csv::fmt_exact(lo) << " <=" << e << " <= " << csv::fmt_exact(hi) << '\n';
  }
  out << "Bounds\n";
  for (int j = 0; j < p.num_cols(); ++j) {
    const std::string name = nm(p.col_names[j], 'x', j);
    const double lo = p.col_lower[j], hi = p.col_upper[j];
    if (lo == -kInf && hi == kInf) out << ' ' << name << " free\n";
    else if (lo == -kInf) out << " -inf <= " << name << " <= " << csv::fmt_exact(hi) << '\n';
    else if (hi == kInf) out << ' ' << name << " >= " << csv::fmt_exact(lo) << '\n';
    else out << ' ' << csv::fmt_exact(lo) << " <= " << name << " <= " << csv::fmt_exact(hi) << '\n';
  }
  if (!binaries.empty()) {
    out << "Binaries\n";
    for (int j : binaries) out << ' ' << nm(p.col_names[j], 'x', j) << '\n';
  }
  out << "End\n";
}

}  // namespace interdict

#endif
