#ifndef INTERDICT_DCOPF_HPP
#define INTERDICT_DCOPF_HPP

// Lower-level DC optimal power flow for one (season, hour).
//
// Columns: g (per generator), f (per edge), u (per node), theta (per node).
// Rows:    balance  sum g + u - (A'f)_n = d_n        dual pi
//          flow     -f_e + B_e (A theta)_e = 0       dual pi_f
//          angle    -thmax_e <= (A theta)_e <= thmax_e
//          ref      theta_ref = 0                    dual delta
// f is measured in the edge direction (from -> to), so a positive flow
// leaves the start node. B_e is the susceptance times the MVA base.
//
// Bound multipliers are split from the signed LP duals: the lower-side
// multiplier is max(y, 0), the upper-side one max(-y, 0).
//
// Inside the LP, angles are carried as theta * S with S = max_e B_e, which
// keeps every coefficient near MW scale; results are reported in radians.

#include <algorithm>
#include <fstream>
#include <map>
#include <string>
#include <vector>

#include "interdict/csv.hpp"
#include "interdict/errors.hpp"
#include "interdict/lp.hpp"
#include "interdict/network.hpp"

namespace interdict {

/// Capacity withheld by the attacker in one hour. Empty vectors mean no attack.
struct HourAttack {
  std::vector<double> zg;   // MW per generator
  std::vector<double> zf;   // MW per edge
  std::vector<double> zth;  // rad per edge
  double spend = 0.0;

  bool empty() const { return zg.empty() && zf.empty() && zth.empty(); }
};

/// Demand and VOLL for one (season, hour), one entry per node.
struct HourData {
  std::vector<double> demand;
  std::vector<double> voll;
};

inline HourData hour_data(const DemandProfile& d, int s, int h) {
  HourData out;
  for (int n = 0; n < d.num_nodes(); ++n) {
    out.demand.push_back(d.demand(s, h, n));
    out.voll.push_back(d.voll(s, h, n));
  }
  return out;
}

/// Effective operating limits after an attack.
struct OpfLimits {
  std::vector<double> g_lo, g_hi, f_max, th_max;
};

inline OpfLimits opf_limits(const PowerNetwork& net, const HourAttack* attack) {
  OpfLimits l;
  const bool on = attack && !attack->empty();
  if (on && (static_cast<int>(attack->zg.size()) != net.num_generators() ||
             static_cast<int>(attack->zf.size()) != net.num_edges() ||
             static_cast<int>(attack->zth.size()) != net.num_edges()))
    throw DimensionError("attack vectors do not match the network");
  for (int k = 0; k < net.num_generators(); ++k) {
    l.g_lo.push_back(net.generators[k].p_min);
    l.g_hi.push_back(std::max(net.generators[k].p_min, net.generators[k].p_max - (on ? attack->zg[k] : 0.0)));
  }
  for (int e = 0; e < net.num_edges(); ++e) {
    l.f_max.push_back(std::max(0.0, net.edges[e].flow_limit - (on ? attack->zf[e] : 0.0)));
    l.th_max.push_back(std::max(0.0, net.edges[e].angle_limit - (on ? attack->zth[e] : 0.0)));
  }
  return l;
}

/// Column and row positions inside the OPF LP.
struct OpfLayout {
  int G = 0, E = 0, N = 0;
  int g0 = 0, f0 = 0, u0 = 0, th0 = 0;
  int bal0 = 0, flow0 = 0, ang0 = 0, ref = 0;
  double angle_scale = 1.0;
  int num_cols() const { return G + E + 2 * N; }
};

inline double angle_scale(const PowerNetwork& net) {
  double s = 1.0;
  for (int e = 0; e < net.num_edges(); ++e) s = std::max(s, net.flow_factor(e));
  return s;
}

inline OpfLayout opf_layout(const PowerNetwork& net) {
  OpfLayout l;
  l.G = net.num_generators();
  l.E = net.num_edges();
  l.N = net.num_nodes();
  l.g0 = 0;
  l.f0 = l.G;
  l.u0 = l.G + l.E;
  l.th0 = l.G + l.E + l.N;
  l.bal0 = 0;
  l.flow0 = l.N;
  l.ang0 = l.N + l.E;
  l.ref = l.N + 2 * l.E;
  l.angle_scale = angle_scale(net);
  return l;
}

inline LpProblem build_dcopf(const PowerNetwork& net, const HourData& hd, const HourAttack* attack = nullptr) {
  if (static_cast<int>(hd.demand.size()) != net.num_nodes() || static_cast<int>(hd.voll.size()) != net.num_nodes())
    throw DimensionError("hour data does not match the network");
  const auto L = opf_layout(net);
  const auto lim = opf_limits(net, attack);
  LpProblem p;
  for (int k = 0; k < L.G; ++k)
    p.add_col(net.generators[k].cost, lim.g_lo[k], lim.g_hi[k], "g[" + net.generators[k].id + "]");
  for (int e = 0; e < L.E; ++e) p.add_col(0.0, -lim.f_max[e], lim.f_max[e], "f[" + net.edges[e].id + "]");
  for (int n = 0; n < L.N; ++n) p.add_col(hd.voll[n], 0.0, hd.demand[n], "u[" + net.nodes[n].id + "]");
  for (int n = 0; n < L.N; ++n) p.add_col(0.0, -kInf, kInf, "theta[" + net.nodes[n].id + "]");

  std::vector<std::vector<Term>> bal(L.N);
  for (int k = 0; k < L.G; ++k) bal[net.generators[k].node].push_back({L.g0 + k, 1.0});
  for (int e = 0; e < L.E; ++e) {
    bal[net.edges[e].from].push_back({L.f0 + e, -1.0});
    bal[net.edges[e].to].push_back({L.f0 + e, 1.0});
  }
  for (int n = 0; n < L.N; ++n) {
    bal[n].push_back({L.u0 + n, 1.0});
    p.add_row(bal[n], hd.demand[n], hd.demand[n], "balance[" + net.nodes[n].id + "]");
  }
  for (int e = 0; e < L.E; ++e) {
    const auto& ed = net.edges[e];
    const double b = net.flow_factor(e) / L.angle_scale;
    p.add_row({{L.f0 + e, -1.0}, {L.th0 + ed.from, b}, {L.th0 + ed.to, -b}}, 0.0, 0.0, "flow[" + ed.id + "]");
  }
  for (int e = 0; e < L.E; ++e) {
    const auto& ed = net.edges[e];
    const double t = lim.th_max[e] * L.angle_scale;
    p.add_row({{L.th0 + ed.from, 1.0}, {L.th0 + ed.to, -1.0}}, -t, t, "angle[" + ed.id + "]");
  }
  p.add_row({{L.th0 + net.reference, 1.0}}, 0.0, 0.0, "ref[" + net.nodes[net.reference].id + "]");
  return p;
}

inline LpProblem build_dcopf(const PowerNetwork& net, const DemandProfile& d, int s, int h) {
  return build_dcopf(net, hour_data(d, s, h));
}

struct OpfSolution {
  int season = 0;
  int hour = 0;
  std::vector<double> g, f, u, theta;
  std::vector<double> pi, pi_f;
  std::vector<double> rho_g_lo, rho_g_hi;
  std::vector<double> rho_f_lo, rho_f_hi;
  std::vector<double> rho_th_lo, rho_th_hi;
  std::vector<double> rho_u_lo, rho_u_hi;
  double delta = 0.0;
  double objective = 0.0;

  double total_unserved() const {
    double t = 0.0;
    for (double v : u) t += v;
    return t;
  }
};

/// Unpacks an optimal OPF LP solution (or the OPF block of a larger problem).
inline OpfSolution extract_opf(const PowerNetwork& net, const LpSolution& s) {
  const auto L = opf_layout(net);
  OpfSolution o;
  auto pos = [](double v) { return v > 0.0 ? v : 0.0; };
  for (int k = 0; k < L.G; ++k) {
    o.g.push_back(s.x[L.g0 + k]);
    o.rho_g_lo.push_back(pos(s.reduced_cost[L.g0 + k]));
    o.rho_g_hi.push_back(pos(-s.reduced_cost[L.g0 + k]));
  }
  for (int e = 0; e < L.E; ++e) {
    o.f.push_back(s.x[L.f0 + e]);
    o.rho_f_lo.push_back(pos(s.reduced_cost[L.f0 + e]));
    o.rho_f_hi.push_back(pos(-s.reduced_cost[L.f0 + e]));
    o.pi_f.push_back(s.row_dual[L.flow0 + e]);
    o.rho_th_lo.push_back(pos(s.row_dual[L.ang0 + e]) * L.angle_scale);
    o.rho_th_hi.push_back(pos(-s.row_dual[L.ang0 + e]) * L.angle_scale);
  }
  for (int n = 0; n < L.N; ++n) {
    o.u.push_back(s.x[L.u0 + n]);
    o.rho_u_lo.push_back(pos(s.reduced_cost[L.u0 + n]));
    o.rho_u_hi.push_back(pos(-s.reduced_cost[L.u0 + n]));
    o.theta.push_back(s.x[L.th0 + n] / L.angle_scale);
    o.pi.push_back(s.row_dual[L.bal0 + n]);
  }
  o.delta = s.row_dual[L.ref] * L.angle_scale;
  o.objective = s.objective;
  return o;
}

/// Operating cost of a dispatch: generation cost plus VOLL-priced shedding.
inline double operating_cost(const PowerNetwork& net, const HourData& hd, const OpfSolution& o) {
  double c = 0.0;
  for (int k = 0; k < net.num_generators(); ++k) c += net.generators[k].cost * o.g[k];
  for (int n = 0; n < net.num_nodes(); ++n) c += hd.voll[n] * o.u[n];
  return c;
}

inline OpfSolution solve_dcopf(const PowerNetwork& net, const HourData& hd, const HourAttack* attack = nullptr) {
  const auto p = build_dcopf(net, hd, attack);
  const auto s = solve_lp(p);
  if (s.status != LpStatus::optimal)
    throw SolverError(std::string("dc-opf: LP returned ") + to_string(s.status));
  return extract_opf(net, s);
}

inline OpfSolution solve_dcopf(const PowerNetwork& net, const DemandProfile& d, int s, int h,
                               const HourAttack* attack = nullptr) {
  auto o = solve_dcopf(net, hour_data(d, s, h), attack);
  o.season = s;
  o.hour = h;
  return o;
}

// ---------------------------------------------------------------------------
// CSV: season,hour,entity,quantity,value
// Values use shortest round-trip formatting so a saved point certifies exactly
// as the in-memory one.

inline void write_opf_rows(std::ostream& out, const PowerNetwork& net, const std::vector<std::string>& seasons,
                           const OpfSolution& o) {
  const std::string pre = seasons.at(o.season) + "," + std::to_string(o.hour) + ",";
  auto put = [&](const std::string& entity, const char* q, double v) {
    out << pre << entity << ',' << q << ',' << csv::fmt_exact(v) << '\n';
  };
  for (int k = 0; k < net.num_generators(); ++k) {
    const auto& id = net.generators[k].id;
    put(id, "g", o.g[k]);
    put(id, "rho_g_lo", o.rho_g_lo[k]);
    put(id, "rho_g_hi", o.rho_g_hi[k]);
  }
  for (int e = 0; e < net.num_edges(); ++e) {
    const auto& id = net.edges[e].id;
    put(id, "f", o.f[e]);
    put(id, "pi_f", o.pi_f[e]);
    put(id, "rho_f_lo", o.rho_f_lo[e]);
    put(id, "rho_f_hi", o.rho_f_hi[e]);
    put(id, "rho_th_lo", o.rho_th_lo[e]);
    put(id, "rho_th_hi", o.rho_th_hi[e]);
  }
  for (int n = 0; n < net.num_nodes(); ++n) {
    const auto& id = net.nodes[n].id;
    put(id, "u", o.u[n]);
    put(id, "theta", o.theta[n]);
    put(id, "pi", o.pi[n]);
    put(id, "rho_u_lo", o.rho_u_lo[n]);
    put(id, "rho_u_hi", o.rho_u_hi[n]);
  }
  put("system", "delta", o.delta);
  put("system", "objective", o.objective);
}

inline void save_opf_solutions(const std::string& path, const PowerNetwork& net, const std::vector<std::string>& seasons,
                               const std::vector<OpfSolution>& sols) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  out << "season,hour,entity,quantity,value\n";
  for (const auto& o : sols) write_opf_rows(out, net, seasons, o);
  if (!out) throw std::runtime_error("write failed for '" + path + "'");
}

inline std::vector<OpfSolution> load_opf_solutions(const std::string& path, const PowerNetwork& net,
                                                   const std::vector<std::string>& seasons) {
  const auto t = csv::read(path, {"season", "hour", "entity", "quantity", "value"});
  std::map<std::pair<int, int>, OpfSolution> by_key;
  std::map<std::pair<int, int>, int> filled;
  std::map<std::string, int> gen_ix, edge_ix;
  for (int k = 0; k < net.num_generators(); ++k) gen_ix[net.generators[k].id] = k;
  for (int e = 0; e < net.num_edges(); ++e) edge_ix[net.edges[e].id] = e;
  const int G = net.num_generators(), E = net.num_edges(), N = net.num_nodes();
  const int expected = 3 * G + 6 * E + 5 * N + 2;
  for (std::size_t i = 0; i < t.rows.size(); ++i) {
    const auto& r = t.rows[i];
    const std::string where = path + ":" + std::to_string(t.line_numbers[i]);
    const auto sit = std::find(seasons.begin(), seasons.end(), r[0]);
    if (sit == seasons.end()) throw ValidationError(where + ": unknown season '" + r[0] + "'");
    const int s = static_cast<int>(sit - seasons.begin());
    const int h = csv::to_int(r[1], where);
    auto [it, fresh] = by_key.try_emplace({s, h});
    OpfSolution& o = it->second;
    if (fresh) {
      o.season = s;
      o.hour = h;
      o.g.assign(G, 0.0), o.rho_g_lo.assign(G, 0.0), o.rho_g_hi.assign(G, 0.0);
      o.f.assign(E, 0.0), o.pi_f.assign(E, 0.0), o.rho_f_lo.assign(E, 0.0), o.rho_f_hi.assign(E, 0.0);
      o.rho_th_lo.assign(E, 0.0), o.rho_th_hi.assign(E, 0.0);
      o.u.assign(N, 0.0), o.theta.assign(N, 0.0), o.pi.assign(N, 0.0), o.rho_u_lo.assign(N, 0.0),
          o.rho_u_hi.assign(N, 0.0);
    }
    const double v = csv::to_double(r[4], where);
    const std::string& ent = r[2];
    const std::string& q = r[3];
    std::vector<double>* target = nullptr;
    int idx = -1;
    if (q == "g" || q == "rho_g_lo" || q == "rho_g_hi") {
      auto g = gen_ix.find(ent);
      if (g == gen_ix.end()) throw ValidationError(where + ": unknown generator '" + ent + "'");
      idx = g->second;
      target = q == "g" ? &o.g : q == "rho_g_lo" ? &o.rho_g_lo : &o.rho_g_hi;
    } else if (q == "f" || q == "pi_f" || q.rfind("rho_f", 0) == 0 || q.rfind("rho_th", 0) == 0) {
      auto e = edge_ix.find(ent);
      if (e == edge_ix.end()) throw ValidationError(where + ": unknown edge '" + ent + "'");
      idx = e->second;
      if (q == "f") target = &o.f;
      else if (q == "pi_f") target = &o.pi_f;
      else if (q == "rho_f_lo") target = &o.rho_f_lo;
      else if (q == "rho_f_hi") target = &o.rho_f_hi;
      else if (q == "rho_th_lo") target = &o.rho_th_lo;
      else if (q == "rho_th_hi") target = &o.rho_th_hi;
    } else if (q == "u" || q == "theta" || q == "pi" || q == "rho_u_lo" || q == "rho_u_hi") {
      idx = net.node_index(ent);
      if (idx < 0) throw ValidationError(where + ": unknown node '" + ent + "'");
      target = q == "u" ? &o.u : q == "theta" ? &o.theta : q == "pi" ? &o.pi : q == "rho_u_lo" ? &o.rho_u_lo : &o.rho_u_hi;
    } else if (q == "delta") {
      o.delta = v;
    } else if (q == "objective") {
      o.objective = v;
    }
    if (q != "delta" && q != "objective" && !target) throw ValidationError(where + ": unknown quantity '" + q + "'");
    if (target) (*target)[idx] = v;
    ++filled[{s, h}];
  }
  std::vector<OpfSolution> out;
  for (auto& [k, o] : by_key) {
    if (filled[k] != expected)
      throw ValidationError(path + ": hour " + std::to_string(k.second) + " has " + std::to_string(filled[k]) +
                            " entries, expected " + std::to_string(expected));
    out.push_back(std::move(o));
  }
  return out;
}

}  // namespace interdict

#endif
