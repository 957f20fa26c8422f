#ifndef INTERDICT_ATTACKER_HPP
#define INTERDICT_ATTACKER_HPP

// Upper level: an attacker withholds generation, flow and angle capacity to
// maximize VOLL-weighted unserved load, anticipating the operator's DC-OPF.
//
// The operator is replaced by its KKT system. Each bound pair (F >= 0,
// y >= 0, F*y = 0) is switched by a binary b:
//     F <= Mp (1 - b),   y <= Md b
// Mp is the pair's physical range (so it never cuts a feasible point) and Md
// is a per-block bound on the multiplier, checked after the solve. Flow and
// angle attacks shrink both sides of a symmetric limit: |f| <= fmax - zf.
// Angles, angle attacks and angle multipliers are carried in MW-equivalent
// units (scaled by S = max_e B_e, as in the OPF LP) and converted back when a
// solution is read out.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "interdict/dcopf.hpp"
#include "interdict/errors.hpp"
#include "interdict/kkt.hpp"
#include "interdict/milp.hpp"
#include "interdict/network.hpp"

namespace interdict {

struct AttackCosts {
  std::vector<double> gen;    // per MW withheld, per generator
  std::vector<double> flow;   // per MW of flow limit, per edge
  std::vector<double> angle;  // per rad of angle limit, per edge
  double budget = 0.0;        // per season

  void validate(const PowerNetwork& net) const {
    if (static_cast<int>(gen.size()) != net.num_generators() || static_cast<int>(flow.size()) != net.num_edges() ||
        static_cast<int>(angle.size()) != net.num_edges())
      throw DimensionError("attack costs do not match the network");
    for (double c : gen)
      if (!(c > 0.0) || !std::isfinite(c)) throw ValidationError("generator attack costs must be positive");
    for (double c : flow)
      if (!(c > 0.0) || !std::isfinite(c)) throw ValidationError("flow attack costs must be positive");
    for (double c : angle)
      if (!(c > 0.0) || !std::isfinite(c)) throw ValidationError("angle attack costs must be positive");
    if (!(budget >= 0.0) || !std::isfinite(budget)) throw ValidationError("attack budget must be nonnegative");
  }
};

/// Uniform costs: `gen_cost` per MW of generation, `ratio` times that per MW
/// of line capacity. Angle limits are priced at the flow they carry
/// (susceptance times base), so a radian costs what its MW equivalent costs.
inline AttackCosts uniform_attack_costs(const PowerNetwork& net, double gen_cost, double ratio, double budget) {
  AttackCosts c;
  c.gen.assign(net.num_generators(), gen_cost);
  for (int e = 0; e < net.num_edges(); ++e) {
    c.flow.push_back(gen_cost * ratio);
    c.angle.push_back(gen_cost * ratio * net.flow_factor(e));
  }
  c.budget = budget;
  c.validate(net);
  return c;
}

inline double attack_spend(const AttackCosts& c, const HourAttack& a) {
  double s = 0.0;
  for (std::size_t k = 0; k < a.zg.size(); ++k) s += c.gen[k] * a.zg[k];
  for (std::size_t e = 0; e < a.zf.size(); ++e) s += c.flow[e] * a.zf[e] + c.angle[e] * a.zth[e];
  return s;
}

// Pair families in KKT order.
enum Pair : int { g_lo, g_hi, f_lo, f_hi, th_lo, th_hi, u_lo, u_hi, num_pairs };

inline const char* pair_name(int p) {
  static const char* names[] = {"g_lo", "g_hi", "f_lo", "f_hi", "th_lo", "th_hi", "u_lo", "u_hi"};
  return names[p];
}

struct BigMConfig {
  // Multiplier bounds per dual block: generation, flow, angle, unserved.
  double m_gen = 0.0, m_flow = 0.0, m_angle = 0.0, m_unserved = 0.0;
  // Multiplier applied to each pair's physical range for the primal side.
  double primal_margin = 1.1;
  // When positive, every pair (primal and dual side) uses this single value.
  double uniform = 0.0;
  bool valid = false;
  int attempts = 0;

  // Per-edge factor on the flow and angle blocks (empty means 1).
  std::vector<double> edge_leverage;

  double dual(int pair, int i = -1) const {
    if (uniform > 0.0) return uniform;
    const double lev = i >= 0 && i < static_cast<int>(edge_leverage.size()) ? edge_leverage[i] : 1.0;
    switch (pair) {
      case g_lo: case g_hi: return m_gen;
      case f_lo: case f_hi: return m_flow * lev;
      case th_lo: case th_hi: return m_angle * lev;
      default: return m_unserved;
    }
  }

  void scale(double factor) {
    m_gen *= factor, m_flow *= factor, m_angle *= factor, m_unserved *= factor;
    uniform *= factor;
  }
};

namespace detail {

// Per edge, 1 / PTDF for the transfer between its own end nodes, i.e. one
// over B_e times the effective reactance between them. A weak line in
// parallel with a strong one carries a small share of that transfer, so a
// MW of its limit is worth several MW of delivered power.
inline std::vector<double> transfer_leverage(const PowerNetwork& net) {
  const int N = net.num_nodes();
  std::vector<double> lev(net.num_edges(), 1.0);
  if (N < 2) return lev;
  const int ref = net.reference;
  std::vector<int> slot(N, -1);
  int m = 0;
  for (int n = 0; n < N; ++n)
    if (n != ref) slot[n] = m++;
  std::vector<double> a(static_cast<std::size_t>(m) * m, 0.0);
  auto at = [&](int i, int j) -> double& { return a[static_cast<std::size_t>(i) * m + j]; };
  for (int e = 0; e < net.num_edges(); ++e) {
    const auto& ed = net.edges[e];
    const double b = ed.susceptance;
    const int i = slot[ed.from], j = slot[ed.to];
    if (i >= 0) at(i, i) += b;
    if (j >= 0) at(j, j) += b;
    if (i >= 0 && j >= 0) at(i, j) -= b, at(j, i) -= b;
  }
  // Dense inverse of the reduced Laplacian by Gauss-Jordan.
  std::vector<double> inv(static_cast<std::size_t>(m) * m, 0.0);
  auto iv = [&](int i, int j) -> double& { return inv[static_cast<std::size_t>(i) * m + j]; };
  for (int i = 0; i < m; ++i) iv(i, i) = 1.0;
  for (int c = 0; c < m; ++c) {
    int piv = c;
    for (int r = c + 1; r < m; ++r)
      if (std::abs(at(r, c)) > std::abs(at(piv, c))) piv = r;
    if (std::abs(at(piv, c)) < 1e-12) return lev;  // islanded network: no useful bound
    for (int k = 0; k < m; ++k) std::swap(at(c, k), at(piv, k)), std::swap(iv(c, k), iv(piv, k));
    const double d = at(c, c);
    for (int k = 0; k < m; ++k) at(c, k) /= d, iv(c, k) /= d;
    for (int r = 0; r < m; ++r) {
      if (r == c || at(r, c) == 0.0) continue;
      const double f = at(r, c);
      for (int k = 0; k < m; ++k) at(r, k) -= f * at(c, k), iv(r, k) -= f * iv(c, k);
    }
  }
  auto x = [&](int n1, int n2) { return slot[n1] < 0 || slot[n2] < 0 ? 0.0 : iv(slot[n1], slot[n2]); };
  for (int e = 0; e < net.num_edges(); ++e) {
    const auto& ed = net.edges[e];
    const double r = x(ed.from, ed.from) + x(ed.to, ed.to) - 2.0 * x(ed.from, ed.to);
    const double share = ed.susceptance * r;
    if (share > 1e-9) lev[e] = std::max(1.0, 1.0 / share);
  }
  return lev;
}

}  // namespace detail

/// Multiplier bounds sized from VOLL: kappa * VOLL for generation and
/// unserved multipliers; flow and angle blocks are further scaled by each
/// edge's transfer leverage (and by max(B) for angles).
inline BigMConfig default_bigm(const PowerNetwork& net, double voll_max, double kappa = 2.0) {
  BigMConfig m;
  double bmax = 0.0;
  for (int e = 0; e < net.num_edges(); ++e) bmax = std::max(bmax, net.flow_factor(e));
  m.m_gen = m.m_flow = m.m_unserved = kappa * voll_max;
  m.m_angle = kappa * voll_max * std::max(1.0, bmax);
  m.edge_leverage = detail::transfer_leverage(net);
  return m;
}

/// Single M = 10 * max(VOLL, total capacity, total line limit) for every pair.
inline BigMConfig uniform_bigm(const PowerNetwork& net, double voll_max) {
  double gsum = 0.0, fsum = 0.0;
  for (const auto& g : net.generators) gsum += g.p_max;
  for (const auto& e : net.edges) fsum += e.flow_limit;
  BigMConfig m;
  m.uniform = 10.0 * std::max({voll_max, gsum, fsum});
  return m;
}

/// Column positions of one hour's block inside an attack MILP.
struct AttackBlock {
  int zg = 0, zf = 0, zth = 0;
  int g = 0, f = 0, u = 0, th = 0;
  int pi = 0, pif = 0, delta = 0;
  double scale = 1.0;  // angle scale S
  std::array<int, num_pairs> y{}, bin{}, len{};
};

struct AttackModel {
  MilpProblem milp;
  std::vector<AttackBlock> blocks;
  int budget_row = -1;
};

struct AttackOptions {
  MilpOptions milp;
  double penalty = 1e-7;     // per unit of z, relative to the largest VOLL
  int bigm_retries = 3;
  double kkt_tol = 1e-5;
};

namespace detail {

inline AttackBlock add_attack_block(MilpProblem& mp, const PowerNetwork& net, const HourData& hd,
                                    const AttackCosts& costs, const BigMConfig& M, double penalty,
                                    std::vector<Term>& budget_terms, const std::string& tag,
                                    bool duality_cut = true) {
  LpProblem& p = mp.lp;
  const int G = net.num_generators(), E = net.num_edges(), N = net.num_nodes();
  if (static_cast<int>(hd.demand.size()) != N || static_cast<int>(hd.voll.size()) != N)
    throw DimensionError("hour data does not match the network");
  AttackBlock b;
  const double S = angle_scale(net);
  b.scale = S;
  auto name = [&](const char* what, const std::string& id) { return std::string(what) + tag + "[" + id + "]"; };

  b.zg = p.num_cols();
  for (int k = 0; k < G; ++k) {
    const auto& gen = net.generators[k];
    p.add_col(-penalty, 0.0, gen.p_max - gen.p_min, name("zg", gen.id));
    budget_terms.push_back({b.zg + k, costs.gen[k]});
  }
  b.zf = p.num_cols();
  for (int e = 0; e < E; ++e) {
    p.add_col(-penalty, 0.0, net.edges[e].flow_limit, name("zf", net.edges[e].id));
    budget_terms.push_back({b.zf + e, costs.flow[e]});
  }
  // An angle limit that already admits the full flow limit, priced at least
  // as high as the flow capacity it would remove, is never worth attacking
  // and never binds, so its attack and switch are fixed at zero.
  std::vector<char> angle_live(E, 1);
  for (int e = 0; e < E; ++e) {
    const auto& ed = net.edges[e];
    angle_live[e] = net.flow_factor(e) * ed.angle_limit < ed.flow_limit ||
                    costs.angle[e] * ed.angle_limit < costs.flow[e] * ed.flow_limit;
  }
  b.zth = p.num_cols();
  for (int e = 0; e < E; ++e) {
    p.add_col(-penalty, 0.0, angle_live[e] ? net.edges[e].angle_limit * S : 0.0, name("zth", net.edges[e].id));
    budget_terms.push_back({b.zth + e, costs.angle[e] / S});
  }
  b.g = p.num_cols();
  for (int k = 0; k < G; ++k)
    p.add_col(0.0, net.generators[k].p_min, net.generators[k].p_max, name("g", net.generators[k].id));
  b.f = p.num_cols();
  for (int e = 0; e < E; ++e)
    p.add_col(0.0, -net.edges[e].flow_limit, net.edges[e].flow_limit, name("f", net.edges[e].id));
  b.u = p.num_cols();
  for (int n = 0; n < N; ++n) p.add_col(hd.voll[n], 0.0, hd.demand[n], name("u", net.nodes[n].id));
  b.th = p.num_cols();
  for (int n = 0; n < N; ++n) p.add_col(0.0, -kInf, kInf, name("theta", net.nodes[n].id));
  b.pi = p.num_cols();
  // Shedding one more MW is always feasible, so no price exceeds VOLL.
  for (int n = 0; n < N; ++n) p.add_col(0.0, -kInf, hd.voll[n], name("pi", net.nodes[n].id));
  b.pif = p.num_cols();
  for (int e = 0; e < E; ++e) p.add_col(0.0, -kInf, kInf, name("pi_f", net.edges[e].id));
  b.delta = p.num_cols();
  p.add_col(0.0, -kInf, kInf, name("delta", net.nodes[net.reference].id));

  const std::array<int, num_pairs> len{G, G, E, E, E, E, N, N};
  b.len = len;
  for (int q = 0; q < num_pairs; ++q) {
    b.y[q] = p.num_cols();
    for (int i = 0; i < len[q]; ++i) p.add_col(0.0, 0.0, kInf, std::string("rho_") + pair_name(q) + tag + "[" + std::to_string(i) + "]");
  }
  for (int q = 0; q < num_pairs; ++q) {
    b.bin[q] = p.num_cols();
    for (int i = 0; i < len[q]; ++i) {
      const bool fixed = (q == th_lo || q == th_hi) && !angle_live[i];
      mp.binaries.push_back(
          p.add_col(0.0, 0.0, fixed ? 0.0 : 1.0, std::string("b_") + pair_name(q) + tag + "[" + std::to_string(i) + "]"));
    }
  }

  // Operator feasibility.
  std::vector<std::vector<Term>> bal(N);
  for (int k = 0; k < G; ++k) bal[net.generators[k].node].push_back({b.g + k, 1.0});
  for (int e = 0; e < E; ++e) {
    bal[net.edges[e].from].push_back({b.f + e, -1.0});
    bal[net.edges[e].to].push_back({b.f + e, 1.0});
  }
  for (int n = 0; n < N; ++n) {
    bal[n].push_back({b.u + n, 1.0});
    p.add_row(bal[n], hd.demand[n], hd.demand[n], name("balance", net.nodes[n].id));
  }
  for (int e = 0; e < E; ++e) {
    const auto& ed = net.edges[e];
    const double B = net.flow_factor(e) / S;
    p.add_row({{b.f + e, -1.0}, {b.th + ed.from, B}, {b.th + ed.to, -B}}, 0.0, 0.0, name("flow", ed.id));
  }
  p.add_row({{b.th + net.reference, 1.0}}, 0.0, 0.0, name("ref", net.nodes[net.reference].id));

  // Stationarity.
  for (int k = 0; k < G; ++k) {
    const auto& gen = net.generators[k];
    p.add_row({{b.pi + gen.node, 1.0}, {b.y[g_lo] + k, 1.0}, {b.y[g_hi] + k, -1.0}}, gen.cost, gen.cost,
              name("stat_g", gen.id));
  }
  for (int n = 0; n < N; ++n)
    p.add_row({{b.pi + n, 1.0}, {b.y[u_lo] + n, 1.0}, {b.y[u_hi] + n, -1.0}}, hd.voll[n], hd.voll[n],
              name("stat_u", net.nodes[n].id));
  for (int e = 0; e < E; ++e) {
    const auto& ed = net.edges[e];
    p.add_row({{b.pi + ed.from, 1.0}, {b.pi + ed.to, -1.0}, {b.pif + e, 1.0}, {b.y[f_lo] + e, -1.0}, {b.y[f_hi] + e, 1.0}},
              0.0, 0.0, name("stat_f", ed.id));
  }
  std::vector<std::vector<Term>> ang(N);
  for (int e = 0; e < E; ++e) {
    const auto& ed = net.edges[e];
    const double B = net.flow_factor(e) / S;
    for (auto [node, sgn] : {std::pair{ed.from, 1.0}, std::pair{ed.to, -1.0}}) {
      ang[node].push_back({b.pif + e, sgn * B});
      ang[node].push_back({b.y[th_lo] + e, sgn});
      ang[node].push_back({b.y[th_hi] + e, -sgn});
    }
  }
  ang[net.reference].push_back({b.delta, 1.0});
  for (int n = 0; n < N; ++n) p.add_row(ang[n], 0.0, 0.0, name("stat_theta", net.nodes[n].id));

  // Complementarity. Each F is written as  F = base + sum(terms) >= 0.
  // Alongside, collect the operator's dual objective for the duality cut.
  std::vector<Term> gap;
  for (int k = 0; k < G; ++k) gap.push_back({b.g + k, net.generators[k].cost});
  for (int n = 0; n < N; ++n) {
    gap.push_back({b.u + n, hd.voll[n]});
    gap.push_back({b.pi + n, -hd.demand[n]});
  }
  auto pair_rows = [&](int q, int i, std::vector<Term> terms, double base, double range, const std::string& id) {
    const double mp_ = M.uniform > 0.0 ? M.uniform : M.primal_margin * std::max(range, 1.0);
    const int bin = b.bin[q] + i;
    // F >= 0 is needed only where column bounds do not already imply it.
    if (terms.size() > 1) p.add_row(terms, -base, kInf, std::string("F_") + pair_name(q) + tag + "[" + id + "]");
    auto on = terms;
    on.push_back({bin, mp_});
    p.add_row(on, -kInf, mp_ - base, std::string("off_") + pair_name(q) + tag + "[" + id + "]");
    const double md = (q == th_lo || q == th_hi) ? M.dual(q, i) / S : M.dual(q, i);
    p.add_row({{b.y[q] + i, 1.0}, {bin, -md}}, -kInf, 0.0,
              std::string("on_") + pair_name(q) + tag + "[" + id + "]");
    if (!duality_cut) return;
    if (base != 0.0) gap.push_back({b.y[q] + i, base});
    // y * z enters the dual objective; y <= Md turns it into a linear bound.
    for (const auto& t : terms) {
      if (t.col < b.zg || t.col >= b.g) continue;
      gap.push_back({t.col, t.coef * md});
    }
  };
  for (int k = 0; k < G; ++k) {
    const auto& gen = net.generators[k];
    const double range = gen.p_max - gen.p_min;
    pair_rows(g_lo, k, {{b.g + k, 1.0}}, -gen.p_min, range, gen.id);
    pair_rows(g_hi, k, {{b.g + k, -1.0}, {b.zg + k, -1.0}}, gen.p_max, range, gen.id);
  }
  for (int e = 0; e < E; ++e) {
    const auto& ed = net.edges[e];
    const double fr = 2.0 * ed.flow_limit;
    pair_rows(f_lo, e, {{b.f + e, 1.0}, {b.zf + e, -1.0}}, ed.flow_limit, fr, ed.id);
    pair_rows(f_hi, e, {{b.f + e, -1.0}, {b.zf + e, -1.0}}, ed.flow_limit, fr, ed.id);
  }
  for (int e = 0; e < E; ++e) {
    const auto& ed = net.edges[e];
    const double lim = ed.angle_limit * S;
    pair_rows(th_lo, e, {{b.th + ed.from, 1.0}, {b.th + ed.to, -1.0}, {b.zth + e, -1.0}}, lim, 2.0 * lim, ed.id);
    pair_rows(th_hi, e, {{b.th + ed.from, -1.0}, {b.th + ed.to, 1.0}, {b.zth + e, -1.0}}, lim, 2.0 * lim, ed.id);
  }
  for (int n = 0; n < N; ++n) {
    pair_rows(u_lo, n, {{b.u + n, 1.0}}, 0.0, hd.demand[n], net.nodes[n].id);
    pair_rows(u_hi, n, {{b.u + n, -1.0}}, hd.demand[n], hd.demand[n], net.nodes[n].id);
  }
  // Primal cost never exceeds the dual objective (equal at a KKT point).
  if (duality_cut) p.add_row(gap, -kInf, 0.0, "duality" + tag);
  return b;
}

inline double max_voll(const std::vector<HourData>& hours) {
  double v = 0.0;
  for (const auto& h : hours)
    for (double x : h.voll) v = std::max(v, x);
  return v;
}

}  // namespace detail

/// One-hour attack MILP with hourly budget `budget`.
inline AttackModel build_hourly_attack_model(const PowerNetwork& net, const HourData& hd, const AttackCosts& costs,
                                             double budget, const BigMConfig& M, double penalty = 0.0) {
  costs.validate(net);
  if (!(budget >= 0.0)) throw ValidationError("hourly budget must be nonnegative");
  AttackModel m;
  m.milp.lp.sense = Sense::maximize;
  std::vector<Term> budget_terms;
  m.blocks.push_back(detail::add_attack_block(m.milp, net, hd, costs, M, penalty, budget_terms, ""));
  m.budget_row = m.milp.lp.add_row(budget_terms, -kInf, budget, "budget");
  return m;
}

inline MilpProblem build_hourly_attack_milp(const PowerNetwork& net, const HourData& hd, const AttackCosts& costs,
                                            double budget, const BigMConfig& M) {
  return build_hourly_attack_model(net, hd, costs, budget, M).milp;
}

/// Joint model over every hour in `hours` with one shared budget row.
inline AttackModel build_full_attack_model(const PowerNetwork& net, const std::vector<HourData>& hours,
                                           const AttackCosts& costs, double budget, const BigMConfig& M,
                                           double penalty = 0.0) {
  costs.validate(net);
  AttackModel m;
  m.milp.lp.sense = Sense::maximize;
  std::vector<Term> budget_terms;
  for (std::size_t h = 0; h < hours.size(); ++h)
    m.blocks.push_back(
        detail::add_attack_block(m.milp, net, hours[h], costs, M, penalty, budget_terms, "@" + std::to_string(h)));
  m.budget_row = m.milp.lp.add_row(budget_terms, -kInf, budget, "budget");
  return m;
}

/// Attack and operator response for one hour, read out of a MILP solution.
struct HourlyAttackResult {
  HourAttack attack;
  OpfSolution opf;
  double value = 0.0;    // VOLL-weighted unserved load, $ per hour
  double budget = 0.0;   // hourly allotment
  BigMConfig bigm;
  long nodes = 0;
  double kkt_max = 0.0;  // worst residual of the embedded operator point
};

namespace detail {

inline double clean(double v, double lo, double hi) {
  v = std::clamp(v, lo, hi);
  if (std::abs(v - lo) <= 1e-9 * (1.0 + std::abs(lo))) v = lo;
  if (std::abs(v - hi) <= 1e-9 * (1.0 + std::abs(hi))) v = hi;
  return v;
}

inline void read_block(const PowerNetwork& net, const HourData& hd, const AttackCosts& costs, const AttackBlock& b,
                       const std::vector<double>& x, HourlyAttackResult& r) {
  const int G = net.num_generators(), E = net.num_edges(), N = net.num_nodes();
  HourAttack& a = r.attack;
  a.zg.clear(), a.zf.clear(), a.zth.clear();
  for (int k = 0; k < G; ++k) a.zg.push_back(clean(x[b.zg + k], 0.0, net.generators[k].p_max - net.generators[k].p_min));
  for (int e = 0; e < E; ++e) {
    a.zf.push_back(clean(x[b.zf + e], 0.0, net.edges[e].flow_limit));
    a.zth.push_back(clean(x[b.zth + e] / b.scale, 0.0, net.edges[e].angle_limit));
  }
  a.spend = attack_spend(costs, a);
  OpfSolution& o = r.opf;
  o = OpfSolution{};
  for (int k = 0; k < G; ++k) o.g.push_back(x[b.g + k]);
  for (int e = 0; e < E; ++e) {
    o.f.push_back(x[b.f + e]);
    o.pi_f.push_back(x[b.pif + e]);
  }
  for (int n = 0; n < N; ++n) {
    o.u.push_back(x[b.u + n]);
    o.theta.push_back(x[b.th + n] / b.scale);
    o.pi.push_back(x[b.pi + n]);
  }
  auto ys = [&](int q) { return std::vector<double>(x.begin() + b.y[q], x.begin() + b.y[q] + b.len[q]); };
  o.rho_g_lo = ys(g_lo), o.rho_g_hi = ys(g_hi);
  o.rho_f_lo = ys(f_lo), o.rho_f_hi = ys(f_hi);
  o.rho_th_lo = ys(th_lo), o.rho_th_hi = ys(th_hi);
  for (auto* v : {&o.rho_th_lo, &o.rho_th_hi})
    for (double& t : *v) t *= b.scale;
  o.rho_u_lo = ys(u_lo), o.rho_u_hi = ys(u_hi);
  o.delta = x[b.delta] * b.scale;
  o.objective = operating_cost(net, hd, o);
  r.value = 0.0;
  for (int n = 0; n < N; ++n) r.value += hd.voll[n] * o.u[n];
}

/// True when every multiplier sits strictly below its block's bound.
inline bool bigm_holds(const AttackBlock& b, const std::vector<double>& x, const BigMConfig& M) {
  for (int q = 0; q < num_pairs; ++q) {
    for (int i = 0; i < b.len[q]; ++i) {
      const double cap = (q == th_lo || q == th_hi) ? M.dual(q, i) / b.scale : M.dual(q, i);
      if (!(x[b.y[q] + i] < cap * (1.0 - 1e-9))) return false;
    }
  }
  return true;
}

/// Switch pattern of an operator optimum: a pair is switched on where its
/// primal side is active.
inline void operator_pattern(const PowerNetwork& net, const HourData& hd, const HourAttack& a, const OpfSolution& o,
                             const AttackBlock& b, const std::vector<int>& where, std::vector<std::int8_t>& out) {
  auto put = [&](int q, int i, double F, double range) {
    out[where[b.bin[q] + i]] = F <= 1e-7 * (1.0 + range) ? 1 : 0;
  };
  const auto lim = opf_limits(net, &a);
  for (int k = 0; k < net.num_generators(); ++k) {
    const double r = net.generators[k].p_max;
    put(g_lo, k, o.g[k] - lim.g_lo[k], r);
    put(g_hi, k, lim.g_hi[k] - o.g[k], r);
  }
  for (int e = 0; e < net.num_edges(); ++e) {
    const auto& ed = net.edges[e];
    const double dth = o.theta[ed.from] - o.theta[ed.to];
    put(f_lo, e, o.f[e] + lim.f_max[e], ed.flow_limit);
    put(f_hi, e, lim.f_max[e] - o.f[e], ed.flow_limit);
    put(th_lo, e, dth + lim.th_max[e], ed.angle_limit);
    put(th_hi, e, lim.th_max[e] - dth, ed.angle_limit);
  }
  for (int n = 0; n < net.num_nodes(); ++n) {
    put(u_lo, n, o.u[n], hd.demand[n]);
    put(u_hi, n, hd.demand[n] - o.u[n], hd.demand[n]);
  }
}

/// Primal heuristic: round the relaxed attack, let the operator respond, and
/// propose the resulting switch pattern (plus the no-attack pattern).
inline std::function<std::vector<std::vector<std::int8_t>>(const std::vector<double>&)> attack_heuristic(
    const PowerNetwork& net, const std::vector<HourData>& hours, const AttackCosts& costs, const AttackModel& m) {
  std::vector<int> where(m.milp.lp.num_cols(), -1);
  for (std::size_t k = 0; k < m.milp.binaries.size(); ++k) where[m.milp.binaries[k]] = static_cast<int>(k);
  const int nb = static_cast<int>(m.milp.binaries.size());
  return [&net, hours, &costs, blocks = m.blocks, where, nb](const std::vector<double>& x) {
    std::vector<std::vector<std::int8_t>> out;
    for (bool relaxed : {true, false}) {
      std::vector<std::int8_t> cand(nb, 0);
      try {
        for (std::size_t h = 0; h < blocks.size(); ++h) {
          HourlyAttackResult r;
          read_block(net, hours[h], costs, blocks[h], x, r);
          HourAttack a = r.attack;
          if (!relaxed) {
            std::fill(a.zg.begin(), a.zg.end(), 0.0);
            std::fill(a.zf.begin(), a.zf.end(), 0.0);
            std::fill(a.zth.begin(), a.zth.end(), 0.0);
          }
          const auto o = solve_dcopf(net, hours[h], &a);
          operator_pattern(net, hours[h], a, o, blocks[h], where, cand);
        }
      } catch (const std::exception&) {
        continue;
      }
      out.push_back(std::move(cand));
    }
    return out;
  };
}

/// Where the operator's multipliers are not unique (a zero-width bound, an
/// islanded bus), pick the smallest ones consistent with the attack, the
/// dispatch and the switch pattern, so that the bound check sees only what
/// the optimum needs.
inline void least_multipliers(const AttackModel& m, std::vector<double>& x) {
  LpProblem lp = m.milp.lp;
  lp.sense = Sense::minimize;
  std::vector<char> dual(lp.num_cols(), 0);
  for (const auto& b : m.blocks) {
    for (int j = b.pi; j < b.y[0]; ++j) dual[j] = 1;
    for (int q = 0; q < num_pairs; ++q)
      for (int i = 0; i < b.len[q]; ++i) dual[b.y[q] + i] = 2;
  }
  for (int j = 0; j < lp.num_cols(); ++j) {
    lp.cost[j] = dual[j] == 2 ? 1.0 : 0.0;
    if (!dual[j]) lp.col_lower[j] = lp.col_upper[j] = x[j];
  }
  LpSolution s;
  try {
    s = solve_lp(lp);
  } catch (const SolverError&) {
    return;
  }
  if (s.status != LpStatus::optimal) return;
  for (int j = 0; j < lp.num_cols(); ++j)
    if (dual[j]) x[j] = s.x[j];
}

inline MilpSolution solve_attack_model(const AttackModel& m, const std::vector<HourData>& hours,
                                       const PowerNetwork& net, const AttackCosts& costs, const AttackOptions& opt,
                                       const char* what) {
  MilpOptions mo = opt.milp;
  if (!mo.heuristic) mo.heuristic = attack_heuristic(net, hours, costs, m);
  auto sol = solve_milp(m.milp, mo);
  if (sol.status == MilpStatus::feasible_limit)
    throw SolverError(std::string(what) + ": node limit reached (gap " + std::to_string(sol.gap) + ")");
  // Infeasible means the multiplier bounds cut off every operator optimum.
  if (sol.status == MilpStatus::infeasible) return sol;
  if (sol.status != MilpStatus::optimal)
    throw SolverError(std::string(what) + ": MILP returned " + to_string(sol.status));
  least_multipliers(m, sol.x);
  return sol;
}

}  // namespace detail

/// Solves the one-hour attack MILP, retrying with 10x multiplier bounds while
/// any multiplier reaches its bound, and certifies the embedded operator point.
inline HourlyAttackResult solve_hourly_attack(const PowerNetwork& net, const HourData& hd, const AttackCosts& costs,
                                              double budget, BigMConfig M, const AttackOptions& opt = {}) {
  const double penalty = opt.penalty * std::max(1.0, detail::max_voll({hd}));
  for (int attempt = 0; attempt <= opt.bigm_retries; ++attempt) {
    const auto model = build_hourly_attack_model(net, hd, costs, budget, M, penalty);
    const auto sol = detail::solve_attack_model(model, {hd}, net, costs, opt, "hourly attack");
    M.attempts = attempt + 1;
    if (sol.status == MilpStatus::infeasible || !detail::bigm_holds(model.blocks[0], sol.x, M)) {
      M.scale(10.0);
      continue;
    }
    M.valid = true;
    HourlyAttackResult r;
    r.budget = budget;
    r.bigm = M;
    r.nodes = sol.nodes;
    detail::read_block(net, hd, costs, model.blocks[0], sol.x, r);
    r.kkt_max = kkt_residuals(net, hd, r.opf, &r.attack).max_norm();
    if (!(r.kkt_max <= opt.kkt_tol))
      throw SolverError("hourly attack: embedded operator point fails the KKT certificate (residual " +
                        std::to_string(r.kkt_max) + ")");
    return r;
  }
  throw BigMInvalidError("hourly attack: multiplier bound still reached after " + std::to_string(opt.bigm_retries) +
                         " enlargements");
}

/// A season's attack: one entry per hour.
struct AttackPlan {
  std::vector<HourAttack> hours;
  std::vector<OpfSolution> opf;
  std::vector<double> value;      // VOLL-weighted unserved per hour
  std::vector<double> allotment;  // hourly budget share
  std::vector<int> bigm_attempts;  // solves needed before the multiplier bounds held (1 = default bounds)
  double budget = 0.0;
  double objective = 0.0;
  long milp_solves = 0;
  bool bigm_valid = true;

  double spend() const {
    double s = 0.0;
    for (const auto& h : hours) s += h.spend;
    return s;
  }
};

/// Joint optimum over all hours with one shared budget; exponential in the
/// number of hours, meant as an oracle on small instances.
inline AttackPlan solve_full_milp(const PowerNetwork& net, const std::vector<HourData>& hours, const AttackCosts& costs,
                                  double budget, BigMConfig M, const AttackOptions& opt = {}) {
  const double penalty = opt.penalty * std::max(1.0, detail::max_voll(hours));
  for (int attempt = 0; attempt <= opt.bigm_retries; ++attempt) {
    const auto model = build_full_attack_model(net, hours, costs, budget, M, penalty);
    const auto sol = detail::solve_attack_model(model, hours, net, costs, opt, "full attack");
    bool ok = sol.status == MilpStatus::optimal;
    for (const auto& b : model.blocks) ok = ok && detail::bigm_holds(b, sol.x, M);
    if (!ok) {
      M.scale(10.0);
      continue;
    }
    AttackPlan plan;
    plan.budget = budget;
    plan.milp_solves = 1;
    for (std::size_t h = 0; h < hours.size(); ++h) {
      HourlyAttackResult r;
      detail::read_block(net, hours[h], costs, model.blocks[h], sol.x, r);
      r.opf.hour = static_cast<int>(h);
      const double res = kkt_residuals(net, hours[h], r.opf, &r.attack).max_norm();
      if (!(res <= opt.kkt_tol))
        throw SolverError("full attack: embedded operator point fails the KKT certificate at hour " +
                          std::to_string(h));
      plan.hours.push_back(r.attack);
      plan.opf.push_back(r.opf);
      plan.value.push_back(r.value);
      plan.allotment.push_back(r.attack.spend);
      plan.bigm_attempts.push_back(attempt + 1);
      plan.objective += r.value;
    }
    return plan;
  }
  throw BigMInvalidError("full attack: multiplier bound still reached after " + std::to_string(opt.bigm_retries) +
                         " enlargements");
}

/// Hourly attack solves over one season, cached by (hour, allotment).
class HourlyAttacker {
public:
  HourlyAttacker(const PowerNetwork& net, std::vector<HourData> hours, AttackCosts costs, BigMConfig M,
                 AttackOptions opt = {})
      : net_(net), hours_(std::move(hours)), costs_(std::move(costs)), M_(M), opt_(std::move(opt)) {
    costs_.validate(net_);
  }

  int num_hours() const { return static_cast<int>(hours_.size()); }
  const PowerNetwork& network() const { return net_; }
  const std::vector<HourData>& hours() const { return hours_; }
  const AttackCosts& costs() const { return costs_; }
  long solves() const { return solves_; }

  const HourlyAttackResult& solve(int h, double budget) {
    if (h < 0 || h >= num_hours()) throw DimensionError("hour index out of range");
    // Allotments computed along different paths agree to far better than 1e-6.
    const auto key = std::make_pair(h, std::llround(budget * 1e6));
    auto it = cache_.find(key);
    if (it == cache_.end()) {
      auto r = solve_hourly_attack(net_, hours_[h], costs_, budget, M_, opt_);
      r.opf.hour = h;
      ++solves_;
      it = cache_.emplace(key, std::move(r)).first;
    }
    return it->second;
  }

private:
  const PowerNetwork& net_;
  std::vector<HourData> hours_;
  AttackCosts costs_;
  BigMConfig M_;
  AttackOptions opt_;
  std::map<std::pair<int, long long>, HourlyAttackResult> cache_;
  long solves_ = 0;
};

inline AttackPlan plan_from(const std::vector<HourlyAttackResult>& hourly, double budget) {
  AttackPlan plan;
  plan.budget = budget;
  for (const auto& r : hourly) {
    plan.hours.push_back(r.attack);
    plan.opf.push_back(r.opf);
    plan.value.push_back(r.value);
    plan.allotment.push_back(r.budget);
    plan.bigm_attempts.push_back(r.bigm.attempts);
    plan.objective += r.value;
    plan.bigm_valid = plan.bigm_valid && r.bigm.valid;
  }
  return plan;
}

/// Even split: every hour gets budget / H.
inline std::vector<HourlyAttackResult> decoupled_attack(HourlyAttacker& a, double budget) {
  if (!(budget >= 0.0)) throw ValidationError("attack budget must be nonnegative");
  std::vector<HourlyAttackResult> out;
  const int H = a.num_hours();
  for (int h = 0; h < H; ++h) out.push_back(a.solve(h, budget / H));
  return out;
}

/// Coordinate ascent on a grid of budget quanta (budget / (H * steps)).
///
/// Each round moves one quantum from the hour that loses least to the hour that
/// gains most. Hourly values are often flat until the allotment clears the
/// hour's reserve, so when no single move helps the search also tries handing
/// a block of quanta to one of the three highest-demand hours, taken from
/// hours whose value never left its no-attack level.
inline AttackPlan refine_budget_allocation(HourlyAttacker& a, const std::vector<HourlyAttackResult>& hourly,
                                           double budget, int steps) {
  const int H = a.num_hours();
  if (static_cast<int>(hourly.size()) != H) throw DimensionError("one hourly result per hour is required");
  if (steps < 1) throw ValidationError("refinement step count must be at least 1");
  const long solves0 = a.solves();
  AttackPlan init = plan_from(hourly, budget);
  const int K = H * steps;
  const double quantum = budget / K;
  if (!(quantum > 0.0)) return init;

  std::vector<int> k(H);
  int used = 0;
  for (int h = 0; h < H; ++h) {
    k[h] = static_cast<int>(std::floor(hourly[h].budget / quantum + 1e-9));
    used += k[h];
  }
  if (used > K) throw ValidationError("hourly allotments exceed the season budget");
  auto value = [&](int h, int q) { return a.solve(h, q * quantum).value; };
  double objective = 0.0;
  for (int h = 0; h < H; ++h) objective += value(h, k[h]);
  if (objective < init.objective) {
    // Inputs off the quantum grid: keep them unless the grid does better.
    std::fill(k.begin(), k.end(), steps);
    used = K;
    objective = 0.0;
    for (int h = 0; h < H; ++h) objective += value(h, k[h]);
  }
  auto improves = [&](double delta) { return delta > 1e-7 * std::max(1.0, std::abs(objective)); };

  std::vector<int> by_demand(H);
  for (int h = 0; h < H; ++h) by_demand[h] = h;
  auto load = [&](int h) {
    double s = 0.0;
    for (double x : a.hours()[h].demand) s += x;
    return s;
  };
  std::stable_sort(by_demand.begin(), by_demand.end(), [&](int x, int y) { return load(x) > load(y); });

  auto flat = [&](int h) { return value(h, k[h]) <= value(h, 0) + 1e-9 * std::max(1.0, value(h, 0)); };
  // Net change from handing J quanta to hour r, all taken from hours still at
  // their no-attack value (which lose nothing by giving them up).
  auto block = [&](int r, int J, std::vector<int>& take) {
    take.assign(H, 0);
    if (k[r] + J > K) return -kInf;
    int need = J;
    for (int h = 0; h < H && need > 0; ++h) {
      if (h == r || k[h] == 0 || !flat(h)) continue;
      take[h] = std::min(need, k[h]);
      need -= take[h];
    }
    if (need > 0) return -kInf;
    return value(r, k[r] + J) - value(r, k[r]);
  };
  auto apply = [&](int r, int J, const std::vector<int>& take, double delta) {
    for (int h = 0; h < H; ++h) k[h] -= take[h];
    k[r] += J;
    objective += delta;
  };

  std::vector<int> take, take2;
  for (int round = 0; round < 4 * K + 8; ++round) {
    // Unused quanta (from a sparse input) go to the best recipient outright.
    int recip = -1;
    double gain = 0.0;
    for (int h = 0; h < H; ++h) {
      if (k[h] >= K) continue;
      const double g = value(h, k[h] + 1) - value(h, k[h]);
      if (recip < 0 || g > gain) recip = h, gain = g;
    }
    if (used < K) {
      k[recip] += 1, ++used, objective += gain;
      continue;
    }
    int donor = -1;
    double loss = 0.0;
    for (int h = 0; h < H; ++h) {
      if (h == recip || k[h] == 0) continue;
      const double l = value(h, k[h]) - value(h, k[h] - 1);
      if (donor < 0 || l < loss) donor = h, loss = l;
    }
    if (donor >= 0 && improves(gain - loss)) {
      // Keep doubling the block (from flat hours) while the net gain grows.
      int J = 1;
      double delta = gain - loss;
      take.assign(H, 0);
      take[donor] = 1;
      for (int J2 = 2; J2 <= K; J2 *= 2) {
        const double d2 = block(recip, J2, take2);
        if (!(d2 > delta + 1e-7 * std::max(1.0, std::abs(objective)))) break;
        J = J2, delta = d2, take = take2;
      }
      apply(recip, J, take, delta);
      continue;
    }

    // Escape from a flat stretch: a block into one of the highest-demand
    // hours, first the whole free pool, then J = 2, 4, 8, ...
    bool moved = false;
    for (int c = 0; c < std::min(H, 3) && !moved; ++c) {
      const int r = by_demand[c];
      int pool = 0;
      for (int h = 0; h < H; ++h)
        if (h != r && k[h] > 0 && flat(h)) pool += k[h];
      std::vector<int> sizes;
      if (pool >= 2) sizes.push_back(pool);
      for (int J = 2; k[r] + J <= K; J *= 2)
        if (J != pool) sizes.push_back(J);
      for (int J : sizes) {
        const double delta = block(r, J, take);
        if (!improves(delta)) continue;
        apply(r, J, take, delta);
        moved = true;
        break;
      }
    }
    if (!moved) break;
  }

  std::vector<HourlyAttackResult> out;
  for (int h = 0; h < H; ++h) out.push_back(a.solve(h, k[h] * quantum));
  AttackPlan plan = plan_from(out, budget);
  if (plan.objective < init.objective) plan = std::move(init);
  plan.milp_solves = a.solves() - solves0;
  return plan;
}

/// Decoupled hourly solves followed by budget refinement.
inline AttackPlan solve_decomposition(HourlyAttacker& a, double budget, int steps) {
  const long solves0 = a.solves();
  const auto hourly = decoupled_attack(a, budget);
  AttackPlan plan = refine_budget_allocation(a, hourly, budget, steps);
  plan.milp_solves = a.solves() - solves0;
  return plan;
}

}  // namespace interdict

#endif
