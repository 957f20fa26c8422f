#ifndef INTERDICT_KKT_HPP
#define INTERDICT_KKT_HPP

// Complementarity-form certificate for the DC-OPF.
//
// Free-variable conditions are equalities:
//   gen      c_k - pi_n(k) - rlo_g + rhi_g = 0
//   shed     voll_n - pi_n - rlo_u + rhi_u = 0
//   flow     (A pi)_e + pi_f_e - rlo_f + rhi_f = 0
//   angle    A'(B pi_f + rlo_th - rhi_th) + delta e_ref = 0
//   balance, flow law, reference angle.
// Every bound contributes a pair F >= 0, y >= 0, F*y = 0, measured as the
// elementwise product. Pair order: g lo, g hi, f lo, f hi, th lo, th hi,
// u lo, u hi, each block in entity order.

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include "interdict/dcopf.hpp"
#include "interdict/errors.hpp"
#include "interdict/network.hpp"

namespace interdict {

struct KktResiduals {
  std::vector<double> stat_g, stat_u, stat_f, stat_theta;
  std::vector<double> balance, flow_law;
  double reference = 0.0;
  std::vector<double> bound_violation;   // max(0, -F) per pair
  std::vector<double> sign_violation;    // max(0, -y) per pair
  std::vector<double> complementarity;   // |y F| per pair

  static double norm(const std::vector<double>& v) {
    double m = 0.0;
    for (double x : v) m = std::max(m, x);
    return m;
  }

  std::vector<std::pair<std::string, double>> summary() const {
    return {{"stationarity_g", norm(stat_g)},
            {"stationarity_u", norm(stat_u)},
            {"stationarity_f", norm(stat_f)},
            {"stationarity_theta", norm(stat_theta)},
            {"balance", norm(balance)},
            {"flow_law", norm(flow_law)},
            {"reference", reference},
            {"bounds", norm(bound_violation)},
            {"multiplier_sign", norm(sign_violation)},
            {"complementarity", norm(complementarity)}};
  }

  double max_norm() const {
    double m = 0.0;
    for (const auto& [k, v] : summary()) m = std::max(m, v);
    return m;
  }
};

inline KktResiduals kkt_residuals(const PowerNetwork& net, const HourData& hd, const OpfSolution& o,
                                  const HourAttack* attack = nullptr) {
  const int G = net.num_generators(), E = net.num_edges(), N = net.num_nodes();
  auto check = [](const std::vector<double>& v, int n, const char* what) {
    if (static_cast<int>(v.size()) != n) throw DimensionError(std::string("kkt: size mismatch in ") + what);
  };
  check(o.g, G, "g"), check(o.rho_g_lo, G, "rho_g_lo"), check(o.rho_g_hi, G, "rho_g_hi");
  check(o.f, E, "f"), check(o.pi_f, E, "pi_f"), check(o.rho_f_lo, E, "rho_f_lo"), check(o.rho_f_hi, E, "rho_f_hi");
  check(o.rho_th_lo, E, "rho_th_lo"), check(o.rho_th_hi, E, "rho_th_hi");
  check(o.u, N, "u"), check(o.theta, N, "theta"), check(o.pi, N, "pi");
  check(o.rho_u_lo, N, "rho_u_lo"), check(o.rho_u_hi, N, "rho_u_hi");
  check(hd.demand, N, "demand"), check(hd.voll, N, "voll");
  const auto lim = opf_limits(net, attack);

  KktResiduals r;
  for (int k = 0; k < G; ++k) {
    const auto& gen = net.generators[k];
    r.stat_g.push_back(std::abs(gen.cost - o.pi[gen.node] - o.rho_g_lo[k] + o.rho_g_hi[k]));
  }
  for (int n = 0; n < N; ++n) r.stat_u.push_back(std::abs(hd.voll[n] - o.pi[n] - o.rho_u_lo[n] + o.rho_u_hi[n]));
  std::vector<double> angle_sum(N, 0.0);
  angle_sum[net.reference] += o.delta;
  for (int e = 0; e < E; ++e) {
    const auto& ed = net.edges[e];
    r.stat_f.push_back(std::abs(o.pi[ed.from] - o.pi[ed.to] + o.pi_f[e] - o.rho_f_lo[e] + o.rho_f_hi[e]));
    const double w = net.flow_factor(e) * o.pi_f[e] + o.rho_th_lo[e] - o.rho_th_hi[e];
    angle_sum[ed.from] += w;
    angle_sum[ed.to] -= w;
  }
  for (int n = 0; n < N; ++n) r.stat_theta.push_back(std::abs(angle_sum[n]));

  std::vector<double> bal(N, 0.0);
  for (int k = 0; k < G; ++k) bal[net.generators[k].node] += o.g[k];
  std::vector<double> dth(E);
  for (int e = 0; e < E; ++e) {
    const auto& ed = net.edges[e];
    bal[ed.from] -= o.f[e];
    bal[ed.to] += o.f[e];
    dth[e] = o.theta[ed.from] - o.theta[ed.to];
    r.flow_law.push_back(std::abs(-o.f[e] + net.flow_factor(e) * dth[e]));
  }
  for (int n = 0; n < N; ++n) r.balance.push_back(std::abs(bal[n] + o.u[n] - hd.demand[n]));
  r.reference = std::abs(o.theta[net.reference]);

  auto pair = [&](double F, double y) {
    r.bound_violation.push_back(std::max(0.0, -F));
    r.sign_violation.push_back(std::max(0.0, -y));
    r.complementarity.push_back(std::abs(F * y));
  };
  for (int k = 0; k < G; ++k) pair(o.g[k] - lim.g_lo[k], o.rho_g_lo[k]);
  for (int k = 0; k < G; ++k) pair(lim.g_hi[k] - o.g[k], o.rho_g_hi[k]);
  for (int e = 0; e < E; ++e) pair(o.f[e] + lim.f_max[e], o.rho_f_lo[e]);
  for (int e = 0; e < E; ++e) pair(lim.f_max[e] - o.f[e], o.rho_f_hi[e]);
  for (int e = 0; e < E; ++e) pair(dth[e] + lim.th_max[e], o.rho_th_lo[e]);
  for (int e = 0; e < E; ++e) pair(lim.th_max[e] - dth[e], o.rho_th_hi[e]);
  for (int n = 0; n < N; ++n) pair(o.u[n], o.rho_u_lo[n]);
  for (int n = 0; n < N; ++n) pair(hd.demand[n] - o.u[n], o.rho_u_hi[n]);
  return r;
}

inline KktResiduals kkt_residuals(const PowerNetwork& net, const DemandProfile& d, const OpfSolution& o,
                                  const HourAttack* attack = nullptr) {
  return kkt_residuals(net, hour_data(d, o.season, o.hour), o, attack);
}

inline bool verify_equilibrium(const KktResiduals& res, double tol) {
  if (!(tol > 0.0)) throw std::invalid_argument("verify_equilibrium: tolerance must be positive");
  return res.max_norm() <= tol;
}

}  // namespace interdict

#endif
