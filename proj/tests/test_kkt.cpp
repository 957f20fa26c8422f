#include <gtest/gtest.h>

#include "interdict/kkt.hpp"
#include "support/instances.hpp"

using namespace interdict;
using oracle::hour;

TEST(KktResiduals, LpOptimumIsAnEquilibrium) {
  const auto net = oracle::two_bus();
  const auto hd = hour({0.0, 80.0});
  const auto res = kkt_residuals(net, hd, solve_dcopf(net, hd));
  for (const auto& [name, v] : res.summary()) EXPECT_LE(v, 1e-6) << name;
  EXPECT_TRUE(verify_equilibrium(res, 1e-6));
}

TEST(KktResiduals, BalanceViolationIsMeasured) {
  const auto net = oracle::two_bus();
  const auto hd = hour({0.0, 80.0});
  auto o = solve_dcopf(net, hd);
  o.g[1] -= 5.0;
  const auto res = kkt_residuals(net, hd, o);
  EXPECT_NEAR(res.balance[1], 5.0, 1e-9);
  EXPECT_NEAR(res.balance[0], 0.0, 1e-9);
  EXPECT_FALSE(verify_equilibrium(res, 1e-6));
}

TEST(KktResiduals, ZeroPointLeavesDemandUnbalanced) {
  const auto net = oracle::triangle();
  const auto hd = hour({12.0, 0.0, 150.0});
  auto o = solve_dcopf(net, hd);
  for (auto* v : {&o.g, &o.f, &o.u, &o.theta, &o.pi, &o.pi_f, &o.rho_g_lo, &o.rho_g_hi, &o.rho_f_lo, &o.rho_f_hi,
                  &o.rho_th_lo, &o.rho_th_hi, &o.rho_u_lo, &o.rho_u_hi})
    std::fill(v->begin(), v->end(), 0.0);
  o.delta = 0.0;
  const auto res = kkt_residuals(net, hd, o);
  for (int n = 0; n < 3; ++n) EXPECT_EQ(res.balance[n], hd.demand[n]);
}

TEST(KktResiduals, ShiftedBoundsUnderAttack) {
  const auto net = oracle::two_bus();
  const auto hd = hour({0.0, 80.0});
  HourAttack z{{0.0, 40.0}, {20.0}, {0.0}, 0.0};
  const auto attacked = solve_dcopf(net, hd, &z);
  EXPECT_NEAR(attacked.f[0], 30.0, 1e-6);
  EXPECT_NEAR(attacked.g[1], 110.0 - 60.0, 1e-6);
  EXPECT_TRUE(verify_equilibrium(kkt_residuals(net, hd, attacked, &z), 1e-6));
  // The same point breaks the unattacked bounds' complementarity.
  EXPECT_FALSE(verify_equilibrium(kkt_residuals(net, hd, attacked), 1e-6));
}

TEST(VerifyEquilibrium, Thresholds) {
  KktResiduals r;
  r.stat_g = {0.0, 0.0};
  r.balance = {0.0};
  EXPECT_TRUE(verify_equilibrium(r, 1e-6));
  r.stat_g[1] = 1e-3;
  EXPECT_FALSE(verify_equilibrium(r, 1e-6));
  EXPECT_THROW(verify_equilibrium(r, 0.0), std::invalid_argument);
}

TEST(KktResiduals, DimensionMismatchThrows) {
  const auto net = oracle::two_bus();
  auto o = solve_dcopf(net, hour({0.0, 80.0}));
  o.pi.pop_back();
  EXPECT_THROW(kkt_residuals(net, hour({0.0, 80.0}), o), DimensionError);
}
