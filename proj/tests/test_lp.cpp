#include <gtest/gtest.h>

#include <algorithm>
#include <array>
#include <numeric>
#include <random>

#include "interdict/lp.hpp"
#include "support/lp_certificate.hpp"
#include "support/random_programs.hpp"

using namespace interdict;

TEST(SolveLp, LowerBoundRow) {
  LpProblem p;
  const int x = p.add_col(1.0, -kInf, kInf, "x");
  p.add_row({{x, 1.0}}, 3.0, kInf, "x_ge_3");
  const auto s = solve_lp(p);
  ASSERT_EQ(s.status, LpStatus::optimal);
  EXPECT_NEAR(s.x[0], 3.0, 1e-12);
  EXPECT_NEAR(s.row_dual[0], 1.0, 1e-12);
  EXPECT_NEAR(s.objective, 3.0, 1e-12);
}

TEST(SolveLp, LowerBoundColumn) {
  LpProblem p;
  p.add_col(1.0, 3.0, kInf, "x");
  const auto s = solve_lp(p);
  ASSERT_EQ(s.status, LpStatus::optimal);
  EXPECT_NEAR(s.x[0], 3.0, 1e-12);
  EXPECT_NEAR(s.reduced_cost[0], 1.0, 1e-12);
}

TEST(SolveLp, DegenerateFace) {
  LpProblem p;
  const int x = p.add_col(-1.0, 0.0, kInf);
  const int y = p.add_col(-1.0, 0.0, kInf);
  p.add_row({{x, 1.0}, {y, 1.0}}, -kInf, 1.0, "couple");
  const auto s = solve_lp(p);
  ASSERT_EQ(s.status, LpStatus::optimal);
  EXPECT_NEAR(s.objective, -1.0, 1e-12);
  EXPECT_NEAR(s.x[0] + s.x[1], 1.0, 1e-12);
  // Relaxing the row by one unit lowers the objective by one: multiplier 1 on x+y <= 1.
  EXPECT_NEAR(s.row_dual[0], -1.0, 1e-12);
}

namespace {

struct Unit {
  double cost;
  double cap;
};

// Cheapest dispatch over every fill order of the units; returns {cost, price}.
std::pair<double, double> dispatch_by_enumeration(std::array<Unit, 3> units, double demand) {
  std::array<int, 3> order{0, 1, 2};
  double best = kInf;
  double price = 0.0;
  do {
    double left = demand, cost = 0.0, marginal = 0.0;
    for (int k : order) {
      const double take = std::min(left, units[k].cap);
      if (take > 0) marginal = units[k].cost;
      cost += take * units[k].cost;
      left -= take;
    }
    if (left <= 0 && cost < best) {
      best = cost;
      price = marginal;
    }
  } while (std::next_permutation(order.begin(), order.end()));
  return {best, price};
}

}  // namespace

TEST(SolveLp, MeritOrderDispatch) {
  const std::array<Unit, 3> units{{{30.0, 40.0}, {10.0, 50.0}, {20.0, 60.0}}};
  for (double demand : {20.0, 80.0, 125.0}) {
    const auto [cost, price] = dispatch_by_enumeration(units, demand);
    LpProblem p;
    std::vector<Term> bal;
    for (const auto& u : units) bal.push_back({p.add_col(u.cost, 0.0, u.cap), 1.0});
    p.add_row(bal, demand, demand, "balance");
    const auto s = solve_lp(p);
    ASSERT_EQ(s.status, LpStatus::optimal);
    EXPECT_NEAR(s.objective, cost, 1e-9) << demand;
    EXPECT_NEAR(s.row_dual[0], price, 1e-9) << demand;
  }
}

TEST(SolveLp, Infeasible) {
  LpProblem p;
  const int x = p.add_col(1.0, 0.0, 10.0);
  p.add_row({{x, 1.0}}, 2.0, kInf);
  p.add_row({{x, 1.0}}, -kInf, 1.0);
  EXPECT_EQ(solve_lp(p).status, LpStatus::infeasible);
}

TEST(SolveLp, Unbounded) {
  LpProblem p;
  const int x = p.add_col(-1.0, 0.0, kInf);
  const int y = p.add_col(0.0, 0.0, kInf);
  p.add_row({{x, 1.0}, {y, -1.0}}, -kInf, 4.0);
  EXPECT_EQ(solve_lp(p).status, LpStatus::unbounded);
}

TEST(SolveLp, MaximizeReportsDualsInObjectiveSense) {
  LpProblem p;
  p.sense = Sense::maximize;
  const int x = p.add_col(3.0, 0.0, kInf);
  const int y = p.add_col(2.0, 0.0, kInf);
  p.add_row({{x, 1.0}, {y, 1.0}}, -kInf, 4.0);
  p.add_row({{x, 1.0}, {y, 3.0}}, -kInf, 7.0);
  p.add_row({{x, 1.0}}, -kInf, 3.0);
  const auto s = solve_lp(p);
  ASSERT_EQ(s.status, LpStatus::optimal);
  EXPECT_NEAR(s.objective, 11.0, 1e-9);  // x=3, y=1
  EXPECT_NEAR(s.row_dual[0], 2.0, 1e-9);
  EXPECT_NEAR(s.row_dual[2], 1.0, 1e-9);
  const auto cert = oracle::certify(p, s);
  EXPECT_LT(cert.gap, 1e-9);
}

TEST(SolveLp, WarmStartAfterBoundChange) {
  LpProblem p;
  const int a = p.add_col(2.0, 0.0, 5.0);
  const int b = p.add_col(3.0, 0.0, 10.0);
  p.add_row({{a, 1.0}, {b, 1.0}}, 7.0, 7.0);
  detail::SimplexEngine eng(p);
  const auto first = eng.solve(nullptr);
  ASSERT_EQ(first.status, LpStatus::optimal);
  EXPECT_NEAR(first.objective, 2 * 5 + 3 * 2, 1e-9);
  eng.set_col_bounds(a, 0.0, 1.0);
  const auto second = eng.solve(&first.basis);
  ASSERT_EQ(second.status, LpStatus::optimal);
  EXPECT_NEAR(second.objective, 2 * 1 + 3 * 6, 1e-9);
  eng.set_col_bounds(b, 0.0, 5.0);
  EXPECT_EQ(eng.solve(&second.basis).status, LpStatus::infeasible);
}



TEST(SolveLp, RandomProblemsCertifyOptimal) {
  std::mt19937_64 rng(20240601);
  for (int trial = 0; trial < 300; ++trial) {
    const auto p = oracle::random_lp(rng);
    const auto s = solve_lp(p);
    ASSERT_EQ(s.status, LpStatus::optimal) << "trial " << trial;
    const auto c = oracle::certify(p, s);
    EXPECT_LT(c.primal_residual, tol::feas) << trial;
    EXPECT_LT(c.stationarity, tol::cs) << trial;
    EXPECT_LT(c.sign_violation, tol::cs) << trial;
    EXPECT_LT(c.gap, tol::gap) << trial;
  }
}

TEST(SolveLp, Deterministic) {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 20; ++trial) {
    const auto p = oracle::random_lp(rng);
    const auto a = solve_lp(p), b = solve_lp(p);
    EXPECT_EQ(a.x, b.x);
    EXPECT_EQ(a.row_dual, b.row_dual);
    EXPECT_EQ(a.objective, b.objective);
  }
}

TEST(SolveLp, RejectsMalformedProblem) {
  LpProblem p;
  p.add_col(1.0, 0.0, 1.0);
  p.add_row({{3, 1.0}}, 0.0, 1.0);
  EXPECT_THROW(solve_lp(p), DimensionError);
  LpProblem q;
  q.add_col(std::numeric_limits<double>::quiet_NaN(), 0.0, 1.0);
  EXPECT_THROW(solve_lp(q), ValidationError);
}
