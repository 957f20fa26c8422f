#include <gtest/gtest.h>

#include <random>

#include "interdict/milp.hpp"
#include "support/random_programs.hpp"

using namespace interdict;

TEST(SolveMilp, SingleBinaryUnderFractionalCap) {
  MilpProblem p;
  p.lp.sense = Sense::maximize;
  const int x = p.lp.add_col(1.0, 0.0, 1.0, "x");
  p.lp.add_row({{x, 1.0}}, -kInf, 1.5);
  p.binaries = {x};
  const auto s = solve_milp(p);
  ASSERT_EQ(s.status, MilpStatus::optimal);
  EXPECT_DOUBLE_EQ(s.x[x], 1.0);
}

TEST(SolveMilp, Knapsack) {
  MilpProblem p;
  p.lp.sense = Sense::maximize;
  const int a = p.lp.add_col(3.0, 0.0, 1.0, "a");
  const int b = p.lp.add_col(2.0, 0.0, 1.0, "b");
  p.lp.add_row({{a, 2.0}, {b, 2.0}}, -kInf, 3.0);
  p.binaries = {a, b};
  const auto s = solve_milp(p);
  ASSERT_EQ(s.status, MilpStatus::optimal);
  EXPECT_DOUBLE_EQ(s.objective, 3.0);
  EXPECT_DOUBLE_EQ(s.x[a], 1.0);
  EXPECT_DOUBLE_EQ(s.x[b], 0.0);
}

TEST(SolveMilp, Infeasible) {
  MilpProblem p;
  const int a = p.lp.add_col(1.0, 0.0, 1.0);
  const int b = p.lp.add_col(1.0, 0.0, 1.0);
  p.lp.add_row({{a, 1.0}, {b, 1.0}}, 0.5, 0.5);
  p.binaries = {a, b};
  EXPECT_EQ(solve_milp(p).status, MilpStatus::infeasible);
}

TEST(SolveMilp, RejectsNonBinaryBounds) {
  MilpProblem p;
  const int a = p.lp.add_col(1.0, 0.0, 2.0);
  p.binaries = {a};
  EXPECT_THROW(solve_milp(p), ValidationError);
}



TEST(SolveMilp, MatchesExhaustiveEnumeration) {
  std::mt19937_64 rng(99);
  int feasible = 0;
  for (int trial = 0; trial < 120; ++trial) {
    const auto r = oracle::random_binary_program(rng, 8);
    const auto expect = oracle::enumerate(r);
    const auto s = solve_milp(r.milp);
    if (!expect) {
      EXPECT_EQ(s.status, MilpStatus::infeasible) << trial;
      continue;
    }
    ++feasible;
    ASSERT_EQ(s.status, MilpStatus::optimal) << trial;
    EXPECT_DOUBLE_EQ(s.objective, *expect) << trial;
    for (int j : r.milp.binaries) EXPECT_TRUE(s.x[j] == 0.0 || s.x[j] == 1.0);
  }
  EXPECT_GT(feasible, 60);
}

TEST(SolveMilp, IncumbentNeverBeatsRelaxation) {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 40; ++trial) {
    auto r = oracle::random_binary_program(rng, 8);
    r.milp.lp.sense = Sense::maximize;
    const auto s = solve_milp(r.milp);
    if (s.status != MilpStatus::optimal) continue;
    const auto relax = solve_lp(r.milp.lp);
    ASSERT_EQ(relax.status, LpStatus::optimal);
    EXPECT_LE(s.objective, relax.objective + 1e-9);
    EXPECT_NEAR(s.root_bound, relax.objective, 1e-9);
  }
}

TEST(SolveMilp, NodeLimitReturnsIncumbent) {
  // Equality knapsack with many near-ties needs several nodes.
  MilpProblem p;
  p.lp.sense = Sense::maximize;
  std::vector<Term> row;
  for (int j = 0; j < 12; ++j) {
    const int c = p.lp.add_col(10.0 + j, 0.0, 1.0);
    p.binaries.push_back(c);
    row.push_back({c, 7.0 + j});
  }
  p.lp.add_row(row, -kInf, 40.5);
  MilpOptions opt;
  opt.node_limit = 15;
  const auto s = solve_milp(p, opt);
  EXPECT_TRUE(s.status == MilpStatus::feasible_limit || s.status == MilpStatus::optimal);
  EXPECT_LE(s.nodes, 15);
  const auto full = solve_milp(p);
  EXPECT_EQ(full.status, MilpStatus::optimal);
  EXPECT_LE(s.objective, full.objective);
}

TEST(SolveMilp, Deterministic) {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 10; ++trial) {
    const auto r = oracle::random_binary_program(rng, 8);
    const auto a = solve_milp(r.milp), b = solve_milp(r.milp);
    EXPECT_EQ(a.x, b.x);
    EXPECT_EQ(a.nodes, b.nodes);
  }
}
