#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "interdict/scenario.hpp"
#include "support/instances.hpp"

using namespace interdict;

namespace {

const std::string kData = INTERDICT_DATA_DIR;

// Two buses, one 150 MW unit at n1 and a 50 MW feeder. n2's evening peak
// comes close to the feeder limit, so a little line damage sheds load.
struct Day {
  PowerNetwork net = oracle::two_bus(false);
  DemandProfile d{{"summer"}, 2};
  Day() {
    for (int h = 0; h < 24; ++h) {
      const double f = 0.55 + 0.45 * std::exp(-0.5 * std::pow((h - 16) / 3.0, 2));
      d.demand(0, h, 0) = 60.0 * f;
      d.demand(0, h, 1) = 46.0 * f;
      d.voll(0, h, 0) = d.voll(0, h, 1) = 1000.0;
    }
  }
};

ScenarioConfig cfg_of(ScenarioKind k, double budget) {
  ScenarioConfig c;
  c.kind = k;
  c.budget = budget;
  return c;
}

void expect_same_shed(const ScenarioResult& a, const ScenarioResult& b, double tol) {
  ASSERT_EQ(a.unserved.size(), b.unserved.size());
  for (std::size_t s = 0; s < a.unserved.size(); ++s)
    for (std::size_t h = 0; h < a.unserved[s].size(); ++h)
      for (std::size_t n = 0; n < a.unserved[s][h].size(); ++n)
        EXPECT_NEAR(a.unserved[s][h][n], b.unserved[s][h][n], tol) << s << "/" << h << "/" << n;
  EXPECT_NEAR(a.unserved_energy, b.unserved_energy, tol);
}

ScenarioConfig parse(const std::string& text) {
  std::istringstream in(text);
  return parse_config(in, "test.cfg");
}

}  // namespace

TEST(ParseConfig, DefaultsAndComments) {
  const auto c = parse("# a comment\nkind = Compound\n\nbudget = 60   # per season\n");
  EXPECT_EQ(c.kind, ScenarioKind::compound);
  EXPECT_DOUBLE_EQ(c.budget, 60.0);
  EXPECT_DOUBLE_EQ(c.heatwave_factor, 1.09);
  EXPECT_DOUBLE_EQ(c.cost_ratio, 5.0);
  EXPECT_EQ(c.gamma_iterations, 6);
  EXPECT_EQ(c.beta_iterations, 6);
  EXPECT_EQ(parse("kind = cyber").kind, ScenarioKind::cyberattack);
}

TEST(ParseConfig, RoundTripsThroughText) {
  auto c = parse("kind = heatwave\nheatwave_factor = 1.2\ncost_ratio = 3\nbudget = 12.5\nrefine_steps = 4\n");
  const auto again = parse(config_text(c));
  EXPECT_EQ(again.kind, c.kind);
  EXPECT_EQ(again.heatwave_factor, c.heatwave_factor);
  EXPECT_EQ(again.cost_ratio, c.cost_ratio);
  EXPECT_EQ(again.budget, c.budget);
  EXPECT_EQ(again.refine_steps, 4);
}

TEST(ParseConfig, RejectsBadInput) {
  EXPECT_THROW(parse("budget 60"), ValidationError);
  EXPECT_THROW(parse("bugdet = 60"), ValidationError);
  EXPECT_THROW(parse("budget = lots"), ValidationError);
  EXPECT_THROW(parse("budget = -1"), ValidationError);
  EXPECT_THROW(parse("heatwave_factor = 0"), ValidationError);
  EXPECT_THROW(parse("cost_ratio = -5"), ValidationError);
  EXPECT_THROW(parse("gamma_iterations = 11"), ValidationError);
  EXPECT_THROW(parse("kind = blackout"), ValidationError);
  try {
    parse("\n\nnope = 1");
    FAIL();
  } catch (const ValidationError& e) {
    EXPECT_NE(std::string(e.what()).find("test.cfg:3"), std::string::npos) << e.what();
  }
}

TEST(LoadConfig, PathsAreRelativeToTheFile) {
  const auto c = load_config(kData + "/configs/compound.cfg");
  EXPECT_EQ(c.kind, ScenarioKind::compound);
  EXPECT_TRUE(std::filesystem::exists(c.network)) << c.network;
  EXPECT_TRUE(std::filesystem::exists(c.demand)) << c.demand;
  for (const char* f : {"baseline", "heatwave", "cyberattack"})
    EXPECT_NO_THROW(load_config(kData + "/configs/" + f + ".cfg")) << f;
  EXPECT_THROW(load_config(kData + "/configs/missing.cfg"), ValidationError);
}

TEST(SweepMultipliers, Ladders) {
  EXPECT_DOUBLE_EQ(gamma_multiplier(1), 1.0);
  EXPECT_NEAR(gamma_multiplier(6), 1.0 / 3.0, 1e-15);
  EXPECT_DOUBLE_EQ(beta_multiplier(1), 1.0);
  EXPECT_DOUBLE_EQ(beta_multiplier(6), 2.0);
}

TEST(RunScenario, BundledBaselineAndHeatwaveShedNothing) {
  const auto net = load_network(kData + "/synthetic16.json");
  const auto d = load_demand(kData + "/synthetic16_demand.csv", net);
  for (auto k : {ScenarioKind::baseline, ScenarioKind::heatwave}) {
    const auto r = run_scenario(cfg_of(k, 60.0), net, d);
    EXPECT_EQ(r.unserved_energy, 0.0) << to_string(k);
    EXPECT_EQ(r.customers_affected, 0);
    EXPECT_TRUE(r.strategy.empty());
    for (const auto& row : r.shock) {
      EXPECT_EQ(row.percent_reduction, 0.0) << row.region;
      EXPECT_EQ(row.sector, "Utilities");
    }
  }
  const auto heat = run_scenario(cfg_of(ScenarioKind::heatwave, 0.0), net, d);
  EXPECT_DOUBLE_EQ(heat.demand_factor, 1.09);
  EXPECT_NEAR(heat.demand_energy, 1.09 * run_scenario(cfg_of(ScenarioKind::baseline, 0.0), net, d).demand_energy,
              1e-6);
}

TEST(RunScenario, AttackerShedsOnTheSmallDay) {
  const Day day;
  const auto r = run_scenario(cfg_of(ScenarioKind::cyberattack, 60.0), day.net, day.d);
  EXPECT_GT(r.unserved_energy, 1.0);
  EXPECT_FALSE(r.strategy.empty());
  EXPECT_TRUE(r.bigm_valid);
  EXPECT_GT(r.milp_solves, 0);
  double spend = 0.0;
  for (const auto& x : r.strategy) spend += x.spend;
  EXPECT_LE(spend, 60.0 + 1e-6);
  // The peak is where the feeder is closest to its limit.
  EXPECT_NEAR(r.peak_hour, 16, 2);
  EXPECT_GT(r.peak_shed, 0.0);
}

TEST(ScenarioAlgebra, ZeroBudgetAndUnitFactor) {
  const Day day;
  const auto base = run_scenario(cfg_of(ScenarioKind::baseline, 0.0), day.net, day.d);
  const auto cyber0 = run_scenario(cfg_of(ScenarioKind::cyberattack, 0.0), day.net, day.d);
  expect_same_shed(cyber0, base, 1e-6);

  auto heat = cfg_of(ScenarioKind::heatwave, 0.0);
  heat.heatwave_factor = 1.3;
  auto comp0 = cfg_of(ScenarioKind::compound, 0.0);
  comp0.heatwave_factor = 1.3;
  const auto h = run_scenario(heat, day.net, day.d);
  EXPECT_GT(h.unserved_energy, 0.0);
  expect_same_shed(run_scenario(comp0, day.net, day.d), h, 1e-6);

  auto comp1 = cfg_of(ScenarioKind::compound, 60.0);
  comp1.heatwave_factor = 1.0;
  expect_same_shed(run_scenario(comp1, day.net, day.d),
                   run_scenario(cfg_of(ScenarioKind::cyberattack, 60.0), day.net, day.d), 1e-6);
}

TEST(ScenarioMetrics, CustomersAndShockArithmetic) {
  const Day day;
  auto c = cfg_of(ScenarioKind::compound, 60.0);
  c.heatwave_factor = 1.2;
  const auto r = run_scenario(c, day.net, day.d);
  ASSERT_GT(r.unserved_energy, 0.0);
  EXPECT_EQ(r.customers_affected, std::llround(r.unserved_energy / r.demand_energy * day.net.total_customers));
  EXPECT_LE(r.customers_affected, static_cast<long long>(day.net.total_customers));
  EXPECT_NEAR(r.percent_unserved, 100.0 * r.unserved_energy / r.demand_energy, 1e-12);

  ASSERT_EQ(r.shock.size(), 2u);
  for (const auto& row : r.shock) {
    const int n = day.net.node_index(row.region);
    ASSERT_GE(n, 0);
    double u = 0.0, dem = 0.0;
    for (int h = 0; h < 24; ++h) {
      u += r.unserved[0][h][n];
      dem += 1.2 * day.d.demand(0, h, n);
    }
    EXPECT_NEAR(row.percent_reduction, 100.0 * u / dem, 1e-9) << row.region;
    EXPECT_GE(row.percent_reduction, 0.0);
    EXPECT_LE(row.percent_reduction, 100.0);
  }
  EXPECT_LT(r.shock[0].region, r.shock[1].region);
}

TEST(Sweeps, MonotoneOnTheSmallDay) {
  const Day day;
  auto c = cfg_of(ScenarioKind::cyberattack, 40.0);
  c.heatwave_factor = 1.1;
  const auto beta = beta_sweep(c, day.net, day.d);
  const auto gamma = gamma_sweep(c, day.net, day.d);
  ASSERT_EQ(beta.size(), 6u);
  ASSERT_EQ(gamma.size(), 6u);
  for (std::size_t i = 1; i < 6; ++i) {
    EXPECT_GE(beta[i].cyberattack.unserved_energy, beta[i - 1].cyberattack.unserved_energy - 1e-6) << i;
    EXPECT_GE(beta[i].compound.unserved_energy, beta[i - 1].compound.unserved_energy - 1e-6) << i;
    EXPECT_GE(gamma[i].cyberattack.unserved_energy, gamma[i - 1].cyberattack.unserved_energy - 1e-6) << i;
    EXPECT_GE(gamma[i].compound.unserved_energy, gamma[i - 1].compound.unserved_energy - 1e-6) << i;
  }
  EXPECT_DOUBLE_EQ(beta[5].budget, 80.0);
  EXPECT_NEAR(gamma[5].gen_cost, 1.5, 1e-12);
  EXPECT_NEAR(gamma[5].flow_cost, 2.5, 1e-12);
  EXPECT_NEAR(gamma[5].gen_over_flow(), 0.6, 1e-12);

  // The first rung of either ladder is the default run.
  const auto plain = run_scenario(c, day.net, day.d);
  expect_same_shed(beta[0].cyberattack, plain, 1e-9);
  expect_same_shed(gamma[0].cyberattack, plain, 1e-9);
}

TEST(RunScenario, RejectsMismatchedDemand) {
  const Day day;
  const auto tri = oracle::triangle();
  EXPECT_ANY_THROW(run_scenario(cfg_of(ScenarioKind::baseline, 0.0), tri, day.d));
  auto bad = cfg_of(ScenarioKind::cyberattack, 10.0);
  bad.cost_ratio = 0.0;
  EXPECT_THROW(run_scenario(bad, day.net, day.d), ValidationError);
}
