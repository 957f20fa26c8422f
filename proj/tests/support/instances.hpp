#ifndef INTERDICT_TESTS_INSTANCES_HPP
#define INTERDICT_TESTS_INSTANCES_HPP

// Small hand-checkable networks shared by the test binaries.

#include <string>
#include <vector>

#include "interdict/dcopf.hpp"
#include "interdict/network.hpp"

namespace interdict::oracle {

inline Bus bus(std::string id, double share) { return {std::move(id), share}; }

inline Line line(std::string id, int from, int to, double b, double fmax, double thmax) {
  return {std::move(id), from, to, b, fmax, thmax};
}

inline Generator gen(std::string id, int node, double pmax, double cost, std::string tech = "gas") {
  return {std::move(id), node, std::move(tech), 0.0, pmax, cost};
}

/// n1 (reference) -> n2, b = 10 pu, 50 MW limit; cheap unit at n1, dear unit at n2.
inline PowerNetwork two_bus(bool with_gen2 = true) {
  PowerNetwork net;
  net.name = "two-bus";
  net.nodes = {bus("n1", 0.5), bus("n2", 0.5)};
  net.edges = {line("l12", 0, 1, 10.0, 50.0, 0.5)};
  net.generators = {gen("g1", 0, 150.0, 20.0)};
  if (with_gen2) net.generators.push_back(gen("g2", 1, 150.0, 90.0, "oil"));
  net.reference = 0;
  net.total_customers = 1000.0;
  net.validate();
  return net;
}

/// Triangle n1, n2, n3 with equal susceptances; only n1 -> n3 is limited (80 MW).
inline PowerNetwork triangle(bool with_gen3 = true) {
  PowerNetwork net;
  net.name = "triangle";
  net.nodes = {bus("n1", 0.2), bus("n2", 0.3), bus("n3", 0.5)};
  net.edges = {line("l12", 0, 1, 10.0, 500.0, 1.0), line("l23", 1, 2, 10.0, 500.0, 1.0),
               line("l13", 0, 2, 10.0, 80.0, 1.0)};
  net.generators = {gen("g1", 0, 200.0, 10.0, "hydro")};
  if (with_gen3) net.generators.push_back(gen("g3", 2, 200.0, 50.0, "gas"));
  net.reference = 0;
  net.total_customers = 1000.0;
  net.validate();
  return net;
}

/// Triangle whose load bus n3 has no unit and two 30 MW feeders; 90 MW of
/// generation sits at n1 and n2, so 30 MW is spare.
inline PowerNetwork island_triangle() {
  PowerNetwork net;
  net.name = "island-triangle";
  net.nodes = {bus("n1", 0.25), bus("n2", 0.25), bus("n3", 0.5)};
  net.edges = {line("l12", 0, 1, 10.0, 100.0, 1.0), line("l13", 0, 2, 10.0, 30.0, 1.0),
               line("l23", 1, 2, 10.0, 30.0, 1.0)};
  net.generators = {gen("g1", 0, 50.0, 10.0, "hydro"), gen("g2", 1, 40.0, 20.0, "gas")};
  net.reference = 0;
  net.total_customers = 1000.0;
  net.validate();
  return net;
}

/// Demand profile with the same per-node load every hour.
inline DemandProfile flat_demand(const PowerNetwork& net, const std::vector<double>& load, double voll = 1000.0) {
  DemandProfile d({"summer"}, net.num_nodes());
  for (int h = 0; h < d.num_hours(); ++h)
    for (int n = 0; n < net.num_nodes(); ++n) {
      d.demand(0, h, n) = load[n];
      d.voll(0, h, n) = voll;
    }
  return d;
}

inline HourData hour(const std::vector<double>& load, double voll = 1000.0) {
  return {load, std::vector<double>(load.size(), voll)};
}

}  // namespace interdict::oracle

#endif
