#ifndef INTERDICT_NETWORK_HPP
#define INTERDICT_NETWORK_HPP

// Power network and demand data, with strict file ingestion.
//
// Network files are JSON (schema in docs/formats.md); demand files are CSV
// with header `season,hour,node,demand_mw,voll`. Flow and angle-difference
// limits are symmetric: each edge stores only the upper limits.

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <numeric>
#include <queue>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "interdict/csv.hpp"
#include "interdict/errors.hpp"

namespace interdict {

struct Bus {
  std::string id;
  double customer_share = 0.0;
};

struct Line {
  std::string id;
  int from = 0;
  int to = 0;
  double susceptance = 0.0;  // per unit on the network's MVA base
  double flow_limit = 0.0;   // MW, |f| <= flow_limit
  double angle_limit = 0.0;  // rad, |theta_from - theta_to| <= angle_limit
};

struct Generator {
  std::string id;
  int node = 0;
  std::string technology;
  double p_min = 0.0;  // MW
  double p_max = 0.0;  // MW
  double cost = 0.0;   // $/MWh
};

class PowerNetwork {
public:
  std::string name;
  std::vector<Bus> nodes;
  std::vector<Line> edges;
  std::vector<Generator> generators;
  int reference = 0;
  double total_customers = 0.0;
  double base_mva = 100.0;

  int num_nodes() const { return static_cast<int>(nodes.size()); }
  int num_edges() const { return static_cast<int>(edges.size()); }
  int num_generators() const { return static_cast<int>(generators.size()); }

  int node_index(const std::string& id) const {
    for (int i = 0; i < num_nodes(); ++i)
      if (nodes[i].id == id) return i;
    return -1;
  }
  int edge_index(const std::string& id) const {
    for (int i = 0; i < num_edges(); ++i)
      if (edges[i].id == id) return i;
    return -1;
  }
  int generator_index(const std::string& id) const {
    for (int i = 0; i < num_generators(); ++i)
      if (generators[i].id == id) return i;
    return -1;
  }

  /// MW per rad on edge e: susceptance folded with the MVA base.
  double flow_factor(int e) const { return edges[e].susceptance * base_mva; }

  std::set<std::string> technologies() const {
    std::set<std::string> t;
    for (const auto& g : generators) t.insert(g.technology);
    return t;
  }

  std::vector<std::vector<int>> generators_at_node() const {
    std::vector<std::vector<int>> at(nodes.size());
    for (int k = 0; k < num_generators(); ++k) at[generators[k].node].push_back(k);
    return at;
  }

  double max_generation_cost() const {
    double c = 0.0;
    for (const auto& g : generators) c = std::max(c, g.cost);
    return c;
  }

  void validate() const {
    if (nodes.empty()) throw ValidationError("network has no nodes");
    std::set<std::string> seen;
    double share = 0.0;
    for (const auto& n : nodes) {
      if (n.id.empty()) throw ValidationError("node with empty id");
      if (!seen.insert(n.id).second) throw ValidationError("duplicate node id '" + n.id + "'");
      if (!(n.customer_share >= 0.0)) throw ValidationError("node '" + n.id + "': negative customer_share");
      share += n.customer_share;
    }
    if (std::abs(share - 1.0) > 1e-6)
      throw ValidationError("customer_share values sum to " + std::to_string(share) + ", expected 1");
    if (reference < 0 || reference >= num_nodes()) throw ValidationError("reference node is not a declared node");
    if (!(total_customers >= 0.0)) throw ValidationError("total_customers must be nonnegative");
    if (!(base_mva > 0.0)) throw ValidationError("base_mva must be positive");
    seen.clear();
    for (const auto& e : edges) {
      if (!seen.insert(e.id).second) throw ValidationError("duplicate edge id '" + e.id + "'");
      if (e.from < 0 || e.from >= num_nodes() || e.to < 0 || e.to >= num_nodes())
        throw ValidationError("edge '" + e.id + "' has an undeclared endpoint");
      if (e.from == e.to) throw ValidationError("edge '" + e.id + "' is a self-loop");
      if (!(e.susceptance > 0.0)) throw ValidationError("edge '" + e.id + "': susceptance must be positive");
      if (!(e.flow_limit >= 0.0)) throw ValidationError("edge '" + e.id + "': negative flow_limit");
      if (!(e.angle_limit >= 0.0)) throw ValidationError("edge '" + e.id + "': negative angle_limit");
    }
    seen.clear();
    for (const auto& g : generators) {
      if (!seen.insert(g.id).second) throw ValidationError("duplicate generator id '" + g.id + "'");
      if (g.node < 0 || g.node >= num_nodes()) throw ValidationError("generator '" + g.id + "' sits on an undeclared node");
      if (!(g.p_min >= 0.0) || !(g.p_max >= g.p_min))
        throw ValidationError("generator '" + g.id + "': require p_max >= p_min >= 0");
      if (!std::isfinite(g.cost) || g.cost < 0.0) throw ValidationError("generator '" + g.id + "': bad cost");
    }
    // connectivity
    std::vector<std::vector<int>> adj(nodes.size());
    for (const auto& e : edges) {
      adj[e.from].push_back(e.to);
      adj[e.to].push_back(e.from);
    }
    std::vector<char> mark(nodes.size(), 0);
    std::queue<int> q;
    q.push(reference);
    mark[reference] = 1;
    while (!q.empty()) {
      const int v = q.front();
      q.pop();
      for (int w : adj[v])
        if (!mark[w]) {
          mark[w] = 1;
          q.push(w);
        }
    }
    for (int i = 0; i < num_nodes(); ++i)
      if (!mark[i]) throw ValidationError("network is disconnected: node '" + nodes[i].id + "' unreachable from reference");
  }
};

/// Dense E x N incidence matrix: +1 at an edge's start node, -1 at its end.
struct IncidenceMatrix {
  int rows = 0;
  int cols = 0;
  std::vector<int> data;
  int operator()(int e, int n) const { return data[static_cast<std::size_t>(e) * cols + n]; }
};

inline IncidenceMatrix incidence_matrix(const PowerNetwork& net) {
  IncidenceMatrix a;
  a.rows = net.num_edges();
  a.cols = net.num_nodes();
  a.data.assign(static_cast<std::size_t>(a.rows) * a.cols, 0);
  for (int e = 0; e < a.rows; ++e) {
    a.data[static_cast<std::size_t>(e) * a.cols + net.edges[e].from] = 1;
    a.data[static_cast<std::size_t>(e) * a.cols + net.edges[e].to] = -1;
  }
  return a;
}

namespace detail {

inline void require_keys(const nlohmann::json& obj, const std::set<std::string>& required,
                         const std::set<std::string>& optional, const std::string& where) {
  if (!obj.is_object()) throw ParseError(where + ": expected an object");
  for (const auto& [k, v] : obj.items())
    if (!required.count(k) && !optional.count(k)) throw ParseError(where + ": unknown key '" + k + "'");
  for (const auto& k : required)
    if (!obj.contains(k)) throw ParseError(where + ": missing key '" + k + "'");
}

inline double get_number(const nlohmann::json& obj, const char* key, const std::string& where) {
  const auto& v = obj.at(key);
  if (!v.is_number()) throw ParseError(where + ": '" + key + "' must be a number");
  return v.get<double>();
}

inline std::string get_string(const nlohmann::json& obj, const char* key, const std::string& where) {
  const auto& v = obj.at(key);
  if (!v.is_string()) throw ParseError(where + ": '" + key + "' must be a string");
  return v.get<std::string>();
}

}  // namespace detail

inline PowerNetwork parse_network(const nlohmann::json& j) {
  using detail::get_number;
  using detail::get_string;
  detail::require_keys(j, {"nodes", "edges", "generators", "reference_node", "total_customers"}, {"name", "base_mva"},
                       "network");
  PowerNetwork net;
  if (j.contains("name")) net.name = get_string(j, "name", "network");
  if (j.contains("base_mva")) net.base_mva = get_number(j, "base_mva", "network");
  net.total_customers = get_number(j, "total_customers", "network");
  if (!j.at("nodes").is_array() || !j.at("edges").is_array() || !j.at("generators").is_array())
    throw ParseError("network: nodes, edges and generators must be arrays");
  for (const auto& n : j.at("nodes")) {
    detail::require_keys(n, {"id", "customer_share"}, {}, "node");
    net.nodes.push_back({get_string(n, "id", "node"), get_number(n, "customer_share", "node")});
  }
  auto lookup = [&](const std::string& id, const std::string& who) {
    const int k = net.node_index(id);
    if (k < 0) throw ValidationError(who + " references undeclared node '" + id + "'");
    return k;
  };
  for (const auto& e : j.at("edges")) {
    detail::require_keys(e, {"id", "from", "to", "susceptance", "flow_limit", "angle_limit"}, {}, "edge");
    Line l;
    l.id = get_string(e, "id", "edge");
    const std::string where = "edge '" + l.id + "'";
    l.from = lookup(get_string(e, "from", where), where);
    l.to = lookup(get_string(e, "to", where), where);
    l.susceptance = get_number(e, "susceptance", where);
    l.flow_limit = get_number(e, "flow_limit", where);
    l.angle_limit = get_number(e, "angle_limit", where);
    net.edges.push_back(l);
  }
  for (const auto& g : j.at("generators")) {
    detail::require_keys(g, {"id", "node", "technology", "p_max", "cost"}, {"p_min"}, "generator");
    Generator gen;
    gen.id = get_string(g, "id", "generator");
    const std::string where = "generator '" + gen.id + "'";
    gen.node = lookup(get_string(g, "node", where), where);
    gen.technology = get_string(g, "technology", where);
    gen.p_min = g.contains("p_min") ? get_number(g, "p_min", where) : 0.0;
    gen.p_max = get_number(g, "p_max", where);
    gen.cost = get_number(g, "cost", where);
    net.generators.push_back(gen);
  }
  net.reference = lookup(get_string(j, "reference_node", "network"), "reference_node");
  net.validate();
  return net;
}

inline PowerNetwork load_network(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open network file '" + path + "'");
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& ex) {
    throw ParseError(path + ": " + ex.what());
  }
  try {
    return parse_network(j);
  } catch (const ParseError& ex) {
    throw ParseError(path + ": " + ex.what());
  } catch (const ValidationError& ex) {
    throw ValidationError(path + ": " + ex.what());
  }
}

inline nlohmann::json network_to_json(const PowerNetwork& net) {
  nlohmann::json j;
  if (!net.name.empty()) j["name"] = net.name;
  j["base_mva"] = net.base_mva;
  j["total_customers"] = net.total_customers;
  j["reference_node"] = net.nodes[net.reference].id;
  j["nodes"] = nlohmann::json::array();
  for (const auto& n : net.nodes) j["nodes"].push_back({{"id", n.id}, {"customer_share", n.customer_share}});
  j["edges"] = nlohmann::json::array();
  for (const auto& e : net.edges)
    j["edges"].push_back({{"id", e.id},
                          {"from", net.nodes[e.from].id},
                          {"to", net.nodes[e.to].id},
                          {"susceptance", e.susceptance},
                          {"flow_limit", e.flow_limit},
                          {"angle_limit", e.angle_limit}});
  j["generators"] = nlohmann::json::array();
  for (const auto& g : net.generators)
    j["generators"].push_back({{"id", g.id},
                               {"node", net.nodes[g.node].id},
                               {"technology", g.technology},
                               {"p_min", g.p_min},
                               {"p_max", g.p_max},
                               {"cost", g.cost}});
  return j;
}

inline void save_network(const PowerNetwork& net, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write network file '" + path + "'");
  out << network_to_json(net).dump(2) << "\n";
}

/// Hourly demand and value of lost load, indexed [season][hour][node].
class DemandProfile {
public:
  static constexpr int kHours = 24;

  DemandProfile() = default;
  DemandProfile(std::vector<std::string> seasons, int nodes)
      : seasons_(std::move(seasons)), nodes_(nodes),
        demand_(seasons_.size() * kHours * static_cast<std::size_t>(nodes), 0.0),
        voll_(demand_.size(), 0.0) {}

  int num_seasons() const { return static_cast<int>(seasons_.size()); }
  int num_hours() const { return kHours; }
  int num_nodes() const { return nodes_; }
  const std::vector<std::string>& seasons() const { return seasons_; }
  int season_index(const std::string& s) const {
    for (int i = 0; i < num_seasons(); ++i)
      if (seasons_[i] == s) return i;
    return -1;
  }

  double demand(int s, int h, int n) const { return demand_[idx(s, h, n)]; }
  double& demand(int s, int h, int n) { return demand_[idx(s, h, n)]; }
  double voll(int s, int h, int n) const { return voll_[idx(s, h, n)]; }
  double& voll(int s, int h, int n) { return voll_[idx(s, h, n)]; }

  double max_voll() const { return voll_.empty() ? 0.0 : *std::max_element(voll_.begin(), voll_.end()); }
  double total_demand(int s) const {
    double t = 0.0;
    for (int h = 0; h < kHours; ++h)
      for (int n = 0; n < nodes_; ++n) t += demand(s, h, n);
    return t;
  }

  void validate(const PowerNetwork& net) const {
    if (nodes_ != net.num_nodes()) throw ValidationError("demand profile node count does not match the network");
    const double cmax = net.max_generation_cost();
    for (int s = 0; s < num_seasons(); ++s)
      for (int h = 0; h < kHours; ++h)
        for (int n = 0; n < nodes_; ++n) {
          const std::string where = "demand[" + seasons_[s] + "," + std::to_string(h) + "," + net.nodes[n].id + "]";
          if (!(demand(s, h, n) >= 0.0) || !std::isfinite(demand(s, h, n)))
            throw ValidationError(where + ": demand must be a nonnegative number");
          if (!(voll(s, h, n) > cmax) || !std::isfinite(voll(s, h, n)))
            throw ValidationError(where + ": VOLL must exceed every generator marginal cost");
        }
  }

  bool operator==(const DemandProfile&) const = default;

private:
  std::size_t idx(int s, int h, int n) const {
    return (static_cast<std::size_t>(s) * kHours + h) * nodes_ + n;
  }
  std::vector<std::string> seasons_;
  int nodes_ = 0;
  std::vector<double> demand_;
  std::vector<double> voll_;
};

inline DemandProfile load_demand(const std::string& path, const PowerNetwork& net) {
  const auto table = csv::read(path, {"season", "hour", "node", "demand_mw", "voll"});
  std::vector<std::string> seasons;
  for (const auto& r : table.rows)
    if (std::find(seasons.begin(), seasons.end(), r[0]) == seasons.end()) seasons.push_back(r[0]);
  DemandProfile d(seasons, net.num_nodes());
  std::vector<char> filled(seasons.size() * DemandProfile::kHours * net.num_nodes(), 0);
  for (std::size_t i = 0; i < table.rows.size(); ++i) {
    const auto& r = table.rows[i];
    const std::string where = path + ":" + std::to_string(table.line_numbers[i]);
    const int s = d.season_index(r[0]);
    const int h = csv::to_int(r[1], where);
    if (h < 0 || h >= DemandProfile::kHours) throw ValidationError(where + ": hour must be in 0..23");
    const int n = net.node_index(r[2]);
    if (n < 0) throw ValidationError(where + ": unknown node '" + r[2] + "'");
    auto& f = filled[(static_cast<std::size_t>(s) * DemandProfile::kHours + h) * net.num_nodes() + n];
    if (f) throw ValidationError(where + ": duplicate entry");
    f = 1;
    d.demand(s, h, n) = csv::to_double(r[3], where);
    d.voll(s, h, n) = csv::to_double(r[4], where);
  }
  if (std::find(filled.begin(), filled.end(), 0) != filled.end())
    throw ValidationError(path + ": every (season, hour, node) combination must appear exactly once");
  d.validate(net);
  return d;
}

inline void save_demand(const DemandProfile& d, const PowerNetwork& net, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write demand file '" + path + "'");
  out << "season,hour,node,demand_mw,voll\n";
  for (int s = 0; s < d.num_seasons(); ++s)
    for (int h = 0; h < d.num_hours(); ++h)
      for (int n = 0; n < d.num_nodes(); ++n)
        out << d.seasons()[s] << ',' << h << ',' << net.nodes[n].id << ',' << csv::fmt_exact(d.demand(s, h, n)) << ','
            << csv::fmt_exact(d.voll(s, h, n)) << '\n';
}

/// Uniform demand scaling (the heatwave scenario uses 1.09).
inline DemandProfile apply_heatwave(const DemandProfile& d, double factor) {
  if (!(factor > 0.0)) throw ValidationError("heatwave factor must be positive");
  DemandProfile out = d;
  for (int s = 0; s < d.num_seasons(); ++s)
    for (int h = 0; h < d.num_hours(); ++h)
      for (int n = 0; n < d.num_nodes(); ++n) out.demand(s, h, n) = d.demand(s, h, n) * factor;
  return out;
}

}  // namespace interdict

#endif
