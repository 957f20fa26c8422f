#ifndef INTERDICT_MILP_HPP
#define INTERDICT_MILP_HPP

// LP-based branch and bound over {0,1} columns.
//
// Search order: depth-first dive (rounding direction first) until the first
// incumbent; afterwards each dive continues until its node is pruned, and the
// next dive starts from the best bound (lowest node id on ties). Branching picks the
// most fractional binary, lowest column index on ties. Every integral node is
// polished by re-solving its LP with all binaries fixed, so incumbents satisfy
// the switched constraints exactly rather than to within the rounding
// tolerance. An optional heuristic proposes binary assignments from a node
// relaxation; each proposal is polished the same way.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "interdict/errors.hpp"
#include "interdict/lp.hpp"

namespace interdict {

struct MilpProblem {
  LpProblem lp;
  std::vector<int> binaries;

  void validate() const {
    lp.validate();
    for (int j : binaries) {
      if (j < 0 || j >= lp.num_cols()) throw DimensionError("MilpProblem: binary index out of range");
      if (lp.col_lower[j] < 0.0 || lp.col_upper[j] > 1.0)
        throw ValidationError("MilpProblem: binary column " + std::to_string(j) + " must have bounds within [0,1]");
    }
  }
};

enum class MilpStatus { optimal, infeasible, unbounded, feasible_limit };

inline const char* to_string(MilpStatus s) {
  switch (s) {
    case MilpStatus::optimal: return "optimal";
    case MilpStatus::infeasible: return "infeasible";
    case MilpStatus::unbounded: return "unbounded";
    case MilpStatus::feasible_limit: return "feasible-limit";
  }
  return "?";
}

struct MilpSolution {
  MilpStatus status = MilpStatus::infeasible;
  std::vector<double> x;
  double objective = 0.0;
  double best_bound = 0.0;
  double gap = 0.0;  // (best bound - incumbent) / max(1, |incumbent|), oriented by sense
  long nodes = 0;
  double root_bound = 0.0;
  LpSolution lp;  // polished LP at the incumbent (duals, activities)
};

struct MilpOptions {
  long node_limit = 500000;
  double gap_tol = tol::milp_gap;
  double int_tol = tol::round;
  LpOptions lp;
  // Maps a relaxation point to candidate assignments (one value per entry of
  // MilpProblem::binaries). Called at the root and every `heuristic_every` nodes.
  std::function<std::vector<std::vector<std::int8_t>>(const std::vector<double>&)> heuristic;
  long heuristic_every = 25;
};

inline MilpSolution solve_milp(const MilpProblem& problem, const MilpOptions& opt = {}) {
  problem.validate();
  detail::SimplexEngine engine(problem.lp);
  const double sg = problem.lp.sense == Sense::maximize ? -1.0 : 1.0;  // internal values are minimized
  const int nb = static_cast<int>(problem.binaries.size());

  struct Node {
    std::vector<std::int8_t> fix;  // -1 free, else fixed value
    double bound;                  // internal (minimization) LP bound inherited from parent
    long id;
    Basis basis;
  };

  auto apply = [&](const std::vector<std::int8_t>& fix) {
    for (int k = 0; k < nb; ++k) {
      const int j = problem.binaries[k];
      if (fix[k] < 0) engine.set_col_bounds(j, problem.lp.col_lower[j], problem.lp.col_upper[j]);
      else engine.set_col_bounds(j, fix[k], fix[k]);
    }
  };

  MilpSolution best;
  bool have_incumbent = false;
  double incumbent = kInf;  // internal
  std::vector<Node> open;
  long next_id = 0;
  open.push_back(Node{std::vector<std::int8_t>(nb, -1), -kInf, next_id++, {}});
  long nodes = 0;
  bool root = true;
  bool hit_limit = false;
  bool plunge = false;  // continue with the last child pushed (its basis is the engine's)

  auto offer = [&](const std::vector<std::int8_t>& fixed, const LpSolution& use) {
    const double pv = sg * use.objective;
    if (have_incumbent && pv >= incumbent) return;
    incumbent = pv;
    have_incumbent = true;
    best.x = use.x;
    for (int k = 0; k < nb; ++k) best.x[problem.binaries[k]] = fixed[k];
    best.objective = use.objective;
    best.lp = use;
  };
  // Solves the LP with every binary fixed; true when it was optimal.
  auto polish = [&](const std::vector<std::int8_t>& fixed, const Basis* warm) {
    apply(fixed);
    LpSolution pol = engine.solve(warm, opt.lp);
    if (pol.status != LpStatus::optimal) return false;
    offer(fixed, pol);
    return true;
  };

  auto cutoff = [&](double value) {
    if (!have_incumbent) return false;
    return value >= incumbent - opt.gap_tol * std::max(1.0, std::abs(incumbent));
  };

  while (!open.empty()) {
    if (nodes >= opt.node_limit) {
      hit_limit = true;
      break;
    }
    // Node selection.
    std::size_t pick = open.size() - 1;
    if (have_incumbent && !plunge) {
      for (std::size_t i = 0; i < open.size(); ++i) {
        const auto& a = open[i];
        const auto& b = open[pick];
        if (a.bound < b.bound || (a.bound == b.bound && a.id < b.id)) pick = i;
      }
    }
    plunge = false;
    Node node = std::move(open[pick]);
    open.erase(open.begin() + static_cast<std::ptrdiff_t>(pick));
    if (cutoff(node.bound)) continue;

    apply(node.fix);
    LpSolution rel = engine.solve(node.basis.empty() ? nullptr : &node.basis, opt.lp);
    ++nodes;
    if (rel.status == LpStatus::unbounded) {
      if (root) {
        best.status = MilpStatus::unbounded;
        best.nodes = nodes;
        return best;
      }
      throw SolverError("milp: unbounded node relaxation below a bounded root");
    }
    if (rel.status != LpStatus::optimal) {
      root = false;
      continue;
    }
    const double value = sg * rel.objective;
    if (root) {
      best.root_bound = rel.objective;
      root = false;
    }
    if (cutoff(value)) continue;

    int branch = -1;
    double most = -1.0;
    for (int k = 0; k < nb; ++k) {
      if (node.fix[k] >= 0) continue;
      const double v = rel.x[problem.binaries[k]];
      const double frac = std::min(v - std::floor(v), std::ceil(v) - v);
      if (frac > opt.int_tol && frac > most + 1e-12) {
        most = frac;
        branch = k;
      }
    }

    if (branch < 0) {
      // Integral: polish with all binaries fixed at their rounded values.
      std::vector<std::int8_t> fixed(nb);
      for (int k = 0; k < nb; ++k)
        fixed[k] = node.fix[k] >= 0 ? node.fix[k] : static_cast<std::int8_t>(std::lround(rel.x[problem.binaries[k]]));
      if (!polish(fixed, &rel.basis)) offer(fixed, rel);
      continue;
    }
    if (opt.heuristic && (nodes == 1 || nodes % std::max(1L, opt.heuristic_every) == 0)) {
      for (const auto& cand : opt.heuristic(rel.x))
        if (static_cast<int>(cand.size()) == nb) polish(cand, &rel.basis);
      if (cutoff(value)) continue;
    }

    const double v = rel.x[problem.binaries[branch]];
    const std::int8_t first = v >= 0.5 ? 1 : 0;
    // LIFO dive explores the child pushed last, i.e. the rounding direction.
    for (std::int8_t side : {static_cast<std::int8_t>(1 - first), first}) {
      Node child{node.fix, value, next_id++, rel.basis};
      child.fix[branch] = side;
      open.push_back(std::move(child));
    }
    plunge = true;
  }

  best.nodes = nodes;
  if (!have_incumbent) {
    if (hit_limit) throw SolverError("milp: node limit reached without an incumbent");
    best.status = MilpStatus::infeasible;
    return best;
  }
  double bound = incumbent;
  for (const auto& n : open) bound = std::min(bound, n.bound);
  best.best_bound = sg * bound;
  best.gap = (incumbent - bound) / std::max(1.0, std::abs(incumbent));
  best.status = hit_limit && best.gap > opt.gap_tol ? MilpStatus::feasible_limit : MilpStatus::optimal;
  return best;
}

}  // namespace interdict

#endif
