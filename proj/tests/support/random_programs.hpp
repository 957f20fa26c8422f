#ifndef INTERDICT_TESTS_RANDOM_PROGRAMS_HPP
#define INTERDICT_TESTS_RANDOM_PROGRAMS_HPP

// Random LPs built around a known feasible point, and small pure-binary
// programs with an exhaustive enumeration oracle.

#include <cmath>
#include <optional>
#include <random>
#include <vector>

#include "interdict/lp.hpp"
#include "interdict/milp.hpp"

namespace interdict::oracle {

inline LpProblem random_lp(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> nvar(2, 20), nrow(1, 15), kind(0, 9);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::uniform_int_distribution<int> coef(-6, 6);
  LpProblem p;
  p.sense = kind(rng) < 5 ? Sense::minimize : Sense::maximize;
  const int n = nvar(rng), m = nrow(rng);
  std::vector<double> x0(n);
  for (int j = 0; j < n; ++j) {
    x0[j] = 5.0 * u(rng);
    const int k = kind(rng);
    double lo = x0[j] - 3.0 - 2.0 * std::abs(u(rng)), hi = x0[j] + 3.0 + 2.0 * std::abs(u(rng));
    if (k == 0) lo = hi = x0[j];  // fixed
    if (k == 1) lo = x0[j];       // starts on a bound
    // integer-ish costs create ties and degeneracy
    p.add_col(kind(rng) < 3 ? 0.0 : static_cast<double>(coef(rng)), lo, hi);
  }
  for (int i = 0; i < m; ++i) {
    std::vector<Term> terms;
    double act = 0.0;
    for (int j = 0; j < n; ++j) {
      if (kind(rng) < 5) continue;
      const double c = coef(rng);
      terms.push_back({j, c});
      act += c * x0[j];
    }
    const int k = kind(rng);
    if (k < 2) p.add_row(terms, act, act);
    else if (k < 5) p.add_row(terms, -kInf, act + std::abs(u(rng)));
    else if (k < 8) p.add_row(terms, act - 2.0 * std::abs(u(rng)), kInf);
    else p.add_row(terms, act - 1.0, act);  // active upper side at x0
  }
  return p;
}

struct RandomBinaryProgram {
  MilpProblem milp;
  std::vector<double> c;
  std::vector<std::vector<double>> a;
  std::vector<double> lo, hi;
};

inline RandomBinaryProgram random_binary_program(std::mt19937_64& rng, int nb) {
  std::uniform_int_distribution<int> coef(-9, 9), rows(1, 6), pick(0, 3);
  RandomBinaryProgram r;
  r.milp.lp.sense = pick(rng) < 2 ? Sense::maximize : Sense::minimize;
  for (int j = 0; j < nb; ++j) {
    r.c.push_back(coef(rng));
    r.milp.binaries.push_back(r.milp.lp.add_col(r.c.back(), 0.0, 1.0));
  }
  const int m = rows(rng);
  for (int i = 0; i < m; ++i) {
    std::vector<Term> terms;
    std::vector<double> row(nb, 0.0);
    double sum_abs = 0.0;
    for (int j = 0; j < nb; ++j) {
      row[j] = coef(rng);
      sum_abs += std::abs(row[j]);
      if (row[j] != 0.0) terms.push_back({j, row[j]});
    }
    const double rhs = std::uniform_real_distribution<double>(-0.3 * sum_abs, 0.6 * sum_abs)(rng);
    const bool two_sided = pick(rng) == 0;
    const double lo = two_sided ? rhs - 0.4 * sum_abs : -kInf;
    r.a.push_back(row);
    r.lo.push_back(lo);
    r.hi.push_back(rhs);
    r.milp.lp.add_row(terms, lo, rhs);
  }
  return r;
}

// Exhaustive enumeration of all 2^n assignments.
inline std::optional<double> enumerate(const RandomBinaryProgram& r) {
  const int nb = static_cast<int>(r.c.size());
  const bool maximize = r.milp.lp.sense == Sense::maximize;
  std::optional<double> best;
  for (unsigned mask = 0; mask < (1u << nb); ++mask) {
    bool ok = true;
    for (std::size_t i = 0; i < r.a.size() && ok; ++i) {
      double act = 0.0;
      for (int j = 0; j < nb; ++j) act += r.a[i][j] * ((mask >> j) & 1u);
      ok = act >= r.lo[i] - 1e-9 && act <= r.hi[i] + 1e-9;
    }
    if (!ok) continue;
    double obj = 0.0;
    for (int j = 0; j < nb; ++j) obj += r.c[j] * ((mask >> j) & 1u);
    if (!best || (maximize ? obj > *best : obj < *best)) best = obj;
  }
  return best;
}

}  // namespace interdict::oracle

#endif
