#pragma once

#include <random>
#include <vector>

#include "cosetkit/covering.hpp"
#include "cosetkit/normform.hpp"

namespace ts {

using namespace cosetkit;

// Shared fixtures over Z^2.
struct Z2Fixture {
  GroupCarrier z2 = GroupCarrier::zn(2);
  Subgroup full = Subgroup::full(z2);
  Subgroup triv = Subgroup::trivial(z2);
  Subgroup A = Subgroup::lattice_subgroup(z2, Lattice::from_generators(2, {{1, 0}}));
  Subgroup B = Subgroup::lattice_subgroup(z2, Lattice::from_generators(2, {{0, 1}}));
  Subgroup D = Subgroup::lattice_subgroup(z2, Lattice::from_generators(2, {{1, 1}}));
  Subgroup L2 = Subgroup::lattice_subgroup(z2, Lattice::from_generators(2, {{2, 0}, {0, 1}}));

  GroupElement el(Int x, Int y) const { return GroupElement(z2, {std::move(x), std::move(y)}); }
  SetExpr at(const Subgroup& h) const { return SetExpr::atom(Coset::at_identity(h)); }
  SetExpr at(const Subgroup& h, Int x, Int y) const {
    return SetExpr::atom(Coset(h, el(std::move(x), std::move(y))));
  }
};

using Rng = std::mt19937_64;

inline Int rand_int(Rng& rng, int lo, int hi) {
  std::uniform_int_distribution<int> d(lo, hi);
  return Int(d(rng));
}

inline std::size_t rand_index(Rng& rng, std::size_t n) {
  std::uniform_int_distribution<std::size_t> d(0, n - 1);
  return d(rng);
}

// Random subgroup of a carrier with small entries; mixes ranks and, on sign
// carriers, occasionally a reflection part.
inline Subgroup random_subgroup(Rng& rng, const GroupCarrier& c, int entry_bound = 3) {
  std::size_t rank = rand_index(rng, c.dim + 1);
  IntMat rows;
  for (std::size_t i = 0; i < rank; ++i) {
    IntVec row;
    for (std::size_t j = 0; j < c.dim; ++j)
      row.push_back(rand_int(rng, -entry_bound, entry_bound));
    rows.push_back(std::move(row));
  }
  Lattice l = Lattice::from_generators(c.dim, rows);
  if (c.semidirect && rand_index(rng, 3) == 0) {
    // make the lattice sign-invariant, then attach a reflection
    IntMat sym = l.basis();
    for (const IntVec& r : l.basis()) sym.push_back(c.sigma(r));
    Lattice inv = Lattice::from_generators(c.dim, sym);
    IntVec r;
    for (std::size_t j = 0; j < c.dim; ++j) r.push_back(rand_int(rng, -entry_bound, entry_bound));
    // force r + sigma(r) into the lattice by doubling when needed
    if (!inv.contains(vec_add(r, c.sigma(r)))) {
      IntMat rows2 = inv.basis();
      rows2.push_back(vec_add(r, c.sigma(r)));
      inv = Lattice::from_generators(c.dim, rows2);
    }
    return Subgroup::with_reflection(c, inv, r);
  }
  return Subgroup::lattice_subgroup(c, l);
}

inline GroupElement random_element(Rng& rng, const GroupCarrier& c, int bound) {
  IntVec v;
  for (std::size_t j = 0; j < c.dim; ++j) v.push_back(rand_int(rng, -bound, bound));
  int sign = c.semidirect && rand_index(rng, 2) == 0 ? -1 : 1;
  return GroupElement(c, std::move(v), sign);
}

// Random set expression of bounded depth over a pool of cosets.
inline SetExpr random_expr(Rng& rng, const std::vector<Coset>& pool, const GroupCarrier& c,
                           int depth, int rep_bound = 3) {
  if (depth == 0 || rand_index(rng, 4) == 0) {
    switch (rand_index(rng, 6)) {
      case 0: return SetExpr::full_set(c);
      default: return SetExpr::atom(pool[rand_index(rng, pool.size())]);
    }
  }
  switch (rand_index(rng, 5)) {
    case 0:
      return SetExpr::union_of({random_expr(rng, pool, c, depth - 1, rep_bound),
                                random_expr(rng, pool, c, depth - 1, rep_bound)});
    case 1:
      return SetExpr::intersect_of({random_expr(rng, pool, c, depth - 1, rep_bound),
                                    random_expr(rng, pool, c, depth - 1, rep_bound)});
    case 2:
      return SetExpr::diff(random_expr(rng, pool, c, depth - 1, rep_bound),
                           random_expr(rng, pool, c, depth - 1, rep_bound));
    case 3:
      return SetExpr::ltranslate(random_element(rng, c, rep_bound),
                                 random_expr(rng, pool, c, depth - 1, rep_bound));
    default:
      return SetExpr::rtranslate(random_expr(rng, pool, c, depth - 1, rep_bound),
                                 random_element(rng, c, rep_bound));
  }
}

// Pool of atom cosets over random subgroups.
inline std::vector<Coset> random_coset_pool(Rng& rng, const GroupCarrier& c, std::size_t n,
                                            int rep_bound = 3) {
  std::vector<Coset> pool;
  for (std::size_t i = 0; i < n; ++i)
    pool.emplace_back(random_subgroup(rng, c), random_element(rng, c, rep_bound));
  return pool;
}

// Direct-evaluation agreement of a normal form with its source expression.
inline bool omega_matches_on_window(const SetExpr& expr, const OmegaNormalForm& nf,
                                    const GroupCarrier& c, const Int& radius) {
  for (const GroupElement& g : enumerate_ball(c, radius)) {
    bool direct = eval_membership(expr, g);
    bool via = false;
    for (const OmegaPiece& p : nf.pieces) {
      bool in = p.e0.contains(g);
      for (const Coset& r : p.removals) in = in && !r.contains(g);
      if (in && via) return false;  // pieces overlap
      via = via || in;
    }
    if (direct != via) return false;
  }
  return true;
}

}  // namespace ts
