#pragma once

#include <utility>
#include <vector>

#include "cosetkit/normform.hpp"

namespace cosetkit {

// A finite list of cosets considered inside an ambient subgroup. Covering
// arguments require every coset's subgroup to meet the ambient in infinite
// index, which is what guarantees the searches below terminate.
struct CosetList {
  std::vector<Coset> cosets;
  Subgroup ambient;

  void validate() const {
    if (cosets.empty()) throw Error("coset list must be nonempty");
    for (const Coset& c : cosets) {
      require_same_carrier(c.carrier(), ambient.carrier());
      Subgroup meet = subgroup_intersect(ambient, c.subgroup());
      if (subgroup_index(ambient, meet).finite)
        throw Error("coset subgroup meets the ambient in finite index: " + c.key());
    }
  }
};

// First element of the ambient, in its deterministic enumeration order, that
// lies outside every listed coset. A group is never a finite union of
// infinite-index cosets, so the search terminates.
inline GroupElement witness_outside(const CosetList& list) {
  list.validate();
  SubgroupEnumerator en(list.ambient);
  for (long guard = 0; guard < 100000000L; ++guard) {
    auto g = en.next();
    if (!g) throw InternalError("ambient exhausted while searching for a witness");
    bool inside = false;
    for (const Coset& c : list.cosets)
      if (c.contains(*g)) {
        inside = true;
        break;
      }
    if (!inside) return *g;
  }
  throw InternalError("witness search exceeded the iteration guard");
}

namespace detail {

inline SetExpr coset_union_expr(const std::vector<Coset>& cosets) {
  std::vector<SetExpr> xs;
  for (const Coset& c : cosets) xs.push_back(SetExpr::atom(c));
  return SetExpr::union_of(std::move(xs));
}

}  // namespace detail

// Left translates t_1 = e, t_2, ... of the union C of the listed cosets with
// empty total intersection of the t_i C. Each new translate is a witness
// against the conjugated obstruction cosets t_i s_j H_k s_j^-1 accumulated so
// far, which bounds the list length by (number of cosets) + 1.
inline std::vector<GroupElement> separate_left(const CosetList& list) {
  list.validate();
  const GroupCarrier& carrier = list.ambient.carrier();
  SetExpr c_expr = detail::coset_union_expr(list.cosets);

  std::vector<Coset> conj_bases;  // s_j H_k s_j^-1 at the identity
  for (const Coset& c : list.cosets)
    conj_bases.push_back(Coset::at_identity(conjugate_subgroup(c.rep(), c.subgroup())));

  std::vector<GroupElement> ts{identity(carrier)};
  const std::size_t bound = list.cosets.size() + 1;
  while (true) {
    std::vector<SetExpr> translated;
    for (const GroupElement& t : ts) translated.push_back(SetExpr::ltranslate(t, c_expr));
    if (is_empty(SetExpr::intersect_of(std::move(translated)))) return ts;
    if (ts.size() >= bound)
      throw InternalError("translate separation exceeded the pigeonhole bound");
    std::vector<Coset> obstructions;
    for (const GroupElement& t : ts)
      for (const Coset& b : conj_bases) obstructions.push_back(left_translate_coset(t, b));
    detail::dedup_cosets(obstructions);
    ts.push_back(witness_outside(CosetList{std::move(obstructions), list.ambient}));
  }
}

// Right translates t_i in the ambient subgroup H with empty intersection of
// the C t_i. Obstructions are the right cosets (H meet H_k) t_i, rewritten as
// left cosets for the witness search.
inline std::vector<GroupElement> separate_right(const CosetList& list) {
  list.validate();
  const GroupCarrier& carrier = list.ambient.carrier();
  SetExpr c_expr = detail::coset_union_expr(list.cosets);

  std::vector<Subgroup> meets;  // H meet H_k
  for (const Coset& c : list.cosets) meets.push_back(subgroup_intersect(list.ambient, c.subgroup()));

  std::vector<GroupElement> ts{identity(carrier)};
  const std::size_t bound = list.cosets.size() + 1;
  while (true) {
    std::vector<SetExpr> translated;
    for (const GroupElement& t : ts) translated.push_back(right_translate(c_expr, t));
    if (is_empty(SetExpr::intersect_of(std::move(translated)))) return ts;
    if (ts.size() >= bound)
      throw InternalError("translate separation exceeded the pigeonhole bound");
    std::vector<Coset> obstructions;
    for (const GroupElement& t : ts)
      for (const Subgroup& m : meets) {
        // M t = t (t^-1 M t)
        obstructions.emplace_back(conjugate_subgroup(inverse(t), m), t);
      }
    detail::dedup_cosets(obstructions);
    ts.push_back(witness_outside(CosetList{std::move(obstructions), list.ambient}));
  }
}

// N points of the piece whose pairwise differences avoid every removal's
// subgroup: a_i^-1 a_j is never in E_k^-1 E_k. Greedy selection in the
// deterministic coset enumeration order.
inline std::vector<GroupElement> separated_points(const OmegaPiece& piece, std::size_t n) {
  std::vector<Subgroup> diff_subgroups;
  for (const Coset& r : piece.removals) {
    bool seen = false;
    for (const Subgroup& h : diff_subgroups) seen = seen || h == r.subgroup();
    if (!seen) diff_subgroups.push_back(r.subgroup());
  }
  std::vector<GroupElement> chosen;
  CosetPointEnumerator en(piece.e0);
  for (long guard = 0; guard < 100000000L && chosen.size() < n; ++guard) {
    auto g = en.next();
    if (!g) throw InternalError("coset exhausted while separating points");
    bool ok = true;
    for (const Coset& r : piece.removals)
      if (r.contains(*g)) {
        ok = false;
        break;
      }
    for (const GroupElement& a : chosen) {
      if (!ok) break;
      GroupElement d = mul(inverse(a), *g);
      for (const Subgroup& h : diff_subgroups)
        if (h.contains(d)) {
          ok = false;
          break;
        }
    }
    if (ok) chosen.push_back(*g);
  }
  if (chosen.size() < n) throw InternalError("separated point search exceeded the guard");
  return chosen;
}

}  // namespace cosetkit
