#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "cosetkit/setexpr.hpp"

namespace cosetkit {

// One term of the relative-ring normal form: base \ (union of removals).
// The base is a single coset (positives are intersected eagerly); removals
// are nonempty subcosets of the base.
struct PieceTerm {
  Coset base;
  std::vector<Coset> removals;
};

// Disjoint piece of the coset-ring normal form: E0 \ (union of removals),
// every removal an infinite-index subcoset of E0.
struct OmegaPiece {
  Coset e0;
  std::vector<Coset> removals;

  std::string key() const {
    std::string s = e0.key();
    for (const Coset& r : removals) s += "|" + r.key();
    return s;
  }
};

struct OmegaNormalForm {
  std::vector<OmegaPiece> pieces;
  std::vector<Subgroup> family;
};

namespace detail {

inline bool coset_key_less(const Coset& a, const Coset& b) { return a.key() < b.key(); }

inline void dedup_cosets(std::vector<Coset>& v) {
  std::sort(v.begin(), v.end(), coset_key_less);
  v.erase(std::unique(v.begin(), v.end()), v.end());
}

// Push all translations down to the atoms: the result contains only atom,
// empty, full and boolean nodes. l and r accumulate pending outer translates,
// so the current node denotes l * (node) * r.
inline SetExpr push_translations(const SetExpr& e, const GroupElement& l, const GroupElement& r) {
  switch (e.kind()) {
    case SetExpr::Kind::Atom:
      return SetExpr::atom(left_translate_coset(l, right_translate_coset(e.atom_coset(), r)));
    case SetExpr::Kind::Empty:
    case SetExpr::Kind::Full:
      return e;  // translates of the empty set / whole group are themselves
    case SetExpr::Kind::Union: {
      std::vector<SetExpr> xs;
      for (const SetExpr& a : e.args()) xs.push_back(push_translations(a, l, r));
      return SetExpr::union_of(std::move(xs));
    }
    case SetExpr::Kind::Intersect: {
      std::vector<SetExpr> xs;
      for (const SetExpr& a : e.args()) xs.push_back(push_translations(a, l, r));
      return SetExpr::intersect_of(std::move(xs));
    }
    case SetExpr::Kind::Diff:
      return SetExpr::diff(push_translations(e.args()[0], l, r),
                           push_translations(e.args()[1], l, r));
    case SetExpr::Kind::LTranslate:
      return push_translations(e.args()[0], mul(l, e.translation()), r);
    case SetExpr::Kind::RTranslate:
      return push_translations(e.args()[0], l, mul(e.translation(), r));
    case SetExpr::Kind::Symbol:
      throw UnboundSymbol(e.symbol_name());
  }
  throw InternalError("unhandled expression kind");
}

inline std::optional<PieceTerm> term_intersect(const PieceTerm& a, const PieceTerm& b) {
  auto base = intersect_cosets(a.base, b.base);
  if (!base) return std::nullopt;
  PieceTerm out{*base, {}};
  for (const std::vector<Coset>* rs : {&a.removals, &b.removals}) {
    for (const Coset& n : *rs) {
      auto x = intersect_cosets(n, *base);
      if (!x) continue;
      if (*x == *base) return std::nullopt;  // base fully removed
      out.removals.push_back(*x);
    }
  }
  dedup_cosets(out.removals);
  return out;
}

// t \ u as a (possibly overlapping) union of terms.
inline std::vector<PieceTerm> term_subtract(const PieceTerm& t, const PieceTerm& u) {
  std::vector<PieceTerm> out;
  auto cap = intersect_cosets(t.base, u.base);
  if (!cap) {
    out.push_back(t);
    return out;
  }
  if (*cap != t.base) {
    PieceTerm p = t;
    p.removals.push_back(*cap);
    dedup_cosets(p.removals);
    out.push_back(std::move(p));
  }
  // points of t inside u's removals survive
  for (const Coset& m : u.removals) {
    auto mm = intersect_cosets(t.base, m);
    if (!mm) continue;
    PieceTerm p{*mm, {}};
    bool dead = false;
    for (const Coset& n : t.removals) {
      auto x = intersect_cosets(n, *mm);
      if (!x) continue;
      if (*x == *mm) {
        dead = true;
        break;
      }
      p.removals.push_back(*x);
    }
    if (dead) continue;
    dedup_cosets(p.removals);
    out.push_back(std::move(p));
  }
  return out;
}

inline std::vector<PieceTerm> tree_to_terms(const SetExpr& e) {
  switch (e.kind()) {
    case SetExpr::Kind::Atom:
      return {PieceTerm{e.atom_coset(), {}}};
    case SetExpr::Kind::Empty:
      return {};
    case SetExpr::Kind::Full:
      return {PieceTerm{Coset::at_identity(Subgroup::full(e.literal_carrier())), {}}};
    case SetExpr::Kind::Union: {
      std::vector<PieceTerm> out;
      for (const SetExpr& a : e.args()) {
        auto ts = tree_to_terms(a);
        out.insert(out.end(), ts.begin(), ts.end());
      }
      return out;
    }
    case SetExpr::Kind::Intersect: {
      std::vector<PieceTerm> acc = tree_to_terms(e.args()[0]);
      for (std::size_t i = 1; i < e.args().size(); ++i) {
        std::vector<PieceTerm> rhs = tree_to_terms(e.args()[i]);
        std::vector<PieceTerm> next;
        for (const PieceTerm& x : acc)
          for (const PieceTerm& y : rhs)
            if (auto t = term_intersect(x, y)) next.push_back(std::move(*t));
        acc = std::move(next);
      }
      return acc;
    }
    case SetExpr::Kind::Diff: {
      std::vector<PieceTerm> acc = tree_to_terms(e.args()[0]);
      for (const PieceTerm& u : tree_to_terms(e.args()[1])) {
        std::vector<PieceTerm> next;
        for (const PieceTerm& x : acc) {
          auto parts = term_subtract(x, u);
          next.insert(next.end(), parts.begin(), parts.end());
        }
        acc = std::move(next);
      }
      return acc;
    }
    default:
      throw InternalError("translation node survived push_translations");
  }
}

}  // namespace detail

// Disjoint relative-ring normal form: terms in input order, each later term
// minus all earlier ones (telescoping).
inline std::vector<PieceTerm> to_relring_normal_form(const SetExpr& expr) {
  auto carrier = expr.carrier();
  if (!carrier) {
    if (expr.has_symbol()) throw UnboundSymbol("expression is not closed");
    throw Error("expression has no carrier");
  }
  GroupElement e = identity(*carrier);
  SetExpr pushed = detail::push_translations(expr, e, e);
  std::vector<PieceTerm> raw = detail::tree_to_terms(pushed);
  std::vector<PieceTerm> out;
  for (std::size_t i = 0; i < raw.size(); ++i) {
    std::vector<PieceTerm> cur{raw[i]};
    for (std::size_t j = 0; j < i && !cur.empty(); ++j) {
      std::vector<PieceTerm> next;
      for (const PieceTerm& x : cur) {
        auto parts = detail::term_subtract(x, raw[j]);
        next.insert(next.end(), parts.begin(), parts.end());
      }
      cur = std::move(next);
    }
    out.insert(out.end(), cur.begin(), cur.end());
  }
  return out;
}

struct FamilyRefinement {
  std::vector<Subgroup> refined;
  // input subgroup -> cosets of its refined replacement covering it
  std::vector<std::pair<Subgroup, std::vector<Coset>>> coverings;
};

// Replace family members by intersections until every pairwise index is 1 or
// infinite; each input is reported as a finite disjoint union of cosets of
// its replacement.
inline FamilyRefinement refine_family(const std::vector<Subgroup>& family) {
  std::vector<Subgroup> cur = family;
  std::vector<std::vector<GroupElement>> reps(family.size());
  for (std::size_t i = 0; i < family.size(); ++i) {
    if (i > 0) require_same_carrier(family[0].carrier(), family[i].carrier());
    reps[i] = {identity(family[i].carrier())};
  }
  bool changed = true;
  while (changed) {
    changed = false;
    for (std::size_t i = 0; i < cur.size() && !changed; ++i) {
      for (std::size_t j = 0; j < cur.size() && !changed; ++j) {
        if (i == j) continue;
        Subgroup l = subgroup_intersect(cur[i], cur[j]);
        SubgroupIndex idx = subgroup_index(cur[i], l);
        if (idx.finite && idx.value > 1) {
          std::vector<GroupElement> trans = coset_transversal(cur[i], l);
          std::vector<GroupElement> next;
          for (const GroupElement& r : reps[i])
            for (const GroupElement& t : trans) next.push_back(mul(r, t));
          reps[i] = std::move(next);
          cur[i] = std::move(l);
          changed = true;
        }
      }
    }
  }
  FamilyRefinement out;
  for (const Subgroup& h : cur) {
    bool seen = false;
    for (const Subgroup& k : out.refined) seen = seen || k == h;
    if (!seen) out.refined.push_back(h);
  }
  for (std::size_t i = 0; i < family.size(); ++i) {
    std::vector<Coset> cov;
    for (const GroupElement& r : reps[i]) cov.emplace_back(cur[i], r);
    out.coverings.emplace_back(family[i], std::move(cov));
  }
  return out;
}

namespace detail {

inline std::vector<Subgroup> intersection_closure(std::vector<Subgroup> init) {
  // dedup, preserving encounter order
  std::vector<Subgroup> out;
  auto add = [&out](const Subgroup& h) {
    for (const Subgroup& k : out)
      if (k == h) return false;
    out.push_back(h);
    return true;
  };
  for (const Subgroup& h : init) add(h);
  bool grew = true;
  while (grew) {
    grew = false;
    const std::size_t n = out.size();
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j)
        if (add(subgroup_intersect(out[i], out[j]))) grew = true;
  }
  return out;
}

// Covering lookup over the intersection closure.
struct FamilyContext {
  std::map<std::string, std::vector<Coset>> cover_by_key;

  const std::vector<Coset>& cover(const Subgroup& h) const {
    auto it = cover_by_key.find(h.key());
    if (it == cover_by_key.end())
      throw InternalError("subgroup escaped the intersection closure: " + h.key());
    return it->second;
  }
};

// Emit E0 \ removals as pieces whose removals all have infinite index.
// Removals are re-expressed over the refined family; a removal of finite
// index in E0 splits E0 along a transversal and is subtracted exactly.
inline void add_piece(const Coset& e0, const std::vector<Coset>& raw_removals,
                      const FamilyContext& ctx, std::vector<OmegaPiece>& out) {
  std::vector<Coset> rems;
  for (const Coset& n : raw_removals) {
    auto x = intersect_cosets(n, e0);
    if (!x) continue;
    for (const Coset& cc : ctx.cover(x->subgroup())) {
      Coset sub(cc.subgroup(), mul(x->rep(), cc.rep()));
      if (sub.subgroup() == e0.subgroup()) return;  // covers all of E0: piece is empty
      rems.push_back(std::move(sub));
    }
  }
  dedup_cosets(rems);
  for (std::size_t i = 0; i < rems.size(); ++i) {
    SubgroupIndex idx = subgroup_index(e0.subgroup(), rems[i].subgroup());
    if (!idx.finite) continue;
    // split E0 into the removal's transversal cosets and drop the removal
    std::vector<Coset> rest;
    for (std::size_t j = 0; j < rems.size(); ++j)
      if (j != i) rest.push_back(rems[j]);
    for (const GroupElement& t : coset_transversal(e0.subgroup(), rems[i].subgroup())) {
      Coset sc(rems[i].subgroup(), mul(e0.rep(), t));
      if (sc == rems[i]) continue;
      add_piece(sc, rest, ctx, out);
    }
    return;
  }
  out.push_back(OmegaPiece{e0, std::move(rems)});
}

}  // namespace detail

// Disjoint coset-ring normal form: the atoms' subgroups are closed under
// intersection and refined until pairwise indices are 1 or infinite, terms
// are rewritten over the refined family, and finite-index removals are
// eliminated. Pieces are never empty, which is what makes emptiness (and
// hence equality) decidable.
inline OmegaNormalForm to_omega_normal_form(const SetExpr& expr) {
  std::vector<PieceTerm> terms = to_relring_normal_form(expr);
  OmegaNormalForm nf;
  if (terms.empty()) return nf;

  std::vector<Subgroup> initial;
  auto add_subgroup = [&initial](const Subgroup& h) {
    for (const Subgroup& k : initial)
      if (k == h) return;
    initial.push_back(h);
  };
  for (const PieceTerm& t : terms) {
    add_subgroup(t.base.subgroup());
    for (const Coset& n : t.removals) add_subgroup(n.subgroup());
  }

  std::vector<Subgroup> closure = detail::intersection_closure(initial);
  FamilyRefinement fr = refine_family(closure);
  detail::FamilyContext ctx;
  for (const auto& [input, cov] : fr.coverings) ctx.cover_by_key.emplace(input.key(), cov);

  for (const PieceTerm& t : terms) {
    for (const Coset& cc : ctx.cover(t.base.subgroup())) {
      Coset e0(cc.subgroup(), mul(t.base.rep(), cc.rep()));
      detail::add_piece(e0, t.removals, ctx, nf.pieces);
    }
  }

  std::sort(nf.pieces.begin(), nf.pieces.end(),
            [](const OmegaPiece& a, const OmegaPiece& b) { return a.key() < b.key(); });

  // family: subgroups actually used, in canonical order
  std::map<std::string, Subgroup> used;
  for (const OmegaPiece& p : nf.pieces) {
    used.emplace(p.e0.subgroup().key(), p.e0.subgroup());
    for (const Coset& r : p.removals) used.emplace(r.subgroup().key(), r.subgroup());
  }
  for (auto& [k, h] : used) nf.family.push_back(h);
  return nf;
}

inline bool is_empty(const SetExpr& expr) { return to_omega_normal_form(expr).pieces.empty(); }

inline bool sets_equal(const SetExpr& a, const SetExpr& b) {
  auto ca = a.carrier();
  auto cb = b.carrier();
  if (ca && cb) require_same_carrier(*ca, *cb);
  return is_empty(SetExpr::diff(a, b)) && is_empty(SetExpr::diff(b, a));
}

// First point of a piece in the deterministic coset enumeration order.
// Terminates because no coset is a finite union of infinite-index subcosets.
inline GroupElement piece_point(const OmegaPiece& piece) {
  CosetPointEnumerator en(piece.e0);
  for (long guard = 0; guard < 100000000L; ++guard) {
    auto g = en.next();
    if (!g) break;
    bool inside = false;
    for (const Coset& r : piece.removals)
      if (r.contains(*g)) {
        inside = true;
        break;
      }
    if (!inside) return *g;
  }
  throw InternalError("piece has no point; removals must cover E0");
}

// Smallest coset containing the (nonempty) set: pick a point p of the set and
// generate a subgroup from the piece data relative to p.
inline Coset affine_hull(const SetExpr& expr) {
  OmegaNormalForm nf = to_omega_normal_form(expr);
  if (nf.pieces.empty()) throw EmptySet();
  GroupElement p = piece_point(nf.pieces[0]);
  std::vector<GroupElement> gens;
  for (const OmegaPiece& piece : nf.pieces) {
    gens.push_back(mul(inverse(p), piece.e0.rep()));
    for (const GroupElement& g : piece.e0.subgroup().generators()) gens.push_back(g);
  }
  return Coset(Subgroup::generated_by(p.carrier, gens), p);
}

// (expr) * t with translations resolved into the atoms.
inline SetExpr right_translate(const SetExpr& expr, const GroupElement& t) {
  auto c = expr.carrier();
  if (!c) throw Error("expression has no carrier");
  require_same_carrier(*c, t.carrier);
  return detail::push_translations(expr, identity(*c), t);
}

// Expression form of a normal form (union of E0-minus-removals pieces).
inline SetExpr nf_to_expr(const OmegaNormalForm& nf, const GroupCarrier& carrier) {
  if (nf.pieces.empty()) return SetExpr::empty_set(carrier);
  std::vector<SetExpr> pieces;
  for (const OmegaPiece& p : nf.pieces) {
    SetExpr e = SetExpr::atom(p.e0);
    if (!p.removals.empty()) {
      std::vector<SetExpr> rs;
      for (const Coset& r : p.removals) rs.push_back(SetExpr::atom(r));
      e = SetExpr::diff(std::move(e), SetExpr::union_of(std::move(rs)));
    }
    pieces.push_back(std::move(e));
  }
  return SetExpr::union_of(std::move(pieces));
}

}  // namespace cosetkit
