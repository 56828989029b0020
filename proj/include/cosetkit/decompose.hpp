#pragma once

#include <algorithm>
#include <cstddef>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "cosetkit/covering.hpp"
#include "cosetkit/dag.hpp"
#include "cosetkit/version.hpp"

namespace cosetkit {

inline const char* kInputSymbol = "Y";

// Machine-checkable decomposition: subgroups cut out of the input set by
// two-sided-translate expressions, plus a reconstruction of the input from
// cosets of those subgroups.
struct DecompositionCertificate {
  SetExpr input;
  std::vector<Subgroup> subgroups;
  std::vector<SetExpr> witnesses;  // over the symbol Y, one per subgroup
  SetExpr reconstruction;          // over atoms of the listed subgroups
  std::string engine_version = kEngineVersion;
};

// Cosets of h that occur as a piece's E0. For a disjoint normal form this is
// exactly the set of cosets of h that no union of cosets of the other family
// members can cover inside the set.
inline std::vector<Coset> big_cosets(const OmegaNormalForm& nf, const Subgroup& h) {
  bool in_family = false;
  for (const Subgroup& k : nf.family) in_family = in_family || k == h;
  if (!in_family) throw SubgroupNotInFamily(h.key());
  std::vector<Coset> out;
  for (const OmegaPiece& p : nf.pieces)
    if (p.e0.subgroup() == h) out.push_back(p.e0);
  detail::dedup_cosets(out);
  return out;
}

// A witness expression uses only the input symbol, translations of it, and
// boolean operations; that syntax is what certifies membership in the
// two-sided relative ring of the input.
inline bool witness_syntax_ok(const SetExpr& e) {
  switch (e.kind()) {
    case SetExpr::Kind::Symbol: return e.symbol_name() == kInputSymbol;
    case SetExpr::Kind::Union:
    case SetExpr::Kind::Intersect:
    case SetExpr::Kind::Diff: {
      for (const SetExpr& a : e.args())
        if (!witness_syntax_ok(a)) return false;
      return true;
    }
    case SetExpr::Kind::LTranslate:
    case SetExpr::Kind::RTranslate: return witness_syntax_ok(e.args()[0]);
    default: return false;
  }
}

// On abelian carriers every right translate is a left translate; rewrite the
// witness to left-only form.
inline SetExpr leftify_witness(const SetExpr& e) {
  switch (e.kind()) {
    case SetExpr::Kind::Symbol:
    case SetExpr::Kind::Atom:
    case SetExpr::Kind::Empty:
    case SetExpr::Kind::Full: return e;
    case SetExpr::Kind::Union: {
      std::vector<SetExpr> xs;
      for (const SetExpr& a : e.args()) xs.push_back(leftify_witness(a));
      return SetExpr::union_of(std::move(xs));
    }
    case SetExpr::Kind::Intersect: {
      std::vector<SetExpr> xs;
      for (const SetExpr& a : e.args()) xs.push_back(leftify_witness(a));
      return SetExpr::intersect_of(std::move(xs));
    }
    case SetExpr::Kind::Diff:
      return SetExpr::diff(leftify_witness(e.args()[0]), leftify_witness(e.args()[1]));
    case SetExpr::Kind::LTranslate:
      return SetExpr::ltranslate(e.translation(), leftify_witness(e.args()[0]));
    case SetExpr::Kind::RTranslate: {
      if (e.translation().carrier.semidirect)
        throw Error("right translates are not left translates on this carrier");
      return SetExpr::ltranslate(e.translation(), leftify_witness(e.args()[0]));
    }
  }
  throw InternalError("unhandled expression kind");
}

struct MinimalSubgroupResult {
  Subgroup subgroup;
  SetExpr witness;  // over the symbol Y
  std::size_t coset_count = 0;
};

namespace detail {

struct PatternAtom {
  std::vector<Coset> cosets;         // the h1-cosets with this exact pattern
  std::vector<GroupElement> in_set;  // translates q with cosets inside qC
  std::vector<GroupElement> out_set;
};

// Atoms of the translate pattern over the candidate set: group the coset
// universe by which translates qC contain each coset.
inline std::vector<PatternAtom> pattern_atoms(const std::vector<Coset>& c,
                                              const std::vector<GroupElement>& candidates) {
  const Subgroup& h1 = c[0].subgroup();
  std::map<std::string, Coset> universe;
  std::map<std::string, std::vector<std::string>> translate_sets;  // q.key -> coset keys
  for (const GroupElement& q : candidates) {
    std::vector<std::string>& keys = translate_sets[q.key()];
    for (const Coset& x : c) {
      Coset moved(h1, mul(q, x.rep()));
      keys.push_back(moved.key());
      universe.emplace(moved.key(), moved);
    }
  }
  std::map<std::string, PatternAtom> atoms;
  for (const auto& [ukey, ucoset] : universe) {
    std::string pattern;
    std::vector<GroupElement> ins, outs;
    for (const GroupElement& q : candidates) {
      const auto& keys = translate_sets[q.key()];
      bool inside = std::find(keys.begin(), keys.end(), ukey) != keys.end();
      pattern += inside ? '1' : '0';
      (inside ? ins : outs).push_back(q);
    }
    if (pattern.find('1') == std::string::npos) continue;
    auto [it, fresh] = atoms.emplace(pattern, PatternAtom{});
    if (fresh) {
      it->second.in_set = std::move(ins);
      it->second.out_set = std::move(outs);
    }
    it->second.cosets.push_back(ucoset);
  }
  std::vector<PatternAtom> out;
  for (auto& [pat, atom] : atoms) out.push_back(std::move(atom));
  std::sort(out.begin(), out.end(), [](const PatternAtom& a, const PatternAtom& b) {
    if (a.cosets.size() != b.cosets.size()) return a.cosets.size() < b.cosets.size();
    return a.cosets[0].key() < b.cosets[0].key();
  });
  return out;
}

// Union of h1-cosets containing the identity is a subgroup iff the subgroup
// generated by its data has exactly that many h1-cosets.
inline std::optional<Subgroup> union_as_subgroup(const Subgroup& h1,
                                                 const std::vector<Coset>& translated) {
  std::vector<GroupElement> gens = h1.generators();
  for (const Coset& c : translated) gens.push_back(c.rep());
  Subgroup cand = Subgroup::generated_by(h1.carrier(), gens);
  SubgroupIndex idx = subgroup_index(cand, h1);
  if (idx.finite && idx.value == Int(translated.size())) return cand;
  return std::nullopt;
}

inline SetExpr atom_witness(const PatternAtom& atom) {
  std::vector<SetExpr> pos;
  for (const GroupElement& q : atom.in_set)
    pos.push_back(SetExpr::ltranslate(q, SetExpr::symbol(kInputSymbol)));
  SetExpr e = SetExpr::intersect_of(std::move(pos));
  if (!atom.out_set.empty()) {
    std::vector<SetExpr> neg;
    for (const GroupElement& q : atom.out_set)
      neg.push_back(SetExpr::ltranslate(q, SetExpr::symbol(kInputSymbol)));
    e = SetExpr::diff(std::move(e), SetExpr::union_of(std::move(neg)));
  }
  return e;
}

}  // namespace detail

// Smallest (fewest h1-cosets) member of the translate-pattern ring over C
// that is a translated subgroup; returns the subgroup translated to contain
// the identity and a witness expression realizing its coset pattern.
inline MinimalSubgroupResult minimal_subgroup(const std::vector<Coset>& c_in) {
  if (c_in.empty()) throw Error("minimal_subgroup needs at least one coset");
  std::vector<Coset> c = c_in;
  detail::dedup_cosets(c);
  const Subgroup& h1 = c[0].subgroup();
  for (const Coset& x : c)
    if (x.subgroup() != h1) throw Error("cosets must share one subgroup");

  auto build_candidates = [&](bool widen) {
    std::vector<GroupElement> qs;
    std::map<std::string, bool> seen;
    auto add = [&](const GroupElement& g) {
      if (seen.emplace(g.key(), true).second) qs.push_back(g);
    };
    std::vector<GroupElement> correctors{identity(h1.carrier())};
    if (auto rho = h1.reflection_element()) correctors.push_back(*rho);
    if (widen)
      for (const IntVec& row : h1.lattice().basis()) {
        correctors.emplace_back(h1.carrier(), row, 1);
        correctors.emplace_back(h1.carrier(), vec_neg(row), 1);
      }
    for (const Coset& ck : c)
      for (const Coset& ci : c)
        for (const GroupElement& h : correctors) add(mul(mul(ck.rep(), h), inverse(ci.rep())));
    return qs;
  };

  for (bool widen : {false, true}) {
    std::vector<detail::PatternAtom> atoms = detail::pattern_atoms(c, build_candidates(widen));
    // single atoms first (the minimal member is a single atom when the
    // candidate set is rich enough), then unions by total coset count
    std::vector<std::vector<std::size_t>> picks;
    for (std::size_t i = 0; i < atoms.size(); ++i) picks.push_back({i});
    if (atoms.size() <= 12) {
      for (std::size_t mask = 1; mask < (1u << atoms.size()); ++mask) {
        std::vector<std::size_t> pick;
        for (std::size_t i = 0; i < atoms.size(); ++i)
          if (mask & (1u << i)) pick.push_back(i);
        if (pick.size() > 1) picks.push_back(std::move(pick));
      }
    }
    std::stable_sort(picks.begin(), picks.end(),
                     [&](const std::vector<std::size_t>& a, const std::vector<std::size_t>& b) {
                       std::size_t ca = 0, cb = 0;
                       for (std::size_t i : a) ca += atoms[i].cosets.size();
                       for (std::size_t i : b) cb += atoms[i].cosets.size();
                       return ca < cb;
                     });
    for (const auto& pick : picks) {
      std::vector<Coset> member;
      for (std::size_t i : pick)
        member.insert(member.end(), atoms[i].cosets.begin(), atoms[i].cosets.end());
      detail::dedup_cosets(member);
      GroupElement shift = inverse(member[0].rep());
      std::vector<Coset> translated;
      for (const Coset& x : member) translated.push_back(left_translate_coset(shift, x));
      auto sub = detail::union_as_subgroup(h1, translated);
      if (!sub) continue;
      std::vector<SetExpr> parts;
      for (std::size_t i : pick) parts.push_back(detail::atom_witness(atoms[i]));
      SetExpr witness = SetExpr::ltranslate(shift, SetExpr::union_of(std::move(parts)));
      return MinimalSubgroupResult{*sub, std::move(witness), member.size()};
    }
  }
  throw InternalError("no translated subgroup found in the pattern ring");
}

struct PromotionResult {
  Subgroup subgroup;       // H containing h1 with finite index
  SetExpr witness;         // over the symbol Y
  OmegaNormalForm rewritten;
  SubgroupIndex index_over_h1;
};

// Promote a top-level subgroup: find H >= h1 cut out of the set by two-sided
// translates, then replace every h1-coset usage in the normal form by
// H-cosets. Every intermediate identity is verified exactly.
inline PromotionResult promote_top_level(const OmegaNormalForm& nf, const Subgroup& h1) {
  bool in_family = false;
  for (const Subgroup& k : nf.family) {
    in_family = in_family || k == h1;
    if (k != h1 && subgroup_contains(k, h1)) throw NotTopLevel(h1.key());
  }
  if (!in_family) throw SubgroupNotInFamily(h1.key());
  const GroupCarrier& carrier = h1.carrier();

  std::vector<Coset> big = big_cosets(nf, h1);
  if (big.empty()) throw Error("top-level subgroup has no big cosets: " + h1.key());

  MinimalSubgroupResult ms = minimal_subgroup(big);
  SetExpr y_expr = nf_to_expr(nf, carrier);
  SetExpr::Bindings bind{{kInputSymbol, y_expr}};

  SetExpr a0 = ms.witness.substitute(bind);
  Subgroup h = ms.subgroup;
  SetExpr h_expr = SetExpr::atom(Coset::at_identity(h));

  // Left separation inside H: cover H \ A0 by infinite-index cosets of H and
  // pick translates whose translated unions miss a common point of H.
  SetExpr d = SetExpr::diff(h_expr, a0);
  std::vector<GroupElement> ts{identity(carrier)};
  OmegaNormalForm nf_d = to_omega_normal_form(d);
  if (!nf_d.pieces.empty()) {
    std::vector<Coset> cover;
    Coset h_at_e = Coset::at_identity(h);
    for (const OmegaPiece& p : nf_d.pieces) {
      auto meet = intersect_cosets(p.e0, h_at_e);
      if (!meet) throw InternalError("piece of H \\ A0 misses H");
      cover.push_back(*meet);
    }
    detail::dedup_cosets(cover);
    ts = separate_left(CosetList{std::move(cover), h});
  }

  std::vector<SetExpr> b0_parts;
  for (const GroupElement& t : ts) b0_parts.push_back(SetExpr::ltranslate(t, ms.witness));
  SetExpr b0_sym = SetExpr::union_of(std::move(b0_parts));
  SetExpr b0 = b0_sym.substitute(bind);
  if (!is_empty(SetExpr::diff(h_expr, b0)))
    throw InternalError("B0 does not contain the promoted subgroup");

  // Right separation: B0 sits inside H union cosets of other subgroups; kill
  // the excess with right translates from H.
  OmegaNormalForm nf_b0 = to_omega_normal_form(b0);
  std::vector<Coset> excess;
  for (const OmegaPiece& p : nf_b0.pieces) {
    if (p.e0.subgroup() == h1) {
      if (!h.contains(p.e0.rep()))
        throw InternalError("big coset of B0 escapes the promoted subgroup");
      continue;
    }
    excess.push_back(p.e0);
  }
  detail::dedup_cosets(excess);
  std::vector<GroupElement> rs{identity(carrier)};
  if (!excess.empty()) rs = separate_right(CosetList{std::move(excess), h});

  std::vector<SetExpr> h_parts;
  for (const GroupElement& r : rs) h_parts.push_back(SetExpr::rtranslate(b0_sym, r));
  SetExpr witness = SetExpr::intersect_of(std::move(h_parts));
  if (!sets_equal(witness.substitute(bind), h_expr))
    throw InternalError("promotion witness does not cut out the subgroup");

  // Rewrite: group the h1-cosets under their containing H-cosets and merge.
  SubgroupIndex idx = subgroup_index(h, h1);
  if (!idx.finite) throw InternalError("promoted subgroup has infinite index over h1");
  OmegaNormalForm rewritten;
  std::map<std::string, std::pair<Coset, std::vector<Coset>>> merged;  // H-coset -> removals
  for (const OmegaPiece& p : nf.pieces) {
    if (p.e0.subgroup() != h1) {
      rewritten.pieces.push_back(p);
      continue;
    }
    Coset hc(h, p.e0.rep());
    auto [it, fresh] = merged.emplace(hc.key(), std::make_pair(hc, std::vector<Coset>{}));
    it->second.second.insert(it->second.second.end(), p.removals.begin(), p.removals.end());
  }
  for (auto& [key, entry] : merged) {
    // the constituent h1-cosets must tile the H-coset exactly
    Int count = 0;
    for (const OmegaPiece& p : nf.pieces)
      if (p.e0.subgroup() == h1 && Coset(h, p.e0.rep()) == entry.first) ++count;
    if (count != idx.value)
      throw InternalError("big cosets do not tile the promoted coset");
    detail::dedup_cosets(entry.second);
    rewritten.pieces.push_back(OmegaPiece{entry.first, entry.second});
  }
  std::sort(rewritten.pieces.begin(), rewritten.pieces.end(),
            [](const OmegaPiece& a, const OmegaPiece& b) { return a.key() < b.key(); });
  std::map<std::string, Subgroup> used;
  for (const OmegaPiece& p : rewritten.pieces) {
    used.emplace(p.e0.subgroup().key(), p.e0.subgroup());
    for (const Coset& r : p.removals) used.emplace(r.subgroup().key(), r.subgroup());
  }
  for (auto& [k, sub] : used) rewritten.family.push_back(sub);

  return PromotionResult{std::move(h), std::move(witness), std::move(rewritten), idx};
}

namespace detail {

struct DecomposeParts {
  std::vector<Subgroup> subgroups;
  std::vector<SetExpr> witnesses;
  SetExpr reconstruction;
};

inline void merge_subgroup(DecomposeParts& acc, const Subgroup& h, const SetExpr& w) {
  for (const Subgroup& k : acc.subgroups)
    if (k == h) return;  // keep the first witness
  acc.subgroups.push_back(h);
  acc.witnesses.push_back(w);
}

// concrete: a closed expression for the current set. rel: the same set as an
// expression over the original input symbol, so that witnesses from deeper
// levels compose into witnesses over the original input.
inline DecomposeParts decompose_core(const SetExpr& concrete, const SetExpr& rel,
                                     std::size_t depth) {
  if (depth > 64) throw InternalError("decomposition recursion exceeded the depth guard");
  auto carrier_opt = concrete.carrier();
  if (!carrier_opt) throw Error("expression has no carrier");
  const GroupCarrier carrier = *carrier_opt;

  OmegaNormalForm nf = to_omega_normal_form(concrete);
  DecomposeParts out;
  out.reconstruction = SetExpr::empty_set(carrier);
  if (nf.pieces.empty()) return out;

  ContainmentDag dag = ContainmentDag::build(nf.family);
  std::vector<Subgroup> tops;
  for (std::size_t i : dag.top_level()) tops.push_back(dag.nodes[i]);

  // Promote every top-level subgroup, rewriting the normal form as we go.
  OmegaNormalForm cur = nf;
  std::vector<std::pair<Subgroup, SetExpr>> promoted;  // (H, witness over local symbol)
  for (const Subgroup& h1 : tops) {
    PromotionResult pr = promote_top_level(cur, h1);
    cur = pr.rewritten;
    promoted.emplace_back(pr.subgroup, pr.witness);
  }

  SetExpr::Bindings rel_bind{{kInputSymbol, rel}};
  std::vector<SetExpr> recon_parts;
  std::vector<SetExpr> a_concrete_all, a_rel_all;
  for (const auto& [h, wit_local] : promoted) {
    SetExpr wit_global = wit_local.substitute(rel_bind);
    merge_subgroup(out, h, wit_global);
    std::vector<Coset> big = big_cosets(cur, h);
    std::vector<SetExpr> a_atoms, a_rel_parts;
    for (const Coset& c : big) {
      a_atoms.push_back(SetExpr::atom(c));
      a_rel_parts.push_back(SetExpr::ltranslate(c.rep(), wit_global));
    }
    SetExpr a_concrete = SetExpr::union_of(std::move(a_atoms));
    SetExpr a_rel = SetExpr::union_of(std::move(a_rel_parts));
    a_concrete_all.push_back(a_concrete);
    a_rel_all.push_back(a_rel);

    SetExpr b_concrete = SetExpr::diff(a_concrete, concrete);
    SetExpr b_rel = SetExpr::diff(a_rel, rel);
    DecomposeParts sub = decompose_core(b_concrete, b_rel, depth + 1);
    for (std::size_t i = 0; i < sub.subgroups.size(); ++i)
      merge_subgroup(out, sub.subgroups[i], sub.witnesses[i]);
    if (sub.reconstruction.kind() == SetExpr::Kind::Empty)
      recon_parts.push_back(a_concrete);
    else
      recon_parts.push_back(SetExpr::diff(a_concrete, sub.reconstruction));
  }

  SetExpr c_concrete = SetExpr::diff(concrete, SetExpr::union_of(a_concrete_all));
  SetExpr c_rel = SetExpr::diff(rel, SetExpr::union_of(a_rel_all));
  DecomposeParts subc = decompose_core(c_concrete, c_rel, depth + 1);
  for (std::size_t i = 0; i < subc.subgroups.size(); ++i)
    merge_subgroup(out, subc.subgroups[i], subc.witnesses[i]);
  if (subc.reconstruction.kind() != SetExpr::Kind::Empty)
    recon_parts.push_back(subc.reconstruction);

  out.reconstruction = SetExpr::union_of(std::move(recon_parts));
  return out;
}

}  // namespace detail

// Build a verified decomposition of a closed, nonempty set expression.
inline DecompositionCertificate decompose(const SetExpr& y) {
  if (y.has_symbol()) throw UnboundSymbol("input must be closed");
  if (is_empty(y)) throw EmptyInput();
  detail::DecomposeParts parts =
      detail::decompose_core(y, SetExpr::symbol(kInputSymbol), 0);
  DecompositionCertificate cert;
  cert.input = y;
  cert.subgroups = std::move(parts.subgroups);
  cert.witnesses = std::move(parts.witnesses);
  cert.reconstruction = std::move(parts.reconstruction);
  return cert;
}

inline bool subgroup_axioms_ok(const Subgroup& h, std::string* reason = nullptr) {
  Lattice rebuilt = Lattice::from_generators(h.lattice().dim(), h.lattice().basis());
  if (rebuilt != h.lattice()) {
    if (reason) *reason = "lattice basis is not in canonical form";
    return false;
  }
  if (h.reflection()) {
    if (!h.carrier().semidirect) {
      if (reason) *reason = "reflection part on an abelian carrier";
      return false;
    }
    if (Subgroup::sigma_lattice(h.carrier(), h.lattice()) != h.lattice()) {
      if (reason) *reason = "lattice is not invariant under the sign action";
      return false;
    }
    if (!h.lattice().contains(vec_add(*h.reflection(), h.carrier().sigma(*h.reflection())))) {
      if (reason) *reason = "reflection offset does not square into the lattice";
      return false;
    }
    if (h.lattice().reduce(*h.reflection()) != *h.reflection()) {
      if (reason) *reason = "reflection offset is not reduced";
      return false;
    }
  }
  return true;
}

// Verify: (a) subgroup representations, (b) every witness cuts out its
// subgroup, (c) the reconstruction equals the input, (d) reconstruction atoms
// only use listed subgroups.
inline bool check_certificate(const DecompositionCertificate& cert,
                              std::string* reason = nullptr) {
  auto fail = [&](const std::string& r) {
    if (reason) *reason = r;
    return false;
  };
  if (cert.subgroups.size() != cert.witnesses.size())
    return fail("subgroup and witness counts differ");
  for (const Subgroup& h : cert.subgroups) {
    std::string sub_reason;
    if (!subgroup_axioms_ok(h, &sub_reason)) return fail(h.key() + ": " + sub_reason);
  }
  SetExpr::Bindings bind{{kInputSymbol, cert.input}};
  for (std::size_t i = 0; i < cert.subgroups.size(); ++i) {
    if (!witness_syntax_ok(cert.witnesses[i]))
      return fail("witness " + std::to_string(i) + " uses non-translate syntax");
    SetExpr bound = cert.witnesses[i].substitute(bind);
    if (!sets_equal(bound, SetExpr::atom(Coset::at_identity(cert.subgroups[i]))))
      return fail("witness " + std::to_string(i) + " does not equal its subgroup");
  }
  if (!sets_equal(cert.reconstruction, cert.input))
    return fail("reconstruction does not equal the input");
  // collect reconstruction atoms after resolving translations
  auto c = cert.reconstruction.carrier();
  std::vector<Coset> atoms;
  if (c) {
    SetExpr pushed =
        detail::push_translations(cert.reconstruction, identity(*c), identity(*c));
    std::vector<SetExpr> stack{pushed};
    while (!stack.empty()) {
      SetExpr e = stack.back();
      stack.pop_back();
      if (e.kind() == SetExpr::Kind::Atom) atoms.push_back(e.atom_coset());
      else if (e.kind() == SetExpr::Kind::Full)
        atoms.push_back(Coset::at_identity(Subgroup::full(e.literal_carrier())));
      else
        for (const SetExpr& a : e.args()) stack.push_back(a);
    }
  }
  for (const Coset& a : atoms) {
    bool listed = false;
    for (const Subgroup& h : cert.subgroups) listed = listed || h == a.subgroup();
    if (!listed) return fail("reconstruction atom over unlisted subgroup " + a.subgroup().key());
  }
  if (reason) reason->clear();
  return true;
}

}  // namespace cosetkit
