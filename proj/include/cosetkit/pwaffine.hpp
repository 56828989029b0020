#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "cosetkit/normform.hpp"

namespace cosetkit {

// Product of two carriers by coordinate concatenation. At most one factor may
// carry a sign; the sign then acts on that factor's block only.
inline GroupCarrier product_carrier(const GroupCarrier& h, const GroupCarrier& g) {
  if (h.semidirect && g.semidirect)
    throw Error("product of two semidirect carriers is not supported");
  GroupCarrier p;
  p.dim = h.dim + g.dim;
  p.semidirect = h.semidirect || g.semidirect;
  if (p.semidirect) {
    p.flips.assign(p.dim, 0);
    if (h.semidirect)
      for (std::size_t i = 0; i < h.dim; ++i) p.flips[i] = h.flips[i];
    else
      for (std::size_t i = 0; i < g.dim; ++i) p.flips[h.dim + i] = g.flips[i];
  }
  return p;
}

inline GroupElement pair_element(const GroupCarrier& prod, const GroupElement& h,
                                 const GroupElement& g) {
  IntVec t = h.t;
  t.insert(t.end(), g.t.begin(), g.t.end());
  int sign = h.carrier.semidirect ? h.sign : g.sign;
  return GroupElement(prod, std::move(t), sign);
}

inline std::pair<GroupElement, GroupElement> split_element(const GroupCarrier& h,
                                                           const GroupCarrier& g,
                                                           const GroupElement& p) {
  IntVec vh(p.t.begin(), p.t.begin() + static_cast<long>(h.dim));
  IntVec vg(p.t.begin() + static_cast<long>(h.dim), p.t.end());
  int sh = h.semidirect ? p.sign : 1;
  int sg = g.semidirect ? p.sign : 1;
  return {GroupElement(h, std::move(vh), sh), GroupElement(g, std::move(vg), sg)};
}

// Affine map on a coset: x = s0 * k maps to g0 * hom(k), where hom sends the
// domain lattice through an integer matrix (into target translations) and the
// domain reflection, when present, to a fixed target element.
struct AffinePiece {
  Coset domain;
  GroupElement base_src;
  GroupElement base_dst;
  IntMat matrix;  // rows: images of the domain lattice basis rows
  std::optional<GroupElement> refl_image;

  const GroupCarrier& source() const { return domain.carrier(); }
  const GroupCarrier& target() const { return base_dst.carrier; }

  GroupElement hom(const GroupElement& k) const {
    const Subgroup& dom = domain.subgroup();
    if (k.sign == 1) {
      auto coords = dom.lattice().coordinates(k.t);
      if (!coords) throw Error("element outside the domain subgroup lattice");
      return GroupElement(target(), row_times_mat(*coords, matrix), 1);
    }
    if (!refl_image || !dom.reflection())
      throw Error("sign -1 element without a reflection image");
    GroupElement l = mul(inverse(*dom.reflection_element()), k);
    return mul(*refl_image, hom(l));
  }

  GroupElement eval(const GroupElement& x) const {
    return mul(base_dst, hom(mul(inverse(base_src), x)));
  }

  void validate() const {
    if (!domain.contains(base_src)) throw Error("base point outside the domain coset");
    require_same_carrier(base_dst.carrier, target());
    const Subgroup& dom = domain.subgroup();
    if (matrix.size() != dom.lattice().rank())
      throw Error("matrix row count does not match the domain lattice rank");
    for (const IntVec& row : matrix)
      if (row.size() != target().dim) throw Error("matrix column count mismatch");
    if (dom.reflection()) {
      if (!refl_image) throw Error("domain reflection without an image");
      // hom must respect the defining relations of the subgroup
      GroupElement rho = *dom.reflection_element();
      GroupElement lhs = mul(*refl_image, *refl_image);
      GroupElement rhs = hom(mul(rho, rho));
      if (lhs != rhs) throw Error("reflection image square violates the relations");
      for (const IntVec& b : dom.lattice().basis()) {
        GroupElement img = hom(GroupElement(source(), b, 1));
        GroupElement conj_img = mul(mul(*refl_image, img), inverse(*refl_image));
        GroupElement expect = hom(GroupElement(source(), source().sigma(b), 1));
        if (conj_img != expect) throw Error("reflection conjugation violates the relations");
      }
    } else if (refl_image) {
      throw Error("reflection image without a domain reflection");
    }
  }
};

struct PwPiece {
  OmegaPiece set;    // in the source carrier; E0 inside map.domain
  AffinePiece map;
};

struct PiecewiseAffineMap {
  std::vector<PwPiece> pieces;

  void validate() const {
    for (const PwPiece& p : pieces) {
      p.map.validate();
      if (!subgroup_contains(p.map.domain.subgroup(), p.set.e0.subgroup()))
        throw Error("piece subgroup not contained in the affine domain subgroup");
      if (!p.map.domain.contains(p.set.e0.rep()))
        throw Error("piece escapes the affine domain coset");
    }
    for (std::size_t i = 0; i < pieces.size(); ++i)
      for (std::size_t j = i + 1; j < pieces.size(); ++j) {
        SetExpr a = piece_expr(pieces[i].set);
        SetExpr b = piece_expr(pieces[j].set);
        if (!is_empty(SetExpr::intersect_of({a, b}))) throw Error("pieces overlap");
      }
  }

  static SetExpr piece_expr(const OmegaPiece& p) {
    SetExpr e = SetExpr::atom(p.e0);
    if (p.removals.empty()) return e;
    std::vector<SetExpr> rs;
    for (const Coset& r : p.removals) rs.push_back(SetExpr::atom(r));
    return SetExpr::diff(std::move(e), SetExpr::union_of(std::move(rs)));
  }
};

inline std::optional<GroupElement> eval_pw_affine(const PiecewiseAffineMap& m,
                                                  const GroupElement& x) {
  for (const PwPiece& p : m.pieces) {
    if (!p.set.e0.contains(x)) continue;
    bool removed = false;
    for (const Coset& r : p.set.removals)
      if (r.contains(x)) {
        removed = true;
        break;
      }
    if (!removed) return p.map.eval(x);
  }
  return std::nullopt;
}

namespace detail {

// Graph of the affine map restricted to a subcoset of its domain.
inline Coset graph_coset(const AffinePiece& ap, const Coset& c, const GroupCarrier& prod) {
  std::vector<GroupElement> gens;
  for (const IntVec& b : c.subgroup().lattice().basis()) {
    GroupElement el(ap.source(), b, 1);
    gens.push_back(pair_element(prod, el, ap.hom(el)));
  }
  if (auto rho = c.subgroup().reflection_element())
    gens.push_back(pair_element(prod, *rho, ap.hom(*rho)));
  Subgroup lambda = Subgroup::generated_by(prod, gens);
  GroupElement rep = pair_element(prod, c.rep(), ap.eval(c.rep()));
  return Coset(std::move(lambda), std::move(rep));
}

inline IntVec h_block(const GroupCarrier& h, const IntVec& v) {
  return IntVec(v.begin(), v.begin() + static_cast<long>(h.dim));
}

inline IntVec g_block(const GroupCarrier& h, const IntVec& v) {
  return IntVec(v.begin() + static_cast<long>(h.dim), v.end());
}

}  // namespace detail

// Graph of the whole map as a set expression over the product carrier: a
// union of graph cosets minus graph subcosets.
inline SetExpr graph_of(const PiecewiseAffineMap& m, const GroupCarrier& src,
                        const GroupCarrier& tgt) {
  m.validate();
  GroupCarrier prod = product_carrier(src, tgt);
  if (m.pieces.empty()) return SetExpr::empty_set(prod);
  std::vector<SetExpr> parts;
  for (const PwPiece& p : m.pieces) {
    SetExpr e = SetExpr::atom(detail::graph_coset(p.map, p.set.e0, prod));
    if (!p.set.removals.empty()) {
      std::vector<SetExpr> rs;
      for (const Coset& r : p.set.removals)
        rs.push_back(SetExpr::atom(detail::graph_coset(p.map, r, prod)));
      e = SetExpr::diff(std::move(e), SetExpr::union_of(std::move(rs)));
    }
    parts.push_back(std::move(e));
  }
  return SetExpr::union_of(std::move(parts));
}

// Projection of a graph subgroup to the source factor; fails when the
// subgroup meets {e} x G nontrivially (then the coset is not a graph).
namespace detail {

inline Subgroup project_graph_subgroup(const Subgroup& lambda, const GroupCarrier& src,
                                       const GroupCarrier& tgt) {
  const GroupCarrier& prod = lambda.carrier();
  // vertical part of the lattice must be trivial
  IntMat vertical;
  for (std::size_t i = 0; i < tgt.dim; ++i) {
    IntVec e(prod.dim, 0);
    e[src.dim + i] = 1;
    vertical.push_back(std::move(e));
  }
  Lattice vert = Lattice::from_generators(prod.dim, vertical);
  if (lambda.lattice().intersect(vert).rank() > 0)
    throw NotAGraph("graph subgroup contains a vertical direction");

  IntMat hrows;
  for (const IntVec& row : lambda.lattice().basis()) hrows.push_back(h_block(src, row));
  Lattice hproj = Lattice::from_generators(src.dim, hrows);

  if (lambda.reflection()) {
    if (!src.semidirect) {
      if (!tgt.semidirect) throw InternalError("reflection on an abelian product");
      // sign -1 elements over the source would force sign -1 lattice images,
      // which the matrix model cannot express
      IntVec rh = h_block(src, *lambda.reflection());
      if (hproj.contains(vec_neg(rh)))
        throw NotAGraph("graph has a sign -1 point over the identity");
      throw NotAGraph("graph maps lattice directions to sign -1 elements");
    }
    return Subgroup::with_reflection(src, hproj, h_block(src, *lambda.reflection()));
  }
  return Subgroup::lattice_subgroup(src, hproj);
}

}  // namespace detail

// Recover the affine piece whose graph is exactly the coset F.
inline AffinePiece affine_from_graph_coset(const Coset& f, const GroupCarrier& src,
                                           const GroupCarrier& tgt) {
  const Subgroup& lambda = f.subgroup();
  Subgroup dom = detail::project_graph_subgroup(lambda, src, tgt);

  // Solve the hom: for each domain basis row there is a unique lattice
  // element of the graph over it (uniqueness is the graph condition).
  IntMat hrows;
  for (const IntVec& row : lambda.lattice().basis())
    hrows.push_back(detail::h_block(src, row));
  HnfResult hr = hnf_with_transform(hrows, src.dim);
  IntMat matrix;
  for (const IntVec& d : dom.lattice().basis()) {
    auto c = hnf_solve(hr.h, d);
    if (!c) throw InternalError("domain row not reachable from the graph lattice");
    IntVec x(hrows.size(), 0);
    for (std::size_t i = 0; i < c->size(); ++i)
      for (std::size_t j = 0; j < hrows.size(); ++j) x[j] += (*c)[i] * hr.transform[i][j];
    IntVec lam(lambda.carrier().dim, 0);
    for (std::size_t j = 0; j < hrows.size(); ++j)
      lam = vec_add(lam, vec_scale(x[j], lambda.lattice().basis()[j]));
    matrix.push_back(detail::g_block(src, lam));
  }

  std::optional<GroupElement> refl_image;
  if (lambda.reflection()) {
    // unique graph element over the domain reflection (vertical part trivial)
    refl_image = GroupElement(tgt, detail::g_block(src, *lambda.reflection()), 1);
  }

  auto [s0, g0] = split_element(src, tgt, f.rep());
  AffinePiece ap{Coset(dom, s0), s0, g0, std::move(matrix), std::move(refl_image)};
  ap.validate();
  return ap;
}

// Decompose a graph expression into affine pieces. The expression must be a
// graph: each piece coset satisfies the graph condition and no two pieces
// share a source point.
inline PiecewiseAffineMap pw_affine_from_graph(const SetExpr& gamma, const GroupCarrier& src,
                                               const GroupCarrier& tgt) {
  OmegaNormalForm nf = to_omega_normal_form(gamma);
  PiecewiseAffineMap out;
  for (const OmegaPiece& p : nf.pieces) {
    AffinePiece ap = affine_from_graph_coset(p.e0, src, tgt);
    OmegaPiece dom_piece{ap.domain, {}};
    for (const Coset& r : p.removals) {
      Subgroup rsub = detail::project_graph_subgroup(r.subgroup(), src, tgt);
      auto [rh, rg] = split_element(src, tgt, r.rep());
      dom_piece.removals.push_back(Coset(std::move(rsub), rh));
    }
    out.pieces.push_back(PwPiece{std::move(dom_piece), std::move(ap)});
  }
  // distinct pieces must not overlap in the source, or the set was no graph
  for (std::size_t i = 0; i < out.pieces.size(); ++i)
    for (std::size_t j = i + 1; j < out.pieces.size(); ++j) {
      SetExpr a = PiecewiseAffineMap::piece_expr(out.pieces[i].set);
      SetExpr b = PiecewiseAffineMap::piece_expr(out.pieces[j].set);
      if (!is_empty(SetExpr::intersect_of({a, b})))
        throw NotAGraph("two graph pieces share a source point");
    }
  return out;
}

}  // namespace cosetkit
