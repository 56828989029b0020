#pragma once

#include <json.hpp>

#include <string>
#include <vector>

#include "cosetkit/decompose.hpp"
#include "cosetkit/pwaffine.hpp"

namespace cosetkit {

// Canonical JSON forms: node-tagged trees, all coordinate data as decimal
// strings, fixed key order. Serialization round-trips bit-exactly; parsing is
// strict and rejects non-canonical subgroup data.
using Json = nlohmann::ordered_json;

inline Json to_json(const GroupCarrier& c) {
  Json j;
  j["kind"] = c.semidirect ? "ZN_SEMIDIRECT_C2" : "ZN";
  j["n"] = c.dim;
  if (c.semidirect) {
    Json flips = Json::array();
    for (char f : c.flips) flips.push_back(f ? 1 : 0);
    j["flips"] = std::move(flips);
  }
  return j;
}

inline Json to_json(const IntVec& v) {
  Json j = Json::array();
  for (const Int& x : v) j.push_back(to_decimal(x));
  return j;
}

inline Json to_json(const IntMat& m) {
  Json j = Json::array();
  for (const IntVec& row : m) j.push_back(to_json(row));
  return j;
}

inline Json to_json(const GroupElement& g) {
  Json j;
  j["t"] = to_json(g.t);
  j["sign"] = g.sign;
  return j;
}

inline Json to_json(const Subgroup& h) {
  Json j;
  j["carrier"] = to_json(h.carrier());
  j["basis"] = to_json(h.lattice().basis());
  j["reflection"] = h.reflection() ? to_json(*h.reflection()) : Json(nullptr);
  return j;
}

inline Json to_json(const Coset& c) {
  Json j;
  j["subgroup"] = to_json(c.subgroup());
  j["rep"] = to_json(c.rep());
  return j;
}

inline Json to_json(const SetExpr& e) {
  Json j;
  switch (e.kind()) {
    case SetExpr::Kind::Atom:
      j["node"] = "atom";
      j["coset"] = to_json(e.atom_coset());
      return j;
    case SetExpr::Kind::Empty:
      j["node"] = "empty";
      j["carrier"] = to_json(e.literal_carrier());
      return j;
    case SetExpr::Kind::Full:
      j["node"] = "full";
      j["carrier"] = to_json(e.literal_carrier());
      return j;
    case SetExpr::Kind::Union:
    case SetExpr::Kind::Intersect: {
      j["node"] = e.kind() == SetExpr::Kind::Union ? "union" : "intersect";
      Json args = Json::array();
      for (const SetExpr& a : e.args()) args.push_back(to_json(a));
      j["args"] = std::move(args);
      return j;
    }
    case SetExpr::Kind::Diff:
      j["node"] = "diff";
      j["left"] = to_json(e.args()[0]);
      j["right"] = to_json(e.args()[1]);
      return j;
    case SetExpr::Kind::LTranslate:
      j["node"] = "ltranslate";
      j["g"] = to_json(e.translation());
      j["arg"] = to_json(e.args()[0]);
      return j;
    case SetExpr::Kind::RTranslate:
      j["node"] = "rtranslate";
      j["arg"] = to_json(e.args()[0]);
      j["g"] = to_json(e.translation());
      return j;
    case SetExpr::Kind::Symbol:
      j["node"] = "symbol";
      j["name"] = e.symbol_name();
      return j;
  }
  throw InternalError("unhandled expression kind");
}

inline Json to_json(const OmegaPiece& p) {
  Json j;
  j["e0"] = to_json(p.e0);
  Json rs = Json::array();
  for (const Coset& r : p.removals) rs.push_back(to_json(r));
  j["removals"] = std::move(rs);
  return j;
}

inline Json to_json(const OmegaNormalForm& nf) {
  Json j;
  Json ps = Json::array();
  for (const OmegaPiece& p : nf.pieces) ps.push_back(to_json(p));
  j["pieces"] = std::move(ps);
  Json fam = Json::array();
  for (const Subgroup& h : nf.family) fam.push_back(to_json(h));
  j["family"] = std::move(fam);
  return j;
}

inline Json to_json(const AffinePiece& ap) {
  Json j;
  j["domain"] = to_json(ap.domain);
  j["target"] = to_json(ap.target());
  j["base_src"] = to_json(ap.base_src);
  j["base_dst"] = to_json(ap.base_dst);
  j["matrix"] = to_json(ap.matrix);
  j["refl_image"] = ap.refl_image ? to_json(*ap.refl_image) : Json(nullptr);
  return j;
}

inline Json to_json(const PiecewiseAffineMap& m) {
  Json j;
  Json ps = Json::array();
  for (const PwPiece& p : m.pieces) {
    Json pj;
    pj["set"] = to_json(p.set);
    pj["map"] = to_json(p.map);
    ps.push_back(std::move(pj));
  }
  j["pieces"] = std::move(ps);
  return j;
}

inline Json to_json(const DecompositionCertificate& cert) {
  Json j;
  j["input"] = to_json(cert.input);
  Json subs = Json::array();
  for (const Subgroup& h : cert.subgroups) subs.push_back(to_json(h));
  j["subgroups"] = std::move(subs);
  Json wits = Json::array();
  for (const SetExpr& w : cert.witnesses) wits.push_back(to_json(w));
  j["witnesses"] = std::move(wits);
  j["reconstruction"] = to_json(cert.reconstruction);
  j["engine_version"] = cert.engine_version;
  return j;
}

// ---- parsing (strict) ----

inline GroupCarrier carrier_from_json(const Json& j) {
  std::string kind = j.at("kind").get<std::string>();
  std::size_t n = j.at("n").get<std::size_t>();
  if (kind == "ZN") return GroupCarrier::zn(n);
  if (kind != "ZN_SEMIDIRECT_C2") throw Error("unknown carrier kind: " + kind);
  GroupCarrier c = GroupCarrier::zn_semidirect_c2(n);
  if (j.contains("flips")) {
    const Json& flips = j.at("flips");
    if (flips.size() != n) throw Error("flip mask length mismatch");
    for (std::size_t i = 0; i < n; ++i) c.flips[i] = flips[i].get<int>() ? 1 : 0;
  }
  return c;
}

inline IntVec vec_from_json(const Json& j) {
  IntVec v;
  for (const Json& x : j) v.push_back(from_decimal(x.get<std::string>()));
  return v;
}

inline IntMat mat_from_json(const Json& j) {
  IntMat m;
  for (const Json& row : j) m.push_back(vec_from_json(row));
  return m;
}

inline GroupElement element_from_json(const GroupCarrier& c, const Json& j) {
  return GroupElement(c, vec_from_json(j.at("t")), j.at("sign").get<int>());
}

inline Subgroup subgroup_from_json(const Json& j) {
  GroupCarrier c = carrier_from_json(j.at("carrier"));
  IntMat basis = mat_from_json(j.at("basis"));
  Lattice l = Lattice::from_generators(c.dim, basis);
  if (l.basis() != basis) throw Error("subgroup basis is not in canonical form");
  if (!j.at("reflection").is_null()) {
    IntVec r = vec_from_json(j.at("reflection"));
    Subgroup h = Subgroup::with_reflection(c, l, r);
    if (*h.reflection() != r) throw Error("reflection offset is not reduced");
    return h;
  }
  return Subgroup::lattice_subgroup(c, l);
}

inline Coset coset_from_json(const Json& j) {
  Subgroup h = subgroup_from_json(j.at("subgroup"));
  GroupElement rep = element_from_json(h.carrier(), j.at("rep"));
  Coset c(h, rep);
  if (c.rep() != rep) throw Error("coset representative is not canonical");
  return c;
}

inline SetExpr expr_from_json(const Json& j) {
  std::string node = j.at("node").get<std::string>();
  if (node == "atom") return SetExpr::atom(coset_from_json(j.at("coset")));
  if (node == "empty") return SetExpr::empty_set(carrier_from_json(j.at("carrier")));
  if (node == "full") return SetExpr::full_set(carrier_from_json(j.at("carrier")));
  if (node == "union" || node == "intersect") {
    std::vector<SetExpr> args;
    for (const Json& a : j.at("args")) args.push_back(expr_from_json(a));
    if (args.empty()) throw Error("empty argument list in " + node);
    return node == "union" ? SetExpr::union_of(std::move(args))
                           : SetExpr::intersect_of(std::move(args));
  }
  if (node == "diff") return SetExpr::diff(expr_from_json(j.at("left")), expr_from_json(j.at("right")));
  if (node == "ltranslate" || node == "rtranslate") {
    SetExpr arg = expr_from_json(j.at("arg"));
    auto c = arg.carrier();
    GroupCarrier gc = c ? *c : GroupCarrier::zn(j.at("g").at("t").size());
    GroupElement g = element_from_json(gc, j.at("g"));
    return node == "ltranslate" ? SetExpr::ltranslate(g, arg) : SetExpr::rtranslate(arg, g);
  }
  if (node == "symbol") return SetExpr::symbol(j.at("name").get<std::string>());
  throw Error("unknown expression node: " + node);
}

inline OmegaPiece piece_from_json(const Json& j) {
  OmegaPiece p{coset_from_json(j.at("e0")), {}};
  for (const Json& r : j.at("removals")) p.removals.push_back(coset_from_json(r));
  return p;
}

inline OmegaNormalForm nf_from_json(const Json& j) {
  OmegaNormalForm nf;
  for (const Json& p : j.at("pieces")) nf.pieces.push_back(piece_from_json(p));
  for (const Json& h : j.at("family")) nf.family.push_back(subgroup_from_json(h));
  return nf;
}

inline AffinePiece affine_from_json(const Json& j) {
  Coset dom = coset_from_json(j.at("domain"));
  GroupCarrier tgt = carrier_from_json(j.at("target"));
  GroupElement s0 = element_from_json(dom.carrier(), j.at("base_src"));
  GroupElement g0 = element_from_json(tgt, j.at("base_dst"));
  AffinePiece ap{dom, s0, g0, mat_from_json(j.at("matrix")), std::nullopt};
  if (!j.at("refl_image").is_null())
    ap.refl_image = element_from_json(tgt, j.at("refl_image"));
  return ap;
}

inline PiecewiseAffineMap pwmap_from_json(const Json& j) {
  PiecewiseAffineMap m;
  for (const Json& p : j.at("pieces"))
    m.pieces.push_back(PwPiece{piece_from_json(p.at("set")), affine_from_json(p.at("map"))});
  return m;
}

inline DecompositionCertificate certificate_from_json(const Json& j) {
  DecompositionCertificate cert;
  cert.input = expr_from_json(j.at("input"));
  for (const Json& h : j.at("subgroups")) cert.subgroups.push_back(subgroup_from_json(h));
  for (const Json& w : j.at("witnesses")) cert.witnesses.push_back(expr_from_json(w));
  cert.reconstruction = expr_from_json(j.at("reconstruction"));
  cert.engine_version = j.at("engine_version").get<std::string>();
  return cert;
}

inline std::string dump_json(const Json& j) { return j.dump(1) + "\n"; }

}  // namespace cosetkit
