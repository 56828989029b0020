#pragma once

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "cosetkit/carrier.hpp"
#include "cosetkit/lattice.hpp"

namespace cosetkit {

// Subgroup of a carrier in canonical form: a lattice (the sign +1 part) plus,
// optionally, a reflection offset r marking the sign -1 part {(r + l, -1)}.
// Canonical form: HNF lattice basis, r reduced modulo the lattice. With the
// reflection present the lattice must be invariant under the sign action and
// r + sigma(r) must lie in it, otherwise the set is not closed.
class Subgroup {
 public:
  static Subgroup lattice_subgroup(const GroupCarrier& carrier, Lattice lattice) {
    if (lattice.dim() != carrier.dim) throw Error("lattice dimension mismatch");
    return Subgroup(carrier, std::move(lattice), std::nullopt);
  }

  static Subgroup with_reflection(const GroupCarrier& carrier, Lattice lattice, IntVec r) {
    if (!carrier.semidirect) throw Error("reflection part on a Z^n carrier");
    if (lattice.dim() != carrier.dim) throw Error("lattice dimension mismatch");
    Lattice sig = sigma_lattice(carrier, lattice);
    if (sig != lattice) throw NotASubgroup("lattice not invariant under the sign action");
    if (!lattice.contains(vec_add(r, carrier.sigma(r))))
      throw NotASubgroup("reflection offset does not square into the lattice");
    IntVec red = lattice.reduce(r);
    return Subgroup(carrier, std::move(lattice), std::move(red));
  }

  static Subgroup trivial(const GroupCarrier& carrier) {
    return lattice_subgroup(carrier, Lattice::zero(carrier.dim));
  }

  // The whole carrier as a subgroup.
  static Subgroup full(const GroupCarrier& carrier) {
    Lattice l = Lattice::full(carrier.dim);
    if (carrier.semidirect) return with_reflection(carrier, std::move(l), IntVec(carrier.dim, 0));
    return lattice_subgroup(carrier, std::move(l));
  }

  // Smallest subgroup containing the given elements.
  static Subgroup generated_by(const GroupCarrier& carrier,
                               const std::vector<GroupElement>& gens) {
    IntMat rows;
    std::vector<GroupElement> minus;
    for (const GroupElement& g : gens) {
      require_same_carrier(carrier, g.carrier);
      if (g.sign == 1)
        rows.push_back(g.t);
      else
        minus.push_back(g);
    }
    if (minus.empty())
      return lattice_subgroup(carrier, Lattice::from_generators(carrier.dim, rows));
    const GroupElement& r0 = minus[0];
    for (std::size_t i = 1; i < minus.size(); ++i)
      rows.push_back(mul(minus[i], inverse(r0)).t);
    // Close under conjugation by r0 and include r0^2.
    IntMat closed = rows;
    for (const IntVec& v : rows) closed.push_back(carrier.sigma(v));
    closed.push_back(mul(r0, r0).t);
    return with_reflection(carrier, Lattice::from_generators(carrier.dim, closed), r0.t);
  }

  const GroupCarrier& carrier() const { return carrier_; }
  const Lattice& lattice() const { return lattice_; }
  const std::optional<IntVec>& reflection() const { return reflection_; }

  std::optional<GroupElement> reflection_element() const {
    if (!reflection_) return std::nullopt;
    return GroupElement(carrier_, *reflection_, -1);
  }

  bool contains(const GroupElement& g) const {
    require_same_carrier(carrier_, g.carrier);
    if (g.sign == 1) return lattice_.contains(g.t);
    if (!reflection_) return false;
    return lattice_.contains(vec_sub(g.t, *reflection_));
  }

  std::vector<GroupElement> generators() const {
    std::vector<GroupElement> out;
    for (const IntVec& row : lattice_.basis()) out.emplace_back(carrier_, row, 1);
    if (reflection_) out.emplace_back(carrier_, *reflection_, -1);
    return out;
  }

  bool operator==(const Subgroup& o) const {
    return carrier_ == o.carrier_ && lattice_ == o.lattice_ && reflection_ == o.reflection_;
  }
  bool operator!=(const Subgroup& o) const { return !(*this == o); }

  std::string key() const {
    std::string s = "H{" + carrier_.key() + ";" + lattice_.key();
    if (reflection_) {
      s += ";r(";
      for (std::size_t i = 0; i < reflection_->size(); ++i) {
        if (i) s += ",";
        s += to_decimal((*reflection_)[i]);
      }
      s += ")";
    }
    s += "}";
    return s;
  }

  static Lattice sigma_lattice(const GroupCarrier& carrier, const Lattice& l) {
    if (!carrier.semidirect) return l;
    IntMat rows;
    for (const IntVec& r : l.basis()) rows.push_back(carrier.sigma(r));
    return Lattice::from_generators(l.dim(), rows);
  }

 private:
  Subgroup(GroupCarrier c, Lattice l, std::optional<IntVec> r)
      : carrier_(std::move(c)), lattice_(std::move(l)), reflection_(std::move(r)) {}

  GroupCarrier carrier_;
  Lattice lattice_;
  std::optional<IntVec> reflection_;
};

inline bool subgroup_membership(const GroupElement& g, const Subgroup& h) {
  return h.contains(g);
}

inline IntVec lattice_combination(std::size_t dim, const Lattice& l, const IntVec& coords) {
  IntVec v(dim, 0);
  for (std::size_t i = 0; i < coords.size(); ++i)
    v = vec_add(v, vec_scale(coords[i], l.basis()[i]));
  return v;
}

inline bool subgroup_contains(const Subgroup& h, const Subgroup& k) {
  if (h.carrier() != k.carrier()) throw MixedCarriers();
  for (const GroupElement& g : k.generators())
    if (!h.contains(g)) return false;
  return true;
}

inline Subgroup subgroup_intersect(const Subgroup& h, const Subgroup& k) {
  require_same_carrier(h.carrier(), k.carrier());
  Lattice l = h.lattice().intersect(k.lattice());
  if (h.reflection() && k.reflection()) {
    auto w = affine_lattice_meet(*h.reflection(), h.lattice(), *k.reflection(), k.lattice());
    if (w) return Subgroup::with_reflection(h.carrier(), std::move(l), *w);
  }
  return Subgroup::lattice_subgroup(h.carrier(), std::move(l));
}

// [h : k] for k <= h. The reflection structure contributes a factor of 2
// exactly when h has a sign -1 part and k does not.
inline SubgroupIndex subgroup_index(const Subgroup& h, const Subgroup& k) {
  require_same_carrier(h.carrier(), k.carrier());
  if (!subgroup_contains(h, k)) throw NotASubgroup("index of a non-subgroup");
  SubgroupIndex li = h.lattice().index_of(k.lattice());
  if (!li.finite) return li;
  if (h.reflection() && !k.reflection()) return SubgroupIndex::of(2 * li.value);
  return li;
}

inline Subgroup conjugate_subgroup(const GroupElement& s, const Subgroup& h) {
  require_same_carrier(s.carrier, h.carrier());
  Lattice l = s.sign == 1 ? h.lattice() : Subgroup::sigma_lattice(s.carrier, h.lattice());
  if (h.reflection()) {
    GroupElement rho = conjugate(s, *h.reflection_element());
    return Subgroup::with_reflection(h.carrier(), std::move(l), rho.t);
  }
  return Subgroup::lattice_subgroup(h.carrier(), std::move(l));
}

// Left coset rep * subgroup with a canonical representative: sign -1 reps are
// folded through the subgroup's reflection when present, and the translation
// is reduced to the unique residue modulo the relevant lattice. Two Coset
// values denote the same point set iff their fields are identical.
class Coset {
 public:
  Coset(Subgroup subgroup, GroupElement rep)
      : subgroup_(std::move(subgroup)), rep_(std::move(rep)) {
    require_same_carrier(subgroup_.carrier(), rep_.carrier);
    if (rep_.sign == -1 && subgroup_.reflection())
      rep_ = mul(rep_, *subgroup_.reflection_element());
    if (rep_.sign == 1) {
      rep_.t = subgroup_.lattice().reduce(rep_.t);
    } else {
      // same coset iff reps differ by an element of sigma(L)
      rep_.t = Subgroup::sigma_lattice(rep_.carrier, subgroup_.lattice()).reduce(rep_.t);
    }
  }

  static Coset at_identity(const Subgroup& h) { return Coset(h, identity(h.carrier())); }

  const Subgroup& subgroup() const { return subgroup_; }
  const GroupElement& rep() const { return rep_; }
  const GroupCarrier& carrier() const { return subgroup_.carrier(); }

  bool contains(const GroupElement& g) const {
    require_same_carrier(carrier(), g.carrier);
    return subgroup_.contains(mul(inverse(rep_), g));
  }

  bool operator==(const Coset& o) const { return subgroup_ == o.subgroup_ && rep_ == o.rep_; }
  bool operator!=(const Coset& o) const { return !(*this == o); }

  std::string key() const { return "C{" + subgroup_.key() + ";" + rep_.key() + "}"; }

 private:
  Subgroup subgroup_;
  GroupElement rep_;
};

inline Coset coset_canonical(const Coset& c) { return c; }  // canonical by construction

inline Coset left_translate_coset(const GroupElement& g, const Coset& c) {
  return Coset(c.subgroup(), mul(g, c.rep()));
}

// (sH)t = (st) * (t^-1 H t)
inline Coset right_translate_coset(const Coset& c, const GroupElement& t) {
  return Coset(conjugate_subgroup(inverse(t), c.subgroup()), mul(c.rep(), t));
}

// A coset's point set split by sign: sign -> (offset, lattice of offsets).
struct SignPiece {
  IntVec offset;
  Lattice lattice;
};

inline std::map<int, SignPiece> coset_sign_pieces(const Coset& c) {
  std::map<int, SignPiece> out;
  const GroupElement& s = c.rep();
  Lattice m = s.sign == 1 ? c.subgroup().lattice()
                          : Subgroup::sigma_lattice(s.carrier, c.subgroup().lattice());
  out.emplace(s.sign, SignPiece{s.t, m});
  if (c.subgroup().reflection()) {
    GroupElement q = mul(s, *c.subgroup().reflection_element());
    out.emplace(q.sign, SignPiece{q.t, m});
  }
  return out;
}

// Intersection of two cosets: empty, or a coset of the intersection subgroup.
inline std::optional<Coset> intersect_cosets(const Coset& a, const Coset& b) {
  require_same_carrier(a.carrier(), b.carrier());
  if (a.subgroup() == b.subgroup()) return a == b ? std::optional<Coset>(a) : std::nullopt;
  auto pa = coset_sign_pieces(a);
  auto pb = coset_sign_pieces(b);
  for (int sign : {1, -1}) {
    auto ia = pa.find(sign);
    auto ib = pb.find(sign);
    if (ia == pa.end() || ib == pb.end()) continue;
    auto w = affine_lattice_meet(ia->second.offset, ia->second.lattice, ib->second.offset,
                                 ib->second.lattice);
    if (w) {
      GroupElement common(a.carrier(), *w, sign);
      return Coset(subgroup_intersect(a.subgroup(), b.subgroup()), common);
    }
  }
  return std::nullopt;
}

// Transversal of h modulo k (finite index): one element per left k-coset, in
// a deterministic order (lattice box order; sign +1 block first).
inline std::vector<GroupElement> coset_transversal(const Subgroup& h, const Subgroup& k) {
  SubgroupIndex idx = subgroup_index(h, k);
  if (!idx.finite) throw InfiniteIndex();
  const GroupCarrier& carrier = h.carrier();
  std::vector<GroupElement> out;
  for (const IntVec& c : h.lattice().transversal_coords(k.lattice()))
    out.emplace_back(carrier, lattice_combination(carrier.dim, h.lattice(), c), 1);
  if (h.reflection() && !k.reflection()) {
    // sign -1 cosets are classified modulo sigma(L_k)
    Lattice sk = Subgroup::sigma_lattice(carrier, k.lattice());
    for (const IntVec& c : h.lattice().transversal_coords(sk)) {
      IntVec v = vec_add(*h.reflection(), lattice_combination(carrier.dim, h.lattice(), c));
      out.emplace_back(carrier, std::move(v), -1);
    }
  }
  return out;
}

// Deterministic enumeration of a subgroup's elements: integer coordinates
// with respect to the lattice basis in (max-norm, lex) shell order; each
// lattice element is followed by its reflection partner when present.
// Exhausts only when the subgroup is finite.
class SubgroupEnumerator {
 public:
  explicit SubgroupEnumerator(Subgroup h) : h_(std::move(h)) { refill(); }

  std::optional<GroupElement> next() {
    while (pos_ >= buf_.size()) {
      if (h_.lattice().rank() == 0) return std::nullopt;  // finite subgroup exhausted
      ++shell_;
      refill();
    }
    return buf_[pos_++];
  }

 private:
  void refill() {
    buf_.clear();
    pos_ = 0;
    std::vector<IntVec> coords;
    detail::shell_vectors(h_.lattice().rank(), shell_, coords);
    for (const IntVec& x : coords) {
      GroupElement g(h_.carrier(), lattice_combination(h_.carrier().dim, h_.lattice(), x), 1);
      buf_.push_back(g);
      if (h_.reflection()) buf_.push_back(mul(g, *h_.reflection_element()));
    }
  }

  Subgroup h_;
  Int shell_ = 0;
  std::vector<GroupElement> buf_;
  std::size_t pos_ = 0;
};

// Points of a coset in the subgroup enumeration order, shifted by the rep.
class CosetPointEnumerator {
 public:
  explicit CosetPointEnumerator(const Coset& c) : rep_(c.rep()), inner_(c.subgroup()) {}

  std::optional<GroupElement> next() {
    auto g = inner_.next();
    if (!g) return std::nullopt;
    return mul(rep_, *g);
  }

 private:
  GroupElement rep_;
  SubgroupEnumerator inner_;
};

}  // namespace cosetkit
