#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <utility>

#include "cosetkit/bigint.hpp"
#include "cosetkit/errors.hpp"
#include "cosetkit/matrix.hpp"

namespace cosetkit {

// Index of a sublattice / subgroup: a positive integer or infinity.
struct SubgroupIndex {
  bool finite = false;
  Int value = 0;  // meaningful when finite

  static SubgroupIndex infinite() { return {}; }
  static SubgroupIndex of(Int v) { return {true, std::move(v)}; }

  bool operator==(const SubgroupIndex& o) const {
    return finite == o.finite && (!finite || value == o.value);
  }
};

// Integer lattice in Z^dim, stored as its unique row-HNF basis. Two lattices
// are equal as point sets iff their stored fields are identical.
class Lattice {
 public:
  explicit Lattice(std::size_t dim) : dim_(dim) {}

  static Lattice from_generators(std::size_t dim, const IntMat& rows) {
    for (const IntVec& r : rows)
      if (r.size() != dim) throw Error("lattice generator dimension mismatch");
    Lattice l(dim);
    l.basis_ = hnf(rows, dim);
    return l;
  }

  static Lattice zero(std::size_t dim) { return Lattice(dim); }

  static Lattice full(std::size_t dim) {
    IntMat id(dim, IntVec(dim, 0));
    for (std::size_t i = 0; i < dim; ++i) id[i][i] = 1;
    return from_generators(dim, id);
  }

  std::size_t dim() const { return dim_; }
  std::size_t rank() const { return basis_.size(); }
  const IntMat& basis() const { return basis_; }

  bool contains(const IntVec& v) const { return hnf_solve(basis_, v).has_value(); }

  // Coordinates of v with respect to the basis, when v is a member.
  std::optional<IntVec> coordinates(const IntVec& v) const { return hnf_solve(basis_, v); }

  // Unique residue of v modulo the lattice (pivot coordinates in [0, pivot)).
  IntVec reduce(const IntVec& v) const { return hnf_reduce(basis_, v); }

  bool contains_lattice(const Lattice& other) const {
    for (const IntVec& r : other.basis_)
      if (!contains(r)) return false;
    return true;
  }

  Lattice sum(const Lattice& other) const {
    IntMat rows = basis_;
    rows.insert(rows.end(), other.basis_.begin(), other.basis_.end());
    return from_generators(dim_, rows);
  }

  Lattice intersect(const Lattice& other) const {
    if (rank() == 0 || other.rank() == 0) return zero(dim_);
    // x*B1 = y*B2  <=>  (x,y) in the left kernel of [B1; -B2].
    IntMat stacked = basis_;
    for (const IntVec& r : other.basis_) stacked.push_back(vec_neg(r));
    IntMat ker = left_kernel(stacked, dim_);
    IntMat rows;
    for (const IntVec& z : ker) {
      IntVec x(z.begin(), z.begin() + static_cast<long>(rank()));
      rows.push_back(row_times_mat(x, basis_));
    }
    return from_generators(dim_, rows);
  }

  // [this : sub] for sub contained in this; finite iff the ranks agree.
  SubgroupIndex index_of(const Lattice& sub) const {
    if (!contains_lattice(sub)) throw NotASubgroup("lattice is not contained");
    if (sub.rank() < rank()) return SubgroupIndex::infinite();
    IntMat coords;
    for (const IntVec& r : sub.basis_) {
      auto c = coordinates(r);
      if (!c) throw InternalError("containment check passed but solve failed");
      coords.push_back(*c);
    }
    Int d = det(coords);
    if (d == 0) throw InternalError("rank check passed but determinant vanished");
    return SubgroupIndex::of(Int(abs(d)));
  }

  // Coordinate vectors (w.r.t. this basis) of a transversal of this modulo
  // sub, in lexicographic box order. sub must have finite index.
  std::vector<IntVec> transversal_coords(const Lattice& sub) const {
    SubgroupIndex idx = index_of(sub);
    if (!idx.finite) throw InfiniteIndex();
    IntMat coords;
    for (const IntVec& r : sub.basis_) coords.push_back(*coordinates(r));
    IntMat h = hnf(coords, rank());
    // h is square full-rank upper triangular; residues form the box
    // prod [0, h[i][i]).
    std::vector<IntVec> out;
    IntVec cur(rank(), 0);
    while (true) {
      out.push_back(cur);
      std::size_t i = rank();
      bool done = true;
      while (i > 0) {
        --i;
        ++cur[i];
        if (cur[i] < h[i][i]) {
          done = false;
          break;
        }
        cur[i] = 0;
      }
      if (done) break;
    }
    return out;
  }

  // Image under an integer coordinate map given row-wise (v -> v * m).
  Lattice map_rows(const IntMat& rows_image) const {
    return from_generators(rows_image.empty() ? dim_ : rows_image[0].size(), rows_image);
  }

  bool operator==(const Lattice& o) const { return dim_ == o.dim_ && basis_ == o.basis_; }
  bool operator!=(const Lattice& o) const { return !(*this == o); }

  std::string key() const {
    std::string s = "L" + std::to_string(dim_) + "[";
    for (std::size_t i = 0; i < basis_.size(); ++i) {
      if (i) s += ";";
      for (std::size_t j = 0; j < basis_[i].size(); ++j) {
        if (j) s += ",";
        s += to_decimal(basis_[i][j]);
      }
    }
    s += "]";
    return s;
  }

 private:
  std::size_t dim_;
  IntMat basis_;  // HNF rows; empty for the zero lattice
};

// Common element of two affine sublattices o1 + L1 and o2 + L2, if any.
inline std::optional<IntVec> affine_lattice_meet(const IntVec& o1, const Lattice& l1,
                                                 const IntVec& o2, const Lattice& l2) {
  IntVec d = vec_sub(o2, o1);
  IntMat gens = l1.basis();
  gens.insert(gens.end(), l2.basis().begin(), l2.basis().end());
  HnfResult h = hnf_with_transform(gens, o1.size());
  auto c = hnf_solve(h.h, d);
  if (!c) return std::nullopt;
  // Coefficients over the stacked generator rows: z = c * U (pivot rows only).
  IntVec z(gens.size(), 0);
  for (std::size_t i = 0; i < c->size(); ++i)
    for (std::size_t j = 0; j < gens.size(); ++j) z[j] += (*c)[i] * h.transform[i][j];
  IntVec m1(o1.size(), 0);
  for (std::size_t i = 0; i < l1.basis().size(); ++i)
    m1 = vec_add(m1, vec_scale(z[i], l1.basis()[i]));
  return vec_add(o1, m1);  // = o1 + m1 = o2 + m2
}

}  // namespace cosetkit
