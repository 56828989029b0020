#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "cosetkit/bigint.hpp"
#include "cosetkit/errors.hpp"
#include "cosetkit/matrix.hpp"

namespace cosetkit {

// A computable group carrier: Z^n, or Z^n extended by an order-2 sign whose
// action negates a fixed subset of the coordinates. The plain semidirect
// carrier negates every coordinate; products of a semidirect factor with Z^m
// negate only the semidirect block.
struct GroupCarrier {
  std::size_t dim = 0;
  bool semidirect = false;
  std::vector<char> flips;  // size dim when semidirect; flips[i] != 0 means the sign negates coordinate i

  static GroupCarrier zn(std::size_t n) {
    GroupCarrier c;
    c.dim = n;
    return c;
  }

  static GroupCarrier zn_semidirect_c2(std::size_t n) {
    GroupCarrier c;
    c.dim = n;
    c.semidirect = true;
    c.flips.assign(n, 1);
    return c;
  }

  // Sign action on translations.
  IntVec sigma(const IntVec& v) const {
    IntVec r = v;
    if (semidirect)
      for (std::size_t i = 0; i < dim; ++i)
        if (flips[i]) r[i] = -r[i];
    return r;
  }

  bool operator==(const GroupCarrier& o) const {
    return dim == o.dim && semidirect == o.semidirect && flips == o.flips;
  }
  bool operator!=(const GroupCarrier& o) const { return !(*this == o); }

  std::string key() const {
    std::string s = semidirect ? "D" : "Z";
    s += std::to_string(dim);
    if (semidirect) {
      s += ":";
      for (char f : flips) s += f ? '1' : '0';
    }
    return s;
  }
};

struct GroupElement {
  GroupCarrier carrier;
  IntVec t;      // translation, length carrier.dim
  int sign = 1;  // +1 or -1; fixed +1 on Z^n carriers

  GroupElement() = default;
  GroupElement(GroupCarrier c, IntVec v, int s = 1)
      : carrier(std::move(c)), t(std::move(v)), sign(s) {
    if (t.size() != carrier.dim) throw Error("element dimension mismatch");
    if (!carrier.semidirect && sign != 1) throw Error("sign -1 element on a Z^n carrier");
    if (sign != 1 && sign != -1) throw Error("sign must be +1 or -1");
  }

  bool is_identity() const { return sign == 1 && vec_is_zero(t); }

  bool operator==(const GroupElement& o) const {
    return carrier == o.carrier && sign == o.sign && t == o.t;
  }
  bool operator!=(const GroupElement& o) const { return !(*this == o); }

  std::string key() const {
    std::string s = sign == 1 ? "+(" : "-(";
    for (std::size_t i = 0; i < t.size(); ++i) {
      if (i) s += ",";
      s += to_decimal(t[i]);
    }
    s += ")";
    return s;
  }
};

inline GroupElement identity(const GroupCarrier& c) {
  return GroupElement(c, IntVec(c.dim, 0), 1);
}

inline void require_same_carrier(const GroupCarrier& a, const GroupCarrier& b) {
  if (a != b) throw MixedCarriers();
}

// (v, e)(w, d) = (v + e.w, ed) where e.w negates the flip coordinates when e = -1.
inline GroupElement mul(const GroupElement& a, const GroupElement& b) {
  require_same_carrier(a.carrier, b.carrier);
  IntVec w = a.sign == 1 ? b.t : a.carrier.sigma(b.t);
  return GroupElement(a.carrier, vec_add(a.t, w), a.sign * b.sign);
}

inline GroupElement inverse(const GroupElement& a) {
  if (a.sign == 1) return GroupElement(a.carrier, vec_neg(a.t), 1);
  // (v,-1)^-1 = (-sigma(v), -1)
  return GroupElement(a.carrier, vec_neg(a.carrier.sigma(a.t)), -1);
}

inline GroupElement conjugate(const GroupElement& s, const GroupElement& g) {
  return mul(mul(s, g), inverse(s));
}

// One factor of a multiplication word; `inverted` applies inversion to the
// element before multiplying.
struct WordFactor {
  GroupElement element;
  bool inverted = false;
};

inline GroupElement eval_term(const GroupCarrier& carrier, const std::vector<WordFactor>& word) {
  GroupElement acc = identity(carrier);
  for (const WordFactor& f : word) {
    require_same_carrier(carrier, f.element.carrier);
    acc = mul(acc, f.inverted ? inverse(f.element) : f.element);
  }
  return acc;
}

namespace detail {

// Lex-ordered vectors of max-norm exactly `shell` in [-shell, shell]^dim.
inline void shell_vectors(std::size_t dim, const Int& shell, std::vector<IntVec>& out) {
  IntVec cur(dim, -shell);
  if (dim == 0) {
    if (shell == 0) out.push_back({});
    return;
  }
  while (true) {
    if (vec_max_norm(cur) == shell) out.push_back(cur);
    // lexicographic increment
    std::size_t i = dim;
    while (i > 0) {
      --i;
      if (cur[i] < shell) {
        ++cur[i];
        for (std::size_t j = i + 1; j < dim; ++j) cur[j] = -shell;
        break;
      }
      if (i == 0) return;
    }
  }
}

}  // namespace detail

// All elements with translation max-norm <= radius, ordered by
// (max-norm, lexicographic translation, sign +1 before -1). The order is
// prefix-stable as the radius grows.
inline std::vector<GroupElement> enumerate_ball(const GroupCarrier& carrier, const Int& radius) {
  std::vector<GroupElement> out;
  for (Int shell = 0; shell <= radius; ++shell) {
    std::vector<IntVec> vs;
    detail::shell_vectors(carrier.dim, shell, vs);
    for (IntVec& v : vs) {
      out.emplace_back(carrier, v, 1);
      if (carrier.semidirect) out.emplace_back(carrier, std::move(v), -1);
    }
  }
  return out;
}

// Unbounded ball enumeration in the same order; used by witness searches.
class BallEnumerator {
 public:
  explicit BallEnumerator(GroupCarrier carrier) : carrier_(std::move(carrier)) { refill(); }

  GroupElement next() {
    while (pos_ >= buf_.size()) {
      ++shell_;
      refill();
    }
    return buf_[pos_++];
  }

 private:
  void refill() {
    buf_.clear();
    pos_ = 0;
    std::vector<IntVec> vs;
    detail::shell_vectors(carrier_.dim, shell_, vs);
    for (IntVec& v : vs) {
      buf_.emplace_back(carrier_, v, 1);
      if (carrier_.semidirect) buf_.emplace_back(carrier_, std::move(v), -1);
    }
    if (carrier_.dim == 0 && shell_ > 0) {
      // rank-0 carrier: nothing beyond shell 0
      throw InternalError("enumeration exhausted a finite carrier");
    }
  }

  GroupCarrier carrier_;
  Int shell_ = 0;
  std::vector<GroupElement> buf_;
  std::size_t pos_ = 0;
};

}  // namespace cosetkit
