#pragma once

#include <algorithm>
#include <cstddef>
#include <optional>
#include <utility>

#include "cosetkit/bigint.hpp"
#include "cosetkit/errors.hpp"

namespace cosetkit {

inline IntVec vec_add(const IntVec& a, const IntVec& b) {
  IntVec r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] + b[i];
  return r;
}

inline IntVec vec_sub(const IntVec& a, const IntVec& b) {
  IntVec r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] - b[i];
  return r;
}

inline IntVec vec_neg(const IntVec& a) {
  IntVec r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = -a[i];
  return r;
}

inline IntVec vec_scale(const Int& c, const IntVec& a) {
  IntVec r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = c * a[i];
  return r;
}

inline bool vec_is_zero(const IntVec& a) {
  return std::all_of(a.begin(), a.end(), [](const Int& x) { return x == 0; });
}

inline Int vec_max_norm(const IntVec& a) {
  Int m = 0;
  for (const Int& x : a) {
    Int ax = abs(x);
    if (ax > m) m = ax;
  }
  return m;
}

// Lexicographic order on integer vectors.
inline int vec_lex_cmp(const IntVec& a, const IntVec& b) {
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] < b[i]) return -1;
    if (a[i] > b[i]) return 1;
  }
  return 0;
}

// x (1 x r) times M (r x n).
inline IntVec row_times_mat(const IntVec& x, const IntMat& m) {
  if (m.empty()) return {};
  IntVec r(m[0].size(), 0);
  for (std::size_t i = 0; i < x.size(); ++i)
    for (std::size_t j = 0; j < m[i].size(); ++j) r[j] += x[i] * m[i][j];
  return r;
}

namespace detail {

inline int pivot_col(const IntVec& row) {
  for (std::size_t j = 0; j < row.size(); ++j)
    if (row[j] != 0) return static_cast<int>(j);
  return -1;
}

}  // namespace detail

struct HnfResult {
  IntMat h;          // canonical basis rows, echelon with positive pivots
  IntMat transform;  // square unimodular U with U * input = [h; 0]
  std::size_t rank = 0;
};

// Row-style Hermite normal form. For each pivot, the pivot entry is positive
// and entries above it are reduced into [0, pivot). The result is the unique
// canonical basis of the row span, so row spans are equal iff the forms are
// identical.
inline HnfResult hnf_with_transform(const IntMat& input, std::size_t cols) {
  const std::size_t m = input.size();
  IntMat w = input;
  IntMat u(m, IntVec(m, 0));
  for (std::size_t i = 0; i < m; ++i) u[i][i] = 1;

  std::size_t r = 0;  // rows finalized so far
  for (std::size_t col = 0; col < cols && r < m; ++col) {
    // Eliminate below position r via the Euclidean algorithm on this column.
    while (true) {
      std::size_t best = m;
      for (std::size_t i = r; i < m; ++i) {
        if (w[i][col] == 0) continue;
        if (best == m || Int(abs(w[i][col])) < Int(abs(w[best][col]))) best = i;
      }
      if (best == m) break;  // column clear below r
      std::swap(w[r], w[best]);
      std::swap(u[r], u[best]);
      bool others = false;
      for (std::size_t i = r + 1; i < m; ++i) {
        if (w[i][col] == 0) continue;
        Int q = w[i][col] / w[r][col];  // truncating is fine inside the loop
        if (q != 0) {
          w[i] = vec_sub(w[i], vec_scale(q, w[r]));
          u[i] = vec_sub(u[i], vec_scale(q, u[r]));
        }
        if (w[i][col] != 0) others = true;
      }
      if (!others) break;
    }
    if (w[r][col] == 0) continue;
    if (w[r][col] < 0) {
      w[r] = vec_neg(w[r]);
      u[r] = vec_neg(u[r]);
    }
    // Reduce entries above the pivot into [0, pivot).
    for (std::size_t i = 0; i < r; ++i) {
      Int q = floor_div(w[i][col], w[r][col]);
      if (q != 0) {
        w[i] = vec_sub(w[i], vec_scale(q, w[r]));
        u[i] = vec_sub(u[i], vec_scale(q, u[r]));
      }
    }
    ++r;
  }

  HnfResult res;
  res.rank = r;
  res.h.assign(w.begin(), w.begin() + static_cast<long>(r));
  res.transform = std::move(u);
  return res;
}

inline IntMat hnf(const IntMat& input, std::size_t cols) {
  return hnf_with_transform(input, cols).h;
}

// Coordinates of v in the row span of an HNF basis, or nullopt.
inline std::optional<IntVec> hnf_solve(const IntMat& h, const IntVec& v) {
  IntVec res = v;
  IntVec coords;
  coords.reserve(h.size());
  for (const IntVec& row : h) {
    int p = detail::pivot_col(row);
    if (res[static_cast<std::size_t>(p)] % row[static_cast<std::size_t>(p)] != 0)
      return std::nullopt;
    Int q = res[static_cast<std::size_t>(p)] / row[static_cast<std::size_t>(p)];
    if (q != 0) res = vec_sub(res, vec_scale(q, row));
    coords.push_back(q);
  }
  if (!vec_is_zero(res)) return std::nullopt;
  return coords;
}

// Canonical residue of v modulo the row span of an HNF basis: each pivot
// coordinate ends up in [0, pivot).
inline IntVec hnf_reduce(const IntMat& h, const IntVec& v) {
  IntVec res = v;
  for (const IntVec& row : h) {
    int p = detail::pivot_col(row);
    Int q = floor_div(res[static_cast<std::size_t>(p)], row[static_cast<std::size_t>(p)]);
    if (q != 0) res = vec_sub(res, vec_scale(q, row));
  }
  return res;
}

// Basis of the left kernel {x : x * a = 0}, in HNF.
inline IntMat left_kernel(const IntMat& a, std::size_t cols) {
  HnfResult r = hnf_with_transform(a, cols);
  IntMat ker(r.transform.begin() + static_cast<long>(r.rank), r.transform.end());
  return hnf(ker, a.size());
}

// Exact determinant by fraction-free (Bareiss) elimination.
inline Int det(IntMat a) {
  const std::size_t n = a.size();
  if (n == 0) return 1;
  Int sign = 1, prev = 1;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (a[k][k] == 0) {
      std::size_t swap_row = n;
      for (std::size_t i = k + 1; i < n; ++i)
        if (a[i][k] != 0) { swap_row = i; break; }
      if (swap_row == n) return 0;
      std::swap(a[k], a[swap_row]);
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      for (std::size_t j = k + 1; j < n; ++j) {
        a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev;
      }
      a[i][k] = 0;
    }
    prev = a[k][k];
  }
  return sign * a[n - 1][n - 1];
}

}  // namespace cosetkit
