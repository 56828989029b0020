#include <catch2/catch_amalgamated.hpp>

#include "test_support.hpp"

using namespace cosetkit;

TEST_CASE("hnf is canonical across generator presentations") {
  ts::Rng rng(12345);
  for (int iter = 0; iter < 200; ++iter) {
    std::size_t dim = 1 + ts::rand_index(rng, 3);
    IntMat rows;
    std::size_t n = 1 + ts::rand_index(rng, 3);
    for (std::size_t i = 0; i < n; ++i) {
      IntVec row;
      for (std::size_t j = 0; j < dim; ++j) row.push_back(ts::rand_int(rng, -4, 4));
      rows.push_back(row);
    }
    Lattice l = Lattice::from_generators(dim, rows);
    // unimodular-ish re-presentation: add row multiples and shuffle
    IntMat alt = rows;
    if (alt.size() >= 2) {
      alt[0] = vec_add(alt[0], vec_scale(ts::rand_int(rng, -3, 3), alt[1]));
      std::swap(alt[0], alt[alt.size() - 1]);
    }
    alt.push_back(vec_add(rows[0], rows[ts::rand_index(rng, rows.size())]));
    Lattice l2 = Lattice::from_generators(dim, alt);
    REQUIRE(l == l2);
  }
}

TEST_CASE("membership agrees with brute-force span search") {
  ts::Rng rng(777);
  for (int iter = 0; iter < 50; ++iter) {
    IntMat rows;
    std::size_t n = 1 + ts::rand_index(rng, 2);
    for (std::size_t i = 0; i < n; ++i)
      rows.push_back({ts::rand_int(rng, -3, 3), ts::rand_int(rng, -3, 3)});
    Lattice l = Lattice::from_generators(2, rows);
    // brute force: integer combinations with coefficients in [-8, 8]
    auto brute_contains = [&](const IntVec& v) {
      for (Int a = -8; a <= 8; ++a)
        for (Int b = -8; b <= 8; ++b) {
          IntVec x = vec_add(vec_scale(a, rows[0]),
                             n > 1 ? vec_scale(b, rows[1]) : IntVec{0, 0});
          if (x == v) return true;
          if (n == 1) break;
        }
      return false;
    };
    for (int k = 0; k < 20; ++k) {
      IntVec v{ts::rand_int(rng, -6, 6), ts::rand_int(rng, -6, 6)};
      if (brute_contains(v)) REQUIRE(l.contains(v));
      // the converse needs unbounded coefficients, so only check one way
    }
  }
}

TEST_CASE("intersection validated by membership window") {
  auto l2 = Lattice::from_generators(2, {{2, 0}, {0, 1}});
  auto diag = Lattice::from_generators(2, {{1, 1}});
  auto inter = l2.intersect(diag);
  REQUIRE(inter == Lattice::from_generators(2, {{2, 2}}));
  for (Int x = -20; x <= 20; ++x)
    for (Int y = -20; y <= 20; ++y) {
      IntVec v{x, y};
      REQUIRE(inter.contains(v) == (l2.contains(v) && diag.contains(v)));
    }

  SECTION("random intersections agree with pairwise membership") {
    ts::Rng rng(4242);
    for (int iter = 0; iter < 40; ++iter) {
      IntMat r1{{ts::rand_int(rng, -3, 3), ts::rand_int(rng, -3, 3)},
                {ts::rand_int(rng, -3, 3), ts::rand_int(rng, -3, 3)}};
      IntMat r2{{ts::rand_int(rng, -3, 3), ts::rand_int(rng, -3, 3)}};
      Lattice a = Lattice::from_generators(2, r1);
      Lattice b = Lattice::from_generators(2, r2);
      Lattice m = a.intersect(b);
      for (Int x = -10; x <= 10; ++x)
        for (Int y = -10; y <= 10; ++y) {
          IntVec v{x, y};
          REQUIRE(m.contains(v) == (a.contains(v) && b.contains(v)));
        }
    }
  }
}

TEST_CASE("index and reduction") {
  REQUIRE(Lattice::full(2).index_of(Lattice::from_generators(2, {{2, 0}, {0, 1}})) ==
          SubgroupIndex::of(2));
  REQUIRE_FALSE(
      Lattice::from_generators(2, {{1, 0}}).index_of(Lattice::zero(2)).finite);
  REQUIRE(Lattice::from_generators(2, {{1, 1}})
              .index_of(Lattice::from_generators(2, {{2, 2}})) == SubgroupIndex::of(2));

  SECTION("reduce is idempotent and a member-difference") {
    ts::Rng rng(99);
    for (int iter = 0; iter < 100; ++iter) {
      IntMat rows{{ts::rand_int(rng, -3, 3), ts::rand_int(rng, -3, 3)},
                  {ts::rand_int(rng, -3, 3), ts::rand_int(rng, -3, 3)}};
      Lattice l = Lattice::from_generators(2, rows);
      IntVec v{ts::rand_int(rng, -9, 9), ts::rand_int(rng, -9, 9)};
      IntVec r = l.reduce(v);
      REQUIRE(l.reduce(r) == r);
      REQUIRE(l.contains(vec_sub(v, r)));
    }
  }

  SECTION("index multiplicativity via nested scalings") {
    Lattice h = Lattice::from_generators(2, {{1, 0}, {0, 1}});
    Lattice m = Lattice::from_generators(2, {{2, 0}, {0, 1}});
    Lattice k = Lattice::from_generators(2, {{2, 0}, {0, 3}});
    Int hm = h.index_of(m).value;
    Int mk = m.index_of(k).value;
    REQUIRE(h.index_of(k).value == hm * mk);
  }
}

TEST_CASE("kernel and affine meets") {
  // left kernel of a rank-deficient matrix
  IntMat a{{1, 2}, {2, 4}};
  IntMat ker = left_kernel(a, 2);
  REQUIRE(ker.size() == 1);
  REQUIRE(vec_is_zero(row_times_mat(ker[0], a)));

  auto l1 = Lattice::from_generators(2, {{2, 0}});
  auto l2 = Lattice::from_generators(2, {{0, 3}});
  auto w = affine_lattice_meet({1, 0}, l1, {1, 3}, l2);
  REQUIRE(w.has_value());
  REQUIRE(l1.contains(vec_sub(*w, IntVec{1, 0})));
  REQUIRE(l2.contains(vec_sub(*w, IntVec{1, 3})));
  REQUIRE_FALSE(affine_lattice_meet({0, 0}, l1, {1, 0}, l2).has_value());
}

TEST_CASE("big integers survive hnf") {
  Int big = Int("123456789012345678901234567890");
  Lattice l = Lattice::from_generators(2, {{big, 0}, {0, big}});
  REQUIRE(l.index_of(Lattice::from_generators(2, {{big * 2, 0}, {0, big}})) ==
          SubgroupIndex::of(2));
  REQUIRE(l.contains({big * 7, big * -3}));
  REQUIRE_FALSE(l.contains({big + 1, 0}));
}
