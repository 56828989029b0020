#include <catch2/catch_amalgamated.hpp>

#include "test_support.hpp"

using namespace cosetkit;

namespace {
const GroupCarrier w1 = GroupCarrier::zn_semidirect_c2(1);
}

TEST_CASE("eval_term") {
  ts::Z2Fixture f;
  auto p = eval_term(f.z2, {{f.el(1, 2), false}, {f.el(3, 4), false}});
  REQUIRE(p.t == IntVec{4, 6});

  auto q = eval_term(w1, {{GroupElement(w1, {1}, 1), false}, {GroupElement(w1, {2}, -1), false}});
  REQUIRE(q == GroupElement(w1, {3}, -1));

  auto r = eval_term(w1, {{GroupElement(w1, {3}, -1), true}});
  REQUIRE(r == GroupElement(w1, {3}, -1));  // reflections are involutions

  REQUIRE(eval_term(f.z2, {}).is_identity());
  REQUIRE_THROWS_AS(eval_term(f.z2, {{GroupElement(w1, {1}, 1), false}}), MixedCarriers);
}

TEST_CASE("subgroup membership") {
  ts::Z2Fixture f;
  REQUIRE(subgroup_membership(f.el(4, 0), f.L2));
  REQUIRE_FALSE(subgroup_membership(f.el(3, 1), f.D));
  REQUIRE(subgroup_membership(f.el(0, 0), f.triv));
}

TEST_CASE("subgroup intersection") {
  ts::Z2Fixture f;
  REQUIRE(subgroup_intersect(f.A, f.B) == f.triv);
  REQUIRE(subgroup_intersect(f.L2, f.D) ==
          Subgroup::lattice_subgroup(f.z2, Lattice::from_generators(2, {{2, 2}})));
  REQUIRE(subgroup_intersect(f.D, f.D) == f.D);

  SECTION("window validation of the derived example") {
    Subgroup i = subgroup_intersect(f.L2, f.D);
    for (Int x = -20; x <= 20; ++x)
      for (Int y = -20; y <= 20; ++y) {
        GroupElement g = f.el(x, y);
        REQUIRE(i.contains(g) == (f.L2.contains(g) && f.D.contains(g)));
      }
  }

  SECTION("semidirect intersections agree with membership") {
    ts::Rng rng(31337);
    auto w2 = GroupCarrier::zn_semidirect_c2(2);
    for (int iter = 0; iter < 30; ++iter) {
      Subgroup a = ts::random_subgroup(rng, w2);
      Subgroup b = ts::random_subgroup(rng, w2);
      Subgroup m = subgroup_intersect(a, b);
      for (const GroupElement& g : enumerate_ball(w2, 6))
        REQUIRE(m.contains(g) == (a.contains(g) && b.contains(g)));
    }
  }
}

TEST_CASE("subgroup index") {
  ts::Z2Fixture f;
  REQUIRE(subgroup_index(f.full, f.L2) == SubgroupIndex::of(2));
  REQUIRE_FALSE(subgroup_index(f.A, f.triv).finite);
  REQUIRE(subgroup_index(f.D, Subgroup::lattice_subgroup(
                                  f.z2, Lattice::from_generators(2, {{2, 2}}))) ==
          SubgroupIndex::of(2));
  REQUIRE_THROWS_AS(subgroup_index(f.A, f.B), NotASubgroup);

  SECTION("multiplicative on chains") {
    ts::Rng rng(555);
    for (int iter = 0; iter < 40; ++iter) {
      Int a = ts::rand_int(rng, 1, 3), b = ts::rand_int(rng, 1, 3);
      Int c = ts::rand_int(rng, 1, 3), d = ts::rand_int(rng, 1, 3);
      Subgroup h = f.full;
      Subgroup l = Subgroup::lattice_subgroup(
          f.z2, Lattice::from_generators(2, {{a, 0}, {0, b}}));
      Subgroup k = Subgroup::lattice_subgroup(
          f.z2, Lattice::from_generators(2, {{a * c, 0}, {0, b * d}}));
      Int hl = subgroup_index(h, l).value;
      Int lk = subgroup_index(l, k).value;
      REQUIRE(subgroup_index(h, k).value == hl * lk);
    }
  }

  SECTION("reflection contributes a factor of two") {
    Subgroup fullw = Subgroup::full(w1);
    Subgroup twoZ = Subgroup::lattice_subgroup(w1, Lattice::from_generators(1, {{2}}));
    Subgroup twoZ_refl = Subgroup::with_reflection(w1, Lattice::from_generators(1, {{2}}), {0});
    REQUIRE(subgroup_index(fullw, twoZ) == SubgroupIndex::of(4));
    REQUIRE(subgroup_index(fullw, twoZ_refl) == SubgroupIndex::of(2));
    REQUIRE(subgroup_index(twoZ_refl, twoZ) == SubgroupIndex::of(2));
  }
}

TEST_CASE("conjugation") {
  ts::Z2Fixture f;
  REQUIRE(conjugate_subgroup(f.el(3, -5), f.L2) == f.L2);  // abelian

  Subgroup pt_refl = Subgroup::with_reflection(w1, Lattice::zero(1), {0});
  Subgroup conj = conjugate_subgroup(GroupElement(w1, {1}, 1), pt_refl);
  REQUIRE(conj.reflection().has_value());
  REQUIRE(*conj.reflection() == IntVec{2});

  Subgroup twoZ = Subgroup::lattice_subgroup(w1, Lattice::from_generators(1, {{2}}));
  REQUIRE(conjugate_subgroup(GroupElement(w1, {0}, -1), twoZ) == twoZ);

  SECTION("conjugating back restores the subgroup") {
    ts::Rng rng(2024);
    for (int iter = 0; iter < 50; ++iter) {
      Subgroup h = ts::random_subgroup(rng, w1);
      GroupElement s = ts::random_element(rng, w1, 4);
      REQUIRE(conjugate_subgroup(s, conjugate_subgroup(inverse(s), h)) == h);
    }
  }
}

TEST_CASE("coset canonicalization") {
  ts::Z2Fixture f;
  Coset c1(f.A, f.el(3, 5));
  REQUIRE(c1.rep().t == IntVec{0, 5});
  REQUIRE(coset_canonical(c1) == c1);
  REQUIRE(Coset(f.L2, f.el(5, 7)) == Coset(f.L2, f.el(1, 0)));
  REQUIRE(Coset(f.B, f.el(1, 0)) == Coset(f.B, f.el(1, 9)));

  SECTION("canonical equality matches window membership agreement") {
    ts::Rng rng(808);
    std::vector<Subgroup> subs{f.A, f.B, f.D, f.L2, f.triv, f.full};
    for (int iter = 0; iter < 120; ++iter) {
      const Subgroup& h = subs[ts::rand_index(rng, subs.size())];
      const Subgroup& k = subs[ts::rand_index(rng, subs.size())];
      Coset c(h, ts::random_element(rng, f.z2, 10));
      Coset d(k, ts::random_element(rng, f.z2, 10));
      bool window_agree = true;
      for (Int x = -20; x <= 20 && window_agree; ++x)
        for (Int y = -20; y <= 20; ++y) {
          GroupElement g = f.el(x, y);
          if (c.contains(g) != d.contains(g)) {
            window_agree = false;
            break;
          }
        }
      REQUIRE((c == d) == window_agree);
    }
  }

  SECTION("semidirect reps fold through the reflection") {
    Subgroup h = Subgroup::with_reflection(w1, Lattice::from_generators(1, {{2}}), {1});
    Coset c(h, GroupElement(w1, {0}, -1));
    REQUIRE(c.rep().sign == 1);
    REQUIRE(c.contains(GroupElement(w1, {0}, -1)));
    // a sign -1 coset of a pure-translation subgroup keeps its sign
    Subgroup twoZ = Subgroup::lattice_subgroup(w1, Lattice::from_generators(1, {{2}}));
    Coset c2(twoZ, GroupElement(w1, {3}, -1));
    REQUIRE(c2.rep().sign == -1);
    REQUIRE(Coset(twoZ, GroupElement(w1, {5}, -1)) == c2);
  }
}

TEST_CASE("transversals") {
  ts::Z2Fixture f;
  auto tv = coset_transversal(f.full, f.L2);
  REQUIRE(tv.size() == 2);
  REQUIRE(tv[0].t == IntVec{0, 0});
  REQUIRE(tv[1].t == IntVec{1, 0});
  auto d2 = Subgroup::lattice_subgroup(f.z2, Lattice::from_generators(2, {{2, 2}}));
  auto tv2 = coset_transversal(f.D, d2);
  REQUIRE(tv2.size() == 2);
  REQUIRE(tv2[1].t == IntVec{1, 1});
  REQUIRE(coset_transversal(f.D, f.D).size() == 1);
  REQUIRE_THROWS_AS(coset_transversal(f.A, f.triv), InfiniteIndex);

  SECTION("transversal elements hit distinct cosets that tile the window") {
    ts::Rng rng(6161);
    for (int iter = 0; iter < 30; ++iter) {
      Int a = ts::rand_int(rng, 1, 3), b = ts::rand_int(rng, 1, 3);
      Subgroup k = Subgroup::lattice_subgroup(
          f.z2, Lattice::from_generators(2, {{a, Int(0)}, {Int(0), b}}));
      auto trans = coset_transversal(f.full, k);
      REQUIRE(Int(trans.size()) == a * b);
      for (std::size_t i = 0; i < trans.size(); ++i)
        for (std::size_t j = i + 1; j < trans.size(); ++j)
          REQUIRE(Coset(k, trans[i]) != Coset(k, trans[j]));
      for (const GroupElement& g : enumerate_ball(f.z2, 6)) {
        int hits = 0;
        for (const GroupElement& t : trans)
          if (Coset(k, t).contains(g)) ++hits;
        REQUIRE(hits == 1);
      }
    }
  }

  SECTION("semidirect transversal covers both signs") {
    Subgroup fullw = Subgroup::full(w1);
    Subgroup twoZ = Subgroup::lattice_subgroup(w1, Lattice::from_generators(1, {{2}}));
    auto tv3 = coset_transversal(fullw, twoZ);
    REQUIRE(tv3.size() == 4);
    for (const GroupElement& g : enumerate_ball(w1, 5)) {
      int hits = 0;
      for (const GroupElement& t : tv3)
        if (Coset(twoZ, t).contains(g)) ++hits;
      REQUIRE(hits == 1);
    }
  }
}

TEST_CASE("ball enumeration") {
  ts::Z2Fixture f;
  auto b0 = enumerate_ball(f.z2, 0);
  REQUIRE(b0.size() == 1);
  REQUIRE(b0[0].is_identity());

  auto b1 = enumerate_ball(f.z2, 1);
  REQUIRE(b1[0].t == IntVec{0, 0});
  REQUIRE(b1[1].t == IntVec{-1, -1});
  REQUIRE(b1[2].t == IntVec{-1, 0});
  REQUIRE(b1[3].t == IntVec{-1, 1});
  REQUIRE(b1[4].t == IntVec{0, -1});

  auto bw = enumerate_ball(w1, 0);
  REQUIRE(bw.size() == 2);
  REQUIRE(bw[0].sign == 1);
  REQUIRE(bw[1].sign == -1);

  SECTION("prefix stability") {
    for (Int r = 0; r <= 3; ++r) {
      auto small = enumerate_ball(f.z2, r);
      auto big = enumerate_ball(f.z2, r + 1);
      REQUIRE(big.size() > small.size());
      for (std::size_t i = 0; i < small.size(); ++i) REQUIRE(small[i] == big[i]);
    }
  }
}

TEST_CASE("generated subgroups are minimal and closed") {
  ts::Rng rng(9090);
  auto w2 = GroupCarrier::zn_semidirect_c2(2);
  for (int iter = 0; iter < 40; ++iter) {
    std::vector<GroupElement> gens;
    std::size_t n = 1 + ts::rand_index(rng, 3);
    for (std::size_t i = 0; i < n; ++i) gens.push_back(ts::random_element(rng, w2, 2));
    Subgroup h = Subgroup::generated_by(w2, gens);
    for (const GroupElement& g : gens) REQUIRE(h.contains(g));
    // closure under products and inverses of generators
    for (const GroupElement& a : gens)
      for (const GroupElement& b : gens) {
        REQUIRE(h.contains(mul(a, b)));
        REQUIRE(h.contains(inverse(a)));
      }
  }
}
