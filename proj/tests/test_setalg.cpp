#include <catch2/catch_amalgamated.hpp>

#include "test_support.hpp"

using namespace cosetkit;

TEST_CASE("membership evaluation") {
  ts::Z2Fixture f;
  SetExpr y = SetExpr::union_of({f.at(f.A), f.at(f.B, 1, 0)});
  REQUIRE(eval_membership(y, f.el(7, 0)));
  REQUIRE_FALSE(eval_membership(y, f.el(2, 3)));
  REQUIRE(eval_membership(SetExpr::ltranslate(f.el(0, 1), f.at(f.A)), f.el(5, 1)));

  SECTION("unbound symbols throw; bindings resolve") {
    SetExpr s = SetExpr::symbol("Y");
    REQUIRE_THROWS_AS(eval_membership(s, f.el(0, 0)), UnboundSymbol);
    SetExpr::Bindings b{{"Y", f.at(f.A)}};
    REQUIRE(eval_membership(s, f.el(3, 0), b));
  }
}

TEST_CASE("relative-ring normal form") {
  ts::Z2Fixture f;
  SetExpr full = SetExpr::full_set(f.z2);
  SetExpr ex = SetExpr::intersect_of(
      {SetExpr::diff(full, f.at(f.A)),
       SetExpr::union_of({SetExpr::ltranslate(f.el(0, 1), f.at(f.A)), f.at(f.B)})});
  auto terms = to_relring_normal_form(ex);
  REQUIRE_FALSE(terms.empty());
  // union of the disjoint terms equals the expression pointwise
  for (const GroupElement& g : enumerate_ball(f.z2, 20)) {
    bool direct = eval_membership(ex, g);
    int hits = 0;
    for (const auto& t : terms) {
      bool in = t.base.contains(g);
      for (const Coset& r : t.removals) in = in && !r.contains(g);
      if (in) ++hits;
    }
    REQUIRE(hits == (direct ? 1 : 0));
  }

  REQUIRE(to_relring_normal_form(SetExpr::diff(f.at(f.A), f.at(f.A))).empty());

  auto single = to_relring_normal_form(f.at(f.B, 1, 0));
  REQUIRE(single.size() == 1);
  REQUIRE(single[0].base == Coset(f.B, f.el(1, 0)));
  REQUIRE(single[0].removals.empty());
}

TEST_CASE("coset-ring normal form") {
  ts::Z2Fixture f;
  SetExpr y = SetExpr::union_of({f.at(f.A), f.at(f.B, 1, 0)});
  auto nf = to_omega_normal_form(y);
  REQUIRE(nf.pieces.size() == 2);
  REQUIRE(ts::omega_matches_on_window(y, nf, f.z2, 20));

  auto nf2 = to_omega_normal_form(SetExpr::union_of({f.at(f.L2), f.at(f.L2, 1, 0)}));
  REQUIRE(nf2.pieces.size() == 2);
  for (const auto& p : nf2.pieces) REQUIRE(p.removals.empty());

  auto nf3 = to_omega_normal_form(SetExpr::diff(SetExpr::full_set(f.z2), f.at(f.D)));
  REQUIRE(nf3.pieces.size() == 1);
  REQUIRE(nf3.pieces[0].e0.subgroup() == f.full);
  REQUIRE(nf3.pieces[0].removals.size() == 1);
  REQUIRE(nf3.pieces[0].removals[0].subgroup() == f.D);

  SECTION("piece validity invariants") {
    ts::Rng rng(13579);
    for (int iter = 0; iter < 50; ++iter) {
      auto pool = ts::random_coset_pool(rng, f.z2, 4);
      SetExpr e = ts::random_expr(rng, pool, f.z2, 3);
      auto nf4 = to_omega_normal_form(e);
      REQUIRE(ts::omega_matches_on_window(e, nf4, f.z2, 12));
      for (const auto& p : nf4.pieces) {
        bool e0_in_family = false, valid_removals = true;
        for (const Subgroup& h : nf4.family) e0_in_family |= h == p.e0.subgroup();
        REQUIRE(e0_in_family);
        for (const Coset& r : p.removals) {
          // removal sits inside E0 with infinite index
          REQUIRE(subgroup_contains(p.e0.subgroup(), r.subgroup()));
          REQUIRE(p.e0.contains(r.rep()));
          REQUIRE_FALSE(subgroup_index(p.e0.subgroup(), r.subgroup()).finite);
          bool in_family = false;
          for (const Subgroup& h : nf4.family) in_family |= h == r.subgroup();
          valid_removals = valid_removals && in_family;
        }
        REQUIRE(valid_removals);
        // pieces are nonempty: the witness search must succeed
        REQUIRE_NOTHROW(piece_point(p));
      }
      // family pairwise index property
      for (const Subgroup& a : nf4.family)
        for (const Subgroup& b : nf4.family) {
          SubgroupIndex idx = subgroup_index(a, subgroup_intersect(a, b));
          REQUIRE((!idx.finite || idx.value == 1));
        }
      // pieces pairwise disjoint
      for (std::size_t i = 0; i < nf4.pieces.size(); ++i)
        for (std::size_t j = i + 1; j < nf4.pieces.size(); ++j) {
          SetExpr a = nf_to_expr(OmegaNormalForm{{nf4.pieces[i]}, {}}, f.z2);
          SetExpr b = nf_to_expr(OmegaNormalForm{{nf4.pieces[j]}, {}}, f.z2);
          REQUIRE(is_empty(SetExpr::intersect_of({a, b})));
        }
    }
  }
}

TEST_CASE("family refinement") {
  ts::Z2Fixture f;
  auto fr1 = refine_family({f.full, f.L2});
  REQUIRE(fr1.refined == std::vector<Subgroup>{f.L2});
  REQUIRE(fr1.coverings[0].second.size() == 2);

  auto fr2 = refine_family({f.A, f.B});
  REQUIRE(fr2.refined.size() == 2);

  auto closure = detail::intersection_closure({f.full, f.A, f.L2});
  auto fr3 = refine_family(closure);
  Subgroup s20 = Subgroup::lattice_subgroup(f.z2, Lattice::from_generators(2, {{2, 0}}));
  REQUIRE(fr3.refined.size() == 2);
  REQUIRE((fr3.refined[0] == f.L2 || fr3.refined[1] == f.L2));
  REQUIRE((fr3.refined[0] == s20 || fr3.refined[1] == s20));

  SECTION("coverings tile each input on a window") {
    for (const auto& [input, cover] : fr3.coverings) {
      for (const GroupElement& g : enumerate_ball(f.z2, 10)) {
        int hits = 0;
        for (const Coset& c : cover)
          if (c.contains(g)) ++hits;
        REQUIRE(hits == (input.contains(g) ? 1 : 0));
      }
    }
  }

  SECTION("pairwise property after refinement") {
    ts::Rng rng(86420);
    for (int iter = 0; iter < 25; ++iter) {
      std::vector<Subgroup> family;
      for (int k = 0; k < 3; ++k) family.push_back(ts::random_subgroup(rng, f.z2));
      auto fr = refine_family(family);
      for (const Subgroup& a : fr.refined)
        for (const Subgroup& b : fr.refined) {
          SubgroupIndex idx = subgroup_index(a, subgroup_intersect(a, b));
          REQUIRE((!idx.finite || idx.value == 1));
        }
    }
  }
}

TEST_CASE("emptiness decisions") {
  ts::Z2Fixture f;
  REQUIRE(is_empty(SetExpr::intersect_of({f.at(f.A), SetExpr::ltranslate(f.el(0, 1), f.at(f.A))})));
  // a group is not a finite union of infinite-index cosets
  REQUIRE_FALSE(is_empty(
      SetExpr::diff(SetExpr::full_set(f.z2), SetExpr::union_of({f.at(f.A), f.at(f.B), f.at(f.D)}))));
  REQUIRE(is_empty(SetExpr::diff(SetExpr::diff(SetExpr::full_set(f.z2), f.at(f.L2)),
                                 f.at(f.L2, 1, 0))));
}

TEST_CASE("set equality decisions") {
  ts::Z2Fixture f;
  SetExpr a01 = SetExpr::ltranslate(f.el(0, 1), f.at(f.A));
  REQUIRE(sets_equal(SetExpr::union_of({f.at(f.A), a01}), SetExpr::union_of({a01, f.at(f.A)})));
  REQUIRE_FALSE(sets_equal(SetExpr::diff(SetExpr::full_set(f.z2), f.at(f.B)),
                           SetExpr::diff(SetExpr::full_set(f.z2), f.at(f.A))));
  REQUIRE(sets_equal(SetExpr::union_of({f.at(f.L2), f.at(f.L2, 1, 0)}), SetExpr::full_set(f.z2)));

  SECTION("equivalence relation and translation invariance") {
    ts::Rng rng(1123);
    auto pool = ts::random_coset_pool(rng, f.z2, 4);
    std::vector<SetExpr> exprs;
    for (int i = 0; i < 6; ++i) exprs.push_back(ts::random_expr(rng, pool, f.z2, 2));
    for (const SetExpr& e : exprs) REQUIRE(sets_equal(e, e));
    for (std::size_t i = 0; i < exprs.size(); ++i)
      for (std::size_t j = 0; j < exprs.size(); ++j) {
        bool ij = sets_equal(exprs[i], exprs[j]);
        REQUIRE(ij == sets_equal(exprs[j], exprs[i]));
        if (ij) {
          GroupElement t = ts::random_element(rng, f.z2, 3);
          REQUIRE(sets_equal(SetExpr::ltranslate(t, exprs[i]),
                             SetExpr::ltranslate(t, exprs[j])));
        }
      }
    // transitivity on a sampled triple chain
    for (std::size_t i = 0; i + 2 < exprs.size(); ++i)
      if (sets_equal(exprs[i], exprs[i + 1]) && sets_equal(exprs[i + 1], exprs[i + 2]))
        REQUIRE(sets_equal(exprs[i], exprs[i + 2]));
  }
}

TEST_CASE("affine hulls") {
  ts::Z2Fixture f;
  auto pt = [&](Int x, Int y) {
    return SetExpr::atom(Coset(f.triv, f.el(std::move(x), std::move(y))));
  };
  Coset hull = affine_hull(SetExpr::union_of({pt(0, 0), pt(2, 0), pt(0, 2)}));
  REQUIRE(hull.subgroup() ==
          Subgroup::lattice_subgroup(f.z2, Lattice::from_generators(2, {{2, 0}, {0, 2}})));
  REQUIRE(hull.rep().t == IntVec{0, 0});

  Coset c(f.B, f.el(1, 0));
  REQUIRE(affine_hull(SetExpr::atom(c)) == c);

  Coset hull3 = affine_hull(SetExpr::union_of({f.at(f.A), SetExpr::ltranslate(f.el(0, 3), f.at(f.A))}));
  REQUIRE(hull3.subgroup() ==
          Subgroup::lattice_subgroup(f.z2, Lattice::from_generators(2, {{1, 0}, {0, 3}})));

  REQUIRE_THROWS_AS(affine_hull(SetExpr::empty_set(f.z2)), EmptySet);

  SECTION("hull contains the set and is minimal on a window") {
    ts::Rng rng(777);
    for (int iter = 0; iter < 20; ++iter) {
      auto pool = ts::random_coset_pool(rng, f.z2, 3);
      SetExpr e = ts::random_expr(rng, pool, f.z2, 2);
      if (is_empty(e)) continue;
      Coset h = affine_hull(e);
      for (const GroupElement& g : enumerate_ball(f.z2, 8))
        if (eval_membership(e, g)) REQUIRE(h.contains(g));
    }
  }
}

TEST_CASE("right translation") {
  ts::Z2Fixture f;
  SetExpr rt = right_translate(SetExpr::ltranslate(f.el(0, 1), f.at(f.A)), f.el(2, 3));
  REQUIRE(sets_equal(rt, f.at(f.A, 2, 4)));

  auto w1 = GroupCarrier::zn_semidirect_c2(1);
  Subgroup t2 = Subgroup::lattice_subgroup(w1, Lattice::from_generators(1, {{2}}));
  SetExpr rt2 = right_translate(SetExpr::atom(Coset::at_identity(t2)), GroupElement(w1, {1}, -1));
  REQUIRE(rt2.kind() == SetExpr::Kind::Atom);
  REQUIRE(rt2.atom_coset().subgroup() == t2);
  REQUIRE(rt2.atom_coset().contains(GroupElement(w1, {1}, -1)));

  SetExpr ptc = SetExpr::atom(Coset(f.triv, f.el(1, 2)));
  REQUIRE(right_translate(ptc, f.el(3, 4)).atom_coset().rep().t == IntVec{4, 6});

  SECTION("pointwise correctness") {
    ts::Rng rng(31415);
    auto w2 = GroupCarrier::zn_semidirect_c2(2);
    for (const GroupCarrier& c : {f.z2, w2}) {
      auto pool = ts::random_coset_pool(rng, c, 3);
      for (int iter = 0; iter < 15; ++iter) {
        SetExpr e = ts::random_expr(rng, pool, c, 2);
        GroupElement t = ts::random_element(rng, c, 3);
        SetExpr et = right_translate(e, t);
        for (const GroupElement& g : enumerate_ball(c, 5))
          REQUIRE(eval_membership(et, g) == eval_membership(e, mul(g, inverse(t))));
      }
    }
  }
}
