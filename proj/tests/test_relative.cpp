#include <catch2/catch_amalgamated.hpp>

#include "sdot/relative.hpp"

using namespace sdot;

TEST_CASE("path construction on simplicial groupoids") {
  Budget b(2'000'000'000);
  auto s = pex_f2vect(2, b);
  NerveOptions opt;
  opt.matdim = 3;
  opt.trunc = 3;
  auto y = exact_nerve(s, opt, b);
  auto sd = sdot_simplicial(y, 3, b);
  auto p = path_simplicial(sd.s);
  // (P X)_0 = X_1 and (P X)_1 = X_2
  CHECK(p.s.level[0]->size() == sd.s.level[1]->size());
  CHECK(p.s.level[1]->size() == sd.s.level[2]->size());
  // pi0 of (P S)_1 = pi0 S_2 = 6
  CHECK(pi0(*p.s.level[1], b).count() == 6);
  // the d0 comparison maps land where they should
  CHECK(p.d0[0].cod->size() == sd.s.level[0]->size());
}

TEST_CASE("path construction on preaugmented objects") {
  Budget b;
  auto s = pex_f2vect(2, b);
  NerveOptions opt;
  opt.matdim = 2;
  opt.trunc = 2;
  auto y = exact_nerve(s, opt, b);
  auto p = path_preaug(y, b);

  SECTION("bisimplicial part is the shifted object") {
    CHECK(p.psh->level(0, 0)->size() == y->level(1, 0)->size());
    CHECK(p.psh->level(0, 1)->size() == y->level(1, 1)->size());
  }

  SECTION("augmentation is the pullback of epis against zeros") {
    // pairs (vertical edge, zero object) with matching endpoint: admissible
    // epis with zero target; for f2vect:2 those are the maps a ->> 0: 3
    CHECK(p.psh->aug_level()->size() == 3);
    CHECK(p.aug_justification.ok);
  }

  SECTION("the augmentation level is equivalent to the base groupoid") {
    // (P N^e B)_{-1} ~ B_iso via the source-vertex projection
    auto src_vertex = compose_gfunctors(gpsh_oper(y, {0}, {0}, 1, 0), p.psh->aug);
    auto r = is_equivalence(src_vertex, b);
    CHECK(r.ok);
  }

  SECTION("trivial example") {
    auto t = pex_trivial();
    auto yt = exact_nerve(t, opt, b);
    auto pt = path_preaug(yt, b);
    CHECK(pt.psh->aug_level()->size() == 1);
  }
}

TEST_CASE("path of a valid object satisfies the three conditions") {
  Budget b;
  GpdCondOptions copt;
  auto s = pex_f2vect(2, b);
  NerveOptions opt;
  opt.matdim = 3;
  opt.trunc = 3;
  auto y = exact_nerve(s, opt, b);
  auto rep = check_path_asds(y, copt, b);
  INFO(rep.double_segal.witness << "|" << rep.stable.witness << "|" << rep.augmented.witness);
  CHECK(rep.ok());

  auto t = pex_trivial();
  auto yt = exact_nerve(t, opt, b);
  CHECK(check_path_asds(yt, copt, b).ok());
}

TEST_CASE("cone shape") {
  Budget b;
  for (int n = 0; n <= 2; ++n) {
    auto c = cone_w(n, std::min(n + 1, 3));
    CHECK_FALSE(check_cone_w(c));
    // |cone at (0,0)| = |W_{1+n} at (0,0)| minus the 0th-column cells
    const int all = c.big.psh->size(0, 0);
    const int expect = all - 1;  // only (0,0) sits in column 0 at level (0,0)
    CHECK(c.psh->size(0, 0) == expect);
  }
  // the depicted count: |cone of W_2 at (0,0)| = 9
  auto c2 = cone_w(2, 3);
  CHECK(c2.psh->size(0, 0) == 9);
  // augmentation cells: diagonal pairs except (0,0)
  CHECK(c2.psh->aug_size() == 3);
}

TEST_CASE("path comparison for the generalized construction") {
  Budget b;
  GpdCondOptions copt;

  SECTION("trivial example, n <= 1") {
    auto t = pex_trivial();
    NerveOptions opt;
    opt.matdim = 2;
    opt.trunc = 2;
    auto y = exact_nerve(t, opt, b);
    for (int n = 0; n <= 1; ++n) {
      auto rep = compare_initial_path(y, n, b);
      INFO(rep.witness);
      CHECK(rep.ok);
    }
  }

  SECTION("f2vect:1 at n <= 1") {
    auto s = pex_f2vect(1, b);
    NerveOptions opt;
    opt.matdim = 2;
    opt.trunc = 2;
    auto y = exact_nerve(s, opt, b);
    for (int n = 0; n <= 1; ++n) {
      auto rep = compare_initial_path(y, n, b);
      INFO(rep.witness);
      CHECK(rep.ok);
      CHECK(rep.cone_iso_ok);
    }
  }
}

TEST_CASE("relative construction") {
  Budget b;

  SECTION("A -> 0 recovers the plain construction") {
    auto s = pex_f2vect(2, b);
    auto f = exact_to_trivial(s);
    for (int n = 0; n <= 2; ++n) {
      auto rel = relative_sdot(f, n, b);
      CHECK(rel.d0_justification.ok);
      // projection to the A-side is an equivalence
      GFunctor pr2{rel.gpd, rel.a_level, [g = rel.gpd](int x) { return g->objs[x].second; },
                   [g = rel.gpd](const GMor& m) { return g->part(m, 1); }, "pr2"};
      auto eq = is_equivalence(pr2, b);
      CHECK(eq.ok);
      // and an isofibration (levelwise acyclic fibration)
      CHECK(is_isofibration(pr2, b).ok);
    }
  }

  SECTION("identity on the trivial structure") {
    auto t = pex_trivial();
    auto f = exact_identity(t);
    auto rel = relative_sdot(f, 1, b);
    CHECK(rel.gpd->size() == 1);
  }

  SECTION("identity on f2vect:1, level counts against the pair oracle") {
    auto s = pex_f2vect(1, b);
    auto f = exact_identity(s);
    auto rel = relative_sdot(f, 1, b);
    // pairs (h in S^e_2, g in S^e_1) with d0 h = g: count directly
    auto top = sdot_e(s, 2);
    auto base = sdot_e(s, 1);
    std::vector<int> d0map{1, 2};
    auto d0 = sdot_level_oper(top, base, d0map);
    std::size_t expect = 0;
    for (int h = 0; h < top->size(); ++h) {
      (void)d0.ob(h);
      ++expect;
    }
    CHECK(static_cast<std::size_t>(rel.gpd->size()) == expect);
  }
}

TEST_CASE("relative nerve") {
  Budget b;

  SECTION("A -> 0 recovers the exact nerve levelwise") {
    auto s = pex_f2vect(1, b);
    auto f = exact_to_trivial(s);
    auto rn = relative_nerve(f, 2, b);
    CHECK_FALSE(rn.builders_agree);
    for (int lid = 0; lid < rn.psh->sh.n_levels(); ++lid) {
      // second projection is an equivalence onto the exact nerve of A
      auto pb = rn.level_pb[lid];
      const Gpd target = lid == 0 ? rn.nerve_a->aug_level()
                                  : rn.nerve_a->levels[rn.nerve_a->sh.id(
                                        rn.psh->sh.levels[lid].q, rn.psh->sh.levels[lid].r)];
      GFunctor pr2{pb, target, [pb](int x) { return pb->objs[x].second; },
                   [pb](const GMor& m) { return pb->part(m, 1); }, "pr2"};
      CHECK(is_equivalence(pr2, b).ok);
      CHECK(is_isofibration(pr2, b).ok);
    }
  }

  SECTION("level -1 counts admissible epis onto zeros") {
    auto s = pex_f2vect(1, b);
    auto f = exact_identity(s);
    auto rn = relative_nerve(f, 1, b);
    // pairs ((epi with zero target), zero of A with matching image): for the
    // identity functor these are the epis a ->> 0: dims 0 and 1
    CHECK(rn.psh->aug_level()->size() == 2);
    auto p = pi0(*rn.psh->aug_level(), b);
    CHECK(p.count() == 2);
  }

  SECTION("relative nerve satisfies the three conditions") {
    GpdCondOptions copt;
    auto s = pex_f2vect(1, b);
    for (auto f : {exact_to_trivial(s), exact_identity(s)}) {
      auto rn = relative_nerve(f, 2, b);
      CHECK_FALSE(rn.builders_agree);
      auto rep = check_asds_gpd(rn.psh, copt, b);
      INFO(f.name << ": " << rep.double_segal.witness << "|" << rep.stable.witness << "|"
                  << rep.augmented.witness);
      CHECK(rep.ok());
    }
  }
}

TEST_CASE("relative comparison") {
  Budget b;

  SECTION("identity on the trivial structure") {
    auto t = pex_trivial();
    auto rep = compare_relative(exact_identity(t), 1, b);
    INFO(rep.witness);
    CHECK(rep.ok);
  }

  SECTION("A -> 0 for f2vect:1, n <= 2") {
    auto s = pex_f2vect(1, b);
    auto f = exact_to_trivial(s);
    for (int n = 0; n <= 2; ++n) {
      auto rep = compare_relative(f, n, b);
      INFO("n=" << n << " " << rep.witness);
      CHECK(rep.ok);
    }
  }

  SECTION("identity on f2vect:1, n <= 1") {
    auto s = pex_f2vect(1, b);
    auto f = exact_identity(s);
    for (int n = 0; n <= 1; ++n) {
      auto rep = compare_relative(f, n, b);
      INFO("n=" << n << " " << rep.witness);
      CHECK(rep.ok);
    }
  }
}

TEST_CASE("two-Segal checks for the simplicial groupoids") {
  Budget b;
  GpdCondOptions copt;

  SECTION("generalized construction on a nerve") {
    auto s = pex_f2vect(1, b);
    NerveOptions opt;
    opt.matdim = 3;
    opt.trunc = 3;
    auto y = exact_nerve(s, opt, b);
    auto sd = sdot_simplicial(y, 3, b);
    auto rep = check_two_segal_gpd(sd.s, copt, b);
    INFO(rep.witness);
    CHECK(rep.ok);
    // set-level check on the pi0 shadow
    CHECK(is_two_segal(pi0_shadow(sd.s, b), b).ok);
  }

  SECTION("relative construction is 2-Segal") {
    auto s = pex_f2vect(1, b);
    auto f = exact_to_trivial(s);
    auto rn = relative_nerve(f, 3, b);
    auto sd = sdot_simplicial(rn.psh, 3, b);
    auto rep = check_two_segal_gpd(sd.s, copt, b);
    INFO(rep.witness);
    CHECK(rep.ok);
  }
}
