#include <catch2/catch_amalgamated.hpp>

#include "sdot/sconstructions.hpp"

using namespace sdot;

namespace {

// independent short-exact-sequence census: iso classes of (m: a>->b ->> c)
// with the defining square bicartesian
int ses_classes(const Pex& s, const Budget& budget) {
  const auto& h = *s->host;
  struct Ses {
    int m, e;
  };
  std::vector<Ses> all;
  for (int m = 0; m < h.n_mor(); ++m) {
    if (!s->mono[m]) continue;
    for (int e = 0; e < h.n_mor(); ++e) {
      if (!s->epi[e] || h.msrc[e] != h.mtgt[m]) continue;
      // the square (m; a -> 0; e; 0 -> c) must be bicartesian
      const int a = h.msrc[m], c = h.mtgt[e];
      const int z = s->zero_objs[0];
      const int to_z = h.hom[a][z][0];
      const int from_z = h.hom[z][c][0];
      Square sq{a, h.mtgt[m], z, c, m, to_z, e, from_z};
      if (!square_commutes(h, sq)) continue;
      if (is_bicartesian(h, sq, budget).bicartesian()) all.push_back({m, e});
    }
  }
  // iso classes under compatible object isos
  std::vector<int> cls(all.size(), -1);
  int n = 0;
  for (std::size_t i = 0; i < all.size(); ++i) {
    if (cls[i] >= 0) continue;
    cls[i] = n;
    for (std::size_t j = i + 1; j < all.size(); ++j) {
      if (cls[j] >= 0) continue;
      // search isos (pa, pb, pc) with pb m = m' pa and pc e = e' pb
      bool iso = false;
      for (int pa : s->iso_out[h.msrc[all[i].m]]) {
        if (h.mtgt[pa] != h.msrc[all[j].m]) continue;
        for (int pb : s->iso_out[h.mtgt[all[i].m]]) {
          if (h.mtgt[pb] != h.mtgt[all[j].m]) continue;
          if (h.compose(pb, all[i].m) != h.compose(all[j].m, pa)) continue;
          for (int pc : s->iso_out[h.mtgt[all[i].e]]) {
            if (h.mtgt[pc] != h.mtgt[all[j].e]) continue;
            if (h.compose(pc, all[i].e) == h.compose(all[j].e, pb)) iso = true;
          }
        }
      }
      if (iso) cls[j] = cls[i];
    }
    ++n;
  }
  return n;
}

}  // namespace

TEST_CASE("proto-exact validation") {
  Budget b;

  SECTION("trivial structure") {
    auto t = pex_trivial();
    CHECK_FALSE(validate_protoexact(*t));
    CHECK_FALSE(check_additivity(*t));
  }

  SECTION("f2vect is a valid exact structure") {
    auto s = pex_f2vect(2, b);
    CHECK_FALSE(validate_protoexact(*s));
    CHECK_FALSE(check_additivity(*s));
  }

  SECTION("pointed sets are proto-exact but not additive") {
    auto s = pex_ptdsets(2, b);
    CHECK_FALSE(validate_protoexact(*s));
    auto add = check_additivity(*s);
    REQUIRE(add.has_value());
    CHECK(add->kind == "no-biproduct");
    CHECK(add->witness.find("P1") != std::string::npos);
  }

  SECTION("violations are named") {
    // drop an identity from M: isos must be admissible
    auto v = f2_vect(1);
    std::vector<char> mono = v.injective, epi = v.surjective, zero(v.cat->n_obj, 0);
    zero[0] = 1;
    mono[v.cat->ident[1]] = 0;
    auto s = make_pex(v.cat, mono, epi, zero, "broken", b);
    auto r = validate_protoexact(*s);
    REQUIRE(r.has_value());
    CHECK(r->kind == "iso-not-admissible");

    // declare a non-zero object as zero
    std::vector<char> zero2(v.cat->n_obj, 1);
    auto s2 = make_pex(v.cat, v.injective, v.surjective, zero2, "broken2", b);
    auto r2 = validate_protoexact(*s2);
    REQUIRE(r2.has_value());
    CHECK(r2->kind == "zero-not-zero");
  }
}

TEST_CASE("grid enumeration against the naive oracle") {
  Budget b(200'000'000);

  SECTION("f2vect grids at small shapes") {
    auto s = pex_f2vect(2, b);
    for (auto [q, r] : {std::pair{1, 1}, {0, 2}, {2, 0}}) {
      std::vector<Grid> fast;
      enumerate_grids(*s, q, r, true, true, [&](const Grid& g) { fast.push_back(g); });
      std::sort(fast.begin(), fast.end());
      auto naive = enumerate_grids_naive(*s, q, r, true, true);
      CHECK(fast == naive);
    }
  }

  SECTION("pointed-set grids") {
    auto s = pex_ptdsets(2, b);
    std::vector<Grid> fast;
    enumerate_grids(*s, 1, 1, true, true, [&](const Grid& g) { fast.push_back(g); });
    std::sort(fast.begin(), fast.end());
    auto naive = enumerate_grids_naive(*s, 1, 1, true, true);
    CHECK(fast == naive);
  }

  SECTION("plain functor grids count monotone assignments") {
    Budget b2;
    auto y = t_of_nerve_set(ordinal_cat(1), 2, b2);
    // level (1,1) = monotone maps from the 2x2 grid poset into [1]: 6
    CHECK(y->size(1, 1) == 6);
    CHECK(y->size(0, 0) == 2);
    CHECK(y->size(1, 0) == 3);
  }
}

TEST_CASE("exact nerve levels") {
  Budget b;

  SECTION("trivial structure: one object everywhere") {
    auto s = pex_trivial();
    NerveOptions opt;
    opt.matdim = 2;
    opt.trunc = 2;
    auto y = exact_nerve(s, opt, b);
    for (int lid = 0; lid < y->sh.n_levels(); ++lid)
      if (y->materialized(lid)) CHECK(y->level(lid)->size() == 1);
  }

  SECTION("f2vect nerve at low degrees") {
    auto s = pex_f2vect(2, b);
    NerveOptions opt;
    opt.matdim = 2;
    opt.trunc = 2;
    auto y = exact_nerve(s, opt, b);
    // augmentation level: one object (unique zero) with trivial automorphisms
    CHECK(y->aug_level()->size() == 1);
    CHECK(hom_count(*y->aug_level(), 0, 0) == 1);
    // level (0,0) is the maximal subgroupoid on 3 objects
    CHECK(y->level(0, 0)->size() == 3);
    // pi0 of level (1,0): iso classes of admissible epis = 6
    auto p = pi0(*y->level(1, 0), b);
    CHECK(p.count() == 6);
  }
}

TEST_CASE("classical construction levels") {
  Budget b;
  auto s = pex_f2vect(2, b);

  SECTION("level 0 is the zero groupoid") {
    auto e = sdot_e(s, 0);
    CHECK(e->size() == 1);
    auto w = sdot_wald(s, 0, 0);
    CHECK(w->size() == 1);
    CHECK(hom_count(*w, 0, 0) == 1);  // Aut of the zero object
  }

  SECTION("level 1: pi0 = 3 with automorphism orders 1, 1, 6") {
    auto w = sdot_wald(s, 1, 0);
    auto p = pi0(*w, b);
    REQUIRE(p.count() == 3);
    std::vector<std::size_t> orders;
    for (int r : p.reps) orders.push_back(hom_count(*w, r, r));
    std::sort(orders.begin(), orders.end());
    CHECK(orders == std::vector<std::size_t>{1, 1, 6});
  }

  SECTION("level 2: pi0 = 6 (splittings over a field)") {
    auto e = sdot_e(s, 2);
    CHECK(pi0(*e, b).count() == 6);
  }

  SECTION("pointed sets: pi0 levels 1 and 2") {
    auto sp = pex_ptdsets(2, b);
    CHECK(pi0(*sdot_e(sp, 1), b).count() == 3);
    CHECK(pi0(*sdot_e(sp, 2), b).count() == 6);
  }

  SECTION("independent SES census matches pi0 at level 2") {
    CHECK(ses_classes(s, b) == 6);
    CHECK(ses_classes(pex_ptdsets(2, b), b) == 6);
  }

  SECTION("naive functor-category oracle agrees") {
    Budget big(500'000'000);
    {
      auto e = sdot_e(s, 1);
      auto naive = sdot_e_naive(s, 1, big);
      CHECK(static_cast<std::size_t>(e->size()) == naive.size());
    }
    auto s1 = pex_f2vect(1, b);
    for (int n = 1; n <= 2; ++n) {
      auto e = sdot_e(s1, n);
      auto naive = sdot_e_naive(s1, n, big);
      CHECK(static_cast<std::size_t>(e->size()) == naive.size());
    }
  }

  SECTION("basepoint must be a zero object") {
    CHECK_THROWS_AS(sdot_wald(s, 1, 2), ValidationError);
  }
}

TEST_CASE("fixed-basepoint vs any-zero comparison") {
  Budget b;
  SECTION("trivial structure") {
    auto t = pex_trivial();
    auto rep = compare_wald_e(t, 1, 0, b);
    CHECK(rep.ok);
  }
  SECTION("f2vect at n <= 2") {
    auto s = pex_f2vect(2, b);
    for (int n = 0; n <= 2; ++n) {
      auto rep = compare_wald_e(s, n, 0, b);
      CHECK(rep.ok);
      CHECK(rep.equivalence.ok);
    }
  }
}

TEST_CASE("generalized construction is isomorphic to the classical one") {
  Budget b;
  SECTION("trivial structure at n = 0") {
    auto t = pex_trivial();
    auto rep = compare_e_generalized(t, 0, b).report;
    CHECK(rep.ok);
    CHECK(rep.objects_lhs == 1);
  }
  SECTION("f2vect at n <= 2") {
    auto s = pex_f2vect(2, b);
    for (int n = 0; n <= 2; ++n) {
      auto rep = compare_e_generalized(s, n, b).report;
      INFO("n = " << n << " witness " << rep.witness);
      CHECK(rep.ok);
    }
  }
  SECTION("pointed sets at n <= 2") {
    auto s = pex_ptdsets(2, b);
    for (int n = 0; n <= 2; ++n) {
      auto rep = compare_e_generalized(s, n, b).report;
      INFO("n = " << n << " witness " << rep.witness);
      CHECK(rep.ok);
    }
  }
}

TEST_CASE("nerve conditions at low truncation") {
  Budget b;
  GpdCondOptions opt;
  for (auto s : {pex_trivial(), pex_f2vect(2, b), pex_ptdsets(2, b)}) {
    NerveOptions nopt;
    nopt.matdim = 2;
    nopt.trunc = 2;
    auto y = exact_nerve(s, nopt, b);
    auto rep = check_asds_gpd(y, opt, b);
    INFO(s->name << ": " << rep.double_segal.witness << "|" << rep.stable.witness << "|"
                 << rep.augmented.witness);
    CHECK(rep.ok());
    // every strict pullback was justified
    for (const auto& route : rep.double_segal.routes)
      CHECK(route.find("strict") != std::string::npos);
    for (const auto& route : rep.stable.routes)
      CHECK(route.find("strict") != std::string::npos);
    for (const auto& route : rep.augmented.routes)
      CHECK(route.find("strict") != std::string::npos);
  }
}

TEST_CASE("structure functors of nerves are isofibrations for injective maps") {
  Budget b;
  auto s = pex_f2vect(1, b);
  NerveOptions opt;
  opt.matdim = 2;
  opt.trunc = 2;
  auto y = exact_nerve(s, opt, b);
  // all face functors (injective operators) within the materialized range
  for (const auto& [key, f] : y->fv) CHECK(is_isofibration(f, b).ok);
  for (const auto& [key, f] : y->fh) CHECK(is_isofibration(f, b).ok);
}

TEST_CASE("virtual top level agrees with full materialization") {
  Budget b;
  auto s = pex_f2vect(1, b);
  // S_3 with the (q+r=3) levels virtual vs fully materialized
  NerveOptions full;
  full.matdim = 3;
  full.trunc = 3;
  NerveOptions lazy;
  lazy.matdim = 2;
  lazy.trunc = 3;
  auto yf = exact_nerve(s, full, b);
  auto yl = exact_nerve(s, lazy, b);
  auto sf = sdot_gpd(yf, 3, b);
  auto sl = sdot_gpd(yl, 3, b);
  CHECK(sf->size() == sl->size());
  CHECK(pi0(*sf, b).count() == pi0(*sl, b).count());
  CHECK(total_mor_count(*sf) == total_mor_count(*sl));
}

TEST_CASE("exact functors") {
  Budget b;
  auto s = pex_f2vect(1, b);

  SECTION("identity and constant functors validate") {
    CHECK_FALSE(validate_exact_functor(exact_identity(s)));
    CHECK_FALSE(validate_exact_functor(exact_to_trivial(s)));
    CHECK_FALSE(validate_exact_functor(exact_from_trivial(s)));
  }

  SECTION("a zero-breaking functor is rejected") {
    // constant at the one-dimensional object: a functor, but sends the zero
    // object somewhere that is not a zero
    auto v = f2_vect(1);
    CatFunctor f{v.cat, v.cat, std::vector<int>(v.cat->n_obj, 1), {}};
    f.mor.resize(v.cat->n_mor());
    for (int m = 0; m < v.cat->n_mor(); ++m) f.mor[m] = v.cat->ident[1];
    REQUIRE_FALSE(check_functor(f));
    ExactFunctor ef{f, s, s, "const1"};
    auto r = validate_exact_functor(ef);
    REQUIRE(r.has_value());
    CHECK(r->kind == "not-exact");
  }

  SECTION("induced nerve maps commute with the operators") {
    NerveOptions opt;
    opt.matdim = 2;
    opt.trunc = 2;
    auto y = exact_nerve(s, opt, b);
    auto ef = exact_identity(s);
    for (const auto& [key, f] : y->fv) {
      const Lv l = y->sh.levels[key.first];
      auto nf_src = nerve_of_functor(ef, y, y, key.first);
      auto nf_tgt = nerve_of_functor(ef, y, y, y->sh.id(l.q - 1, l.r));
      for (int x = 0; x < y->level(key.first)->size(); ++x)
        CHECK(nf_tgt.ob(f.ob(x)) == f.ob(nf_src.ob(x)));
    }
  }
}
