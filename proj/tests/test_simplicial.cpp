#include <catch2/catch_amalgamated.hpp>

#include "sdot/catexamples.hpp"
#include "sdot/simplicial.hpp"

using namespace sdot;

TEST_CASE("standard simplices, boundaries, horns") {
  Budget b;
  for (int n = 0; n <= 3; ++n) {
    auto d = standard_simplex(n, 4);
    CHECK_FALSE(validate_simpset(*d));
    CHECK_FALSE(check_ez_unique(*d));
    for (int m = 0; m <= 4; ++m)
      CHECK(d->size(m) == static_cast<int>(binomial(n + m + 1, m + 1)));
  }
  // Delta[0] has exactly one simplex per level
  auto pt = standard_simplex(0, 3);
  for (int m = 0; m <= 3; ++m) CHECK(pt->size(m) == 1);

  auto l12 = horn(2, 1, 3);
  CHECK_FALSE(validate_simpset(*l12));
  int nondeg_edges = 0;
  for (int e = 0; e < l12->size(1); ++e)
    if (!is_degenerate(*l12, 1, e)) ++nondeg_edges;
  CHECK(nondeg_edges == 2);

  auto bd2 = boundary_simplex(2, 3);
  CHECK_FALSE(validate_simpset(*bd2));
  CHECK(bd2->size(0) == 3);
  int nondeg2 = 0;
  for (int s = 0; s < bd2->size(2); ++s)
    if (!is_degenerate(*bd2, 2, s)) ++nondeg2;
  CHECK(nondeg2 == 0);
}

TEST_CASE("nerves") {
  Budget b;
  auto n1 = nerve(ordinal_cat(1), 3, b);
  CHECK_FALSE(validate_simpset(*n1));
  CHECK(n1->size(1) == 3);

  auto ar1 = arrow_cat(1);
  auto nar = nerve(ar1.cat, 2, b);
  CHECK(nar->size(0) == 3);

  auto v = f2_vect(2);
  auto nv = nerve(v.cat, 2, b);
  CHECK(nv->size(1) == v.cat->n_mor());
  CHECK_FALSE(validate_simpset(*nv));
  CHECK_FALSE(check_ez_unique(*nv));

  // nerve of [n] agrees with Delta[n] levelwise
  for (int n = 0; n <= 2; ++n) {
    auto nn = nerve(ordinal_cat(n), 3, b);
    auto dd = standard_simplex(n, 3);
    for (int m = 0; m <= 3; ++m) CHECK(nn->size(m) == dd->size(m));
  }
}

TEST_CASE("tau1 inverts the nerve on direction-acyclic categories") {
  Budget b;
  for (auto c : {ordinal_cat(2), ordinal_cat(3), arrow_cat(2).cat,
                 product_cat(ordinal_cat(1), ordinal_cat(1)).cat}) {
    auto t = tau1(nerve(c, 2, b), b);
    CHECK(find_category_isomorphism(t.cat, c, b).has_value());
  }
  // tau1(Delta[n]) = [n]
  for (int n = 0; n <= 3; ++n) {
    auto t = tau1(standard_simplex(n, 2), b);
    CHECK(find_category_isomorphism(t.cat, ordinal_cat(n), b).has_value());
  }
}

TEST_CASE("tau1 of the boundary is the relation-free triangle") {
  Budget b;
  // functors out of tau1(bdDelta[2]) into C are triples (f, g, h) with no
  // relation between h and g.f
  auto v = f2_vect(1);
  auto maps = map_into_nerve(boundary_simplex(2, 2), v.cat, b);
  std::size_t expect = 0;
  for (int x = 0; x <= 1; ++x)
    for (int y = 0; y <= 1; ++y)
      for (int z = 0; z <= 1; ++z)
        expect += v.cat->hom[x][y].size() * v.cat->hom[y][z].size() * v.cat->hom[x][z].size();
  CHECK(maps.size() == expect);
}

TEST_CASE("tau1 rejects cyclic input with a named cycle") {
  Budget b;
  auto v = f2_vect(2);
  auto nv = nerve(v.cat, 2, b);
  try {
    tau1(nv, b);
    FAIL("expected cyclic-input rejection");
  } catch (const ValidationError& e) {
    CHECK(e.detail.kind == "cyclic-input");
    CHECK(e.detail.witness.find("->") != std::string::npos);
  }
}

TEST_CASE("ordinal subdivision") {
  Budget b;
  for (int n = 0; n <= 3; ++n) {
    auto sd = ordinal_sd(n, 2);
    CHECK_FALSE(validate_simpset(*sd));
    CHECK_FALSE(check_ez_unique(*sd));
    for (int m = 0; m <= 2; ++m)
      CHECK(sd->size(m) == static_cast<int>(binomial(n + 2 * m + 2, 2 * m + 2)));
    // vertex count matches Ar[n] objects
    CHECK(sd->size(0) == static_cast<int>(binomial(n + 2, 2)));
  }

  // Sd Delta[0] is Delta[0]
  auto sd0 = ordinal_sd(0, 3);
  for (int m = 0; m <= 3; ++m) CHECK(sd0->size(m) == 1);

  // the generic subdivision agrees with the chain-level one on simplices
  for (int n = 0; n <= 2; ++n) {
    auto direct = ordinal_sd(n, 2);
    auto generic = ordinal_sd_of(standard_simplex(n, 5), 2);
    for (int m = 0; m <= 2; ++m) REQUIRE(direct->size(m) == generic->size(m));
    CHECK(direct->face == generic->face);
    CHECK(direct->degen == generic->degen);
  }
}

TEST_CASE("tau1 of the subdivision is the arrow category") {
  Budget b;
  for (int n = 0; n <= 3; ++n) {
    auto t = tau1(ordinal_sd(n, 2), b);
    CHECK(t.cat->n_obj == (n + 1) * (n + 2) / 2);
    CHECK(find_category_isomorphism(t.cat, arrow_cat(n).cat, b).has_value());
  }
}

TEST_CASE("sd_category via the nerve route") {
  Budget b;
  auto sd2 = sd_category(ordinal_cat(2), b);
  CHECK(sd2->n_obj == 6);
  for (int n = 0; n <= 3; ++n)
    CHECK(find_category_isomorphism(sd_category(ordinal_cat(n), b), arrow_cat(n).cat, b)
              .has_value());
  // Sd[1] = Ar[1] with 3 objects; Sd[0] = [0]
  CHECK(sd_category(ordinal_cat(1), b)->n_obj == 3);
  CHECK(sd_category(ordinal_cat(0), b)->n_obj == 1);
}

TEST_CASE("unit map properties") {
  Budget b;
  for (int n = 0; n <= 2; ++n) {
    auto r = unit_map_sd(n, 2, b);
    CHECK(r.injective);
    CHECK(r.vertex_bijective);
    CHECK(r.tau1_iso);
  }
}

TEST_CASE("mapping spaces into nerves") {
  Budget b;
  auto v = f2_vect(1);

  // Map(Delta[1], NC) = morphisms of C
  auto m1 = map_into_nerve(standard_simplex(1, 2), v.cat, b);
  CHECK(m1.size() == static_cast<std::size_t>(v.cat->n_mor()));

  // Map(Sd Delta[n], NC) = Fun(Ar[n], C)
  for (int n = 1; n <= 2; ++n) {
    auto ms = map_into_nerve(ordinal_sd(n, 2), v.cat, b);
    auto fs = enumerate_functors(arrow_cat(n).cat, v.cat, b);
    CHECK(ms.size() == fs.size());
  }

  // oracle equivalence: direct levelwise simplicial-map enumeration agrees
  for (auto k : {standard_simplex(2, 2), boundary_simplex(2, 2), ordinal_sd(1, 2)}) {
    auto via_tau1 = map_into_nerve(k, v.cat, b);
    auto direct = enumerate_simp_maps(k, nerve(v.cat, 2, b), b);
    CHECK(via_tau1.size() == direct.size());
  }
}

TEST_CASE("Segal checks") {
  Budget b;
  auto v = f2_vect(1);
  CHECK(is_segal(nerve(v.cat, 3, b), b).ok);
  CHECK(is_segal(standard_simplex(3, 3), b).ok);
  auto r = is_segal(horn(2, 1, 2), b);
  CHECK_FALSE(r.ok);
  CHECK(r.fail_n == 2);
}

TEST_CASE("2-Segal checks") {
  Budget b;
  // Segal implies 2-Segal on nerves of categories
  for (auto c : {ordinal_cat(3), f2_vect(1).cat, trivial_category()})
    CHECK(is_two_segal(nerve(c, 4, b), b).ok);

  // one-point simplicial set
  CHECK(is_two_segal(standard_simplex(0, 4), b).ok);

  // deleting a filler breaks it, with a witness subdivision
  auto d3 = standard_simplex(3, 3);
  // remove the top nondegenerate 3-simplex (0,1,2,3)
  int top = -1;
  for (int s = 0; s < d3->size(3); ++s)
    if (!is_degenerate(*d3, 3, s)) top = s;
  REQUIRE(top >= 0);
  auto broken = remove_top_simplex(*d3, top);
  auto r = is_two_segal(broken, b);
  CHECK_FALSE(r.ok);
  CHECK(r.n == 3);
  CHECK(r.witness.find("no filler") != std::string::npos);
}

TEST_CASE("horn filler reports") {
  Budget b;
  auto v = f2_vect(1);

  SECTION("nerve of a category fills inner horns uniquely") {
    auto rep = check_horn_fillers(nerve(v.cat, 3, b), 3, b, false);
    CHECK(rep.all_inner_unique());
  }

  SECTION("a horn does not fill itself") {
    auto rep = check_horn_fillers(horn(2, 1, 2), 2, b, false);
    bool found_unfilled = false;
    for (const auto& e : rep.entries)
      if (e.n == 2 && e.k == 1 && e.filled < e.horns) found_unfilled = true;
    CHECK(found_unfilled);
  }

  SECTION("nerve of a groupoid fills outer horns too") {
    auto g = f2_vect(1);
    auto maxg = max_subgroupoid(g.cat);
    auto gc = groupoid_as_category(*std::static_pointer_cast<const TableGroupoid>(maxg));
    auto rep = check_horn_fillers(nerve(gc, 3, b), 3, b, true);
    for (const auto& e : rep.entries) {
      CHECK(e.filled == e.horns);
      if (e.inner) CHECK(e.unique_filled == e.horns);
    }
  }
}
