#include <catch2/catch_amalgamated.hpp>

#include "sdot/catexamples.hpp"
#include "sdot/fincat.hpp"

using namespace sdot;

TEST_CASE("ordinal categories") {
  auto c0 = ordinal_cat(0);
  CHECK(c0->n_obj == 1);
  CHECK(c0->n_mor() == 1);
  auto c1 = ordinal_cat(1);
  CHECK(c1->n_obj == 2);
  CHECK(c1->n_mor() == 3);
  auto c2 = ordinal_cat(2);
  CHECK(c2->n_obj == 3);
  CHECK(c2->n_mor() == 6);
  auto c4 = ordinal_cat(4);
  CHECK(c4->n_obj == 5);
  CHECK(c4->n_mor() == 15);  // pairs i<=j
  for (auto c : {c0, c1, c2, c4}) CHECK_FALSE(validate_category(*c));
}

TEST_CASE("validator names violations") {
  // mistyped composite
  FiniteCategory c;
  c.n_obj = 2;
  c.msrc = {0, 1, 0};
  c.mtgt = {0, 1, 1};
  c.ident = {0, 1};
  c.comp = {0,  -1, -1,   // id0 o -
            -1, 1,  2,    //
            2,  -1, -1};  // f o id0 = f
  auto r = validate_category(c);
  REQUIRE_FALSE(r);  // this table is actually fine

  // now poison: declare compose(f, f) even though f: 0->1 is not composable with itself
  c.comp[2 * 3 + 2] = 2;
  r = validate_category(c);
  REQUIRE(r);
  CHECK(r->kind == "ill-typed-composite");

  // missing identity
  FiniteCategory d;
  d.n_obj = 1;
  d.msrc = {0};
  d.mtgt = {0};
  d.ident = {5};
  d.comp = {0};
  r = validate_category(d);
  REQUIRE(r);
  CHECK(r->kind == "missing-identity");
}

TEST_CASE("non-associative table is rejected with a witness triple") {
  // A deliberately broken one-object table on morphisms {e, a, b}:
  // force a*a = b but make (a*a)*a != a*(a*a) by corrupting one entry.
  FiniteCategory c;
  c.n_obj = 1;
  c.msrc = {0, 0, 0};
  c.mtgt = {0, 0, 0};
  c.ident = {0};
  // start from Z/3-like table: e a b / a b e / b e a (associative)
  c.comp = {0, 1, 2, 1, 2, 0, 2, 0, 1};
  REQUIRE_FALSE(validate_category(c));
  c.comp[1 * 3 + 1] = 1;  // a o a = a but a o b untouched
  auto r = validate_category(c);
  REQUIRE(r);
  CHECK(r->kind == "non-associative");
  CHECK(r->witness.find("triple") != std::string::npos);
}

TEST_CASE("F2-vect skeleton") {
  auto v = f2_vect(2);
  CHECK_FALSE(validate_category(*v.cat));
  // |Hom(2,2)| = number of 2x2 matrices over F2 = 16
  CHECK(v.cat->hom[2][2].size() == 16);
  // oracle: total morphisms = sum over dim pairs of 2^(a*b)
  int total = 0;
  for (int a = 0; a <= 2; ++a)
    for (int b = 0; b <= 2; ++b) total += 1 << (a * b);
  CHECK(v.cat->n_mor() == total);
  // |GL2(F2)| = 6 invertible among Hom(2,2)
  int gl2 = 0;
  for (int m : v.cat->hom[2][2])
    if (v.injective[m] && v.surjective[m]) ++gl2;
  CHECK(gl2 == 6);
}

TEST_CASE("pointed sets skeleton") {
  auto p = pointed_sets(2);
  CHECK_FALSE(validate_category(*p.cat));
  CHECK(p.cat->hom[1][1].size() == 2);   // basepointed maps P1 -> P1
  CHECK(p.cat->hom[2][2].size() == 9);   // 3^2
  CHECK(p.cat->hom[2][1].size() == 4);   // 2^2
}

TEST_CASE("product categories") {
  auto c1 = ordinal_cat(1);
  auto p = product_cat(c1, c1);
  CHECK(p.cat->n_obj == 4);
  CHECK(p.cat->n_mor() == 9);
  CHECK_FALSE(validate_category(*p.cat));

  auto c2 = ordinal_cat(2);
  auto q = product_cat(c2, c1);
  CHECK(q.cat->n_obj == 6);
  CHECK(q.cat->n_mor() == 18);

  // C x [0] isomorphic to C
  auto v = f2_vect(1);
  auto r = product_cat(v.cat, ordinal_cat(0));
  Budget b;
  CHECK(find_category_isomorphism(r.cat, v.cat, b).has_value());
}

TEST_CASE("arrow categories") {
  auto a1 = arrow_cat(1);
  CHECK(a1.objs == std::vector<std::pair<int, int>>{{0, 0}, {0, 1}, {1, 1}});
  auto a4 = arrow_cat(4);
  CHECK(a4.cat->n_obj == 15);
  // vertex labels match the (i,j), i<=j grid
  std::vector<std::string> labels;
  for (auto [i, j] : a4.objs) labels.push_back(std::to_string(i) + std::to_string(j));
  CHECK(std::find(labels.begin(), labels.end(), "00") != labels.end());
  CHECK(std::find(labels.begin(), labels.end(), "44") != labels.end());
  CHECK(std::find(labels.begin(), labels.end(), "24") != labels.end());

  auto a2 = arrow_cat(2);
  CHECK(a2.cat->n_obj == 6);
  CHECK(indecomposable_morphisms(a2.cat).size() == 6);  // Hasse edges of the grid poset
}

TEST_CASE("functor enumeration") {
  Budget b;
  auto c0 = ordinal_cat(0);
  auto c1 = ordinal_cat(1);
  auto v = f2_vect(2);

  // Fun([0], D) has |obj D| functors
  CHECK(enumerate_functors(c0, v.cat, b).size() == 3);

  // |Fun([1],[1])| objects = 3 monotone maps
  CHECK(enumerate_functors(c1, c1, b).size() == 3);

  // |Fun([1], F2-vect<=2)| objects = morphisms of the target (oracle: sum of
  // matrix counts over all dim pairs)
  int total = 0;
  for (int a = 0; a <= 2; ++a)
    for (int n = 0; n <= 2; ++n) total += 1 << (a * n);
  CHECK(enumerate_functors(c1, v.cat, b).size() == static_cast<std::size_t>(total));

  // functors out of a group-like category are found too (no indecomposables)
  FiniteCategory z3;
  z3.n_obj = 1;
  z3.msrc = {0, 0, 0};
  z3.mtgt = {0, 0, 0};
  z3.ident = {0};
  z3.comp = {0, 1, 2, 1, 2, 0, 2, 0, 1};
  auto z3c = validated(std::move(z3));
  CHECK(enumerate_functors(z3c, z3c, b).size() == 3);  // endomorphisms of Z/3
}

TEST_CASE("functor category as a category") {
  Budget b;
  auto c1 = ordinal_cat(1);
  auto fc = functor_category(c1, c1, b);
  CHECK(fc.cat->n_obj == 3);
  CHECK_FALSE(validate_category(*fc.cat));
  // Fun([1],[1]) is the poset of monotone maps under pointwise order: morphisms
  // = comparable pairs: maps 00,01,11 ordered 00<=01<=11: 6 morphisms
  CHECK(fc.cat->n_mor() == 6);
}

TEST_CASE("budget failure is loud") {
  Budget tiny(50);
  auto v = f2_vect(2);
  CHECK_THROWS_AS(enumerate_functors(v.cat, v.cat, tiny), BudgetExceeded);
}

TEST_CASE("pullbacks and pushouts") {
  Budget b;
  auto v = f2_vect(2);

  SECTION("identity pullback") {
    // pullback of X --id--> X <--f-- W is W
    const int f = v.cat->hom[1][2][1];  // some map 1 -> 2
    const int idX = v.cat->ident[2];
    auto r = pullback(*v.cat, Cospan{idX, f}, b);
    REQUIRE(r.found);
    CHECK(r.square.a == 1);  // corner is W = dim 1
  }

  SECTION("kernel as pullback") {
    // pullback of (2 ->> 1 <- 0): corner = kernel of the surjection, dim 1
    int epi = -1;
    for (int m : v.cat->hom[2][1])
      if (v.surjective[m]) {
        epi = m;
        break;
      }
    REQUIRE(epi >= 0);
    const int zero_to_1 = v.cat->hom[0][1][0];
    auto r = pullback(*v.cat, Cospan{epi, zero_to_1}, b);
    REQUIRE(r.found);
    CHECK(r.square.a == 1);
  }

  SECTION("wedge as pushout in pointed sets") {
    auto p = pointed_sets(2);
    // span P1 <- P0 -> P1; pushout = wedge = P2
    const int l = p.cat->hom[0][1][0];
    auto r = pushout(*p.cat, Span{l, l}, b);
    REQUIRE(r.found);
    CHECK(r.square.d == 2);
  }

  SECTION("missing pullback is absent, not an error") {
    // pullback of 2 -0-> 1 <-0- 2 would need dim 4
    const int z21 = v.cat->hom[2][1][0];  // zero matrix 2->1
    REQUIRE_FALSE(v.injective[z21]);
    auto r = pullback(*v.cat, Cospan{z21, z21}, b);
    CHECK_FALSE(r.found);
  }
}

TEST_CASE("bicartesian decision") {
  Budget b;
  auto v = f2_vect(2);

  SECTION("identity square") {
    const int id1 = v.cat->ident[1];
    Square s{1, 1, 1, 1, id1, id1, id1, id1};
    auto r = is_bicartesian(*v.cat, s, b);
    CHECK(r.bicartesian());
  }

  SECTION("short exact sequence square") {
    // 1 >-> 2 ->> 1 with 0 corner: the square (1 -> 2; 1 -> 0 down; 2 ->> 1)
    // pick inclusion e1 and the projection killing e1
    int mono = -1, epi = -1;
    for (int m : v.cat->hom[1][2])
      if (v.injective[m])
        for (int e : v.cat->hom[2][1])
          if (v.surjective[e] && v.cat->compose(e, m) == v.cat->hom[1][1][0]) {
            // hom[1][1][0] is the zero map 1->1
            mono = m;
            epi = e;
          }
    REQUIRE(mono >= 0);
    const int one_to_zero = v.cat->hom[1][0][0];
    const int zero_to_one = v.cat->hom[0][1][0];
    Square s{1, 2, 0, 1, mono, one_to_zero, epi, zero_to_one};
    auto r = is_bicartesian(*v.cat, s, b);
    CHECK(r.bicartesian());
  }

  SECTION("failing square carries a competing cone") {
    // all-1 square: top id, left id, right 0, bottom 0.  The true pullback of
    // the cospan (0,0) is 1+1 = 2, so corner 1 fails with cone at dim 2.
    const int id1 = v.cat->ident[1];
    const int z11 = v.cat->hom[1][1][0];
    Square s{1, 1, 1, 1, id1, id1, z11, z11};
    auto r = is_bicartesian(*v.cat, s, b);
    CHECK(r.commutes);
    CHECK_FALSE(r.cartesian);
    CHECK_FALSE(r.witness.empty());
  }
}

TEST_CASE("category isomorphism checker") {
  Budget b;
  auto a2 = arrow_cat(2);
  auto notiso = ordinal_cat(5);
  CHECK(find_category_isomorphism(a2.cat, a2.cat, b).has_value());
  CHECK(a2.cat->n_obj == notiso->n_obj);
  CHECK_FALSE(find_category_isomorphism(a2.cat, notiso, b).has_value());
}

TEST_CASE("associativity and unit laws hold on constructed categories") {
  // exhaustive revalidation of every builder output used elsewhere
  Budget b;
  for (auto c : {ordinal_cat(3), arrow_cat(3).cat, product_cat(ordinal_cat(2), ordinal_cat(1)).cat,
                 f2_vect(2).cat, pointed_sets(2).cat, trivial_category()})
    CHECK_FALSE(validate_category(*c));
}
