#pragma once

#include <algorithm>
#include <map>
#include <unordered_map>

#include "sdot/core.hpp"

namespace sdot {

// ---------------------------------------------------------------------------
// Finite categories as composition tables.  Objects and morphisms are dense
// integer ids; compose[g][f] is g∘f and is -1 exactly when tgt(f) != src(g).
// Values are immutable once validated.
// ---------------------------------------------------------------------------

struct FiniteCategory {
  int n_obj = 0;
  std::vector<int> msrc, mtgt;  // indexed by morphism id
  std::vector<int> ident;      // object id -> identity morphism id
  std::vector<int> comp;       // n_mor*n_mor flat, -1 where undefined
  std::vector<std::string> obj_label;  // optional, may be empty
  std::vector<std::string> mor_label;

  int n_mor() const { return static_cast<int>(msrc.size()); }
  int compose(int g, int f) const { return comp[static_cast<std::size_t>(g) * msrc.size() + f]; }
  void set_compose(int g, int f, int gf) { comp[static_cast<std::size_t>(g) * msrc.size() + f] = gf; }

  std::string oname(int o) const {
    if (o >= 0 && o < static_cast<int>(obj_label.size()) && !obj_label[o].empty())
      return obj_label[o];
    return "o" + std::to_string(o);
  }
  std::string mname(int m) const {
    if (m >= 0 && m < static_cast<int>(mor_label.size()) && !mor_label[m].empty())
      return mor_label[m];
    return "m" + std::to_string(m) + "(" + oname(msrc[m]) + "->" + oname(mtgt[m]) + ")";
  }

  // hom[a][b] built by finish(); sorted morphism ids.
  std::vector<std::vector<std::vector<int>>> hom;

  void finish() {
    hom.assign(n_obj, std::vector<std::vector<int>>(n_obj));
    for (int m = 0; m < n_mor(); ++m) hom[msrc[m]][mtgt[m]].push_back(m);
  }

  bool is_identity(int m) const { return ident[msrc[m]] == m && msrc[m] == mtgt[m]; }
};

using Cat = std::shared_ptr<const FiniteCategory>;

inline Cat share(FiniteCategory c) {
  c.finish();
  return std::make_shared<const FiniteCategory>(std::move(c));
}

// Full axiom check: typing of the table, identity laws, associativity on all
// composable triples.  First violation wins and names its witnesses.
inline CheckResult validate_category(const FiniteCategory& c) {
  const int nm = c.n_mor();
  if (static_cast<int>(c.mtgt.size()) != nm || static_cast<int>(c.comp.size()) != nm * nm)
    return fail("malformed", "table sizes disagree");
  if (static_cast<int>(c.ident.size()) != c.n_obj)
    return fail("missing-identity", "identity table has wrong length");
  for (int m = 0; m < nm; ++m) {
    if (c.msrc[m] < 0 || c.msrc[m] >= c.n_obj || c.mtgt[m] < 0 || c.mtgt[m] >= c.n_obj)
      return fail("malformed", "morphism " + std::to_string(m) + " has out-of-range endpoints");
  }
  for (int o = 0; o < c.n_obj; ++o) {
    const int e = c.ident[o];
    if (e < 0 || e >= nm || c.msrc[e] != o || c.mtgt[e] != o)
      return fail("missing-identity", "object " + c.oname(o) + " has no identity loop");
  }
  for (int g = 0; g < nm; ++g)
    for (int f = 0; f < nm; ++f) {
      const int gf = c.compose(g, f);
      const bool composable = c.mtgt[f] == c.msrc[g];
      if (!composable) {
        if (gf != -1)
          return fail("ill-typed-composite",
                      "compose(" + c.mname(g) + ", " + c.mname(f) + ") defined on non-composable pair");
        continue;
      }
      if (gf < 0 || gf >= nm)
        return fail("ill-typed-composite",
                    "compose(" + c.mname(g) + ", " + c.mname(f) + ") missing");
      if (c.msrc[gf] != c.msrc[f] || c.mtgt[gf] != c.mtgt[g])
        return fail("ill-typed-composite",
                    "compose(" + c.mname(g) + ", " + c.mname(f) + ") = " + c.mname(gf) +
                        " has wrong endpoints");
    }
  for (int f = 0; f < nm; ++f) {
    if (c.compose(f, c.ident[c.msrc[f]]) != f || c.compose(c.ident[c.mtgt[f]], f) != f)
      return fail("identity-law", "identity law fails at " + c.mname(f));
  }
  for (int h = 0; h < nm; ++h)
    for (int g = 0; g < nm; ++g) {
      if (c.mtgt[g] != c.msrc[h]) continue;
      const int hg = c.compose(h, g);
      for (int f = 0; f < nm; ++f) {
        if (c.mtgt[f] != c.msrc[g]) continue;
        if (c.compose(hg, f) != c.compose(h, c.compose(g, f)))
          return fail("non-associative",
                      "triple (" + c.mname(f) + ", " + c.mname(g) + ", " + c.mname(h) + ")");
      }
    }
  return pass();
}

inline Cat validated(FiniteCategory c) {
  require_ok(validate_category(c));
  return share(std::move(c));
}

// ---------------------------------------------------------------------------
// Builders.
// ---------------------------------------------------------------------------

// Builds a category from a set of objects and hom-sets described by opaque
// keys; `comp` must give the key of the composite.  Used by every concrete
// construction below so composition tables are assembled in one place.
template <typename MorKey>
struct CatBuilder {
  int n_obj = 0;
  std::vector<MorKey> mors;
  std::vector<int> msrc, mtgt;
  std::map<MorKey, int> index;

  int add(int src, int tgt, const MorKey& k) {
    auto it = index.find(k);
    if (it != index.end()) return it->second;
    const int id = static_cast<int>(mors.size());
    mors.push_back(k);
    msrc.push_back(src);
    mtgt.push_back(tgt);
    index.emplace(k, id);
    return id;
  }

  FiniteCategory build(const std::vector<int>& idents,
                       const std::function<MorKey(const MorKey&, const MorKey&)>& comp) const {
    FiniteCategory c;
    c.n_obj = n_obj;
    c.msrc = msrc;
    c.mtgt = mtgt;
    c.ident = idents;
    const int nm = static_cast<int>(mors.size());
    c.comp.assign(static_cast<std::size_t>(nm) * nm, -1);
    for (int g = 0; g < nm; ++g)
      for (int f = 0; f < nm; ++f) {
        if (mtgt[f] != msrc[g]) continue;
        auto it = index.find(comp(mors[g], mors[f]));
        if (it == index.end())
          throw ValidationError({"ill-typed-composite", "composite escapes the morphism set"});
        c.comp[static_cast<std::size_t>(g) * nm + f] = it->second;
      }
    return c;
  }
};

// The poset category [n].
inline Cat ordinal_cat(int n) {
  FiniteCategory c;
  c.n_obj = n + 1;
  std::vector<std::vector<int>> id_of(n + 1, std::vector<int>(n + 1, -1));
  for (int i = 0; i <= n; ++i)
    for (int j = i; j <= n; ++j) {
      id_of[i][j] = c.n_mor();
      c.msrc.push_back(i);
      c.mtgt.push_back(j);
      c.mor_label.push_back(std::to_string(i) + "<=" + std::to_string(j));
    }
  c.ident.resize(n + 1);
  for (int i = 0; i <= n; ++i) c.ident[i] = id_of[i][i];
  const int nm = c.n_mor();
  c.comp.assign(static_cast<std::size_t>(nm) * nm, -1);
  for (int g = 0; g < nm; ++g)
    for (int f = 0; f < nm; ++f)
      if (c.mtgt[f] == c.msrc[g]) c.comp[static_cast<std::size_t>(g) * nm + f] = id_of[c.msrc[f]][c.mtgt[g]];
  for (int i = 0; i <= n; ++i) c.obj_label.push_back(std::to_string(i));
  return share(std::move(c));
}

struct ProductCat {
  Cat cat;
  // object/morphism pairings
  std::vector<std::pair<int, int>> obj_pairs, mor_pairs;
  std::vector<std::vector<int>> obj_of;  // [a][b] -> product object id
  std::vector<std::vector<int>> mor_of;  // [f][g] -> product morphism id
};

inline ProductCat product_cat(const Cat& a, const Cat& b) {
  ProductCat p;
  FiniteCategory c;
  c.n_obj = a->n_obj * b->n_obj;
  p.obj_of.assign(a->n_obj, std::vector<int>(b->n_obj));
  for (int i = 0; i < a->n_obj; ++i)
    for (int j = 0; j < b->n_obj; ++j) {
      p.obj_of[i][j] = i * b->n_obj + j;
      p.obj_pairs.emplace_back(i, j);
      c.obj_label.push_back("(" + a->oname(i) + "," + b->oname(j) + ")");
    }
  p.mor_of.assign(a->n_mor(), std::vector<int>(b->n_mor()));
  for (int f = 0; f < a->n_mor(); ++f)
    for (int g = 0; g < b->n_mor(); ++g) {
      p.mor_of[f][g] = c.n_mor();
      p.mor_pairs.emplace_back(f, g);
      c.msrc.push_back(p.obj_of[a->msrc[f]][b->msrc[g]]);
      c.mtgt.push_back(p.obj_of[a->mtgt[f]][b->mtgt[g]]);
    }
  c.ident.resize(c.n_obj);
  for (int i = 0; i < a->n_obj; ++i)
    for (int j = 0; j < b->n_obj; ++j)
      c.ident[p.obj_of[i][j]] = p.mor_of[a->ident[i]][b->ident[j]];
  const int nm = c.n_mor();
  c.comp.assign(static_cast<std::size_t>(nm) * nm, -1);
  for (int g = 0; g < nm; ++g)
    for (int f = 0; f < nm; ++f) {
      if (c.mtgt[f] != c.msrc[g]) continue;
      const auto [gf1, gf2] = p.mor_pairs[g];
      const auto [ff1, ff2] = p.mor_pairs[f];
      c.comp[static_cast<std::size_t>(g) * nm + f] = p.mor_of[a->compose(gf1, ff1)][b->compose(gf2, ff2)];
    }
  p.cat = share(std::move(c));
  return p;
}

// Arrow poset Ar[n]: pairs (i,j) with 0<=i<=j<=n, ordered componentwise.
struct ArrowCat {
  Cat cat;
  std::vector<std::pair<int, int>> objs;              // id -> (i,j)
  std::map<std::pair<int, int>, int> obj_of;          // (i,j) -> id
  int mor(int from, int to) const;                    // defined below via poset
  std::map<std::pair<int, int>, int> mor_of;          // (from,to) object ids -> morphism id
};

inline ArrowCat arrow_cat(int n) {
  ArrowCat a;
  FiniteCategory c;
  for (int i = 0; i <= n; ++i)
    for (int j = i; j <= n; ++j) {
      a.obj_of[{i, j}] = static_cast<int>(a.objs.size());
      a.objs.emplace_back(i, j);
      c.obj_label.push_back(std::to_string(i) + std::to_string(j));
    }
  c.n_obj = static_cast<int>(a.objs.size());
  for (int x = 0; x < c.n_obj; ++x)
    for (int y = 0; y < c.n_obj; ++y) {
      const auto [i, j] = a.objs[x];
      const auto [k, l] = a.objs[y];
      if (i <= k && j <= l) {
        a.mor_of[{x, y}] = c.n_mor();
        c.msrc.push_back(x);
        c.mtgt.push_back(y);
      }
    }
  c.ident.resize(c.n_obj);
  for (int x = 0; x < c.n_obj; ++x) c.ident[x] = a.mor_of[{x, x}];
  const int nm = c.n_mor();
  c.comp.assign(static_cast<std::size_t>(nm) * nm, -1);
  for (int g = 0; g < nm; ++g)
    for (int f = 0; f < nm; ++f)
      if (c.mtgt[f] == c.msrc[g])
        c.comp[static_cast<std::size_t>(g) * nm + f] = a.mor_of.at({c.msrc[f], c.mtgt[g]});
  a.cat = share(std::move(c));
  return a;
}

// Morphisms not factoring as a composite of two non-identities (Hasse edges
// for posets, generators generally).
inline std::vector<int> indecomposable_morphisms(const Cat& c) {
  std::vector<int> out;
  for (int m = 0; m < c->n_mor(); ++m) {
    if (c->is_identity(m)) continue;
    bool dec = false;
    for (int g = 0; g < c->n_mor() && !dec; ++g) {
      if (c->is_identity(g) || c->mtgt[g] != c->mtgt[m]) continue;
      for (int f : c->hom[c->msrc[m]][c->msrc[g]]) {
        if (c->is_identity(f)) continue;
        if (c->compose(g, f) == m) {
          dec = true;
          break;
        }
      }
    }
    if (!dec) out.push_back(m);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Functors and natural transformations.
// ---------------------------------------------------------------------------

struct CatFunctor {
  Cat dom, cod;
  std::vector<int> ob;   // object map
  std::vector<int> mor;  // morphism map
};

inline CheckResult check_functor(const CatFunctor& F) {
  const auto& c = *F.dom;
  const auto& d = *F.cod;
  if (static_cast<int>(F.ob.size()) != c.n_obj || static_cast<int>(F.mor.size()) != c.n_mor())
    return fail("malformed", "functor tables have wrong length");
  for (int m = 0; m < c.n_mor(); ++m) {
    const int fm = F.mor[m];
    if (fm < 0 || fm >= d.n_mor()) return fail("malformed", "image morphism out of range");
    if (d.msrc[fm] != F.ob[c.msrc[m]] || d.mtgt[fm] != F.ob[c.mtgt[m]])
      return fail("src-tgt", "functor breaks endpoints at " + c.mname(m));
  }
  for (int o = 0; o < c.n_obj; ++o)
    if (F.mor[c.ident[o]] != d.ident[F.ob[o]])
      return fail("identity", "functor breaks identity at " + c.oname(o));
  for (int g = 0; g < c.n_mor(); ++g)
    for (int f = 0; f < c.n_mor(); ++f) {
      if (c.mtgt[f] != c.msrc[g]) continue;
      if (F.mor[c.compose(g, f)] != d.compose(F.mor[g], F.mor[f]))
        return fail("composition",
                    "functor breaks composition at (" + c.mname(f) + ", " + c.mname(g) + ")");
    }
  return pass();
}

inline CatFunctor identity_functor(const Cat& c) {
  CatFunctor F{c, c, {}, {}};
  F.ob.resize(c->n_obj);
  std::iota(F.ob.begin(), F.ob.end(), 0);
  F.mor.resize(c->n_mor());
  std::iota(F.mor.begin(), F.mor.end(), 0);
  return F;
}

// All functors C -> D by constraint-propagated backtracking: object
// assignment first, then images of indecomposable generators in id order,
// with forced propagation of composites, then a full relation check.
inline std::vector<CatFunctor> enumerate_functors(const Cat& c, const Cat& d, const Budget& budget) {
  std::vector<CatFunctor> out;
  const int nm = c->n_mor();
  // Indecomposables first; remaining non-identities appended so categories
  // where nothing is indecomposable (e.g. groups) are still covered.
  auto gens = indecomposable_morphisms(c);
  {
    std::vector<char> seen(nm, 0);
    for (int g : gens) seen[g] = 1;
    for (int m = 0; m < nm; ++m)
      if (!seen[m] && !c->is_identity(m)) gens.push_back(m);
  }

  std::vector<int> ob(c->n_obj, 0), mor(nm, -1);

  // Propagate: returns list of newly assigned morphisms, or nullopt on clash.
  auto propagate = [&](std::vector<int>& m, std::vector<int>& trail) -> bool {
    bool changed = true;
    while (changed) {
      changed = false;
      for (int g = 0; g < nm; ++g) {
        if (m[g] < 0) continue;
        for (int f = 0; f < nm; ++f) {
          if (m[f] < 0 || c->mtgt[f] != c->msrc[g]) continue;
          budget.tick();
          const int gf = c->compose(g, f);
          const int img = d->compose(m[g], m[f]);
          if (m[gf] < 0) {
            m[gf] = img;
            trail.push_back(gf);
            changed = true;
          } else if (m[gf] != img) {
            return false;
          }
        }
      }
    }
    return true;
  };

  std::function<void(std::size_t)> assign_gen = [&](std::size_t gi) {
    if (gi == gens.size()) {
      CatFunctor F{c, d, ob, mor};
      if (!check_functor(F)) out.push_back(std::move(F));
      return;
    }
    const int g = gens[gi];
    if (mor[g] >= 0) {  // already forced
      assign_gen(gi + 1);
      return;
    }
    for (int cand : d->hom[ob[c->msrc[g]]][ob[c->mtgt[g]]]) {
      budget.tick();
      std::vector<int> trail;
      mor[g] = cand;
      trail.push_back(g);
      if (propagate(mor, trail)) assign_gen(gi + 1);
      for (int t : trail) mor[t] = -1;
    }
  };

  std::vector<int> radix(c->n_obj, d->n_obj);
  for_each_tuple(radix, [&](const std::vector<int>& digits) {
    budget.tick();
    ob = digits;
    std::fill(mor.begin(), mor.end(), -1);
    for (int o = 0; o < c->n_obj; ++o) mor[c->ident[o]] = d->ident[ob[o]];
    std::vector<int> trail;
    if (propagate(mor, trail)) assign_gen(0);
    return true;
  });
  return out;
}

// Natural transformations F => G as component tables.
inline std::vector<std::vector<int>> enumerate_nat_trans(const CatFunctor& F, const CatFunctor& G,
                                                         const Budget& budget) {
  const auto& c = *F.dom;
  const auto& d = *F.cod;
  std::vector<std::vector<int>> out;
  std::vector<int> comp(c.n_obj, -1);
  std::function<void(int)> go = [&](int o) {
    if (o == c.n_obj) {
      out.push_back(comp);
      return;
    }
    for (int cand : d.hom[F.ob[o]][G.ob[o]]) {
      budget.tick();
      bool ok = true;
      for (int m = 0; m < c.n_mor() && ok; ++m) {
        if (c.msrc[m] != o && c.mtgt[m] != o) continue;
        const int s = c.msrc[m], t = c.mtgt[m];
        if (comp[s] < 0 && s != o) continue;
        if (comp[t] < 0 && t != o) continue;
        const int cs = s == o ? cand : comp[s];
        const int ct = t == o ? cand : comp[t];
        if (cs < 0 || ct < 0) continue;
        if (d.compose(ct, F.mor[m]) != d.compose(G.mor[m], cs)) ok = false;
      }
      if (!ok) continue;
      comp[o] = cand;
      go(o + 1);
      comp[o] = -1;
    }
  };
  go(0);
  return out;
}

// The functor category Fun(C,D) materialized as a FiniteCategory.
struct FunctorCat {
  Cat cat;
  std::vector<CatFunctor> objs;
  std::vector<int> mor_src, mor_tgt;
  std::vector<std::vector<int>> components;  // morphism id -> component table
};

inline FunctorCat functor_category(const Cat& c, const Cat& d, const Budget& budget) {
  FunctorCat fc;
  fc.objs = enumerate_functors(c, d, budget);
  FiniteCategory cat;
  cat.n_obj = static_cast<int>(fc.objs.size());
  std::map<std::pair<std::pair<int, int>, std::vector<int>>, int> midx;
  for (int x = 0; x < cat.n_obj; ++x)
    for (int y = 0; y < cat.n_obj; ++y) {
      for (auto& nt : enumerate_nat_trans(fc.objs[x], fc.objs[y], budget)) {
        midx[{{x, y}, nt}] = cat.n_mor();
        cat.msrc.push_back(x);
        cat.mtgt.push_back(y);
        fc.components.push_back(nt);
      }
    }
  cat.ident.resize(cat.n_obj);
  for (int x = 0; x < cat.n_obj; ++x) {
    std::vector<int> idc(c->n_obj);
    for (int o = 0; o < c->n_obj; ++o) idc[o] = d->ident[fc.objs[x].ob[o]];
    cat.ident[x] = midx.at({{x, x}, idc});
  }
  const int nm = cat.n_mor();
  cat.comp.assign(static_cast<std::size_t>(nm) * nm, -1);
  for (int g = 0; g < nm; ++g)
    for (int f = 0; f < nm; ++f) {
      if (cat.mtgt[f] != cat.msrc[g]) continue;
      budget.tick();
      std::vector<int> gc(c->n_obj);
      for (int o = 0; o < c->n_obj; ++o)
        gc[o] = d->compose(fc.components[g][o], fc.components[f][o]);
      cat.comp[static_cast<std::size_t>(g) * nm + f] = midx.at({{cat.msrc[f], cat.mtgt[g]}, gc});
    }
  fc.mor_src = cat.msrc;
  fc.mor_tgt = cat.mtgt;
  fc.cat = share(std::move(cat));
  return fc;
}

// ---------------------------------------------------------------------------
// Limits: pullbacks, pushouts, bicartesian squares.  A missing (co)limit is a
// value, not an error.
// ---------------------------------------------------------------------------

// A commuting square in a host category:
//      a --top--> b
//      |          |
//    left       right
//      v          v
//      c --bot--> d
struct Square {
  int a, b, c, d;
  int top, left, right, bottom;
};

inline bool square_commutes(const FiniteCategory& h, const Square& s) {
  return h.compose(s.right, s.top) == h.compose(s.bottom, s.left);
}

// Cone over the cospan (f: b -> d <- c :g): (w, p: w->b, q: w->c) with f p = g q.
struct Cospan {
  int f, g;
};
struct Span {
  int f, g;
};  // f: a -> b, g: a -> c

// Is (w,p,q) a limit cone?  Checked against every competing cone.
inline bool is_pullback_cone(const FiniteCategory& h, const Cospan& cs, int p, int q,
                             const Budget& budget) {
  const int b = h.msrc[cs.f], c = h.msrc[cs.g];
  if (h.mtgt[p] != b || h.mtgt[q] != c || h.msrc[p] != h.msrc[q]) return false;
  if (h.compose(cs.f, p) != h.compose(cs.g, q)) return false;
  const int w = h.msrc[p];
  for (int x = 0; x < h.n_obj; ++x)
    for (int p2 : h.hom[x][b])
      for (int q2 : h.hom[x][c]) {
        budget.tick();
        if (h.compose(cs.f, p2) != h.compose(cs.g, q2)) continue;
        int found = -1;
        for (int u : h.hom[x][w]) {
          if (h.compose(p, u) == p2 && h.compose(q, u) == q2) {
            if (found >= 0) return false;  // not unique
            found = u;
          }
        }
        if (found < 0) return false;  // no mediating morphism
      }
  return true;
}

inline bool is_pushout_cocone(const FiniteCategory& h, const Span& sp, int p, int q,
                              const Budget& budget) {
  const int b = h.mtgt[sp.f], c = h.mtgt[sp.g];
  if (h.msrc[p] != b || h.msrc[q] != c || h.mtgt[p] != h.mtgt[q]) return false;
  if (h.compose(p, sp.f) != h.compose(q, sp.g)) return false;
  const int w = h.mtgt[p];
  for (int x = 0; x < h.n_obj; ++x)
    for (int p2 : h.hom[b][x])
      for (int q2 : h.hom[c][x]) {
        budget.tick();
        if (h.compose(p2, sp.f) != h.compose(q2, sp.g)) continue;
        int found = -1;
        for (int u : h.hom[w][x]) {
          if (h.compose(u, p) == p2 && h.compose(u, q) == q2) {
            if (found >= 0) return false;
            found = u;
          }
        }
        if (found < 0) return false;
      }
  return true;
}

struct LimitSquare {
  Square square;
  bool found = false;
};

// Exhaustive cone search; canonical choice = least corner object id, then
// least morphism ids.  Hom lists are id-sorted already.
inline LimitSquare pullback(const FiniteCategory& h, const Cospan& cs, const Budget& budget) {
  const int b = h.msrc[cs.f], c = h.msrc[cs.g], d = h.mtgt[cs.f];
  for (int w = 0; w < h.n_obj; ++w)
    for (int p : h.hom[w][b])
      for (int q : h.hom[w][c]) {
        budget.tick();
        if (h.compose(cs.f, p) != h.compose(cs.g, q)) continue;
        if (is_pullback_cone(h, cs, p, q, budget))
          return {Square{w, b, c, d, p, q, cs.f, cs.g}, true};
      }
  return {};
}

inline LimitSquare pushout(const FiniteCategory& h, const Span& sp, const Budget& budget) {
  const int a = h.msrc[sp.f], b = h.mtgt[sp.f], c = h.mtgt[sp.g];
  for (int w = 0; w < h.n_obj; ++w)
    for (int p : h.hom[b][w])
      for (int q : h.hom[c][w]) {
        budget.tick();
        if (h.compose(p, sp.f) != h.compose(q, sp.g)) continue;
        if (is_pushout_cocone(h, sp, p, q, budget))
          return {Square{a, b, c, w, sp.f, sp.g, p, q}, true};
      }
  return {};
}

struct BicartesianReport {
  bool commutes = false;
  bool cartesian = false;
  bool cocartesian = false;
  std::string witness;  // competing cone on failure
  bool bicartesian() const { return commutes && cartesian && cocartesian; }
};

// Decides pullback-ness and pushout-ness independently, as stated.
inline BicartesianReport is_bicartesian(const FiniteCategory& h, const Square& s, const Budget& budget) {
  BicartesianReport r;
  r.commutes = square_commutes(h, s);
  if (!r.commutes) {
    r.witness = "square does not commute";
    return r;
  }
  r.cartesian = is_pullback_cone(h, Cospan{s.right, s.bottom}, s.top, s.left, budget);
  r.cocartesian = is_pushout_cocone(h, Span{s.top, s.left}, s.right, s.bottom, budget);
  if (!r.cartesian || !r.cocartesian) {
    // regenerate a competing cone as witness
    if (!r.cartesian) {
      for (int x = 0; x < h.n_obj && r.witness.empty(); ++x)
        for (int p2 : h.hom[x][s.b])
          for (int q2 : h.hom[x][s.c]) {
            if (h.compose(s.right, p2) != h.compose(s.bottom, q2)) continue;
            int found = 0;
            for (int u : h.hom[x][s.a])
              if (h.compose(s.top, u) == p2 && h.compose(s.left, u) == q2) ++found;
            if (found != 1) {
              r.witness = "competing cone at " + h.oname(x) + " via (" + h.mname(p2) + ", " +
                          h.mname(q2) + "), " + std::to_string(found) + " mediating morphisms";
              return r;
            }
          }
    } else {
      r.witness = "pushout universal property fails";
    }
  }
  return r;
}

// ---------------------------------------------------------------------------
// Category isomorphism (used by invariants like tau1(NC) ~= C).
// ---------------------------------------------------------------------------

inline std::optional<CatFunctor> find_category_isomorphism(const Cat& c, const Cat& d,
                                                           const Budget& budget) {
  if (c->n_obj != d->n_obj || c->n_mor() != d->n_mor()) return std::nullopt;
  // object fingerprints: multiset of (|hom(x,y)|, |hom(y,x)|) plus endo size
  auto fingerprint = [](const Cat& k, int x) {
    std::vector<std::pair<int, int>> prof;
    for (int y = 0; y < k->n_obj; ++y)
      prof.emplace_back(static_cast<int>(k->hom[x][y].size()),
                        static_cast<int>(k->hom[y][x].size()));
    std::sort(prof.begin(), prof.end());
    return prof;
  };
  std::vector<std::vector<std::pair<int, int>>> fc(c->n_obj), fd(d->n_obj);
  for (int x = 0; x < c->n_obj; ++x) fc[x] = fingerprint(c, x);
  for (int x = 0; x < d->n_obj; ++x) fd[x] = fingerprint(d, x);

  std::vector<int> ob(c->n_obj, -1);
  std::vector<char> used(d->n_obj, 0);

  // try to extend object bijection to a morphism bijection
  std::function<std::optional<CatFunctor>()> finish = [&]() -> std::optional<CatFunctor> {
    std::vector<int> mor(c->n_mor(), -1);
    std::vector<char> musd(d->n_mor(), 0);
    std::function<bool(int)> go = [&](int m) -> bool {
      if (m == c->n_mor()) return true;
      for (int md : d->hom[ob[c->msrc[m]]][ob[c->mtgt[m]]]) {
        budget.tick();
        if (musd[md]) continue;
        // partial composition consistency
        bool ok = true;
        if (c->is_identity(m) != d->is_identity(md)) ok = false;
        for (int f = 0; f < m && ok; ++f) {
          if (mor[f] < 0) continue;
          if (c->mtgt[f] == c->msrc[m] && d->compose(md, mor[f]) != -1) {
            const int cf = c->compose(m, f);
            if (cf < m && mor[cf] >= 0 && mor[cf] != d->compose(md, mor[f])) ok = false;
          }
          if (ok && c->mtgt[m] == c->msrc[f]) {
            const int fc2 = c->compose(f, m);
            if (fc2 < m && mor[fc2] >= 0 && mor[fc2] != d->compose(mor[f], md)) ok = false;
          }
        }
        if (!ok) continue;
        mor[m] = md;
        musd[md] = 1;
        if (go(m + 1)) return true;
        mor[m] = -1;
        musd[md] = 0;
      }
      return false;
    };
    if (!go(0)) return std::nullopt;
    CatFunctor F{c, d, ob, mor};
    if (check_functor(F)) return std::nullopt;
    return F;
  };

  std::function<std::optional<CatFunctor>(int)> place = [&](int x) -> std::optional<CatFunctor> {
    if (x == c->n_obj) return finish();
    for (int y = 0; y < d->n_obj; ++y) {
      if (used[y] || fc[x] != fd[y]) continue;
      budget.tick();
      bool ok = true;
      for (int x2 = 0; x2 < x && ok; ++x2)
        if (c->hom[x2][x].size() != d->hom[ob[x2]][y].size() ||
            c->hom[x][x2].size() != d->hom[y][ob[x2]].size())
          ok = false;
      if (!ok) continue;
      ob[x] = y;
      used[y] = 1;
      if (auto r = place(x + 1)) return r;
      ob[x] = -1;
      used[y] = 0;
    }
    return std::nullopt;
  };
  return place(0);
}

}  // namespace sdot
