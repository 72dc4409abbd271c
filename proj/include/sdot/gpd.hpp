#pragma once

#include <unordered_map>

#include "sdot/fincat.hpp"

namespace sdot {

// ---------------------------------------------------------------------------
// Finite groupoids with on-demand hom-sets.
//
// Grid and mapping groupoids built later in the project can have thousands of
// objects whose full morphism tables would be quadratic; every algorithm here
// therefore works against an interface that enumerates Hom(x,y) lazily and
// exposes an isomorphism-invariant bucket key per object.  Morphisms are
// opaque payloads owned by the implementation.
// ---------------------------------------------------------------------------

struct GMor {
  int src = -1, tgt = -1;
  std::vector<std::int32_t> data;
  bool operator==(const GMor& o) const = default;
  bool operator<(const GMor& o) const {
    if (src != o.src) return src < o.src;
    if (tgt != o.tgt) return tgt < o.tgt;
    return data < o.data;
  }
};

class IGroupoid {
 public:
  virtual ~IGroupoid() = default;
  virtual int size() const = 0;
  // Iso-invariant bucket key: x ~= y implies key(x) == key(y).
  virtual std::uint64_t key(int x) const = 0;
  // Enumerate Hom(x,y) in a canonical order; emit returning false stops early.
  // Returns false iff stopped early.
  virtual bool homs(int x, int y, const std::function<bool(const GMor&)>& emit) const = 0;
  virtual GMor identity(int x) const = 0;
  virtual GMor compose(const GMor& g, const GMor& f) const = 0;  // g after f
  virtual GMor inverse(const GMor& f) const = 0;
  virtual std::string describe(int x) const { return "#" + std::to_string(x); }
};

using Gpd = std::shared_ptr<const IGroupoid>;

inline std::vector<GMor> hom_vec(const IGroupoid& g, int x, int y) {
  std::vector<GMor> out;
  g.homs(x, y, [&](const GMor& m) {
    out.push_back(m);
    return true;
  });
  return out;
}

inline std::size_t hom_count(const IGroupoid& g, int x, int y) {
  std::size_t n = 0;
  g.homs(x, y, [&](const GMor&) {
    ++n;
    return true;
  });
  return n;
}

inline std::optional<GMor> first_hom(const IGroupoid& g, int x, int y) {
  std::optional<GMor> out;
  g.homs(x, y, [&](const GMor& m) {
    out = m;
    return false;
  });
  return out;
}

inline bool iso_exists(const IGroupoid& g, int x, int y) {
  if (g.key(x) != g.key(y)) return false;
  return first_hom(g, x, y).has_value();
}

inline std::size_t total_mor_count(const IGroupoid& g) {
  std::size_t n = 0;
  for (int x = 0; x < g.size(); ++x)
    for (int y = 0; y < g.size(); ++y)
      if (g.key(x) == g.key(y)) n += hom_count(g, x, y);
  return n;
}

// Multi-component morphism payload encoding used by pullbacks and products.
inline std::vector<std::int32_t> encode_parts(const std::vector<GMor>& parts) {
  std::vector<std::int32_t> out;
  for (const auto& p : parts) {
    out.push_back(static_cast<std::int32_t>(p.data.size()));
    out.insert(out.end(), p.data.begin(), p.data.end());
  }
  return out;
}

inline std::vector<std::vector<std::int32_t>> decode_parts(const std::vector<std::int32_t>& data,
                                                           int n) {
  std::vector<std::vector<std::int32_t>> out;
  out.reserve(n);
  std::size_t i = 0;
  for (int k = 0; k < n; ++k) {
    const int len = data[i++];
    out.emplace_back(data.begin() + i, data.begin() + i + len);
    i += len;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Table-backed groupoids (small, fully materialized).
// ---------------------------------------------------------------------------

class TableGroupoid final : public IGroupoid {
 public:
  int n_obj = 0;
  std::vector<int> msrc, mtgt, minv, ident;
  std::vector<int> comp;  // flat n_mor * n_mor, -1 undefined
  std::vector<std::vector<std::vector<int>>> hom;  // [x][y] -> morphism ids
  std::vector<std::string> labels;

  int n_mor() const { return static_cast<int>(msrc.size()); }
  int size() const override { return n_obj; }
  std::uint64_t key(int) const override { return 0; }
  bool homs(int x, int y, const std::function<bool(const GMor&)>& emit) const override {
    for (int m : hom[x][y])
      if (!emit(GMor{x, y, {m}})) return false;
    return true;
  }
  GMor identity(int x) const override { return GMor{x, x, {ident[x]}}; }
  GMor compose(const GMor& g, const GMor& f) const override {
    return GMor{f.src, g.tgt, {comp[static_cast<std::size_t>(g.data[0]) * msrc.size() + f.data[0]]}};
  }
  GMor inverse(const GMor& f) const override { return GMor{f.tgt, f.src, {minv[f.data[0]]}}; }
  std::string describe(int x) const override {
    return x < static_cast<int>(labels.size()) && !labels[x].empty() ? labels[x]
                                                                     : "#" + std::to_string(x);
  }

  void finish() {
    hom.assign(n_obj, std::vector<std::vector<int>>(n_obj));
    for (int m = 0; m < n_mor(); ++m) hom[msrc[m]][mtgt[m]].push_back(m);
  }
};

// A table groupoid viewed as a finite category.
inline Cat groupoid_as_category(const TableGroupoid& g) {
  FiniteCategory c;
  c.n_obj = g.n_obj;
  c.msrc = g.msrc;
  c.mtgt = g.mtgt;
  c.ident = g.ident;
  c.comp = g.comp;
  c.obj_label = g.labels;
  return share(std::move(c));
}

// Invertibility decided by searching for a two-sided inverse.
inline std::vector<char> invertible_morphisms(const FiniteCategory& c) {
  std::vector<char> inv(c.n_mor(), 0);
  for (int m = 0; m < c.n_mor(); ++m)
    for (int w : c.hom[c.mtgt[m]][c.msrc[m]])
      if (c.compose(w, m) == c.ident[c.msrc[m]] && c.compose(m, w) == c.ident[c.mtgt[m]]) {
        inv[m] = 1;
        break;
      }
  return inv;
}

// Maximal subgroupoid of a category: all objects, exactly the invertible
// morphisms.  Also usable restricted to a full object subset.
inline std::shared_ptr<TableGroupoid> max_subgroupoid_on(const Cat& c,
                                                         const std::vector<int>& objects) {
  auto g = std::make_shared<TableGroupoid>();
  g->n_obj = static_cast<int>(objects.size());
  std::vector<int> oidx(c->n_obj, -1);
  for (int i = 0; i < g->n_obj; ++i) {
    oidx[objects[i]] = i;
    g->labels.push_back(c->oname(objects[i]));
  }
  const auto inv_flag = invertible_morphisms(*c);
  std::vector<int> midx(c->n_mor(), -1);
  for (int m = 0; m < c->n_mor(); ++m) {
    if (!inv_flag[m] || oidx[c->msrc[m]] < 0 || oidx[c->mtgt[m]] < 0) continue;
    midx[m] = g->n_mor();
    g->msrc.push_back(oidx[c->msrc[m]]);
    g->mtgt.push_back(oidx[c->mtgt[m]]);
  }
  g->ident.resize(g->n_obj);
  for (int i = 0; i < g->n_obj; ++i) g->ident[i] = midx[c->ident[objects[i]]];
  std::vector<int> back(g->n_mor());
  for (int m = 0; m < c->n_mor(); ++m)
    if (midx[m] >= 0) back[midx[m]] = m;
  const int nm = g->n_mor();
  g->comp.assign(static_cast<std::size_t>(nm) * nm, -1);
  g->minv.resize(nm);
  for (int a = 0; a < nm; ++a) {
    for (int b = 0; b < nm; ++b)
      if (g->mtgt[b] == g->msrc[a]) {
        const int cab = c->compose(back[a], back[b]);
        g->comp[static_cast<std::size_t>(a) * nm + b] = midx[cab];
      }
    for (int w : c->hom[c->mtgt[back[a]]][c->msrc[back[a]]])
      if (c->compose(w, back[a]) == c->ident[c->msrc[back[a]]] &&
          c->compose(back[a], w) == c->ident[c->mtgt[back[a]]]) {
        g->minv[a] = midx[w];
        break;
      }
  }
  g->finish();
  return g;
}

inline Gpd max_subgroupoid(const Cat& c) {
  std::vector<int> all(c->n_obj);
  std::iota(all.begin(), all.end(), 0);
  return max_subgroupoid_on(c, all);
}

inline Gpd discrete_groupoid(int n) {
  auto g = std::make_shared<TableGroupoid>();
  g->n_obj = n;
  g->msrc.resize(n);
  g->mtgt.resize(n);
  g->minv.resize(n);
  g->ident.resize(n);
  std::iota(g->msrc.begin(), g->msrc.end(), 0);
  g->mtgt = g->msrc;
  g->minv.assign(n, 0);
  std::iota(g->minv.begin(), g->minv.end(), 0);
  g->ident = g->minv;
  g->comp.assign(static_cast<std::size_t>(n) * n, -1);
  for (int i = 0; i < n; ++i) g->comp[static_cast<std::size_t>(i) * n + i] = i;
  g->finish();
  return g;
}

// The free isomorphism groupoid I: two objects, one iso between them.
inline Gpd free_iso_groupoid() {
  auto g = std::make_shared<TableGroupoid>();
  g->n_obj = 2;
  g->msrc = {0, 1, 0, 1};
  g->mtgt = {0, 1, 1, 0};
  g->ident = {0, 1};
  g->minv = {0, 1, 3, 2};
  const int nm = 4;
  g->comp.assign(nm * nm, -1);
  auto set = [&](int a, int b, int r) { g->comp[a * nm + b] = r; };
  set(0, 0, 0);
  set(1, 1, 1);
  set(2, 0, 2);
  set(1, 2, 2);
  set(3, 1, 3);
  set(0, 3, 3);
  set(3, 2, 0);
  set(2, 3, 1);
  g->finish();
  return g;
}

// Sanity contract for the two-object iso groupoid.
inline CheckResult check_free_iso(const Gpd& g) {
  if (g->size() != 2) return fail("free-iso", "object count");
  std::size_t n = 0;
  for (int x = 0; x < 2; ++x)
    for (int y = 0; y < 2; ++y) n += hom_count(*g, x, y);
  if (n != 4) return fail("free-iso", "morphism count");
  auto u = first_hom(*g, 0, 1);
  if (!u) return fail("free-iso", "missing connecting iso");
  if (!(g->compose(g->inverse(*u), *u) == g->identity(0)))
    return fail("free-iso", "inverse law");
  return pass();
}

// ---------------------------------------------------------------------------
// Groupoid functors.
// ---------------------------------------------------------------------------

struct GFunctor {
  Gpd dom, cod;
  std::function<int(int)> ob;
  std::function<GMor(const GMor&)> mor;
  std::string name;
  // optional payload-only image, for hot paths that compare morphisms whose
  // endpoints are already forced
  std::function<std::vector<std::int32_t>(const GMor&)> mor_data;
};

inline std::vector<std::int32_t> mor_payload(const GFunctor& f, const GMor& m) {
  return f.mor_data ? f.mor_data(m) : f.mor(m).data;
}

inline GFunctor identity_gfunctor(const Gpd& g) {
  return GFunctor{g, g, [](int x) { return x; }, [](const GMor& m) { return m; }, "id"};
}

inline GFunctor compose_gfunctors(const GFunctor& g, const GFunctor& f) {
  return GFunctor{f.dom, g.cod, [g, f](int x) { return g.ob(f.ob(x)); },
                  [g, f](const GMor& m) { return g.mor(f.mor(m)); }, g.name + "∘" + f.name};
}

// Spot check functoriality on sampled composable pairs.
inline CheckResult check_gfunctor(const GFunctor& F, const Budget& budget, int max_samples = 64) {
  const auto& D = *F.dom;
  int samples = 0;
  for (int x = 0; x < D.size() && samples < max_samples; ++x) {
    const GMor idx = D.identity(x);
    if (!(F.mor(idx) == F.cod->identity(F.ob(x))))
      return fail("functor-identity", "at object " + D.describe(x));
    for (int y = 0; y < D.size() && samples < max_samples; ++y) {
      if (D.key(x) != D.key(y)) continue;
      auto hx = hom_vec(D, x, y);
      for (const auto& f : hx) {
        budget.tick();
        const GMor Ff = F.mor(f);
        if (Ff.src != F.ob(x) || Ff.tgt != F.ob(y))
          return fail("functor-endpoints", "at " + D.describe(x) + "->" + D.describe(y));
        auto hy = hom_vec(D, y, x);
        for (const auto& g : hy) {
          budget.tick();
          if (!(F.mor(D.compose(g, f)) == F.cod->compose(F.mor(g), Ff)))
            return fail("functor-composition", "at a pair over " + D.describe(x));
          if (++samples >= max_samples) break;
        }
        if (++samples >= max_samples) break;
      }
    }
  }
  return pass();
}

// ---------------------------------------------------------------------------
// pi0, automorphism groups, group isomorphism.
// ---------------------------------------------------------------------------

struct Pi0 {
  std::vector<int> comp;  // object -> component index
  std::vector<int> reps;  // component -> least object id
  int count() const { return static_cast<int>(reps.size()); }
};

inline Pi0 pi0(const IGroupoid& g, const Budget& budget) {
  Pi0 p;
  p.comp.assign(g.size(), -1);
  std::unordered_map<std::uint64_t, std::vector<int>> reps_by_key;
  for (int x = 0; x < g.size(); ++x) {
    auto& cands = reps_by_key[g.key(x)];
    int found = -1;
    for (int r : cands) {
      budget.tick();
      if (first_hom(g, x, p.reps[r]).has_value()) {
        found = r;
        break;
      }
    }
    if (found < 0) {
      found = p.count();
      p.reps.push_back(x);
      cands.push_back(found);
    }
    p.comp[x] = found;
  }
  return p;
}

struct GroupTable {
  int n = 0;
  std::vector<int> mul;  // n*n
  std::vector<int> inv, order;
  std::vector<GMor> elems;
};

inline GroupTable aut_group(const IGroupoid& g, int x, const Budget& budget) {
  GroupTable t;
  t.elems = hom_vec(g, x, x);
  t.n = static_cast<int>(t.elems.size());
  std::map<GMor, int> idx;
  for (int i = 0; i < t.n; ++i) idx[t.elems[i]] = i;
  t.mul.assign(static_cast<std::size_t>(t.n) * t.n, -1);
  t.inv.resize(t.n);
  for (int a = 0; a < t.n; ++a) {
    for (int b = 0; b < t.n; ++b) {
      budget.tick();
      t.mul[static_cast<std::size_t>(a) * t.n + b] = idx.at(g.compose(t.elems[a], t.elems[b]));
    }
    t.inv[a] = idx.at(g.inverse(t.elems[a]));
  }
  t.order.assign(t.n, 0);
  const int e = idx.at(g.identity(x));
  for (int a = 0; a < t.n; ++a) {
    int cur = a, k = 1;
    while (cur != e) {
      cur = t.mul[static_cast<std::size_t>(cur) * t.n + a];
      ++k;
    }
    t.order[a] = k;
  }
  return t;
}

// Exhaustive bijection search with element-order pruning.
inline bool groups_isomorphic(const GroupTable& a, const GroupTable& b, const Budget& budget) {
  if (a.n != b.n) return false;
  auto prof = [](const GroupTable& t) {
    auto v = t.order;
    std::sort(v.begin(), v.end());
    return v;
  };
  if (prof(a) != prof(b)) return false;
  std::vector<int> img(a.n, -1);
  std::vector<char> used(b.n, 0);
  std::function<bool(int)> go = [&](int x) -> bool {
    if (x == a.n) return true;
    for (int y = 0; y < b.n; ++y) {
      if (used[y] || a.order[x] != b.order[y]) continue;
      budget.tick();
      bool ok = true;
      for (int z = 0; z < x && ok; ++z) {
        const int xz = a.mul[static_cast<std::size_t>(x) * a.n + z];
        const int zx = a.mul[static_cast<std::size_t>(z) * a.n + x];
        if (xz < x && img[xz] != b.mul[static_cast<std::size_t>(y) * b.n + img[z]]) ok = false;
        if (ok && zx < x && img[zx] != b.mul[static_cast<std::size_t>(img[z]) * b.n + y]) ok = false;
      }
      if (!ok) continue;
      img[x] = y;
      used[y] = 1;
      if (go(x + 1)) return true;
      img[x] = -1;
      used[y] = 0;
    }
    return false;
  };
  return go(0);
}

// ---------------------------------------------------------------------------
// Equivalences of groupoids.
//
// F is an equivalence iff it is essentially surjective, injective on pi0, and
// bijective on automorphisms at one representative per component (for
// groupoids the latter two together are equivalent to full faithfulness).
// ---------------------------------------------------------------------------

struct EquivReport {
  bool ok = false;
  std::string reason;   // failed property
  std::string witness;  // offending object or hom-pair
};

inline EquivReport is_equivalence(const GFunctor& F, const Budget& budget) {
  const auto& D = *F.dom;
  const auto& C = *F.cod;
  const Pi0 pd = pi0(D, budget);
  const Pi0 pc = pi0(C, budget);

  std::vector<int> image_comp(pd.count());
  for (int i = 0; i < pd.count(); ++i) image_comp[i] = pc.comp[F.ob(pd.reps[i])];

  std::vector<char> hit(pc.count(), 0);
  for (int i : image_comp) hit[i] = 1;
  for (int j = 0; j < pc.count(); ++j)
    if (!hit[j])
      return {false, "not essentially surjective",
              "no object maps into the component of " + C.describe(pc.reps[j])};

  for (int i = 0; i < pd.count(); ++i)
    for (int j = 0; j < i; ++j)
      if (image_comp[i] == image_comp[j])
        return {false, "not faithful on pi0",
                "hom(" + D.describe(pd.reps[j]) + ", " + D.describe(pd.reps[i]) +
                    ") is empty but the images are isomorphic"};

  for (int i = 0; i < pd.count(); ++i) {
    const int x = pd.reps[i];
    const int fx = F.ob(x);
    auto auts = hom_vec(D, x, x);
    std::vector<GMor> images;
    for (const auto& a : auts) {
      budget.tick();
      images.push_back(F.mor(a));
    }
    std::sort(images.begin(), images.end());
    if (std::adjacent_find(images.begin(), images.end()) != images.end())
      return {false, "not faithful", "two automorphisms of " + D.describe(x) + " share an image"};
    const std::size_t target = hom_count(C, fx, fx);
    if (images.size() != target)
      return {false, "not full",
              "Aut(" + D.describe(x) + ") has " + std::to_string(images.size()) +
                  " images but Aut of the image has " + std::to_string(target)};
  }
  return {true, "", ""};
}

// ---------------------------------------------------------------------------
// Isofibrations: every iso out of an image lifts strictly.
// ---------------------------------------------------------------------------

struct IsoFibReport {
  bool ok = false;
  std::string witness;  // object + unliftable iso
};

inline IsoFibReport is_isofibration(const GFunctor& F, const Budget& budget) {
  const auto& D = *F.dom;
  const auto& C = *F.cod;
  // fibers of the object map
  std::unordered_map<int, std::vector<int>> fiber;
  for (int x = 0; x < D.size(); ++x) fiber[F.ob(x)].push_back(x);
  // cod objects bucketed by key for candidate targets
  std::unordered_map<std::uint64_t, std::vector<int>> by_key;
  for (int h = 0; h < C.size(); ++h) by_key[C.key(h)].push_back(h);

  for (int g = 0; g < D.size(); ++g) {
    const int fg = F.ob(g);
    for (int h : by_key[C.key(fg)]) {
      auto fit = fiber.find(h);
      bool any_phi_failed = false;
      std::string phi_desc;
      C.homs(fg, h, [&](const GMor& phi) {
        budget.tick();
        bool lifted = false;
        if (fit != fiber.end()) {
          for (int g2 : fit->second) {
            if (D.key(g) != D.key(g2)) continue;
            D.homs(g, g2, [&](const GMor& psi) {
              budget.tick();
              if (F.mor(psi) == phi) {
                lifted = true;
                return false;
              }
              return true;
            });
            if (lifted) break;
          }
        }
        if (!lifted) {
          any_phi_failed = true;
          phi_desc = "iso " + C.describe(fg) + " ~ " + C.describe(h) + " out of the image of " +
                     D.describe(g);
          return false;
        }
        return true;
      });
      if (any_phi_failed) return {false, phi_desc};
    }
  }
  return {true, ""};
}

// ---------------------------------------------------------------------------
// Strict and 2-pullbacks, products.
// ---------------------------------------------------------------------------

class StrictPullbackGroupoid final : public IGroupoid {
 public:
  GFunctor F, G;  // cospan F: D -> B <- E :G
  std::vector<std::pair<int, int>> objs;
  std::map<std::pair<int, int>, int> idx;
  Budget budget;

  StrictPullbackGroupoid(GFunctor f, GFunctor g, Budget b)
      : F(std::move(f)), G(std::move(g)), budget(std::move(b)) {
    std::unordered_map<int, std::vector<int>> e_by_base;
    for (int e = 0; e < G.dom->size(); ++e) e_by_base[G.ob(e)].push_back(e);
    for (int d = 0; d < F.dom->size(); ++d) {
      auto it = e_by_base.find(F.ob(d));
      if (it == e_by_base.end()) continue;
      for (int e : it->second) {
        budget.tick();
        idx[{d, e}] = static_cast<int>(objs.size());
        objs.emplace_back(d, e);
      }
    }
  }

  int find(int d, int e) const { return idx.at({d, e}); }

  int size() const override { return static_cast<int>(objs.size()); }
  std::uint64_t key(int x) const override {
    const auto [d, e] = objs[x];
    return F.dom->key(d) * 1000003u ^ G.dom->key(e);
  }
  bool homs(int x, int y, const std::function<bool(const GMor&)>& emit) const override {
    const auto [xd, xe] = objs[x];
    const auto [yd, ye] = objs[y];
    bool go_on = true;
    F.dom->homs(xd, yd, [&](const GMor& a) {
      const GMor fa = F.mor(a);
      G.dom->homs(xe, ye, [&](const GMor& b) {
        budget.tick();
        if (G.mor(b) == fa) {
          if (!emit(GMor{x, y, encode_parts({a, b})})) {
            go_on = false;
            return false;
          }
        }
        return true;
      });
      return go_on;
    });
    return go_on;
  }
  GMor identity(int x) const override {
    const auto [d, e] = objs[x];
    return GMor{x, x, encode_parts({F.dom->identity(d), G.dom->identity(e)})};
  }
  GMor part(const GMor& m, int which) const {
    auto parts = decode_parts(m.data, 2);
    const auto [sd, se] = objs[m.src];
    const auto [td, te] = objs[m.tgt];
    if (which == 0) return GMor{sd, td, parts[0]};
    return GMor{se, te, parts[1]};
  }
  GMor compose(const GMor& g, const GMor& f) const override {
    return GMor{f.src, g.tgt,
                encode_parts({F.dom->compose(part(g, 0), part(f, 0)),
                              G.dom->compose(part(g, 1), part(f, 1))})};
  }
  GMor inverse(const GMor& f) const override {
    return GMor{f.tgt, f.src, encode_parts({F.dom->inverse(part(f, 0)), G.dom->inverse(part(f, 1))})};
  }
  std::string describe(int x) const override {
    const auto [d, e] = objs[x];
    return "(" + F.dom->describe(d) + "," + G.dom->describe(e) + ")";
  }
};

struct PullbackResult {
  std::shared_ptr<const StrictPullbackGroupoid> gpd;
  GFunctor pr1, pr2;
};

inline PullbackResult strict_pullback(const GFunctor& F, const GFunctor& G, const Budget& budget) {
  auto pb = std::make_shared<StrictPullbackGroupoid>(F, G, budget);
  GFunctor p1{pb, F.dom, [pb](int x) { return pb->objs[x].first; },
              [pb](const GMor& m) { return pb->part(m, 0); }, "pr1"};
  GFunctor p2{pb, G.dom, [pb](int x) { return pb->objs[x].second; },
              [pb](const GMor& m) { return pb->part(m, 1); }, "pr2"};
  return {pb, p1, p2};
}

// Iso-comma groupoid: objects (d, e, phi: F d ~ G e).
class TwoPullbackGroupoid final : public IGroupoid {
 public:
  GFunctor F, G;
  struct Obj {
    int d, e;
    GMor phi;
  };
  std::vector<Obj> objs;
  Budget budget;

  TwoPullbackGroupoid(GFunctor f, GFunctor g, Budget b)
      : F(std::move(f)), G(std::move(g)), budget(std::move(b)) {
    const auto& B = *F.cod;
    for (int d = 0; d < F.dom->size(); ++d)
      for (int e = 0; e < G.dom->size(); ++e) {
        if (B.key(F.ob(d)) != B.key(G.ob(e))) continue;
        B.homs(F.ob(d), G.ob(e), [&](const GMor& phi) {
          budget.tick();
          objs.push_back({d, e, phi});
          return true;
        });
      }
  }

  int find(int d, int e, const GMor& phi) const {
    for (int i = 0; i < size(); ++i)
      if (objs[i].d == d && objs[i].e == e && objs[i].phi == phi) return i;
    throw std::logic_error("iso-comma object not found");
  }

  int size() const override { return static_cast<int>(objs.size()); }
  std::uint64_t key(int x) const override {
    return F.dom->key(objs[x].d) * 1000003u ^ G.dom->key(objs[x].e);
  }
  bool homs(int x, int y, const std::function<bool(const GMor&)>& emit) const override {
    const auto& X = objs[x];
    const auto& Y = objs[y];
    const auto& B = *F.cod;
    bool go_on = true;
    F.dom->homs(X.d, Y.d, [&](const GMor& a) {
      const GMor fa = F.mor(a);
      const GMor lhs = B.compose(Y.phi, fa);
      G.dom->homs(X.e, Y.e, [&](const GMor& b) {
        budget.tick();
        if (B.compose(G.mor(b), X.phi) == lhs) {
          if (!emit(GMor{x, y, encode_parts({a, b})})) {
            go_on = false;
            return false;
          }
        }
        return true;
      });
      return go_on;
    });
    return go_on;
  }
  GMor identity(int x) const override {
    return GMor{x, x, encode_parts({F.dom->identity(objs[x].d), G.dom->identity(objs[x].e)})};
  }
  GMor compose(const GMor& g, const GMor& f) const override {
    auto gp = decode_parts(g.data, 2);
    auto fp = decode_parts(f.data, 2);
    const GMor a = F.dom->compose(GMor{objs[g.src].d, objs[g.tgt].d, gp[0]},
                                  GMor{objs[f.src].d, objs[f.tgt].d, fp[0]});
    const GMor b = G.dom->compose(GMor{objs[g.src].e, objs[g.tgt].e, gp[1]},
                                  GMor{objs[f.src].e, objs[f.tgt].e, fp[1]});
    return GMor{f.src, g.tgt, encode_parts({a, b})};
  }
  GMor inverse(const GMor& f) const override {
    auto fp = decode_parts(f.data, 2);
    const GMor a = F.dom->inverse(GMor{objs[f.src].d, objs[f.tgt].d, fp[0]});
    const GMor b = G.dom->inverse(GMor{objs[f.src].e, objs[f.tgt].e, fp[1]});
    return GMor{f.tgt, f.src, encode_parts({a, b})};
  }
};

inline std::shared_ptr<const TwoPullbackGroupoid> two_pullback(const GFunctor& F, const GFunctor& G,
                                                               const Budget& budget) {
  return std::make_shared<TwoPullbackGroupoid>(F, G, budget);
}

// Canonical comparison strict_pullback -> two_pullback, (d,e) |-> (d,e,id).
inline GFunctor pullback_comparison(const std::shared_ptr<const StrictPullbackGroupoid>& spb,
                                    const std::shared_ptr<const TwoPullbackGroupoid>& tpb) {
  auto find_obj = [tpb, spb](int x) {
    const auto [d, e] = spb->objs[x];
    const GMor id = spb->F.cod->identity(spb->F.ob(d));
    for (int i = 0; i < tpb->size(); ++i)
      if (tpb->objs[i].d == d && tpb->objs[i].e == e && tpb->objs[i].phi == id) return i;
    throw std::logic_error("strict pullback object missing from iso-comma");
  };
  return GFunctor{spb, tpb, find_obj, [find_obj](const GMor& m) {
                    return GMor{find_obj(m.src), find_obj(m.tgt), m.data};
                  },
                  "strict-to-2"};
}

class ProductGroupoid final : public IGroupoid {
 public:
  std::vector<Gpd> factors;
  std::vector<int> sizes;
  explicit ProductGroupoid(std::vector<Gpd> fs) : factors(std::move(fs)) {
    for (auto& f : factors) sizes.push_back(f->size());
  }
  std::vector<int> unrank(int x) const {
    std::vector<int> out(factors.size());
    for (int i = static_cast<int>(factors.size()) - 1; i >= 0; --i) {
      out[i] = x % sizes[i];
      x /= sizes[i];
    }
    return out;
  }
  int rank(const std::vector<int>& t) const {
    int x = 0;
    for (std::size_t i = 0; i < t.size(); ++i) x = x * sizes[i] + t[i];
    return x;
  }
  int size() const override {
    int n = 1;
    for (int s : sizes) n *= s;
    return n;
  }
  std::uint64_t key(int x) const override {
    std::uint64_t h = 1469598103934665603ull;
    for (std::size_t i = 0; auto c : unrank(x)) {
      h = (h ^ factors[i]->key(c)) * 1099511628211ull;
      ++i;
    }
    return h;
  }
  bool homs(int x, int y, const std::function<bool(const GMor&)>& emit) const override {
    const auto xs = unrank(x), ys = unrank(y);
    std::vector<std::vector<GMor>> choices(factors.size());
    for (std::size_t i = 0; i < factors.size(); ++i) {
      choices[i] = hom_vec(*factors[i], xs[i], ys[i]);
      if (choices[i].empty()) return true;
    }
    std::vector<int> radix;
    for (auto& c : choices) radix.push_back(static_cast<int>(c.size()));
    return for_each_tuple(radix, [&](const std::vector<int>& digits) {
      std::vector<GMor> parts;
      for (std::size_t i = 0; i < digits.size(); ++i) parts.push_back(choices[i][digits[i]]);
      return emit(GMor{x, y, encode_parts(parts)});
    });
  }
  GMor identity(int x) const override {
    std::vector<GMor> parts;
    for (std::size_t i = 0; auto c : unrank(x)) parts.push_back(factors[i++]->identity(c));
    return GMor{x, x, encode_parts(parts)};
  }
  GMor compose(const GMor& g, const GMor& f) const override {
    const auto gs = unrank(g.src), gt = unrank(g.tgt), fs = unrank(f.src);
    auto gp = decode_parts(g.data, static_cast<int>(factors.size()));
    auto fp = decode_parts(f.data, static_cast<int>(factors.size()));
    std::vector<GMor> parts;
    for (std::size_t i = 0; i < factors.size(); ++i)
      parts.push_back(factors[i]->compose(GMor{gs[i], gt[i], gp[i]}, GMor{fs[i], gs[i], fp[i]}));
    return GMor{f.src, g.tgt, encode_parts(parts)};
  }
  GMor inverse(const GMor& f) const override {
    const auto fs = unrank(f.src), ft = unrank(f.tgt);
    auto fp = decode_parts(f.data, static_cast<int>(factors.size()));
    std::vector<GMor> parts;
    for (std::size_t i = 0; i < factors.size(); ++i)
      parts.push_back(factors[i]->inverse(GMor{fs[i], ft[i], fp[i]}));
    return GMor{f.tgt, f.src, encode_parts(parts)};
  }
};

// ---------------------------------------------------------------------------
// Equivalence oracle without a given functor: pi0 bijection matching
// automorphism groups up to isomorphism.
// ---------------------------------------------------------------------------

inline bool groupoids_equivalent(const Gpd& g, const Gpd& h, const Budget& budget) {
  const Pi0 pg = pi0(*g, budget), ph = pi0(*h, budget);
  if (pg.count() != ph.count()) return false;
  std::vector<GroupTable> ag, ah;
  for (int r : pg.reps) ag.push_back(aut_group(*g, r, budget));
  for (int r : ph.reps) ah.push_back(aut_group(*h, r, budget));
  std::vector<char> used(ah.size(), 0);
  std::function<bool(std::size_t)> match = [&](std::size_t i) -> bool {
    if (i == ag.size()) return true;
    for (std::size_t j = 0; j < ah.size(); ++j) {
      if (used[j] || !groups_isomorphic(ag[i], ah[j], budget)) continue;
      used[j] = 1;
      if (match(i + 1)) return true;
      used[j] = 0;
    }
    return false;
  };
  return match(0);
}

}  // namespace sdot
