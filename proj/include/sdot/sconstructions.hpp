#pragma once

#include "sdot/protoexact.hpp"

namespace sdot {

// ---------------------------------------------------------------------------
// Triangular diagrams of arrow-category shape: cells (i,j) for 0<=i<=j<=n,
// horizontal steps in M, vertical steps in E, unit squares bicartesian,
// diagonal cells zero objects (a fixed basepoint in the Waldhausen variant).
// ---------------------------------------------------------------------------

inline int tri_size(int n) { return (n + 1) * (n + 2) / 2; }
inline int tri_idx(int n, int i, int j) { return i * (n + 1) - i * (i - 1) / 2 + (j - i); }

struct TriGrid {
  int n = 0;
  std::vector<int> cell, hstep, vstep;  // tri_size entries each, -1 where absent
  auto operator<=>(const TriGrid&) const = default;
  int at(int i, int j) const { return cell[tri_idx(n, i, j)]; }
  int h(int i, int j) const { return hstep[tri_idx(n, i, j)]; }  // (i,j)->(i,j+1)
  int v(int i, int j) const { return vstep[tri_idx(n, i, j)]; }  // (i,j)->(i+1,j)
};

inline int tri_hedge(const FiniteCategory& h, const TriGrid& g, int i, int j0, int j1) {
  int cur = h.ident[g.at(i, j0)];
  for (int j = j0; j < j1; ++j) cur = h.compose(g.h(i, j), cur);
  return cur;
}
inline int tri_vedge(const FiniteCategory& h, const TriGrid& g, int i0, int i1, int j) {
  int cur = h.ident[g.at(i0, j)];
  for (int i = i0; i < i1; ++i) cur = h.compose(g.v(i, j), cur);
  return cur;
}

inline bool tri_valid(const ProtoExactStructure& s, const TriGrid& g, int basepoint) {
  const auto& h = *s.host;
  const int n = g.n;
  for (int i = 0; i <= n; ++i) {
    const int d = g.at(i, i);
    if (basepoint >= 0 ? d != basepoint : !s.zero[d]) return false;
  }
  for (int i = 0; i <= n; ++i)
    for (int j = i; j < n; ++j) {
      const int m = g.h(i, j);
      if (m < 0 || h.msrc[m] != g.at(i, j) || h.mtgt[m] != g.at(i, j + 1) || !s.mono[m])
        return false;
    }
  for (int i = 0; i <= n; ++i)
    for (int j = i + 1; j <= n; ++j) {
      const int e = g.v(i, j);
      if (e < 0 || h.msrc[e] != g.at(i, j) || h.mtgt[e] != g.at(i + 1, j) || !s.epi[e])
        return false;
    }
  for (int i = 0; i <= n; ++i)
    for (int j = i + 1; j < n; ++j) {
      // unit square with rows i, i+1 and columns j, j+1
      const int top = g.h(i, j), left = g.v(i, j), right = g.v(i, j + 1), bottom = g.h(i + 1, j);
      if (h.compose(right, top) != h.compose(bottom, left)) return false;
      if (!s.bicart.count({top, left, right, bottom})) return false;
    }
  return true;
}

// Full validity against the universal properties on all rectangles (oracle).
inline bool tri_valid_naive(const ProtoExactStructure& s, const TriGrid& g, int basepoint) {
  if (!tri_valid(s, g, basepoint)) return false;
  const auto& h = *s.host;
  const int n = g.n;
  for (int i0 = 0; i0 <= n; ++i0)
    for (int i1 = i0 + 1; i1 <= n; ++i1)
      for (int j0 = i1; j0 < n; ++j0)
        for (int j1 = j0 + 1; j1 <= n; ++j1) {
          Square sq{g.at(i0, j0), g.at(i0, j1), g.at(i1, j0), g.at(i1, j1),
                    tri_hedge(h, g, i0, j0, j1), tri_vedge(h, g, i0, i1, j0),
                    tri_vedge(h, g, i0, i1, j1), tri_hedge(h, g, i1, j0, j1)};
          if (!is_bicartesian(h, sq, s.budget).bicartesian()) return false;
        }
  return true;
}

inline TriGrid tri_reindex(const FiniteCategory& h, const TriGrid& g, const std::vector<int>& beta) {
  TriGrid out;
  out.n = static_cast<int>(beta.size()) - 1;
  out.cell.assign(tri_size(out.n), -1);
  out.hstep.assign(tri_size(out.n), -1);
  out.vstep.assign(tri_size(out.n), -1);
  for (int i = 0; i <= out.n; ++i)
    for (int j = i; j <= out.n; ++j) {
      out.cell[tri_idx(out.n, i, j)] = g.at(beta[i], beta[j]);
      if (j < out.n) out.hstep[tri_idx(out.n, i, j)] = tri_hedge(h, g, beta[i], beta[j], beta[j + 1]);
      if (i < j) out.vstep[tri_idx(out.n, i, j)] = tri_vedge(h, g, beta[i], beta[i + 1], beta[j]);
    }
  return out;
}

// enumeration: zero diagonal + first-row mono chain + pushout decorations
inline void enumerate_trigrids(const ProtoExactStructure& s, int n, int basepoint,
                               const std::function<void(const TriGrid&)>& emit) {
  const auto& h = *s.host;
  TriGrid g;
  g.n = n;
  g.cell.assign(tri_size(n), -1);
  g.hstep.assign(tri_size(n), -1);
  g.vstep.assign(tri_size(n), -1);
  auto set_cell = [&](int i, int j, int v) { g.cell[tri_idx(n, i, j)] = v; };
  auto set_h = [&](int i, int j, int v) { g.hstep[tri_idx(n, i, j)] = v; };
  auto set_v = [&](int i, int j, int v) { g.vstep[tri_idx(n, i, j)] = v; };

  // interior of row i filled left to right: cells (i, j) for j > i
  std::function<void(int, int)> fill;
  std::function<void(int)> start_row = [&](int i) {
    if (i > n) {
      if (tri_valid(s, g, basepoint)) emit(g);
      return;
    }
    // diagonal zero and the forced epi from D(i-1, i)
    for (int z : s.zero_objs) {
      if (basepoint >= 0 && z != basepoint) continue;
      s.budget.tick();
      set_cell(i, i, z);
      const int e = h.hom[g.at(i - 1, i)][z][0];
      if (!s.epi[e]) continue;
      set_v(i - 1, i, e);
      if (i == n)
        start_row(i + 1);
      else
        fill(i, i + 1);
    }
    g.cell[tri_idx(n, i, i)] = -1;
  };
  fill = [&](int i, int j) {
    if (j > n) {
      start_row(i + 1);
      return;
    }
    // span: h(i-1, j-1): D(i-1,j-1) -> D(i-1,j), v(i-1, j-1): -> D(i, j-1)
    const int m = g.h(i - 1, j - 1), e = g.v(i - 1, j - 1);
    auto it = s.canon_po.find({m, e});
    if (it == s.canon_po.end()) return;
    const auto [d, mbot, eright] = it->second;
    for (int phi : s.iso_out[d]) {
      s.budget.tick();
      set_cell(i, j, h.mtgt[phi]);
      set_h(i, j - 1, h.compose(phi, mbot));
      set_v(i - 1, j, h.compose(phi, eright));
      fill(i, j + 1);
    }
    g.cell[tri_idx(n, i, j)] = -1;
  };

  std::function<void(int)> row0 = [&](int j) {
    if (j == n) {
      start_row(1);
      return;
    }
    for (int m = 0; m < h.n_mor(); ++m) {
      if (!s.mono[m] || h.msrc[m] != g.at(0, j)) continue;
      s.budget.tick();
      set_h(0, j, m);
      set_cell(0, j + 1, h.mtgt[m]);
      row0(j + 1);
    }
  };

  for (int z : s.zero_objs) {
    if (basepoint >= 0 && z != basepoint) continue;
    set_cell(0, 0, z);
    if (n == 0) {
      if (tri_valid(s, g, basepoint)) emit(g);
      continue;
    }
    row0(0);
  }
}

class SdotLevelGroupoid final : public IGroupoid {
 public:
  Pex spec;
  int n;
  int basepoint;  // -1: any zero object
  std::vector<TriGrid> objs;
  std::map<TriGrid, int> index;
  std::vector<std::uint64_t> keys;

  SdotLevelGroupoid(Pex s, int nn, int bp) : spec(std::move(s)), n(nn), basepoint(bp) {
    enumerate_trigrids(*spec, n, basepoint, [&](const TriGrid& g) { objs.push_back(g); });
    std::sort(objs.begin(), objs.end());
    objs.erase(std::unique(objs.begin(), objs.end()), objs.end());
    for (std::size_t i = 0; i < objs.size(); ++i) index[objs[i]] = static_cast<int>(i);
    keys.resize(objs.size());
    for (std::size_t i = 0; i < objs.size(); ++i) {
      std::uint64_t hsh = 1469598103934665603ull;
      for (int c : objs[i].cell)
        hsh = (hsh ^ static_cast<std::uint64_t>(c < 0 ? 7777 : spec->iso_class[c])) *
              1099511628211ull;
      keys[i] = hsh;
    }
  }

  int size() const override { return static_cast<int>(objs.size()); }
  std::uint64_t key(int x) const override { return keys[x]; }

  bool homs(int x, int y, const std::function<bool(const GMor&)>& emit) const override {
    if (keys[x] != keys[y]) return true;
    const auto& h = *spec->host;
    const TriGrid& a = objs[x];
    const TriGrid& b = objs[y];
    const int nc = tri_size(n);
    std::vector<int> comp(nc, -1);
    bool go_on = true;
    // triangular row-major: position k corresponds to (i,j)
    std::vector<std::pair<int, int>> pos;
    for (int i = 0; i <= n; ++i)
      for (int j = i; j <= n; ++j) pos.push_back({i, j});
    std::function<bool(int)> rec = [&](int k) -> bool {
      if (k == nc) {
        if (!emit(GMor{x, y, std::vector<std::int32_t>(comp.begin(), comp.end())})) {
          go_on = false;
          return false;
        }
        return true;
      }
      const auto [i, j] = pos[k];
      for (int phi : spec->iso_out[a.at(i, j)]) {
        spec->budget.tick();
        if (h.mtgt[phi] != b.at(i, j)) continue;
        if (j > i && h.compose(phi, a.h(i, j - 1)) !=
                         h.compose(b.h(i, j - 1), comp[tri_idx(n, i, j - 1)]))
          continue;
        if (i > 0 && j > i - 1 && j >= i &&
            h.compose(phi, a.v(i - 1, j)) != h.compose(b.v(i - 1, j), comp[tri_idx(n, i - 1, j)]))
          continue;
        comp[tri_idx(n, i, j)] = phi;
        if (!rec(k + 1)) return false;
      }
      comp[tri_idx(n, i, j)] = -1;
      return true;
    };
    rec(0);
    return go_on;
  }

  GMor identity(int x) const override {
    const auto& h = *spec->host;
    std::vector<std::int32_t> comp;
    for (int c : objs[x].cell) comp.push_back(h.ident[c]);
    return GMor{x, x, comp};
  }
  GMor compose(const GMor& g, const GMor& f) const override {
    const auto& h = *spec->host;
    std::vector<std::int32_t> comp(g.data.size());
    for (std::size_t k = 0; k < comp.size(); ++k) comp[k] = h.compose(g.data[k], f.data[k]);
    return GMor{f.src, g.tgt, comp};
  }
  GMor inverse(const GMor& f) const override {
    const auto& h = *spec->host;
    std::vector<std::int32_t> comp(f.data.size());
    for (std::size_t k = 0; k < comp.size(); ++k)
      for (int w : spec->iso_out[h.mtgt[f.data[k]]])
        if (h.compose(w, f.data[k]) == h.ident[h.msrc[f.data[k]]]) {
          comp[k] = w;
          break;
        }
    return GMor{f.tgt, f.src, comp};
  }
};

using SdotLevel = std::shared_ptr<const SdotLevelGroupoid>;

inline SdotLevel sdot_e(const Pex& s, int n) {
  return std::make_shared<const SdotLevelGroupoid>(s, n, -1);
}
inline SdotLevel sdot_wald(const Pex& s, int n, int basepoint) {
  if (basepoint < 0 || basepoint >= s->host->n_obj || !s->zero[basepoint])
    throw ValidationError({"bad-basepoint", "basepoint must be a declared zero object"});
  return std::make_shared<const SdotLevelGroupoid>(s, n, basepoint);
}

// simplicial operator along beta: [n'] -> [n]
inline GFunctor sdot_level_oper(const SdotLevel& from, const SdotLevel& to,
                                const std::vector<int>& beta) {
  // contravariant: from = level n, to = level n'
  return GFunctor{from, to,
                  [from, to, beta](int x) {
                    return to->index.at(tri_reindex(*from->spec->host, from->objs[x], beta));
                  },
                  [from, to, beta](const GMor& m) {
                    const int n = from->n;
                    const int n2 = to->n;
                    std::vector<std::int32_t> comp;
                    for (int i = 0; i <= n2; ++i)
                      for (int j = i; j <= n2; ++j)
                        comp.push_back(m.data[tri_idx(n, beta[i], beta[j])]);
                    return GMor{
                        to->index.at(tri_reindex(*from->spec->host, from->objs[m.src], beta)),
                        to->index.at(tri_reindex(*from->spec->host, from->objs[m.tgt], beta)),
                        comp};
                  },
                  "S(beta)"};
}

// naive oracle: filter the full functor category on the arrow poset
inline std::vector<CatFunctor> sdot_e_naive(const Pex& s, int n, const Budget& budget) {
  auto ar = arrow_cat(n);
  auto fs = enumerate_functors(ar.cat, s->host, budget);
  std::vector<CatFunctor> out;
  for (auto& F : fs) {
    bool ok = true;
    // diagonal zeros
    for (int i = 0; i <= n && ok; ++i)
      if (!s->zero[F.ob[ar.obj_of.at({i, i})]]) ok = false;
    // horizontal monos / vertical epis
    for (int i = 0; i <= n && ok; ++i)
      for (int j = i; j < n && ok; ++j)
        if (!s->mono[F.mor[ar.mor_of.at({ar.obj_of.at({i, j}), ar.obj_of.at({i, j + 1})})]])
          ok = false;
    for (int i = 0; i < n && ok; ++i)
      for (int j = i + 1; j <= n && ok; ++j)
        if (!s->epi[F.mor[ar.mor_of.at({ar.obj_of.at({i, j}), ar.obj_of.at({i + 1, j})})]])
          ok = false;
    // all rectangles bicartesian
    const auto& h = *s->host;
    for (int i0 = 0; i0 <= n && ok; ++i0)
      for (int i1 = i0 + 1; i1 <= n && ok; ++i1)
        for (int j0 = i1; j0 < n && ok; ++j0)
          for (int j1 = j0 + 1; j1 <= n && ok; ++j1) {
            Square sq{F.ob[ar.obj_of.at({i0, j0})], F.ob[ar.obj_of.at({i0, j1})],
                      F.ob[ar.obj_of.at({i1, j0})], F.ob[ar.obj_of.at({i1, j1})],
                      F.mor[ar.mor_of.at({ar.obj_of.at({i0, j0}), ar.obj_of.at({i0, j1})})],
                      F.mor[ar.mor_of.at({ar.obj_of.at({i0, j0}), ar.obj_of.at({i1, j0})})],
                      F.mor[ar.mor_of.at({ar.obj_of.at({i0, j1}), ar.obj_of.at({i1, j1})})],
                      F.mor[ar.mor_of.at({ar.obj_of.at({i1, j0}), ar.obj_of.at({i1, j1})})]};
            if (!is_bicartesian(h, sq, budget).bicartesian()) ok = false;
          }
    if (ok) out.push_back(std::move(F));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Comparison of the two classical constructions: the inclusion of diagrams
// with a fixed basepoint into diagrams with arbitrary zeros.
// ---------------------------------------------------------------------------

struct WaldEReport {
  bool ok = false;
  EquivReport equivalence;
  std::vector<IsoFibReport> evaluation_fibrations;
  std::string witness;
};

inline WaldEReport compare_wald_e(const Pex& s, int n, int basepoint, const Budget& budget) {
  WaldEReport rep;
  auto w = sdot_wald(s, n, basepoint);
  auto e = sdot_e(s, n);
  GFunctor inc{w, e, [w, e](int x) { return e->index.at(w->objs[x]); },
               [w, e](const GMor& m) {
                 return GMor{e->index.at(w->objs[m.src]), e->index.at(w->objs[m.tgt]), m.data};
               },
               "wald-in-e"};
  rep.equivalence = is_equivalence(inc, budget);
  if (!rep.equivalence.ok) {
    rep.witness = rep.equivalence.reason + ": " + rep.equivalence.witness;
    return rep;
  }
  // evaluation at each diagonal object is an isofibration onto the zero
  // groupoid (grids of shape (0,0) on zeros)
  auto zg = std::make_shared<const GridLevelGroupoid>(
      s, 0, 0, true, true, std::function<bool(int)>([s](int o) { return s->zero[o] != 0; }));
  for (int d = 0; d <= n; ++d) {
    GFunctor ev{e, zg,
                [e, zg, d](int x) {
                  Grid g;
                  g.q = g.r = 0;
                  g.cell = {e->objs[x].at(d, d)};
                  return zg->index.at(g);
                },
                [e, zg, d](const GMor& m) {
                  Grid gs, gt;
                  gs.q = gs.r = 0;
                  gt.q = gt.r = 0;
                  gs.cell = {e->objs[m.src].at(d, d)};
                  gt.cell = {e->objs[m.tgt].at(d, d)};
                  return GMor{zg->index.at(gs), zg->index.at(gt),
                              {m.data[tri_idx(e->n, d, d)]}};
                },
                "ev"};
    rep.evaluation_fibrations.push_back(is_isofibration(ev, budget));
    if (!rep.evaluation_fibrations.back().ok) {
      rep.witness = "evaluation at (" + std::to_string(d) + "," + std::to_string(d) +
                    ") is not an isofibration";
      return rep;
    }
  }
  rep.ok = true;
  return rep;
}

// ---------------------------------------------------------------------------
// The generalized construction agrees with the classical one: an explicit
// functor from arrow-shaped diagrams to chain-shaped natural families,
// verified bijective on objects and morphisms.
// ---------------------------------------------------------------------------

struct IsoReport {
  bool ok = false;
  std::size_t objects_lhs = 0, objects_rhs = 0;
  std::size_t pi0 = 0;
  std::string witness;
};

// image value table of an arrow diagram under the comparison
inline std::vector<std::vector<int>> comparison_table(
    const SdotLevelGroupoid& e, const WPresheaf& w,
    const std::vector<std::shared_ptr<const GridLevelGroupoid>>& levels,
    const Gpd& aug_level_gpd, int x) {
  const auto& h = *e.spec->host;
  const auto& p = *w.psh;
  std::vector<std::vector<int>> val(p.sh.n_levels());
  const TriGrid& tg = e.objs[x];
  for (int lid = 0; lid < p.sh.n_levels(); ++lid) {
    const Lv l = p.sh.levels[lid];
    if (!l.aug && !levels[lid]) continue;  // virtual level
    val[lid].resize(p.size(lid));
    for (int c = 0; c < p.size(lid); ++c) {
      const auto& chain = w.chains[lid][c];
      if (l.aug) {
        // diagonal cell (i,i) as an object of the augmentation level
        Grid g;
        g.q = g.r = 0;
        g.cell = {tg.at(chain[0], chain[0])};
        const auto* zg = dynamic_cast<const GridLevelGroupoid*>(aug_level_gpd.get());
        val[lid][c] = zg->index.at(g);
        continue;
      }
      Grid g;
      g.q = l.q;
      g.r = l.r;
      g.cell.resize((l.q + 1) * (l.r + 1));
      g.hstep.resize((l.q + 1) * l.r);
      g.vstep.resize(l.q * (l.r + 1));
      for (int a = 0; a <= l.q; ++a)
        for (int b = 0; b <= l.r; ++b)
          g.cell[a * (l.r + 1) + b] = tg.at(chain[a], chain[l.q + 1 + b]);
      for (int a = 0; a <= l.q; ++a)
        for (int b = 0; b < l.r; ++b)
          g.hstep[a * l.r + b] =
              tri_hedge(h, tg, chain[a], chain[l.q + 1 + b], chain[l.q + 1 + b + 1]);
      for (int a = 0; a < l.q; ++a)
        for (int b = 0; b <= l.r; ++b)
          g.vstep[a * (l.r + 1) + b] = tri_vedge(h, tg, chain[a], chain[a + 1], chain[l.q + 1 + b]);
      val[lid][c] = levels[lid]->index.at(g);
    }
  }
  return val;
}

struct GeneralizedCompare {
  IsoReport report;
  GFunctor phi;  // the comparison functor, valid when report.ok
};

inline GeneralizedCompare compare_e_generalized(const Pex& s, int n, const Budget& budget) {
  GeneralizedCompare out;
  IsoReport& rep = out.report;
  auto e = sdot_e(s, n);
  NerveOptions opt;
  opt.matdim = n;
  opt.trunc = n;
  auto ner = exact_nerve(s, opt, budget);
  auto w = w_presheaf(n, n);
  auto smap = std::make_shared<const MapGroupoid>(w.psh, ner, budget);
  rep.objects_lhs = e->size();
  rep.objects_rhs = smap->size();
  if (e->size() != smap->size()) {
    rep.witness = "object counts differ";
    return out;
  }
  std::vector<std::shared_ptr<const GridLevelGroupoid>> levels(ner->sh.n_levels());
  for (int lid = 1; lid < ner->sh.n_levels(); ++lid)
    if (ner->materialized(lid))
      levels[lid] = std::static_pointer_cast<const GridLevelGroupoid>(ner->levels[lid]);

  auto phi_ob = [e, w, levels, ner, smap](int x) {
    return smap->obj_index.at(comparison_table(*e, w, levels, ner->aug_level(), x));
  };
  GFunctor phi{e, smap, phi_ob, [e, w, levels, ner, smap, phi_ob](const GMor& m) {
                 // per chain-cell components of the image morphism
                 std::vector<GMor> parts;
                 const auto& h = *e->spec->host;
                 (void)h;
                 for (const auto& [lid, c] : smap->nd_cells) {
                   const Lv l = w.psh->sh.levels[lid];
                   const auto& chain = w.chains[lid][c];
                   std::vector<std::int32_t> comp;
                   if (l.aug) {
                     comp = {m.data[tri_idx(e->n, chain[0], chain[0])]};
                   } else {
                     for (int a = 0; a <= l.q; ++a)
                       for (int b = 0; b <= l.r; ++b)
                         comp.push_back(m.data[tri_idx(e->n, chain[a], chain[l.q + 1 + b])]);
                   }
                   const int sv = smap->value_at(phi_ob(m.src), lid, c);
                   const int tv = smap->value_at(phi_ob(m.tgt), lid, c);
                   parts.push_back(GMor{sv, tv, comp});
                 }
                 return GMor{phi_ob(m.src), phi_ob(m.tgt), encode_parts(parts)};
               },
               "phi"};
  out.phi = phi;
  // object bijectivity
  std::vector<char> hit(smap->size(), 0);
  for (int x = 0; x < e->size(); ++x) {
    budget.tick();
    const int ix = phi.ob(x);
    if (hit[ix]) {
      rep.witness = "comparison not injective on objects";
      return out;
    }
    hit[ix] = 1;
  }
  // automorphism bijectivity at every object
  for (int x = 0; x < e->size(); ++x) {
    budget.tick();
    auto auts = hom_vec(*e, x, x);
    std::vector<GMor> images;
    for (const auto& a : auts) images.push_back(phi.mor(a));
    std::sort(images.begin(), images.end());
    if (std::adjacent_find(images.begin(), images.end()) != images.end()) {
      rep.witness = "comparison not faithful at object " + std::to_string(x);
      return out;
    }
    if (images.size() != hom_count(*smap, phi.ob(x), phi.ob(x))) {
      rep.witness = "automorphism counts differ at object " + std::to_string(x);
      return out;
    }
  }
  // pi0 compatibility: isomorphic objects stay isomorphic and conversely
  const Pi0 pe = pi0(*e, budget);
  const Pi0 pm = pi0(*smap, budget);
  if (pe.count() != pm.count()) {
    rep.witness = "component counts differ";
    return out;
  }
  rep.pi0 = pe.count();
  std::vector<int> image_comp(pe.count());
  std::vector<char> chit(pm.count(), 0);
  for (int i = 0; i < pe.count(); ++i) {
    image_comp[i] = pm.comp[phi.ob(pe.reps[i])];
    if (chit[image_comp[i]]) {
      rep.witness = "comparison merges components";
      return out;
    }
    chit[image_comp[i]] = 1;
  }
  rep.ok = true;
  return out;
}

// ---------------------------------------------------------------------------
// Exact functors and their induced maps.
// ---------------------------------------------------------------------------

struct ExactFunctor {
  CatFunctor f;
  Pex src, tgt;
  std::string name;
};

inline CheckResult validate_exact_functor(const ExactFunctor& ef) {
  if (auto r = check_functor(ef.f)) return r;
  const auto& a = *ef.src;
  const auto& b = *ef.tgt;
  for (int m = 0; m < a.host->n_mor(); ++m) {
    if (a.mono[m] && !b.mono[ef.f.mor[m]])
      return fail("not-exact", "does not preserve admissible monos at " + a.host->mname(m));
    if (a.epi[m] && !b.epi[ef.f.mor[m]])
      return fail("not-exact", "does not preserve admissible epis at " + a.host->mname(m));
  }
  for (int o = 0; o < a.host->n_obj; ++o)
    if (a.zero[o] && !b.zero[ef.f.ob[o]])
      return fail("not-exact", "does not preserve zero object " + a.host->oname(o));
  for (const auto& sq : a.bicart) {
    const auto [top, left, right, bottom] = sq;
    if (!b.bicart.count({ef.f.mor[top], ef.f.mor[left], ef.f.mor[right], ef.f.mor[bottom]}))
      return fail("not-exact", "does not preserve a bicartesian square");
  }
  return pass();
}

inline ExactFunctor exact_identity(const Pex& s) {
  return {identity_functor(s->host), s, s, "id_" + s->name};
}

// the constant functor to the trivial structure
inline ExactFunctor exact_to_trivial(const Pex& s) {
  auto t = pex_trivial();
  CatFunctor f{s->host, t->host, std::vector<int>(s->host->n_obj, 0),
               std::vector<int>(s->host->n_mor(), 0)};
  return {f, s, t, s->name + "->0"};
}

inline ExactFunctor exact_from_trivial(const Pex& s) {
  auto t = pex_trivial();
  const int z = s->zero_objs.at(0);
  CatFunctor f{t->host, s->host, {z}, {s->host->ident[z]}};
  return {f, t, s, "0->" + s->name};
}

// induced functor on the classical construction levels
inline GFunctor sdot_e_of_functor(const ExactFunctor& ef, const SdotLevel& from,
                                  const SdotLevel& to) {
  auto f = ef.f;
  return GFunctor{from, to,
                  [from, to, f](int x) {
                    TriGrid g = from->objs[x];
                    for (auto& c : g.cell) c = c < 0 ? c : f.ob[c];
                    for (auto& m : g.hstep) m = m < 0 ? m : f.mor[m];
                    for (auto& m : g.vstep) m = m < 0 ? m : f.mor[m];
                    return to->index.at(g);
                  },
                  [from, to, f](const GMor& m) {
                    TriGrid gs = from->objs[m.src], gt = from->objs[m.tgt];
                    for (auto& c : gs.cell) c = c < 0 ? c : f.ob[c];
                    for (auto& mm : gs.hstep) mm = mm < 0 ? mm : f.mor[mm];
                    for (auto& mm : gs.vstep) mm = mm < 0 ? mm : f.mor[mm];
                    for (auto& c : gt.cell) c = c < 0 ? c : f.ob[c];
                    for (auto& mm : gt.hstep) mm = mm < 0 ? mm : f.mor[mm];
                    for (auto& mm : gt.vstep) mm = mm < 0 ? mm : f.mor[mm];
                    std::vector<std::int32_t> comp(m.data.size());
                    for (std::size_t k = 0; k < comp.size(); ++k) comp[k] = f.mor[m.data[k]];
                    return GMor{to->index.at(gs), to->index.at(gt), comp};
                  },
                  "S(" + ef.name + ")"};
}

// induced map of nerves, levelwise
inline GFunctor nerve_of_functor(const ExactFunctor& ef, const GpdPsh& from, const GpdPsh& to,
                                 int lid) {
  auto f = ef.f;
  const Lv l = from->sh.levels[lid];
  auto gf = std::static_pointer_cast<const GridLevelGroupoid>(from->levels[lid]);
  auto gt = std::static_pointer_cast<const GridLevelGroupoid>(to->levels[lid]);
  (void)l;
  return GFunctor{gf, gt,
                  [gf, gt, f](int x) {
                    Grid g = gf->objs[x];
                    for (auto& c : g.cell) c = f.ob[c];
                    for (auto& m : g.hstep) m = f.mor[m];
                    for (auto& m : g.vstep) m = f.mor[m];
                    return gt->index.at(g);
                  },
                  [gf, gt, f](const GMor& m) {
                    Grid gs = gf->objs[m.src], gtg = gf->objs[m.tgt];
                    for (auto& c : gs.cell) c = f.ob[c];
                    for (auto& mm : gs.hstep) mm = f.mor[mm];
                    for (auto& mm : gs.vstep) mm = f.mor[mm];
                    for (auto& c : gtg.cell) c = f.ob[c];
                    for (auto& mm : gtg.hstep) mm = f.mor[mm];
                    for (auto& mm : gtg.vstep) mm = f.mor[mm];
                    std::vector<std::int32_t> comp(m.data.size());
                    for (std::size_t k = 0; k < comp.size(); ++k) comp[k] = f.mor[m.data[k]];
                    return GMor{gt->index.at(gs), gt->index.at(gtg), comp};
                  },
                  "N(" + ef.name + ")"};
}

}  // namespace sdot
