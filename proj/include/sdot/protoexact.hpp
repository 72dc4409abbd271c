#pragma once

#include "sdot/asdschecks.hpp"
#include "sdot/catexamples.hpp"

namespace sdot {

// ---------------------------------------------------------------------------
// Proto-exact structures on finite categories: distinguished morphism classes
// M (admissible monos, drawn horizontally) and E (admissible epis, vertical),
// plus the zero objects.  One validator covers the additive (exact) case via
// an optional biproduct check.
// ---------------------------------------------------------------------------

struct ProtoExactStructure {
  Cat host;
  std::vector<char> mono, epi;  // per morphism
  std::vector<char> zero;       // per object
  std::vector<int> zero_objs;
  std::string name;

  // caches filled by finish(): bicartesian M/E squares keyed by
  // (top, left, right, bottom), canonical pushouts/pullbacks of M/E spans
  std::set<std::array<int, 4>> bicart;
  std::map<std::pair<int, int>, std::array<int, 3>> canon_po;  // (m: a->b, e: a->c) -> (d, bottom m', right e')
  std::vector<std::vector<int>> iso_out;  // object -> iso morphism ids out of it
  std::vector<int> iso_class;             // object -> iso-class id
  Budget budget;

  bool is_mono(int m) const { return mono[m]; }
  bool is_epi(int m) const { return epi[m]; }
};

using Pex = std::shared_ptr<const ProtoExactStructure>;

inline void pex_finish(ProtoExactStructure& s) {
  const auto& h = *s.host;
  for (int o = 0; o < h.n_obj; ++o)
    if (s.zero[o]) s.zero_objs.push_back(o);
  // isos out of each object and iso classes
  const auto inv = invertible_morphisms(h);
  s.iso_out.assign(h.n_obj, {});
  for (int m = 0; m < h.n_mor(); ++m)
    if (inv[m]) s.iso_out[h.msrc[m]].push_back(m);
  s.iso_class.assign(h.n_obj, -1);
  int nc = 0;
  for (int o = 0; o < h.n_obj; ++o) {
    if (s.iso_class[o] >= 0) continue;
    s.iso_class[o] = nc;
    for (int m : s.iso_out[o]) s.iso_class[h.mtgt[m]] = nc;
    ++nc;
  }
  // bicartesian M/E squares
  for (int top = 0; top < h.n_mor(); ++top) {
    if (!s.mono[top]) continue;
    for (int right = 0; right < h.n_mor(); ++right) {
      if (!s.epi[right] || h.msrc[right] != h.mtgt[top]) continue;
      const int diag = h.compose(right, top);
      for (int left = 0; left < h.n_mor(); ++left) {
        if (!s.epi[left] || h.msrc[left] != h.msrc[top]) continue;
        for (int bottom : h.hom[h.mtgt[left]][h.mtgt[right]]) {
          if (!s.mono[bottom] || h.compose(bottom, left) != diag) continue;
          s.budget.tick();
          Square sq{h.msrc[top], h.mtgt[top], h.mtgt[left], h.mtgt[right],
                    top, left, right, bottom};
          if (is_bicartesian(h, sq, s.budget).bicartesian())
            s.bicart.insert({top, left, right, bottom});
        }
      }
    }
  }
  // canonical pushouts of (mono, epi) spans
  for (int m = 0; m < h.n_mor(); ++m) {
    if (!s.mono[m]) continue;
    for (int e = 0; e < h.n_mor(); ++e) {
      if (!s.epi[e] || h.msrc[e] != h.msrc[m]) continue;
      auto r = pushout(h, Span{m, e}, s.budget);
      if (r.found) s.canon_po[{m, e}] = {r.square.d, r.square.bottom, r.square.right};
    }
  }
}

inline Pex make_pex(Cat host, std::vector<char> mono, std::vector<char> epi,
                    std::vector<char> zero, std::string name, Budget budget = Budget()) {
  ProtoExactStructure s;
  s.host = std::move(host);
  s.mono = std::move(mono);
  s.epi = std::move(epi);
  s.zero = std::move(zero);
  s.name = std::move(name);
  s.budget = std::move(budget);
  pex_finish(s);
  return std::make_shared<const ProtoExactStructure>(std::move(s));
}

struct PexValidation {
  CheckResult core;        // proto-exact axioms
  CheckResult additivity;  // biproduct check; meaningful when requested
};

inline CheckResult validate_protoexact(const ProtoExactStructure& s) {
  const auto& h = *s.host;
  const auto inv = invertible_morphisms(h);
  for (int m = 0; m < h.n_mor(); ++m)
    if (inv[m] && (!s.mono[m] || !s.epi[m]))
      return fail("iso-not-admissible", h.mname(m) + " is invertible but missing from M or E");
  for (int g = 0; g < h.n_mor(); ++g)
    for (int f = 0; f < h.n_mor(); ++f) {
      if (h.mtgt[f] != h.msrc[g]) continue;
      const int gf = h.compose(g, f);
      if (s.mono[g] && s.mono[f] && !s.mono[gf])
        return fail("mono-composition", h.mname(f) + " then " + h.mname(g));
      if (s.epi[g] && s.epi[f] && !s.epi[gf])
        return fail("epi-composition", h.mname(f) + " then " + h.mname(g));
    }
  if (s.zero_objs.empty()) return fail("no-zero", "no zero object declared");
  for (int z = 0; z < h.n_obj; ++z) {
    const bool is_zero_obj = [&] {
      for (int o = 0; o < h.n_obj; ++o)
        if (h.hom[z][o].size() != 1 || h.hom[o][z].size() != 1) return false;
      return true;
    }();
    if (s.zero[z] && !is_zero_obj)
      return fail("zero-not-zero", h.oname(z) + " declared zero but not initial+terminal");
    if (!s.zero[z] && is_zero_obj)
      return fail("zero-missing", h.oname(z) + " is a zero object but not declared");
  }
  for (int m = 0; m < h.n_mor(); ++m) {
    if (s.zero[h.msrc[m]] && !s.mono[m])
      return fail("zero-source-not-mono", h.mname(m));
    if (s.zero[h.mtgt[m]] && !s.epi[m])
      return fail("zero-target-not-epi", h.mname(m));
  }
  // pullbacks of M along E (and E along M) exist with class membership
  for (int m = 0; m < h.n_mor(); ++m) {
    if (!s.mono[m]) continue;
    for (int e = 0; e < h.n_mor(); ++e) {
      if (!s.epi[e] || h.mtgt[e] != h.mtgt[m]) continue;
      auto r = pullback(h, Cospan{m, e}, s.budget);
      if (!r.found)
        return fail("missing-pullback", "cospan (" + h.mname(m) + ", " + h.mname(e) + ")");
      // square: top: w->src(m) (pulled-back e, in E), left: w->src(e) (in M)
      if (!s.epi[r.square.top])
        return fail("pullback-class", "pulled-back epi of (" + h.mname(m) + ", " + h.mname(e) +
                                          ") escapes E");
      if (!s.mono[r.square.left])
        return fail("pullback-class", "pulled-back mono of (" + h.mname(m) + ", " + h.mname(e) +
                                          ") escapes M");
    }
  }
  for (int m = 0; m < h.n_mor(); ++m) {
    if (!s.mono[m]) continue;
    for (int e = 0; e < h.n_mor(); ++e) {
      if (!s.epi[e] || h.msrc[e] != h.msrc[m]) continue;
      auto r = pushout(h, Span{m, e}, s.budget);
      if (!r.found)
        return fail("missing-pushout", "span (" + h.mname(m) + ", " + h.mname(e) + ")");
      if (!s.mono[r.square.bottom])
        return fail("pushout-class", "pushed-out mono of (" + h.mname(m) + ", " + h.mname(e) +
                                         ") escapes M");
      if (!s.epi[r.square.right])
        return fail("pushout-class", "pushed-out epi of (" + h.mname(m) + ", " + h.mname(e) +
                                         ") escapes E");
    }
  }
  // M-horizontal / E-vertical squares: cartesian iff cocartesian
  for (int top = 0; top < h.n_mor(); ++top) {
    if (!s.mono[top]) continue;
    for (int right = 0; right < h.n_mor(); ++right) {
      if (!s.epi[right] || h.msrc[right] != h.mtgt[top]) continue;
      const int diag = h.compose(right, top);
      for (int left = 0; left < h.n_mor(); ++left) {
        if (!s.epi[left] || h.msrc[left] != h.msrc[top]) continue;
        for (int bottom : h.hom[h.mtgt[left]][h.mtgt[right]]) {
          if (!s.mono[bottom] || h.compose(bottom, left) != diag) continue;
          Square sq{h.msrc[top], h.mtgt[top], h.mtgt[left], h.mtgt[right],
                    top, left, right, bottom};
          const bool cart = is_pullback_cone(h, Cospan{sq.right, sq.bottom}, sq.top, sq.left, s.budget);
          const bool cocart = is_pushout_cocone(h, Span{sq.top, sq.left}, sq.right, sq.bottom, s.budget);
          if (cart != cocart)
            return fail("cartesian-iff-cocartesian",
                        "square (" + h.mname(top) + ", " + h.mname(left) + ", " + h.mname(right) +
                            ", " + h.mname(bottom) + ") is " +
                            (cart ? "cartesian only" : "cocartesian only"));
        }
      }
    }
  }
  return pass();
}

// zero morphism a -> b through the canonical zero; asserts independence of
// the chosen zero
inline int zero_morphism(const ProtoExactStructure& s, int a, int b) {
  const auto& h = *s.host;
  int out = -1;
  for (int z : s.zero_objs) {
    const int to_z = h.hom[a][z][0];
    const int from_z = h.hom[z][b][0];
    const int comp = h.compose(from_z, to_z);
    if (out < 0)
      out = comp;
    else if (out != comp)
      throw ValidationError({"zero-morphism", "composite through zeros depends on the zero"});
  }
  return out;
}

// Additivity as a biproduct check: every pair admitting a product or a
// coproduct admits an object that is simultaneously both, compatibly.
inline CheckResult check_additivity(const ProtoExactStructure& s) {
  const auto& h = *s.host;
  auto is_product = [&](int a, int b, int c, int pa, int pb) {
    for (int x = 0; x < h.n_obj; ++x)
      for (int f : h.hom[x][a])
        for (int g : h.hom[x][b]) {
          int found = 0;
          for (int u : h.hom[x][c])
            if (h.compose(pa, u) == f && h.compose(pb, u) == g) ++found;
          if (found != 1) return false;
        }
    return true;
  };
  auto is_coproduct = [&](int a, int b, int c, int ia, int ib) {
    for (int x = 0; x < h.n_obj; ++x)
      for (int f : h.hom[a][x])
        for (int g : h.hom[b][x]) {
          int found = 0;
          for (int u : h.hom[c][x])
            if (h.compose(u, ia) == f && h.compose(u, ib) == g) ++found;
          if (found != 1) return false;
        }
    return true;
  };
  for (int a = 0; a < h.n_obj; ++a)
    for (int b = a; b < h.n_obj; ++b) {
      bool has_product = false, has_coproduct = false, has_biproduct = false;
      for (int c = 0; c < h.n_obj && !has_biproduct; ++c) {
        for (int pa : h.hom[c][a])
          for (int pb : h.hom[c][b]) {
            s.budget.tick();
            if (!has_product && is_product(a, b, c, pa, pb)) has_product = true;
            if (!is_product(a, b, c, pa, pb)) continue;
            // look for compatible injections
            for (int ia : h.hom[a][c]) {
              if (h.compose(pa, ia) != h.ident[a]) continue;
              if (h.compose(pb, ia) != zero_morphism(s, a, b)) continue;
              for (int ib : h.hom[b][c]) {
                if (h.compose(pb, ib) != h.ident[b]) continue;
                if (h.compose(pa, ib) != zero_morphism(s, b, a)) continue;
                if (is_coproduct(a, b, c, ia, ib)) has_biproduct = true;
              }
            }
          }
        if (!has_coproduct)
          for (int ia : h.hom[a][c])
            for (int ib : h.hom[b][c])
              if (is_coproduct(a, b, c, ia, ib)) has_coproduct = true;
      }
      if ((has_product || has_coproduct) && !has_biproduct)
        return fail("no-biproduct", "pair (" + h.oname(a) + ", " + h.oname(b) + ")");
    }
  return pass();
}

// --- the example zoo --------------------------------------------------------

inline Pex pex_trivial() {
  auto c = trivial_category();
  return make_pex(c, {1}, {1}, {1}, "trivial");
}

inline Pex pex_f2vect(int maxdim, Budget budget = Budget()) {
  auto v = f2_vect(maxdim);
  std::vector<char> zero(v.cat->n_obj, 0);
  zero[0] = 1;
  return make_pex(v.cat, v.injective, v.surjective, zero, "f2vect:" + std::to_string(maxdim),
                  budget);
}

inline Pex pex_ptdsets(int maxextra, Budget budget = Budget()) {
  auto p = pointed_sets(maxextra);
  std::vector<char> zero(p.cat->n_obj, 0);
  zero[0] = 1;
  return make_pex(p.cat, p.injective, p.admissible_epi, zero, "ptdsets:" + std::to_string(maxextra),
                  budget);
}

// ---------------------------------------------------------------------------
// Grids: functors [q] x [r] -> host with horizontal steps in M, vertical in
// E, and unit squares bicartesian (the validated invariant; composite squares
// follow by pasting and are cross-checked against the naive oracle in tests).
// ---------------------------------------------------------------------------

struct Grid {
  int q = 0, r = 0;
  std::vector<int> cell;   // (q+1)*(r+1), row-major (i,j) -> i*(r+1)+j
  std::vector<int> hstep;  // (q+1)*r: (i,j) -> (i,j+1) at i*r+j
  std::vector<int> vstep;  // q*(r+1): (i,j) -> (i+1,j) at i*(r+1)+j
  auto operator<=>(const Grid&) const = default;

  int at(int i, int j) const { return cell[i * (r + 1) + j]; }
  int h(int i, int j) const { return hstep[i * r + j]; }
  int v(int i, int j) const { return vstep[i * (r + 1) + j]; }
};

struct GridHash {
  std::size_t operator()(const Grid& g) const {
    std::uint64_t h = 1469598103934665603ull;
    auto mix = [&](int v) { h = (h ^ static_cast<std::uint64_t>(v + 1)) * 1099511628211ull; };
    for (int v : g.cell) mix(v);
    for (int v : g.hstep) mix(v);
    for (int v : g.vstep) mix(v);
    return static_cast<std::size_t>(h);
  }
};

// composite horizontal edge (i, j0) -> (i, j1)
inline int grid_hedge(const FiniteCategory& h, const Grid& g, int i, int j0, int j1) {
  int cur = h.ident[g.at(i, j0)];
  for (int j = j0; j < j1; ++j) cur = h.compose(g.h(i, j), cur);
  return cur;
}
inline int grid_vedge(const FiniteCategory& h, const Grid& g, int i0, int i1, int j) {
  int cur = h.ident[g.at(i0, j)];
  for (int i = i0; i < i1; ++i) cur = h.compose(g.v(i, j), cur);
  return cur;
}

// class + commutation + unit-square bicartesianness
inline bool grid_valid(const ProtoExactStructure& s, const Grid& g, bool need_classes,
                       bool need_bicart) {
  const auto& h = *s.host;
  for (int i = 0; i <= g.q; ++i)
    for (int j = 0; j < g.r; ++j) {
      const int m = g.h(i, j);
      if (h.msrc[m] != g.at(i, j) || h.mtgt[m] != g.at(i, j + 1)) return false;
      if (need_classes && !s.mono[m]) return false;
    }
  for (int i = 0; i < g.q; ++i)
    for (int j = 0; j <= g.r; ++j) {
      const int e = g.v(i, j);
      if (h.msrc[e] != g.at(i, j) || h.mtgt[e] != g.at(i + 1, j)) return false;
      if (need_classes && !s.epi[e]) return false;
    }
  for (int i = 0; i < g.q; ++i)
    for (int j = 0; j < g.r; ++j) {
      const int top = g.h(i, j), left = g.v(i, j), right = g.v(i, j + 1), bottom = g.h(i + 1, j);
      if (h.compose(right, top) != h.compose(bottom, left)) return false;
      if (need_bicart && !s.bicart.count({top, left, right, bottom})) return false;
    }
  return true;
}

// full naive validity: every (not necessarily unit) square is bicartesian,
// decided against the universal properties; the slow oracle
inline bool grid_valid_naive(const ProtoExactStructure& s, const Grid& g, bool need_classes,
                             bool need_bicart) {
  const auto& h = *s.host;
  if (!grid_valid(s, g, need_classes, false)) return false;
  if (!need_bicart) return true;
  for (int i0 = 0; i0 < g.q; ++i0)
    for (int i1 = i0 + 1; i1 <= g.q; ++i1)
      for (int j0 = 0; j0 < g.r; ++j0)
        for (int j1 = j0 + 1; j1 <= g.r; ++j1) {
          Square sq{g.at(i0, j0), g.at(i0, j1), g.at(i1, j0), g.at(i1, j1),
                    grid_hedge(h, g, i0, j0, j1), grid_vedge(h, g, i0, i1, j0),
                    grid_vedge(h, g, i0, i1, j1), grid_hedge(h, g, i1, j0, j1)};
          if (!is_bicartesian(h, sq, s.budget).bicartesian()) return false;
        }
  return true;
}

inline Grid grid_reindex(const FiniteCategory& h, const Grid& g, const std::vector<int>& alpha,
                         const std::vector<int>& beta) {
  Grid out;
  out.q = static_cast<int>(alpha.size()) - 1;
  out.r = static_cast<int>(beta.size()) - 1;
  out.cell.resize((out.q + 1) * (out.r + 1));
  out.hstep.resize((out.q + 1) * out.r);
  out.vstep.resize(out.q * (out.r + 1));
  for (int i = 0; i <= out.q; ++i)
    for (int j = 0; j <= out.r; ++j) out.cell[i * (out.r + 1) + j] = g.at(alpha[i], beta[j]);
  for (int i = 0; i <= out.q; ++i)
    for (int j = 0; j < out.r; ++j)
      out.hstep[i * out.r + j] = grid_hedge(h, g, alpha[i], beta[j], beta[j + 1]);
  for (int i = 0; i < out.q; ++i)
    for (int j = 0; j <= out.r; ++j)
      out.vstep[i * (out.r + 1) + j] = grid_vedge(h, g, alpha[i], alpha[i + 1], beta[j]);
  return out;
}

// Glue a (q,r)-grid back together from its codimension-one restrictions,
// along whichever direction has at least two faces.  Faces are given as
// grids; the result still needs validation.
inline std::optional<Grid> glue_grid_from_faces(int q, int r, const std::vector<Grid>& vfaces,
                                                const std::vector<Grid>& hfaces) {
  Grid g;
  g.q = q;
  g.r = r;
  g.cell.assign((q + 1) * (r + 1), -1);
  g.hstep.assign((q + 1) * r, -1);
  g.vstep.assign(q * (r + 1), -1);
  if (q >= 2) {
    if (static_cast<int>(vfaces.size()) != q + 1) return std::nullopt;
    const Grid& last = vfaces[q];   // rows 0..q-1
    const Grid& first = vfaces[0];  // rows 1..q
    for (int i = 0; i < q; ++i)
      for (int j = 0; j <= r; ++j) g.cell[i * (r + 1) + j] = last.at(i, j);
    for (int j = 0; j <= r; ++j) g.cell[q * (r + 1) + j] = first.at(q - 1, j);
    for (int i = 0; i < q; ++i)
      for (int j = 0; j < r; ++j) g.hstep[i * r + j] = last.h(i, j);
    for (int j = 0; j < r; ++j) g.hstep[q * r + j] = first.h(q - 1, j);
    for (int i = 0; i + 1 < q; ++i)
      for (int j = 0; j <= r; ++j) g.vstep[i * (r + 1) + j] = last.v(i, j);
    for (int j = 0; j <= r; ++j) g.vstep[(q - 1) * (r + 1) + j] = first.v(q - 2, j);
    return g;
  }
  if (r >= 2) {
    if (static_cast<int>(hfaces.size()) != r + 1) return std::nullopt;
    const Grid& last = hfaces[r];   // cols 0..r-1
    const Grid& first = hfaces[0];  // cols 1..r
    for (int i = 0; i <= q; ++i) {
      for (int j = 0; j < r; ++j) g.cell[i * (r + 1) + j] = last.at(i, j);
      g.cell[i * (r + 1) + r] = first.at(i, r - 1);
      for (int j = 0; j + 1 < r; ++j) g.hstep[i * r + j] = last.h(i, j);
      g.hstep[i * r + (r - 1)] = first.h(i, r - 2);
    }
    for (int i = 0; i < q; ++i) {
      for (int j = 0; j < r; ++j) g.vstep[i * (r + 1) + j] = last.v(i, j);
      g.vstep[i * (r + 1) + r] = first.v(i, r - 1);
    }
    return g;
  }
  return std::nullopt;
}

// The corresponding gluing of a cellwise morphism payload; fails when the
// overlaps disagree.
inline std::optional<std::vector<std::int32_t>> glue_payload_from_faces(
    int q, int r, const std::vector<GMor>& vfaces, const std::vector<GMor>& hfaces) {
  std::vector<int> comp((q + 1) * (r + 1), -1);
  auto put = [&](int i, int j, int v) {
    int& slot = comp[i * (r + 1) + j];
    if (slot >= 0 && slot != v) return false;
    slot = v;
    return true;
  };
  if (q >= 1 && static_cast<int>(vfaces.size()) == q + 1) {
    for (int i = 0; i <= q; ++i) {
      const GMor& f = vfaces[i];
      int row = 0;
      for (int v = 0; v <= q; ++v) {
        if (v == i) continue;
        for (int j = 0; j <= r; ++j)
          if (!put(v, j, f.data[row * (r + 1) + j])) return std::nullopt;
        ++row;
      }
    }
  }
  if (r >= 1 && static_cast<int>(hfaces.size()) == r + 1) {
    for (int j = 0; j <= r; ++j) {
      const GMor& f = hfaces[j];
      for (int i = 0; i <= q; ++i) {
        int col = 0;
        for (int v = 0; v <= r; ++v) {
          if (v == j) continue;
          if (!put(i, v, f.data[i * r + col])) return std::nullopt;
          ++col;
        }
      }
    }
  }
  for (int v : comp)
    if (v < 0) return std::nullopt;
  return std::vector<std::int32_t>(comp.begin(), comp.end());
}

// Fast enumeration: first row (mono chain), first column (epi chain), then
// interior corners as canonical pushouts re-decorated by all isomorphisms.
inline void enumerate_grids(const ProtoExactStructure& s, int q, int r, bool need_classes,
                            bool need_bicart, const std::function<void(const Grid&)>& emit,
                            const std::function<bool(int)>& cell00_ok = {}) {
  const auto& h = *s.host;
  Grid g;
  g.q = q;
  g.r = r;
  g.cell.assign((q + 1) * (r + 1), -1);
  g.hstep.assign((q + 1) * r, -1);
  g.vstep.assign(q * (r + 1), -1);
  auto set_cell = [&](int i, int j, int v) { g.cell[i * (r + 1) + j] = v; };
  auto set_h = [&](int i, int j, int v) { g.hstep[i * r + j] = v; };
  auto set_v = [&](int i, int j, int v) { g.vstep[i * (r + 1) + j] = v; };

  // fill the interior cell by cell; at (i,j) the span (h(i-1,j-1), v(i-1,j-1))
  // is complete
  std::function<void(int)> fill = [&](int k) {
    if (k == q * r) {
      if (grid_valid(s, g, need_classes, need_bicart)) emit(g);
      return;
    }
    const int i = 1 + k / r, j = 1 + k % r;
    const int m = g.h(i - 1, j - 1), e = g.v(i - 1, j - 1);
    auto it = s.canon_po.find({m, e});
    if (it == s.canon_po.end()) return;
    const auto [d, mbot, eright] = it->second;
    for (int phi : s.iso_out[d]) {
      s.budget.tick();
      set_cell(i, j, h.mtgt[phi]);
      set_h(i, j - 1, h.compose(phi, mbot));
      set_v(i - 1, j, h.compose(phi, eright));
      fill(k + 1);
    }
    set_cell(i, j, -1);
  };

  std::function<void(int)> col = [&](int i) {
    if (i == q) {
      fill(0);
      return;
    }
    for (int e = 0; e < h.n_mor(); ++e) {
      if (need_classes && !s.epi[e]) continue;
      if (h.msrc[e] != g.at(i, 0)) continue;
      s.budget.tick();
      set_v(i, 0, e);
      set_cell(i + 1, 0, h.mtgt[e]);
      col(i + 1);
    }
  };

  std::function<void(int)> row = [&](int j) {
    if (j == r) {
      col(0);
      return;
    }
    for (int m = 0; m < h.n_mor(); ++m) {
      if (need_classes && !s.mono[m]) continue;
      if (h.msrc[m] != g.at(0, j)) continue;
      s.budget.tick();
      set_h(0, j, m);
      set_cell(0, j + 1, h.mtgt[m]);
      row(j + 1);
    }
  };

  for (int o = 0; o < h.n_obj; ++o) {
    if (cell00_ok && !cell00_ok(o)) continue;
    set_cell(0, 0, o);
    row(0);
  }
}

// Naive oracle: all functor assignments filtered by the full validity check.
inline std::vector<Grid> enumerate_grids_naive(const ProtoExactStructure& s, int q, int r,
                                               bool need_classes, bool need_bicart) {
  const auto& h = *s.host;
  std::vector<Grid> out;
  Grid g;
  g.q = q;
  g.r = r;
  g.cell.assign((q + 1) * (r + 1), -1);
  g.hstep.assign((q + 1) * r, -1);
  g.vstep.assign(q * (r + 1), -1);
  // assign cells then steps, brute force
  const int nc = (q + 1) * (r + 1);
  std::function<void(int)> steps_v = [&](int k) {
    if (k == q * (r + 1)) {
      if (grid_valid_naive(s, g, need_classes, need_bicart)) out.push_back(g);
      return;
    }
    const int i = k / (r + 1), j = k % (r + 1);
    for (int e : h.hom[g.at(i, j)][g.at(i + 1, j)]) {
      s.budget.tick();
      g.vstep[k] = e;
      steps_v(k + 1);
    }
  };
  std::function<void(int)> steps_h = [&](int k) {
    if (k == (q + 1) * r) {
      steps_v(0);
      return;
    }
    const int i = k / r, j = k % r;
    for (int m : h.hom[g.at(i, j)][g.at(i, j + 1)]) {
      s.budget.tick();
      g.hstep[k] = m;
      steps_h(k + 1);
    }
  };
  std::function<void(int)> cells = [&](int k) {
    if (k == nc) {
      steps_h(0);
      return;
    }
    for (int o = 0; o < h.n_obj; ++o) {
      s.budget.tick();
      g.cell[k] = o;
      cells(k + 1);
    }
  };
  cells(0);
  std::sort(out.begin(), out.end());
  return out;
}

// ---------------------------------------------------------------------------
// Grid level groupoids: objects are grids, morphisms are cellwise iso
// families natural for the unit steps.
// ---------------------------------------------------------------------------

class GridLevelGroupoid final : public IGroupoid {
 public:
  Pex spec;
  int q, r;
  bool need_classes, need_bicart;
  std::vector<Grid> objs;
  std::unordered_map<Grid, int, GridHash> index;
  std::vector<std::uint64_t> keys;

  GridLevelGroupoid(Pex s, int qq, int rr, bool classes, bool bicart,
                    std::function<bool(int)> cell00_ok = {})
      : spec(std::move(s)), q(qq), r(rr), need_classes(classes), need_bicart(bicart) {
    if (need_bicart) {
      // interior corners are pushouts up to unique isomorphism, so the
      // decorated-pushout walk is complete
      enumerate_grids(*spec, q, r, need_classes, need_bicart,
                      [&](const Grid& g) { objs.push_back(g); }, cell00_ok);
    } else {
      // plain functor grids: interior cells are unconstrained, enumerate all
      for (auto& g : enumerate_grids_naive(*spec, q, r, need_classes, false)) {
        if (cell00_ok && !cell00_ok(g.at(0, 0))) continue;
        objs.push_back(g);
      }
    }
    std::sort(objs.begin(), objs.end());
    objs.erase(std::unique(objs.begin(), objs.end()), objs.end());
    for (std::size_t i = 0; i < objs.size(); ++i) index[objs[i]] = static_cast<int>(i);
    keys.resize(objs.size());
    for (std::size_t i = 0; i < objs.size(); ++i) {
      std::uint64_t hsh = 1469598103934665603ull;
      for (int c : objs[i].cell) hsh = (hsh ^ spec->iso_class[c]) * 1099511628211ull;
      keys[i] = hsh;
    }
  }

  int size() const override { return static_cast<int>(objs.size()); }
  std::uint64_t key(int x) const override { return keys[x]; }

  bool homs(int x, int y, const std::function<bool(const GMor&)>& emit) const override {
    if (keys[x] != keys[y]) return true;
    const auto& h = *spec->host;
    const Grid& a = objs[x];
    const Grid& b = objs[y];
    const int nc = (q + 1) * (r + 1);
    std::vector<int> comp(nc, -1);
    bool go_on = true;
    std::function<bool(int)> rec = [&](int k) -> bool {
      if (k == nc) {
        if (!emit(GMor{x, y, std::vector<std::int32_t>(comp.begin(), comp.end())})) {
          go_on = false;
          return false;
        }
        return true;
      }
      const int i = k / (r + 1), j = k % (r + 1);
      for (int phi : spec->iso_out[a.cell[k]]) {
        spec->budget.tick();
        if (h.mtgt[phi] != b.cell[k]) continue;
        // naturality with the left and upper neighbours
        if (j > 0 && h.compose(phi, a.h(i, j - 1)) != h.compose(b.h(i, j - 1), comp[k - 1]))
          continue;
        if (i > 0 &&
            h.compose(phi, a.v(i - 1, j)) != h.compose(b.v(i - 1, j), comp[k - (r + 1)]))
          continue;
        comp[k] = phi;
        if (!rec(k + 1)) return false;
      }
      comp[k] = -1;
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
    for (std::size_t k = 0; k < comp.size(); ++k) {
      for (int w : spec->iso_out[h.mtgt[f.data[k]]])
        if (h.compose(w, f.data[k]) == h.ident[h.msrc[f.data[k]]]) {
          comp[k] = w;
          break;
        }
    }
    return GMor{f.tgt, f.src, comp};
  }
  std::string describe(int x) const override {
    std::string out = "[";
    for (int i = 0; i <= q; ++i) {
      out += i ? ";" : "";
      for (int j = 0; j <= r; ++j) out += (j ? "," : "") + spec->host->oname(objs[x].at(i, j));
    }
    return out + "]";
  }
};

// ---------------------------------------------------------------------------
// The exact nerve as a groupoid-valued presheaf, with virtual top levels.
// ---------------------------------------------------------------------------

struct NerveOptions {
  int matdim = 3;  // materialize levels with q+r <= matdim
  int trunc = 3;   // presheaf truncation (at most matdim+1)
  bool need_classes = true;
  bool need_bicart = true;
  bool zeros_only_aug = true;  // augmentation spanned by the zero objects
};

inline GpdPsh exact_nerve(const Pex& s, const NerveOptions& opt, const Budget& budget) {
  auto y = std::make_shared<GpdPresheaf>();
  y->sh = SigmaTrunc(opt.trunc);
  y->matdim = opt.matdim;
  y->name = "nerve(" + s->name + ")";
  y->levels.resize(y->sh.n_levels());
  std::vector<std::shared_ptr<const GridLevelGroupoid>> gl(y->sh.n_levels());
  for (int lid = 1; lid < y->sh.n_levels(); ++lid) {
    const Lv l = y->sh.levels[lid];
    if (l.q + l.r > opt.matdim) continue;
    gl[lid] = std::make_shared<const GridLevelGroupoid>(s, l.q, l.r, opt.need_classes,
                                                        opt.need_bicart);
    y->levels[lid] = gl[lid];
  }
  // augmentation level: (0,0)-shaped grids on zero objects
  auto aug_level = std::make_shared<const GridLevelGroupoid>(
      s, 0, 0, opt.need_classes, opt.need_bicart,
      opt.zeros_only_aug ? std::function<bool(int)>([s](int o) { return s->zero[o] != 0; })
                         : std::function<bool(int)>());
  y->levels[0] = aug_level;

  auto oper = [y, s, gl](int lid_from, int lid_to, std::vector<int> alpha, std::vector<int> beta) {
    auto from = gl[lid_from];
    auto to = gl[lid_to];
    const int rr = from->r;
    // payload positions of the reindexed component family
    std::vector<int> sel;
    for (std::size_t ii = 0; ii < alpha.size(); ++ii)
      for (std::size_t jj = 0; jj < beta.size(); ++jj) sel.push_back(alpha[ii] * (rr + 1) + beta[jj]);
    GFunctor f{from, to,
               [s, from, to, alpha, beta](int x) {
                 return to->index.at(grid_reindex(*s->host, from->objs[x], alpha, beta));
               },
               [s, from, to, alpha, beta, sel](const GMor& m) {
                 std::vector<std::int32_t> comp;
                 comp.reserve(sel.size());
                 for (int p : sel) comp.push_back(m.data[p]);
                 return GMor{to->index.at(grid_reindex(*s->host, from->objs[m.src], alpha, beta)),
                             to->index.at(grid_reindex(*s->host, from->objs[m.tgt], alpha, beta)),
                             comp};
               },
               "reindex"};
    f.mor_data = [sel](const GMor& m) {
      std::vector<std::int32_t> comp;
      comp.reserve(sel.size());
      for (int p : sel) comp.push_back(m.data[p]);
      return comp;
    };
    return f;
  };

  for (int lid = 1; lid < y->sh.n_levels(); ++lid) {
    const Lv l = y->sh.levels[lid];
    if (l.q + l.r > opt.matdim) continue;
    const int q = l.q, r = l.r;
    if (q >= 1)
      for (int i = 0; i <= q; ++i) {
        std::vector<int> alpha;
        for (int v = 0; v <= q; ++v)
          if (v != i) alpha.push_back(v);
        std::vector<int> beta(r + 1);
        std::iota(beta.begin(), beta.end(), 0);
        y->fv[{lid, i}] = oper(lid, y->sh.id(q - 1, r), alpha, beta);
      }
    if (r >= 1)
      for (int j = 0; j <= r; ++j) {
        std::vector<int> alpha(q + 1);
        std::iota(alpha.begin(), alpha.end(), 0);
        std::vector<int> beta;
        for (int v = 0; v <= r; ++v)
          if (v != j) beta.push_back(v);
        y->fh[{lid, j}] = oper(lid, y->sh.id(q, r - 1), alpha, beta);
      }
    if (q + 1 + r <= opt.matdim)
      for (int i = 0; i <= q; ++i) {
        std::vector<int> alpha;
        for (int v = 0; v <= q + 1; ++v) alpha.push_back(v <= i ? v : v - 1);
        std::vector<int> beta(r + 1);
        std::iota(beta.begin(), beta.end(), 0);
        y->sv[{lid, i}] = oper(lid, y->sh.id(q + 1, r), alpha, beta);
      }
    if (q + r + 1 <= opt.matdim)
      for (int j = 0; j <= r; ++j) {
        std::vector<int> alpha(q + 1);
        std::iota(alpha.begin(), alpha.end(), 0);
        std::vector<int> beta;
        for (int v = 0; v <= r + 1; ++v) beta.push_back(v <= j ? v : v - 1);
        y->sh_[{lid, j}] = oper(lid, y->sh.id(q, r + 1), alpha, beta);
      }
  }
  // augmentation functor: inclusion of zero one-cell grids into level (0,0)
  {
    auto z = aug_level;
    auto to = gl[y->sh.id(0, 0)];
    y->aug = GFunctor{z, to, [z, to](int x) { return to->index.at(z->objs[x]); },
                      [z, to](const GMor& m) {
                        return GMor{to->index.at(z->objs[m.src]), to->index.at(z->objs[m.tgt]),
                                    m.data};
                      },
                      "aug"};
    y->aug.mor_data = [](const GMor& m) { return m.data; };
  }
  // virtual top-level handlers: glue along the longer direction and compare
  // every face against the given ones
  if (opt.trunc > opt.matdim) {
    auto spec = s;
    auto shp = y->sh;
    auto need_classes = opt.need_classes;
    auto need_bicart = opt.need_bicart;
    auto resolve_grids = [gl](int lid, const std::vector<int>& ids) {
      std::vector<Grid> out;
      for (int v : ids) out.push_back(gl[lid]->objs[v]);
      return out;
    };
    y->virtual_object_ok = [spec, gl, shp, resolve_grids, need_classes, need_bicart](
                               int q, int r, const std::vector<int>& vfaces,
                               const std::vector<int>& hfaces) {
      const auto vg = q >= 1 ? resolve_grids(shp.id(q - 1, r), vfaces) : std::vector<Grid>{};
      const auto hg = r >= 1 ? resolve_grids(shp.id(q, r - 1), hfaces) : std::vector<Grid>{};
      auto g = glue_grid_from_faces(q, r, vg, hg);
      if (!g || !grid_valid(*spec, *g, need_classes, need_bicart)) return false;
      // all faces must restrict back to the given objects
      if (q >= 1)
        for (int i = 0; i <= q; ++i) {
          std::vector<int> alpha;
          for (int v = 0; v <= q; ++v)
            if (v != i) alpha.push_back(v);
          std::vector<int> beta(r + 1);
          std::iota(beta.begin(), beta.end(), 0);
          const Grid f = grid_reindex(*spec->host, *g, alpha, beta);
          auto it = gl[shp.id(q - 1, r)]->index.find(f);
          if (it == gl[shp.id(q - 1, r)]->index.end() || it->second != vfaces[i]) return false;
        }
      if (r >= 1)
        for (int j = 0; j <= r; ++j) {
          std::vector<int> alpha(q + 1);
          std::iota(alpha.begin(), alpha.end(), 0);
          std::vector<int> beta;
          for (int v = 0; v <= r; ++v)
            if (v != j) beta.push_back(v);
          const Grid f = grid_reindex(*spec->host, *g, alpha, beta);
          auto it = gl[shp.id(q, r - 1)]->index.find(f);
          if (it == gl[shp.id(q, r - 1)]->index.end() || it->second != hfaces[j]) return false;
        }
      return true;
    };
    y->virtual_mor_ok = [](int q, int r, const std::vector<GMor>& vfaces,
                           const std::vector<GMor>& hfaces) {
      return glue_payload_from_faces(q, r, vfaces, hfaces).has_value();
    };
  }
  require_ok(validate_gpsh(*y, budget));
  return y;
}

// T-style nerve of a plain category: same grids without class or square
// constraints; the augmentation is the identity on the (0,0) level.
inline GpdPsh t_of_nerve_gpd(const Cat& c, const NerveOptions& opt, const Budget& budget) {
  std::vector<char> all_m(c->n_mor(), 1);
  std::vector<char> all_z(c->n_obj, 1);
  auto s = make_pex(c, all_m, all_m, all_z, "all", budget);
  // bypass the proto-exact validator: this is plain functor-grid data
  NerveOptions o = opt;
  o.need_classes = false;
  o.need_bicart = false;
  o.zeros_only_aug = false;
  return exact_nerve(s, o, budget);
}

// set-valued shadow of the same construction
inline SetPsh t_of_nerve_set(const Cat& c, int trunc, const Budget& budget) {
  std::vector<char> all_m(c->n_mor(), 1);
  std::vector<char> all_z(c->n_obj, 1);
  auto s = make_pex(c, all_m, all_m, all_z, "all", budget);
  SetPresheaf y;
  y.sh = SigmaTrunc(trunc);
  const int L = y.sh.n_levels();
  y.sizes.resize(L);
  y.label.resize(L);
  std::vector<std::vector<Grid>> grids(L);
  std::vector<std::unordered_map<Grid, int, GridHash>> index(L);
  for (int lid = 1; lid < L; ++lid) {
    const Lv l = y.sh.levels[lid];
    grids[lid] = enumerate_grids_naive(*s, l.q, l.r, false, false);
    for (std::size_t i = 0; i < grids[lid].size(); ++i)
      index[lid][grids[lid][i]] = static_cast<int>(i);
    y.sizes[lid] = static_cast<int>(grids[lid].size());
  }
  y.sizes[0] = c->n_obj;
  auto tab = [&](int lid_from, int lid_to, const std::vector<int>& alpha,
                 const std::vector<int>& beta) {
    std::vector<int> t;
    for (const auto& g : grids[lid_from])
      t.push_back(index[lid_to].at(grid_reindex(*c, g, alpha, beta)));
    return t;
  };
  for (int lid = 1; lid < L; ++lid) {
    const Lv l = y.sh.levels[lid];
    const int q = l.q, r = l.r;
    std::vector<int> ida(q + 1), idb(r + 1);
    std::iota(ida.begin(), ida.end(), 0);
    std::iota(idb.begin(), idb.end(), 0);
    if (q >= 1)
      for (int i = 0; i <= q; ++i) {
        std::vector<int> alpha;
        for (int v = 0; v <= q; ++v)
          if (v != i) alpha.push_back(v);
        y.fv[{lid, i}] = tab(lid, y.sh.id(q - 1, r), alpha, idb);
      }
    if (r >= 1)
      for (int j = 0; j <= r; ++j) {
        std::vector<int> beta;
        for (int v = 0; v <= r; ++v)
          if (v != j) beta.push_back(v);
        y.fh[{lid, j}] = tab(lid, y.sh.id(q, r - 1), ida, beta);
      }
    if (q + 1 + r <= trunc)
      for (int i = 0; i <= q; ++i) {
        std::vector<int> alpha;
        for (int v = 0; v <= q + 1; ++v) alpha.push_back(v <= i ? v : v - 1);
        y.sv[{lid, i}] = tab(lid, y.sh.id(q + 1, r), alpha, idb);
      }
    if (q + r + 1 <= trunc)
      for (int j = 0; j <= r; ++j) {
        std::vector<int> beta;
        for (int v = 0; v <= r + 1; ++v) beta.push_back(v <= j ? v : v - 1);
        y.sh_[{lid, j}] = tab(lid, y.sh.id(q, r + 1), ida, beta);
      }
  }
  for (int o = 0; o < c->n_obj; ++o) {
    Grid g;
    g.q = g.r = 0;
    g.cell = {o};
    y.aug.push_back(index[y.sh.id(0, 0)].at(g));
  }
  return validated(std::move(y));
}

}  // namespace sdot
