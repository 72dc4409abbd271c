#pragma once

#include <random>

#include "sdot/simplicial.hpp"

namespace sdot {

// ---------------------------------------------------------------------------
// The index category for preaugmented bisimplicial objects: pairs (q,r) plus
// one terminal level.  Presheaves are stored within a truncation q+r <= D,
// with generator operators
//   fv i : Y_{q,r} -> Y_{q-1,r}      sv i : Y_{q,r} -> Y_{q+1,r}
//   fh j : Y_{q,r} -> Y_{q,r-1}      sh j : Y_{q,r} -> Y_{q,r+1}
//   aug  : Y_{-1}  -> Y_{0,0}
// (sv/sh exist when the target stays inside the truncation).
// ---------------------------------------------------------------------------

struct Lv {
  int q = 0, r = 0;
  bool aug = false;
  bool operator==(const Lv&) const = default;
  bool operator<(const Lv& o) const {
    if (aug != o.aug) return aug > o.aug;  // aug first
    if (q + r != o.q + o.r) return q + r < o.q + o.r;
    return q < o.q;
  }
  std::string str() const {
    return aug ? "[-1]" : "(" + std::to_string(q) + "," + std::to_string(r) + ")";
  }
};

struct SigmaTrunc {
  int trunc = 0;
  std::vector<Lv> levels;          // id -> Lv; id 0 is the augmentation level
  std::map<std::pair<int, int>, int> id_of;

  explicit SigmaTrunc(int d = 0) : trunc(d) {
    levels.push_back({0, 0, true});
    for (int deg = 0; deg <= d; ++deg)
      for (int q = deg; q >= 0; --q) {
        id_of[{q, deg - q}] = static_cast<int>(levels.size());
        levels.push_back({q, deg - q, false});
      }
  }
  int n_levels() const { return static_cast<int>(levels.size()); }
  int id(int q, int r) const { return id_of.at({q, r}); }
  int aug_id() const { return 0; }
  bool has(int q, int r) const { return q >= 0 && r >= 0 && q + r <= trunc; }
};

struct SetPresheaf {
  SigmaTrunc sh{0};
  std::vector<int> sizes;  // per level id
  // generator tables keyed by (level id of the SOURCE of the map, i)
  std::map<std::pair<int, int>, std::vector<int>> fv, fh, sv, sh_;
  std::vector<int> aug;  // level [-1] -> (0,0)
  std::vector<std::vector<std::string>> label;

  int trunc() const { return sh.trunc; }
  int size(int lid) const { return sizes[lid]; }
  int size(int q, int r) const { return sizes[sh.id(q, r)]; }
  int aug_size() const { return sizes[0]; }
  std::string name(int lid, int x) const {
    if (lid < static_cast<int>(label.size()) && x < static_cast<int>(label[lid].size()) &&
        !label[lid][x].empty())
      return label[lid][x];
    return sh.levels[lid].str() + "#" + std::to_string(x);
  }
};

using SetPsh = std::shared_ptr<const SetPresheaf>;

// --- generator access -------------------------------------------------------

inline int psh_fv(const SetPresheaf& y, int q, int r, int i, int x) {
  return y.fv.at({y.sh.id(q, r), i})[x];
}
inline int psh_fh(const SetPresheaf& y, int q, int r, int j, int x) {
  return y.fh.at({y.sh.id(q, r), j})[x];
}
inline int psh_sv(const SetPresheaf& y, int q, int r, int i, int x) {
  return y.sv.at({y.sh.id(q, r), i})[x];
}
inline int psh_sh(const SetPresheaf& y, int q, int r, int j, int x) {
  return y.sh_.at({y.sh.id(q, r), j})[x];
}

// Action of an arbitrary pair of monotone maps (alpha: [q]->[q'],
// beta: [r]->[r']) on an element at level (q',r'), landing at (q,r).
inline int psh_apply(const SetPresheaf& y, const std::vector<int>& alpha,
                     const std::vector<int>& beta, int q2, int r2, int x) {
  // first variable: factor alpha = inj . surj and act contravariantly
  int q = static_cast<int>(alpha.size()) - 1;
  int r = static_cast<int>(beta.size()) - 1;
  int cur = x, cq = q2, cr = r2;
  {
    std::vector<char> keep(q2 + 1, 0);
    for (int v : alpha) keep[v] = 1;
    for (int v = q2; v >= 0; --v)
      if (!keep[v]) {
        cur = psh_fv(y, cq, cr, v, cur);
        --cq;
      }
    // image values now bijective onto [k]; add degeneracies for repeats
    std::vector<int> pi;
    {
      std::vector<int> image;
      for (int v : alpha)
        if (image.empty() || image.back() != v) image.push_back(v);
      for (int v : alpha)
        pi.push_back(static_cast<int>(std::lower_bound(image.begin(), image.end(), v) - image.begin()));
    }
    std::vector<int> flats;
    while (true) {
      int t = -1;
      for (std::size_t u = 0; u + 1 < pi.size(); ++u)
        if (pi[u] == pi[u + 1]) {
          t = static_cast<int>(u);
          break;
        }
      if (t < 0) break;
      flats.push_back(t);
      pi.erase(pi.begin() + t);
    }
    for (auto it = flats.rbegin(); it != flats.rend(); ++it) {
      cur = psh_sv(y, cq, cr, *it, cur);
      ++cq;
    }
  }
  {
    std::vector<char> keep(r2 + 1, 0);
    for (int v : beta) keep[v] = 1;
    for (int v = r2; v >= 0; --v)
      if (!keep[v]) {
        cur = psh_fh(y, cq, cr, v, cur);
        --cr;
      }
    std::vector<int> pi;
    {
      std::vector<int> image;
      for (int v : beta)
        if (image.empty() || image.back() != v) image.push_back(v);
      for (int v : beta)
        pi.push_back(static_cast<int>(std::lower_bound(image.begin(), image.end(), v) - image.begin()));
    }
    std::vector<int> flats;
    while (true) {
      int t = -1;
      for (std::size_t u = 0; u + 1 < pi.size(); ++u)
        if (pi[u] == pi[u + 1]) {
          t = static_cast<int>(u);
          break;
        }
      if (t < 0) break;
      flats.push_back(t);
      pi.erase(pi.begin() + t);
    }
    for (auto it = flats.rbegin(); it != flats.rend(); ++it) {
      cur = psh_sh(y, cq, cr, *it, cur);
      ++cr;
    }
  }
  (void)q;
  (void)r;
  return cur;
}

// Y_{-1} -> Y_{q,r}: augmentation followed by the unique total degeneracy.
inline int psh_from_aug(const SetPresheaf& y, int q, int r, int x) {
  int cur = y.aug[x];
  std::vector<int> alpha(q + 1, 0), beta(r + 1, 0);
  return psh_apply(y, alpha, beta, 0, 0, cur);
}

// --- validation -------------------------------------------------------------

inline CheckResult validate_set_presheaf(const SetPresheaf& y) {
  const auto& sh = y.sh;
  auto range_ok = [&](const std::vector<int>& t, int lo_size) {
    for (int v : t)
      if (v < 0 || v >= lo_size) return false;
    return true;
  };
  for (const auto& [key, tab] : y.fv) {
    const Lv l = sh.levels[key.first];
    if (static_cast<int>(tab.size()) != y.size(key.first) ||
        !range_ok(tab, y.size(l.q - 1, l.r)))
      return fail("malformed", "vertical face table at " + l.str());
  }
  for (const auto& [key, tab] : y.fh) {
    const Lv l = sh.levels[key.first];
    if (static_cast<int>(tab.size()) != y.size(key.first) ||
        !range_ok(tab, y.size(l.q, l.r - 1)))
      return fail("malformed", "horizontal face table at " + l.str());
  }
  if (static_cast<int>(y.aug.size()) != y.aug_size() || !range_ok(y.aug, y.size(0, 0)))
    return fail("malformed", "augmentation table");

  // single-direction simplicial identities + cross-direction commutation
  for (int lid = 1; lid < sh.n_levels(); ++lid) {
    const Lv l = sh.levels[lid];
    const int q = l.q, r = l.r;
    for (int x = 0; x < y.size(lid); ++x) {
      // d_i d_j, both directions
      for (int j = 0; j <= q; ++j)
        for (int i = 0; i < j; ++i)
          if (q >= 2 &&
              psh_fv(y, q - 1, r, i, psh_fv(y, q, r, j, x)) !=
                  psh_fv(y, q - 1, r, j - 1, psh_fv(y, q, r, i, x)))
            return fail("relation", "fv fv at " + y.name(lid, x));
      for (int j = 0; j <= r; ++j)
        for (int i = 0; i < j; ++i)
          if (r >= 2 &&
              psh_fh(y, q, r - 1, i, psh_fh(y, q, r, j, x)) !=
                  psh_fh(y, q, r - 1, j - 1, psh_fh(y, q, r, i, x)))
            return fail("relation", "fh fh at " + y.name(lid, x));
      // cross commutation of faces
      if (q >= 1 && r >= 1)
        for (int i = 0; i <= q; ++i)
          for (int j = 0; j <= r; ++j)
            if (psh_fh(y, q - 1, r, j, psh_fv(y, q, r, i, x)) !=
                psh_fv(y, q, r - 1, i, psh_fh(y, q, r, j, x)))
              return fail("relation", "fv fh at " + y.name(lid, x));
      // degeneracy relations within truncation
      if (q + 1 + r <= y.trunc()) {
        for (int i = 0; i <= q; ++i) {
          const int up = psh_sv(y, q, r, i, x);
          for (int k2 = 0; k2 <= q + 1; ++k2) {
            const int got = psh_fv(y, q + 1, r, k2, up);
            int expect;
            if (k2 == i || k2 == i + 1)
              expect = x;
            else if (k2 < i)
              expect = psh_sv(y, q - 1, r, i - 1, psh_fv(y, q, r, k2, x));
            else
              expect = psh_sv(y, q - 1, r, i, psh_fv(y, q, r, k2 - 1, x));
            if (got != expect) return fail("relation", "fv sv at " + y.name(lid, x));
          }
          if (r >= 1)
            for (int j = 0; j <= r; ++j)
              if (psh_fh(y, q + 1, r, j, up) != psh_sv(y, q, r - 1, i, psh_fh(y, q, r, j, x)))
                return fail("relation", "fh sv at " + y.name(lid, x));
        }
      }
      if (q + r + 1 <= y.trunc()) {
        for (int j = 0; j <= r; ++j) {
          const int up = psh_sh(y, q, r, j, x);
          for (int k2 = 0; k2 <= r + 1; ++k2) {
            const int got = psh_fh(y, q, r + 1, k2, up);
            int expect;
            if (k2 == j || k2 == j + 1)
              expect = x;
            else if (k2 < j)
              expect = psh_sh(y, q, r - 1, j - 1, psh_fh(y, q, r, k2, x));
            else
              expect = psh_sh(y, q, r - 1, j, psh_fh(y, q, r, k2 - 1, x));
            if (got != expect) return fail("relation", "fh sh at " + y.name(lid, x));
          }
          if (q >= 1)
            for (int i = 0; i <= q; ++i)
              if (psh_fv(y, q, r + 1, i, up) != psh_sh(y, q - 1, r, j, psh_fv(y, q, r, i, x)))
                return fail("relation", "fv sh at " + y.name(lid, x));
        }
      }
      if (q + r + 2 <= y.trunc())
        for (int i = 0; i <= q; ++i)
          for (int j = 0; j <= r; ++j)
            if (psh_sh(y, q + 1, r, j, psh_sv(y, q, r, i, x)) !=
                psh_sv(y, q, r + 1, i, psh_sh(y, q, r, j, x)))
              return fail("relation", "sv sh at " + y.name(lid, x));
      // s s identities per direction
      if (q + 2 + r <= y.trunc())
        for (int j2 = 0; j2 <= q; ++j2)
          for (int i = 0; i <= j2; ++i)
            if (psh_sv(y, q + 1, r, j2 + 1, psh_sv(y, q, r, i, x)) !=
                psh_sv(y, q + 1, r, i, psh_sv(y, q, r, j2, x)))
              return fail("relation", "sv sv at " + y.name(lid, x));
      if (q + r + 2 <= y.trunc())
        for (int j2 = 0; j2 <= r; ++j2)
          for (int i = 0; i <= j2; ++i)
            if (psh_sh(y, q, r + 1, j2 + 1, psh_sh(y, q, r, i, x)) !=
                psh_sh(y, q, r + 1, i, psh_sh(y, q, r, j2, x)))
              return fail("relation", "sh sh at " + y.name(lid, x));
    }
  }
  return pass();
}

inline SetPsh share(SetPresheaf p) { return std::make_shared<const SetPresheaf>(std::move(p)); }
inline SetPsh validated(SetPresheaf p) {
  require_ok(validate_set_presheaf(p));
  return share(std::move(p));
}

// --- nondegenerate cells ----------------------------------------------------

inline bool psh_cell_degenerate(const SetPresheaf& y, int lid, int x) {
  const Lv l = y.sh.levels[lid];
  if (l.aug) return false;
  if (l.q >= 1)
    for (int i = 0; i < l.q; ++i)
      for (int z = 0; z < y.size(l.q - 1, l.r); ++z)
        if (psh_sv(y, l.q - 1, l.r, i, z) == x) return true;
  if (l.r >= 1)
    for (int j = 0; j < l.r; ++j)
      for (int z = 0; z < y.size(l.q, l.r - 1); ++z)
        if (psh_sh(y, l.q, l.r - 1, j, z) == x) return true;
  return false;
}

// EZ data: nondegenerate base plus the two surjections reaching the cell.
struct PshEZ {
  int base_lid, base;
  std::vector<int> alpha, beta;  // monotone surjective value lists
};

inline PshEZ psh_ez(const SetPresheaf& y, int lid, int x) {
  Lv l = y.sh.levels[lid];
  std::vector<int> alpha(l.aug ? 1 : l.q + 1), beta(l.aug ? 1 : l.r + 1);
  std::iota(alpha.begin(), alpha.end(), 0);
  std::iota(beta.begin(), beta.end(), 0);
  if (l.aug) return {lid, x, alpha, beta};
  int q = l.q, r = l.r, cur = x;
  bool changed = true;
  while (changed) {
    changed = false;
    for (int i = 0; !changed && i < q; ++i)
      for (int z = 0; !changed && z < y.size(q - 1, r); ++z)
        if (psh_sv(y, q - 1, r, i, z) == cur) {
          cur = z;
          for (auto& v : alpha)
            if (v > i) --v;
          --q;
          changed = true;
        }
    for (int j = 0; !changed && j < r; ++j)
      for (int z = 0; !changed && z < y.size(q, r - 1); ++z)
        if (psh_sh(y, q, r - 1, j, z) == cur) {
          cur = z;
          for (auto& v : beta)
            if (v > j) --v;
          --r;
          changed = true;
        }
  }
  return {y.sh.id(q, r), cur, alpha, beta};
}

// ---------------------------------------------------------------------------
// The universal chain shapes: W_n and the cone shape inside W_{n+1}.
// ---------------------------------------------------------------------------

// chains (i_0<=...<=i_q <= j_0<=...<=j_r <= n), i.e. monotone lists of length
// q+r+2 in [n]; level [-1] holds the diagonal pairs (i,i)
inline std::vector<std::vector<int>> w_chains(int n, int q, int r) {
  return monotone_maps(q + 1 + r, n);
}

struct WPresheaf {
  SetPsh psh;
  int n = 0;
  // cell id <-> chain per level id (chains stored as the full value list)
  std::vector<std::vector<std::vector<int>>> chains;
  std::vector<std::map<std::vector<int>, int>> index;
};

inline WPresheaf w_presheaf(int n, int trunc) {
  WPresheaf w;
  w.n = n;
  SetPresheaf y;
  y.sh = SigmaTrunc(trunc);
  w.chains.resize(y.sh.n_levels());
  w.index.resize(y.sh.n_levels());
  y.sizes.resize(y.sh.n_levels());
  y.label.resize(y.sh.n_levels());
  // aug level: diagonal pairs
  for (int i = 0; i <= n; ++i) {
    w.index[0][{i, i}] = i;
    w.chains[0].push_back({i, i});
    y.label[0].push_back("(" + std::to_string(i) + "," + std::to_string(i) + ")");
  }
  y.sizes[0] = n + 1;
  for (int lid = 1; lid < y.sh.n_levels(); ++lid) {
    const Lv l = y.sh.levels[lid];
    w.chains[lid] = w_chains(n, l.q, l.r);
    for (std::size_t i = 0; i < w.chains[lid].size(); ++i) {
      w.index[lid][w.chains[lid][i]] = static_cast<int>(i);
      const auto& c = w.chains[lid][i];
      std::vector<int> ih(c.begin(), c.begin() + l.q + 1), jh(c.begin() + l.q + 1, c.end());
      y.label[lid].push_back("(" + join_ints(ih) + "|" + join_ints(jh) + ")");
    }
    y.sizes[lid] = static_cast<int>(w.chains[lid].size());
  }
  // generators: faces remove, degeneracies repeat
  for (int lid = 1; lid < y.sh.n_levels(); ++lid) {
    const Lv l = y.sh.levels[lid];
    const int q = l.q, r = l.r;
    if (q >= 1)
      for (int i = 0; i <= q; ++i) {
        std::vector<int>& t = y.fv[{lid, i}];
        for (const auto& c : w.chains[lid]) {
          auto d = c;
          d.erase(d.begin() + i);
          t.push_back(w.index[y.sh.id(q - 1, r)].at(d));
        }
      }
    if (r >= 1)
      for (int j = 0; j <= r; ++j) {
        std::vector<int>& t = y.fh[{lid, j}];
        for (const auto& c : w.chains[lid]) {
          auto d = c;
          d.erase(d.begin() + q + 1 + j);
          t.push_back(w.index[y.sh.id(q, r - 1)].at(d));
        }
      }
    if (q + 1 + r <= trunc)
      for (int i = 0; i <= q; ++i) {
        std::vector<int>& t = y.sv[{lid, i}];
        for (const auto& c : w.chains[lid]) {
          auto d = c;
          d.insert(d.begin() + i, d[i]);
          t.push_back(w.index[y.sh.id(q + 1, r)].at(d));
        }
      }
    if (q + r + 1 <= trunc)
      for (int j = 0; j <= r; ++j) {
        std::vector<int>& t = y.sh_[{lid, j}];
        for (const auto& c : w.chains[lid]) {
          auto d = c;
          d.insert(d.begin() + q + 1 + j, d[q + 1 + j]);
          t.push_back(w.index[y.sh.id(q, r + 1)].at(d));
        }
      }
  }
  for (int i = 0; i <= n; ++i) y.aug.push_back(w.index[y.sh.id(0, 0)].at({i, i}));
  w.psh = validated(std::move(y));
  return w;
}

// closed-form |W_n at (k,l)| for the count oracle
inline std::uint64_t w_level_count(int n, int k, int l) {
  return binomial(n + k + l + 2, k + l + 2);
}

// ---------------------------------------------------------------------------
// Presheaf constructions: representables, coproducts, quotients.  Quotients
// by a generator-closed equivalence are computed levelwise, so any seed
// identification yields a valid presheaf; this powers the seeded random
// presheaf corpus.
// ---------------------------------------------------------------------------

inline SetPsh representable_psh(int q0, int r0, int trunc) {
  SetPresheaf y;
  y.sh = SigmaTrunc(trunc);
  const int L = y.sh.n_levels();
  y.sizes.resize(L);
  y.label.resize(L);
  // level (k,l): pairs of monotone maps ([k]->[q0], [l]->[r0]); level [-1] empty
  std::vector<std::vector<std::pair<std::vector<int>, std::vector<int>>>> elems(L);
  std::vector<std::map<std::pair<std::vector<int>, std::vector<int>>, int>> index(L);
  y.sizes[0] = 0;
  for (int lid = 1; lid < L; ++lid) {
    const Lv l = y.sh.levels[lid];
    for (const auto& a : monotone_maps(l.q, q0))
      for (const auto& b : monotone_maps(l.r, r0)) {
        index[lid][{a, b}] = static_cast<int>(elems[lid].size());
        elems[lid].push_back({a, b});
        y.label[lid].push_back("(" + join_ints(a) + ";" + join_ints(b) + ")");
      }
    y.sizes[lid] = static_cast<int>(elems[lid].size());
  }
  for (int lid = 1; lid < L; ++lid) {
    const Lv l = y.sh.levels[lid];
    if (l.q >= 1)
      for (int i = 0; i <= l.q; ++i) {
        auto& t = y.fv[{lid, i}];
        for (const auto& [a, b] : elems[lid]) {
          auto a2 = a;
          a2.erase(a2.begin() + i);
          t.push_back(index[y.sh.id(l.q - 1, l.r)].at({a2, b}));
        }
      }
    if (l.r >= 1)
      for (int j = 0; j <= l.r; ++j) {
        auto& t = y.fh[{lid, j}];
        for (const auto& [a, b] : elems[lid]) {
          auto b2 = b;
          b2.erase(b2.begin() + j);
          t.push_back(index[y.sh.id(l.q, l.r - 1)].at({a, b2}));
        }
      }
    if (l.q + 1 + l.r <= trunc)
      for (int i = 0; i <= l.q; ++i) {
        auto& t = y.sv[{lid, i}];
        for (const auto& [a, b] : elems[lid]) {
          auto a2 = a;
          a2.insert(a2.begin() + i, a2[i]);
          t.push_back(index[y.sh.id(l.q + 1, l.r)].at({a2, b}));
        }
      }
    if (l.q + l.r + 1 <= trunc)
      for (int j = 0; j <= l.r; ++j) {
        auto& t = y.sh_[{lid, j}];
        for (const auto& [a, b] : elems[lid]) {
          auto b2 = b;
          b2.insert(b2.begin() + j, b2[j]);
          t.push_back(index[y.sh.id(l.q, l.r + 1)].at({a, b2}));
        }
      }
  }
  return validated(std::move(y));
}

inline SetPsh psh_coproduct(const std::vector<SetPsh>& parts) {
  SetPresheaf y;
  y.sh = parts.at(0)->sh;
  const int L = y.sh.n_levels();
  y.sizes.assign(L, 0);
  y.label.resize(L);
  std::vector<std::vector<int>> offset(parts.size(), std::vector<int>(L, 0));
  for (std::size_t p = 0; p < parts.size(); ++p)
    for (int lid = 0; lid < L; ++lid) {
      offset[p][lid] = y.sizes[lid];
      y.sizes[lid] += parts[p]->size(lid);
      for (int x = 0; x < parts[p]->size(lid); ++x)
        y.label[lid].push_back("c" + std::to_string(p) + ":" + parts[p]->name(lid, x));
    }
  auto merge = [&](std::map<std::pair<int, int>, std::vector<int>> SetPresheaf::*field, bool vertical,
                   bool face) {
    for (const auto& [key, tab0] : (*parts[0]).*field) {
      (void)tab0;
      const Lv l = y.sh.levels[key.first];
      int tl;
      if (face)
        tl = vertical ? y.sh.id(l.q - 1, l.r) : y.sh.id(l.q, l.r - 1);
      else
        tl = vertical ? y.sh.id(l.q + 1, l.r) : y.sh.id(l.q, l.r + 1);
      auto& t = (y.*field)[key];
      for (std::size_t p = 0; p < parts.size(); ++p)
        for (int v : ((*parts[p]).*field).at(key)) t.push_back(v + offset[p][tl]);
    }
  };
  merge(&SetPresheaf::fv, true, true);
  merge(&SetPresheaf::fh, false, true);
  merge(&SetPresheaf::sv, true, false);
  merge(&SetPresheaf::sh_, false, false);
  const int z = y.sh.id(0, 0);
  for (std::size_t p = 0; p < parts.size(); ++p)
    for (int v : parts[p]->aug) y.aug.push_back(v + offset[p][z]);
  return validated(std::move(y));
}

// Quotient by the generator-closed equivalence generated by seed pairs.
inline SetPsh psh_quotient(const SetPsh& ys,
                           const std::vector<std::tuple<int, int, int>>& seeds) {
  const auto& y = *ys;
  const int L = y.sh.n_levels();
  std::vector<detail::UF> uf(L);
  for (int lid = 0; lid < L; ++lid) {
    uf[lid].p.resize(y.size(lid));
    std::iota(uf[lid].p.begin(), uf[lid].p.end(), 0);
  }
  for (auto [lid, a, b] : seeds) uf[lid].unite(a, b);
  bool changed = true;
  auto close_tab = [&](int src_lid, int tgt_lid, const std::vector<int>& tab) {
    // representatives must map equally
    std::map<int, int> seen;
    bool any = false;
    for (int x = 0; x < static_cast<int>(tab.size()); ++x) {
      const int rx = uf[src_lid].find(x);
      auto it = seen.find(rx);
      if (it == seen.end())
        seen[rx] = tab[x];
      else if (uf[tgt_lid].unite(it->second, tab[x]))
        any = true;
    }
    return any;
  };
  while (changed) {
    changed = false;
    for (const auto& [key, tab] : y.fv) {
      const Lv l = y.sh.levels[key.first];
      changed |= close_tab(key.first, y.sh.id(l.q - 1, l.r), tab);
    }
    for (const auto& [key, tab] : y.fh) {
      const Lv l = y.sh.levels[key.first];
      changed |= close_tab(key.first, y.sh.id(l.q, l.r - 1), tab);
    }
    for (const auto& [key, tab] : y.sv) {
      const Lv l = y.sh.levels[key.first];
      changed |= close_tab(key.first, y.sh.id(l.q + 1, l.r), tab);
    }
    for (const auto& [key, tab] : y.sh_) {
      const Lv l = y.sh.levels[key.first];
      changed |= close_tab(key.first, y.sh.id(l.q, l.r + 1), tab);
    }
    changed |= close_tab(0, y.sh.id(0, 0), y.aug);
  }
  // rebuild
  SetPresheaf out;
  out.sh = y.sh;
  out.sizes.resize(L);
  out.label.resize(L);
  std::vector<std::vector<int>> cls(L);
  for (int lid = 0; lid < L; ++lid) {
    cls[lid].assign(y.size(lid), -1);
    for (int x = 0; x < y.size(lid); ++x) {
      const int r = uf[lid].find(x);
      if (cls[lid][r] < 0) {
        cls[lid][r] = out.sizes[lid]++;
        out.label[lid].push_back(y.name(lid, r));
      }
      cls[lid][x] = cls[lid][r];
    }
  }
  auto push = [&](std::map<std::pair<int, int>, std::vector<int>> SetPresheaf::*field, bool vertical,
                  bool face) {
    for (const auto& [key, tab] : y.*field) {
      const Lv l = y.sh.levels[key.first];
      int tl;
      if (face)
        tl = vertical ? y.sh.id(l.q - 1, l.r) : y.sh.id(l.q, l.r - 1);
      else
        tl = vertical ? y.sh.id(l.q + 1, l.r) : y.sh.id(l.q, l.r + 1);
      auto& t = (out.*field)[key];
      t.assign(out.sizes[key.first], -1);
      for (int x = 0; x < y.size(key.first); ++x) t[cls[key.first][x]] = cls[tl][tab[x]];
    }
  };
  push(&SetPresheaf::fv, true, true);
  push(&SetPresheaf::fh, false, true);
  push(&SetPresheaf::sv, true, false);
  push(&SetPresheaf::sh_, false, false);
  out.aug.assign(out.sizes[0], -1);
  const int z = y.sh.id(0, 0);
  for (int x = 0; x < y.aug_size(); ++x) out.aug[cls[0][x]] = cls[z][y.aug[x]];
  return validated(std::move(out));
}

// Seeded random presheaf: quotient of a coproduct of representables.
inline SetPsh random_set_presheaf(std::uint64_t seed, int trunc) {
  std::mt19937_64 rng(seed);
  auto pick = [&](int lo, int hi) { return lo + static_cast<int>(rng() % (hi - lo + 1)); };
  std::vector<SetPsh> parts;
  const int n_parts = pick(1, 3);
  for (int p = 0; p < n_parts; ++p) {
    switch (pick(0, 3)) {
      case 0:
        parts.push_back(w_presheaf(pick(0, 2), trunc).psh);
        break;
      case 1:
        parts.push_back(representable_psh(pick(0, 1), pick(0, 1), trunc));
        break;
      case 2:
        parts.push_back(representable_psh(pick(0, 2), 0, trunc));
        break;
      default:
        parts.push_back(representable_psh(0, pick(0, 2), trunc));
        break;
    }
  }
  auto y = psh_coproduct(parts);
  const int n_glue = pick(0, 2);
  std::vector<std::tuple<int, int, int>> seeds;
  for (int g = 0; g < n_glue; ++g) {
    const int lid = pick(0, y->sh.n_levels() - 1);
    if (y->size(lid) < 2) continue;
    const int a = pick(0, y->size(lid) - 1), b = pick(0, y->size(lid) - 1);
    if (a != b) seeds.push_back({lid, a, b});
  }
  if (!seeds.empty()) y = psh_quotient(y, seeds);
  return y;
}

// Maps of set presheaves (same truncation).
struct SetPm {
  SetPsh dom, cod;
  std::vector<std::vector<int>> val;  // per level id
  bool operator==(const SetPm& o) const { return val == o.val; }
  bool operator<(const SetPm& o) const { return val < o.val; }
};

inline CheckResult check_set_pm(const SetPm& f) {
  const auto& a = *f.dom;
  const auto& b = *f.cod;
  if (a.sh.trunc != b.sh.trunc) return fail("malformed", "truncation mismatch");
  for (const auto& [key, tab] : a.fv) {
    const auto& bt = b.fv.at(key);
    const Lv l = a.sh.levels[key.first];
    const int lo = a.sh.id(l.q - 1, l.r);
    for (int x = 0; x < a.size(key.first); ++x)
      if (f.val[lo][tab[x]] != bt[f.val[key.first][x]])
        return fail("not-natural", "fv at " + a.name(key.first, x));
  }
  for (const auto& [key, tab] : a.fh) {
    const auto& bt = b.fh.at(key);
    const Lv l = a.sh.levels[key.first];
    const int lo = a.sh.id(l.q, l.r - 1);
    for (int x = 0; x < a.size(key.first); ++x)
      if (f.val[lo][tab[x]] != bt[f.val[key.first][x]])
        return fail("not-natural", "fh at " + a.name(key.first, x));
  }
  for (const auto& [key, tab] : a.sv) {
    const auto& bt = b.sv.at(key);
    const Lv l = a.sh.levels[key.first];
    const int hi = a.sh.id(l.q + 1, l.r);
    for (int x = 0; x < a.size(key.first); ++x)
      if (f.val[hi][tab[x]] != bt[f.val[key.first][x]])
        return fail("not-natural", "sv at " + a.name(key.first, x));
  }
  for (const auto& [key, tab] : a.sh_) {
    const auto& bt = b.sh_.at(key);
    const Lv l = a.sh.levels[key.first];
    const int hi = a.sh.id(l.q, l.r + 1);
    for (int x = 0; x < a.size(key.first); ++x)
      if (f.val[hi][tab[x]] != bt[f.val[key.first][x]])
        return fail("not-natural", "sh at " + a.name(key.first, x));
  }
  const int z = f.dom->sh.id(0, 0);
  for (int x = 0; x < a.aug_size(); ++x)
    if (f.val[z][a.aug[x]] != b.aug[f.val[0][x]])
      return fail("not-natural", "aug at cell " + std::to_string(x));
  return pass();
}

// All natural maps P -> Y between set-valued presheaves.  Assignment runs in
// a dependency-greedy order (cells pinned by already-assigned neighbours
// first), deriving degenerate cells as their nondegenerate base is chosen and
// firing each naturality constraint as soon as both sides have values.
inline std::vector<SetPm> enumerate_set_pms(const SetPsh& ps, const SetPsh& ys,
                                            const Budget& budget) {
  const auto& p = *ps;
  const auto& y = *ys;
  if (p.sh.trunc != y.sh.trunc)
    throw ValidationError({"insufficient-truncation", "presheaf truncations differ"});
  const int L = p.sh.n_levels();

  std::vector<std::vector<char>> nondeg(L);
  std::vector<std::vector<PshEZ>> ez(L);
  for (int lid = 0; lid < L; ++lid) {
    nondeg[lid].resize(p.size(lid));
    ez[lid].resize(p.size(lid));
    for (int x = 0; x < p.size(lid); ++x) {
      nondeg[lid][x] = !psh_cell_degenerate(p, lid, x);
      if (!nondeg[lid][x]) ez[lid][x] = psh_ez(p, lid, x);
    }
  }

  const int z00 = p.sh.id(0, 0);
  auto face_cells = [&](int lid, int x) {
    std::vector<std::pair<int, int>> out;
    const Lv l = p.sh.levels[lid];
    if (l.aug) {
      out.push_back({z00, p.aug[x]});
      return out;
    }
    if (l.q >= 1)
      for (int i = 0; i <= l.q; ++i) out.push_back({p.sh.id(l.q - 1, l.r), p.fv.at({lid, i})[x]});
    if (l.r >= 1)
      for (int j = 0; j <= l.r; ++j) out.push_back({p.sh.id(l.q, l.r - 1), p.fh.at({lid, j})[x]});
    return out;
  };

  // greedy order over nondegenerate cells
  std::vector<std::pair<int, int>> order;
  {
    std::vector<std::vector<char>> known(L);
    for (int lid = 0; lid < L; ++lid) known[lid].assign(p.size(lid), 0);
    std::vector<std::pair<int, int>> pending;
    for (int lid = 0; lid < L; ++lid)
      for (int x = 0; x < p.size(lid); ++x)
        if (nondeg[lid][x]) pending.push_back({lid, x});
    std::map<std::pair<int, int>, std::vector<std::pair<int, int>>> parents;
    for (auto [lid, x] : pending)
      for (auto [fl, fc] : face_cells(lid, x)) {
        auto base = std::make_pair(fl, fc);
        if (!nondeg[fl][fc]) base = {ez[fl][fc].base_lid, ez[fl][fc].base};
        parents[base].push_back({lid, x});
      }
    auto is_known = [&](int lid, int x) -> bool {
      if (nondeg[lid][x]) return known[lid][x];
      const auto& e = ez[lid][x];
      return known[e.base_lid][e.base];
    };
    while (!pending.empty()) {
      std::size_t best = 0;
      long best_score = std::numeric_limits<long>::min();
      for (std::size_t k = 0; k < pending.size(); ++k) {
        const auto [lid, x] = pending[k];
        long kn = 0, up = 0;
        for (auto [fl, fc] : face_cells(lid, x))
          if (is_known(fl, fc)) ++kn;
        auto it = parents.find({lid, x});
        if (it != parents.end())
          for (auto [pl, px] : it->second)
            if (known[pl][px]) ++up;
        const long score = (up * 5 + kn * 3) * 1000000 - y.size(lid);
        if (score > best_score) {
          best_score = score;
          best = k;
        }
      }
      order.push_back(pending[best]);
      pending.erase(pending.begin() + best);
      known[order.back().first][order.back().second] = 1;
    }
  }
  std::map<std::pair<int, int>, int> pos_of;
  for (std::size_t k = 0; k < order.size(); ++k) pos_of[order[k]] = static_cast<int>(k);

  // degenerate dependents of each nondegenerate cell
  std::vector<std::vector<std::tuple<int, int>>> deps(order.size());
  for (int lid = 0; lid < L; ++lid)
    for (int x = 0; x < p.size(lid); ++x)
      if (!nondeg[lid][x]) deps[pos_of.at({ez[lid][x].base_lid, ez[lid][x].base})].push_back({lid, x});

  // constraint schedule
  struct FaceRef {
    bool vertical;
    int i;
    int lo_lid, lo_cell;
  };
  std::vector<std::vector<FaceRef>> faces_of(order.size());
  std::vector<std::vector<std::pair<int, int>>> checks_at(order.size());
  {
    auto ready_pos = [&](int lid, int cell) {
      if (nondeg[lid][cell]) return pos_of.at({lid, cell});
      const auto& e = ez[lid][cell];
      return pos_of.at({e.base_lid, e.base});
    };
    for (std::size_t k = 0; k < order.size(); ++k) {
      const auto [lid, x] = order[k];
      const Lv l = p.sh.levels[lid];
      if (!l.aug) {
        if (l.q >= 1)
          for (int i = 0; i <= l.q; ++i)
            faces_of[k].push_back(FaceRef{true, i, p.sh.id(l.q - 1, l.r), p.fv.at({lid, i})[x]});
        if (l.r >= 1)
          for (int j = 0; j <= l.r; ++j)
            faces_of[k].push_back(FaceRef{false, j, p.sh.id(l.q, l.r - 1), p.fh.at({lid, j})[x]});
      }
      for (std::size_t fi = 0; fi < faces_of[k].size(); ++fi) {
        const auto& fr = faces_of[k][fi];
        checks_at[std::max<int>(static_cast<int>(k), ready_pos(fr.lo_lid, fr.lo_cell))].push_back(
            {static_cast<int>(k), static_cast<int>(fi)});
      }
      if (l.aug)
        checks_at[std::max<int>(static_cast<int>(k), ready_pos(z00, p.aug[x]))].push_back(
            {static_cast<int>(k), -1});
    }
  }

  // candidate narrowing: per cod level, per face position, value -> elements
  std::map<int, std::vector<std::map<int, std::vector<int>>>> index1;
  for (int lid = 1; lid < y.sh.n_levels(); ++lid) {
    const Lv l = y.sh.levels[lid];
    if (l.q + l.r == 0) continue;
    auto& ix = index1[lid];
    const int nfaces = (l.q >= 1 ? l.q + 1 : 0) + (l.r >= 1 ? l.r + 1 : 0);
    ix.resize(nfaces);
    for (int ob = 0; ob < y.size(lid); ++ob) {
      int pos = 0;
      if (l.q >= 1)
        for (int i = 0; i <= l.q; ++i) ix[pos++][y.fv.at({lid, i})[ob]].push_back(ob);
      if (l.r >= 1)
        for (int j = 0; j <= l.r; ++j) ix[pos++][y.fh.at({lid, j})[ob]].push_back(ob);
    }
  }
  std::map<int, std::vector<int>> aug_fiber;
  for (int z = 0; z < y.aug_size(); ++z) aug_fiber[y.aug[z]].push_back(z);

  std::vector<std::vector<int>> val(L);
  for (int lid = 0; lid < L; ++lid) val[lid].assign(p.size(lid), -1);
  std::vector<SetPm> out;

  std::function<void(std::size_t)> go = [&](std::size_t ci) {
    budget.tick();
    if (ci == order.size()) {
      SetPm f{ps, ys, val};
      if (!check_set_pm(f)) out.push_back(std::move(f));
      return;
    }
    const auto [lid, x] = order[ci];
    const Lv l = p.sh.levels[lid];

    auto try_cand = [&](int cand) {
      budget.tick();
      std::vector<std::pair<int, int>> trail;
      val[lid][x] = cand;
      trail.push_back({lid, x});
      bool ok = true;
      for (const auto& [dl, dc] : deps[ci]) {
        const auto& e = ez[dl][dc];
        const Lv bl = p.sh.levels[e.base_lid];
        const int dv = psh_apply(y, e.alpha, e.beta, bl.q, bl.r, cand);
        if (val[dl][dc] >= 0 && val[dl][dc] != dv) {
          ok = false;
          break;
        }
        if (val[dl][dc] < 0) {
          val[dl][dc] = dv;
          trail.push_back({dl, dc});
        }
      }
      if (ok)
        for (const auto& [hk, fi] : checks_at[ci]) {
          const auto [hl, hx] = order[hk];
          const int hv = val[hl][hx];
          if (fi < 0) {
            if (y.aug[hv] != val[z00][p.aug[hx]]) ok = false;
          } else {
            const auto& fr = faces_of[hk][fi];
            const int want = fr.vertical ? y.fv.at({hl, fr.i})[hv] : y.fh.at({hl, fr.i})[hv];
            if (val[fr.lo_lid][fr.lo_cell] != want) ok = false;
          }
          if (!ok) break;
        }
      if (ok) go(ci + 1);
      for (auto [tl, tc] : trail) val[tl][tc] = -1;
    };

    if (l.aug) {
      const int av = val[z00][p.aug[x]];
      if (av >= 0) {
        auto it = aug_fiber.find(av);
        if (it != aug_fiber.end())
          for (int cand : it->second) try_cand(cand);
      } else {
        for (int cand = 0; cand < y.size(0); ++cand) try_cand(cand);
      }
      return;
    }
    if (l.q + l.r == 0) {
      for (int cand = 0; cand < y.size(lid); ++cand) try_cand(cand);
      return;
    }
    const std::vector<int>* best = nullptr;
    for (std::size_t fi = 0; fi < faces_of[ci].size(); ++fi) {
      const auto& fr = faces_of[ci][fi];
      const int have = val[fr.lo_lid][fr.lo_cell];
      if (have < 0) continue;
      int pos = fr.i;
      const Lv yl = y.sh.levels[lid];
      if (!fr.vertical && yl.q >= 1) pos += yl.q + 1;
      auto& ix = index1.at(lid)[pos];
      auto it = ix.find(have);
      if (it == ix.end()) return;
      if (!best || it->second.size() < best->size()) best = &it->second;
    }
    if (best)
      for (int cand : *best) try_cand(cand);
    else
      for (int cand = 0; cand < y.size(lid); ++cand) try_cand(cand);
  };
  go(0);
  std::sort(out.begin(), out.end());
  return out;
}

// S_n as a set: natural maps W_n -> Y.
inline std::vector<SetPm> sdot_map_set(const SetPsh& y, int n, const Budget& budget) {
  if (y->trunc() < n)
    throw ValidationError({"insufficient-truncation",
                           "computing level " + std::to_string(n) + " needs truncation >= it"});
  auto w = w_presheaf(n, y->trunc());
  return enumerate_set_pms(w.psh, y, budget);
}

// ---------------------------------------------------------------------------
// p^* : restriction of a simplicial set along the ordinal sum.
// ---------------------------------------------------------------------------

inline SetPsh p_star(const Sset& xs, int trunc) {
  const auto& x = *xs;
  if (x.dim < trunc + 1)
    throw ValidationError({"insufficient-truncation",
                           "p* to truncation " + std::to_string(trunc) + " needs input up to " +
                               std::to_string(trunc + 1)});
  SetPresheaf y;
  y.sh = SigmaTrunc(trunc);
  y.sizes.resize(y.sh.n_levels());
  y.label.resize(y.sh.n_levels());
  y.sizes[0] = x.size(0);
  for (int s = 0; s < x.size(0); ++s) y.label[0].push_back(x.name(0, s));
  for (int lid = 1; lid < y.sh.n_levels(); ++lid) {
    const Lv l = y.sh.levels[lid];
    const int m = l.q + 1 + l.r;
    y.sizes[lid] = x.size(m);
    for (int s = 0; s < x.size(m); ++s) y.label[lid].push_back(x.name(m, s));
  }
  for (int lid = 1; lid < y.sh.n_levels(); ++lid) {
    const Lv l = y.sh.levels[lid];
    const int q = l.q, r = l.r, m = q + 1 + r;
    if (q >= 1)
      for (int i = 0; i <= q; ++i) {
        auto& t = y.fv[{lid, i}];
        for (int s = 0; s < x.size(m); ++s) t.push_back(x.d(m, i, s));
      }
    if (r >= 1)
      for (int j = 0; j <= r; ++j) {
        auto& t = y.fh[{lid, j}];
        for (int s = 0; s < x.size(m); ++s) t.push_back(x.d(m, q + 1 + j, s));
      }
    if (q + 1 + r <= trunc)
      for (int i = 0; i <= q; ++i) {
        auto& t = y.sv[{lid, i}];
        for (int s = 0; s < x.size(m); ++s) t.push_back(x.s(m, i, s));
      }
    if (q + r + 1 <= trunc)
      for (int j = 0; j <= r; ++j) {
        auto& t = y.sh_[{lid, j}];
        for (int s = 0; s < x.size(m); ++s) t.push_back(x.s(m, q + 1 + j, s));
      }
  }
  for (int s = 0; s < x.size(0); ++s) y.aug.push_back(x.s(0, 0, s));
  return validated(std::move(y));
}

// ---------------------------------------------------------------------------
// The right adjoint value at [n], computed as the limit over the comma
// category of cells of W_n: a generic finite-limit CSP, independent of the
// EZ-structured enumeration above.  This is the module's oracle pair.
// ---------------------------------------------------------------------------

struct KanEquation {
  int lhs_lv, lhs_cell;  // variable forced by ...
  int rhs_lv, rhs_cell;  // ... this variable through ...
  const std::vector<int>* table;  // ... this Y-generator table
};

inline std::vector<KanEquation> kan_equations(const WPresheaf& w, const SetPresheaf& y) {
  std::vector<KanEquation> eqs;
  const auto& p = *w.psh;
  auto add = [&](const std::map<std::pair<int, int>, std::vector<int>>& ptabs,
                 const std::map<std::pair<int, int>, std::vector<int>>& ytabs, bool vertical,
                 bool face) {
    for (const auto& [key, tab] : ptabs) {
      const Lv l = p.sh.levels[key.first];
      int tl;
      if (face)
        tl = vertical ? p.sh.id(l.q - 1, l.r) : p.sh.id(l.q, l.r - 1);
      else
        tl = vertical ? p.sh.id(l.q + 1, l.r) : p.sh.id(l.q, l.r + 1);
      const auto& yt = ytabs.at(key);
      for (int x = 0; x < p.size(key.first); ++x)
        eqs.push_back({tl, tab[x], key.first, x, &yt});
    }
  };
  add(p.fv, y.fv, true, true);
  add(p.fh, y.fh, false, true);
  add(p.sv, y.sv, true, false);
  add(p.sh_, y.sh_, false, false);
  const int z = p.sh.id(0, 0);
  for (int x = 0; x < p.aug_size(); ++x) eqs.push_back({z, p.aug[x], 0, x, &y.aug});
  return eqs;
}

// Elements of (p_* Y)_n as compatible tuples over all cells; returns each
// solution restricted to the same value-table format as sdot_map_set.  The
// solver is a generic finite-limit CSP with forced propagation and a
// most-constrained-variable choice; it knows nothing about degeneracy
// structure, which keeps it an independent oracle for the structured
// enumeration above.
inline std::vector<SetPm> sdot_kan_set(const SetPsh& ys, int n, const Budget& budget) {
  const auto& y = *ys;
  auto w = w_presheaf(n, y.trunc());
  const auto& p = *w.psh;
  const auto eqs = kan_equations(w, y);
  const int L = p.sh.n_levels();

  // dense variable ids
  std::vector<int> var_base(L, 0);
  int n_vars = 0;
  for (int lid = 0; lid < L; ++lid) {
    var_base[lid] = n_vars;
    n_vars += p.size(lid);
  }
  auto vid = [&](int lid, int cell) { return var_base[lid] + cell; };
  std::vector<int> var_lid(n_vars);
  for (int lid = 0; lid < L; ++lid)
    for (int c = 0; c < p.size(lid); ++c) var_lid[vid(lid, c)] = lid;

  // equations indexed by both sides
  std::vector<std::vector<int>> by_rhs(n_vars), by_lhs(n_vars);
  for (std::size_t e = 0; e < eqs.size(); ++e) {
    by_rhs[vid(eqs[e].rhs_lv, eqs[e].rhs_cell)].push_back(static_cast<int>(e));
    by_lhs[vid(eqs[e].lhs_lv, eqs[e].lhs_cell)].push_back(static_cast<int>(e));
  }

  std::vector<int> val(n_vars, -1);
  std::vector<SetPm> out;

  // assign + propagate forced values, recording a trail; false on conflict
  auto assign = [&](int v, int value, std::vector<int>& trail) -> bool {
    std::vector<int> queue{v};
    val[v] = value;
    trail.push_back(v);
    while (!queue.empty()) {
      const int cur = queue.back();
      queue.pop_back();
      for (int e : by_rhs[cur]) {
        budget.tick();
        const auto& eq = eqs[e];
        const int want = (*eq.table)[val[cur]];
        int& slot = val[vid(eq.lhs_lv, eq.lhs_cell)];
        if (slot < 0) {
          slot = want;
          trail.push_back(vid(eq.lhs_lv, eq.lhs_cell));
          queue.push_back(vid(eq.lhs_lv, eq.lhs_cell));
        } else if (slot != want) {
          return false;
        }
      }
      for (int e : by_lhs[cur]) {
        budget.tick();
        const auto& eq = eqs[e];
        const int rv = val[vid(eq.rhs_lv, eq.rhs_cell)];
        if (rv >= 0 && (*eq.table)[rv] != val[cur]) return false;
      }
    }
    return true;
  };

  std::function<void()> search = [&]() {
    budget.tick();
    // most constrained unassigned variable: prefer variables already touched
    // by an assigned equation side, counting candidates with early cutoff
    int best = -1;
    std::vector<int> best_cands;
    std::size_t best_size = std::numeric_limits<std::size_t>::max();
    int fallback = -1;  // unconstrained variable with the smallest domain
    for (int v = 0; v < n_vars && best_size > 1; ++v) {
      if (val[v] >= 0) continue;
      // collect the assigned forcing equations once
      std::vector<const KanEquation*> active;
      for (int e : by_rhs[v]) {
        const auto& eq = eqs[e];
        if (val[vid(eq.lhs_lv, eq.lhs_cell)] >= 0) active.push_back(&eq);
      }
      if (active.empty()) {
        if (fallback < 0 || y.size(var_lid[v]) < y.size(var_lid[fallback])) fallback = v;
        continue;
      }
      std::vector<int> cands;
      for (int c = 0; c < y.size(var_lid[v]) && cands.size() < best_size; ++c) {
        budget.tick();
        bool ok = true;
        for (const auto* eq : active)
          if ((*eq->table)[c] != val[vid(eq->lhs_lv, eq->lhs_cell)]) {
            ok = false;
            break;
          }
        if (ok) cands.push_back(c);
      }
      if (cands.size() < best_size) {
        best = v;
        best_size = cands.size();
        best_cands = std::move(cands);
      }
    }
    if (best < 0 && fallback >= 0) {
      best = fallback;
      best_cands.resize(y.size(var_lid[fallback]));
      std::iota(best_cands.begin(), best_cands.end(), 0);
    }
    if (best < 0) {
      // complete; a final full pass certifies the tuple
      for (const auto& eq : eqs)
        if (val[vid(eq.lhs_lv, eq.lhs_cell)] != (*eq.table)[val[vid(eq.rhs_lv, eq.rhs_cell)]])
          return;
      SetPm f{w.psh, ys, {}};
      f.val.resize(L);
      for (int lid = 0; lid < L; ++lid) {
        f.val[lid].resize(p.size(lid));
        for (int c = 0; c < p.size(lid); ++c) f.val[lid][c] = val[vid(lid, c)];
      }
      out.push_back(std::move(f));
      return;
    }
    for (int c : best_cands) {
      std::vector<int> trail;
      if (assign(best, c, trail)) search();
      for (int t : trail) val[t] = -1;
    }
  };
  search();
  std::sort(out.begin(), out.end());
  return out;
}

// ---------------------------------------------------------------------------
// Adjunction: Hom(p^* X, Y) <-> Hom(X, p_* Y).
// ---------------------------------------------------------------------------

// Materialize p_* Y as a truncated simplicial set (levels up to n_max).
struct PStarSet {
  Sset sset;
  std::vector<std::vector<SetPm>> elements;  // per level
};

inline SetPm w_precompose(const WPresheaf& wfrom, const WPresheaf& wto,
                          const std::vector<int>& beta, const SetPm& phi) {
  // W(beta): W_m -> W_{m'} sends a chain to beta o chain; the restriction of
  // phi: W_{m'} -> Y along it
  SetPm out{wfrom.psh, phi.cod, {}};
  const auto& pf = *wfrom.psh;
  out.val.resize(pf.sh.n_levels());
  for (int lid = 0; lid < pf.sh.n_levels(); ++lid) {
    out.val[lid].resize(pf.size(lid));
    for (int x = 0; x < pf.size(lid); ++x) {
      auto c = wfrom.chains[lid][x];
      for (auto& v : c) v = beta[v];
      out.val[lid][x] = phi.val[lid][wto.index[lid].at(c)];
    }
  }
  return out;
}

inline PStarSet p_star_adjoint_set(const SetPsh& y, int n_max, const Budget& budget) {
  PStarSet r;
  std::vector<WPresheaf> ws;
  for (int m = 0; m <= n_max; ++m) ws.push_back(w_presheaf(m, y->trunc()));
  r.elements.resize(n_max + 1);
  std::vector<std::map<SetPm, int>> index(n_max + 1);
  for (int m = 0; m <= n_max; ++m) {
    r.elements[m] = sdot_map_set(y, m, budget);
    for (std::size_t i = 0; i < r.elements[m].size(); ++i)
      index[m][r.elements[m][i]] = static_cast<int>(i);
  }
  TruncSimpSet x;
  x.dim = n_max;
  x.size_.resize(n_max + 1);
  for (int m = 0; m <= n_max; ++m) x.size_[m] = static_cast<int>(r.elements[m].size());
  x.alloc();
  for (int m = 1; m <= n_max; ++m)
    for (int i = 0; i <= m; ++i) {
      // delta_i: [m-1] -> [m]
      std::vector<int> beta;
      for (int v = 0; v <= m; ++v)
        if (v != i) beta.push_back(v);
      for (int s = 0; s < x.size_[m]; ++s)
        x.face[m][i][s] = index[m - 1].at(w_precompose(ws[m - 1], ws[m], beta, r.elements[m][s]));
    }
  for (int m = 0; m < n_max; ++m)
    for (int i = 0; i <= m; ++i) {
      // sigma_i: [m+1] -> [m]
      std::vector<int> beta;
      for (int v = 0; v <= m + 1; ++v) beta.push_back(v <= i ? v : v - 1);
      for (int s = 0; s < x.size_[m]; ++s)
        x.degen[m][i][s] = index[m + 1].at(w_precompose(ws[m + 1], ws[m], beta, r.elements[m][s]));
    }
  r.sset = validated(std::move(x));
  return r;
}

struct AdjunctionReport {
  bool ok = false;
  std::size_t lhs = 0, rhs = 0;  // |Hom(p*X, Y)| and |Hom(X, p_*Y)|
  std::string witness;
};

// The explicit transpose of g: p*X -> Y at x in X_m evaluates g at the
// X-restriction along each chain.
inline SetPm transpose_at(const Sset& xs, const SetPsh& pxs, const SetPm& g, const WPresheaf& wm,
                          int m, int x) {
  SetPm phi{wm.psh, g.cod, {}};
  const auto& p = *wm.psh;
  phi.val.resize(p.sh.n_levels());
  for (int lid = 0; lid < p.sh.n_levels(); ++lid) {
    phi.val[lid].resize(p.size(lid));
    const Lv l = p.sh.levels[lid];
    for (int c = 0; c < p.size(lid); ++c) {
      const auto& chain = wm.chains[lid][c];
      if (l.aug) {
        // X(alpha)(x) for alpha: [0] -> [m] the vertex i, then g at level [-1]
        const int vx = apply_map(*xs, {chain[0]}, m, x);
        phi.val[lid][c] = g.val[0][vx];
      } else {
        const int cx = apply_map(*xs, chain, m, x);
        phi.val[lid][c] = g.val[lid][cx];
      }
    }
  }
  (void)pxs;
  return phi;
}

inline AdjunctionReport adjunction_check(const Sset& xs, const SetPsh& ys, const Budget& budget) {
  AdjunctionReport rep;
  const int trunc = ys->trunc();
  auto px = p_star(xs, trunc);
  auto lhs = enumerate_set_pms(px, ys, budget);
  auto ps = p_star_adjoint_set(ys, std::min(xs->dim, trunc), budget);
  auto rhs = enumerate_simp_maps(xs, ps.sset, budget);
  rep.lhs = lhs.size();
  rep.rhs = rhs.size();
  if (lhs.size() != rhs.size()) {
    rep.witness = "cardinalities differ";
    return rep;
  }
  // the transpose must be a bijection onto the enumerated right-hand side
  const int n_max = std::min(xs->dim, trunc);
  std::vector<WPresheaf> ws;
  for (int m = 0; m <= n_max; ++m) ws.push_back(w_presheaf(m, trunc));
  std::vector<std::map<SetPm, int>> index(n_max + 1);
  for (int m = 0; m <= n_max; ++m)
    for (std::size_t i = 0; i < ps.elements[m].size(); ++i)
      index[m][ps.elements[m][i]] = static_cast<int>(i);
  std::set<std::vector<std::vector<int>>> seen;
  for (const auto& g : lhs) {
    budget.tick();
    std::vector<std::vector<int>> levels(n_max + 1);
    for (int m = 0; m <= n_max; ++m) {
      levels[m].resize(xs->size(m));
      for (int x = 0; x < xs->size(m); ++x)
        levels[m][x] = index[m].at(transpose_at(xs, px, g, ws[m], m, x));
    }
    // must be one of the enumerated simplicial maps
    bool found = false;
    for (const auto& f : rhs)
      if (f.level == levels) {
        found = true;
        break;
      }
    if (!found) {
      rep.witness = "transpose escapes Hom(X, p_*Y)";
      return rep;
    }
    if (!seen.insert(levels).second) {
      rep.witness = "transpose is not injective";
      return rep;
    }
  }
  rep.ok = true;
  return rep;
}

}  // namespace sdot
