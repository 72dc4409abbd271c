#pragma once

#include <set>

#include "sdot/gpd.hpp"

namespace sdot {

// ---------------------------------------------------------------------------
// Truncated simplicial sets: per-level simplex sets with total face and
// degeneracy tables.  A TruncSimpSet is the restriction of a genuine
// simplicial set; operations declare the truncation they need and fail loudly
// when it is insufficient.
// ---------------------------------------------------------------------------

struct TruncSimpSet {
  int dim = 0;  // levels 0..dim stored
  std::vector<int> size_;
  // face[m][i][x] for 1<=m<=dim, 0<=i<=m
  std::vector<std::vector<std::vector<int>>> face;
  // degen[m][i][x] for 0<=m<dim, 0<=i<=m
  std::vector<std::vector<std::vector<int>>> degen;
  std::vector<std::vector<std::string>> label;  // optional

  int size(int m) const { return size_[m]; }
  int d(int m, int i, int x) const { return face[m][i][x]; }
  int s(int m, int i, int x) const { return degen[m][i][x]; }
  std::string name(int m, int x) const {
    if (m < static_cast<int>(label.size()) && x < static_cast<int>(label[m].size()) &&
        !label[m][x].empty())
      return label[m][x];
    return std::to_string(m) + "#" + std::to_string(x);
  }
  void alloc() {
    face.assign(dim + 1, {});
    degen.assign(dim + 1, {});
    for (int m = 1; m <= dim; ++m) face[m].assign(m + 1, std::vector<int>(size_[m], -1));
    for (int m = 0; m < dim; ++m) degen[m].assign(m + 1, std::vector<int>(size_[m], -1));
  }
};

using Sset = std::shared_ptr<const TruncSimpSet>;

inline CheckResult validate_simpset(const TruncSimpSet& x) {
  for (int m = 0; m <= x.dim; ++m)
    if (x.size(m) < 0) return fail("malformed", "negative level size");
  for (int m = 1; m <= x.dim; ++m)
    for (int i = 0; i <= m; ++i)
      for (int s = 0; s < x.size(m); ++s)
        if (x.d(m, i, s) < 0 || x.d(m, i, s) >= x.size(m - 1))
          return fail("malformed", "face out of range at level " + std::to_string(m));
  for (int m = 0; m < x.dim; ++m)
    for (int i = 0; i <= m; ++i)
      for (int s = 0; s < x.size(m); ++s)
        if (x.s(m, i, s) < 0 || x.s(m, i, s) >= x.size(m + 1))
          return fail("malformed", "degeneracy out of range at level " + std::to_string(m));

  // simplicial identities, exhaustively within the truncation
  for (int m = 2; m <= x.dim; ++m)
    for (int j = 0; j <= m; ++j)
      for (int i = 0; i < j; ++i)
        for (int s = 0; s < x.size(m); ++s)
          if (x.d(m - 1, i, x.d(m, j, s)) != x.d(m - 1, j - 1, x.d(m, i, s)))
            return fail("simplicial-identity",
                        "d" + std::to_string(i) + " d" + std::to_string(j) + " at " + x.name(m, s));
  for (int m = 0; m + 2 <= x.dim; ++m)
    for (int j = 0; j <= m; ++j)
      for (int i = 0; i <= j; ++i)
        for (int s = 0; s < x.size(m); ++s)
          if (x.s(m + 1, j + 1, x.s(m, i, s)) != x.s(m + 1, i, x.s(m, j, s)))
            return fail("simplicial-identity",
                        "s" + std::to_string(i) + " s" + std::to_string(j) + " at " + x.name(m, s));
  for (int m = 1; m <= x.dim; ++m)
    for (int j = 0; j < m; ++j)  // s_j: X_{m-1} -> X_m
      for (int i = 0; i <= m; ++i)
        for (int s = 0; s < x.size(m - 1); ++s) {
          const int sj = x.s(m - 1, j, s);
          int expect;
          if (i == j || i == j + 1) {
            expect = s;
          } else if (i < j) {
            expect = x.s(m - 2, j - 1, x.d(m - 1, i, s));  // m >= 2 forced by j >= 1
          } else {
            expect = x.s(m - 2, j, x.d(m - 1, i - 1, s));  // i > j+1 forces m >= 2
          }
          if (x.d(m, i, sj) != expect)
            return fail("simplicial-identity",
                        "d" + std::to_string(i) + " s" + std::to_string(j) + " at level " +
                            std::to_string(m - 1));
        }
  return pass();
}

// ---------------------------------------------------------------------------
// Operator actions: contravariant action of an arbitrary monotone map
// alpha: [m'] -> [m], given by its value list.
// ---------------------------------------------------------------------------

inline int apply_injection(const TruncSimpSet& x, const std::vector<int>& image, int m, int sx) {
  // image: sorted subset of [m] of size k+1; applies the composite of faces
  std::vector<char> keep(m + 1, 0);
  for (int v : image) keep[v] = 1;
  int cur = sx, lvl = m;
  for (int v = m; v >= 0; --v)
    if (!keep[v]) {
      cur = x.d(lvl, v, cur);
      --lvl;
    }
  return cur;
}

inline int apply_surjection(const TruncSimpSet& x, std::vector<int> pi, int sx) {
  // pi: [m'] ->> [k] monotone surjective value list; sx at level k; result at level m'
  // peel the innermost flat repeatedly: X(pi) = s_t o X(pi with one flat removed)
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
  // pi is now a bijection (identity); apply degeneracies in reverse peel order
  int cur = sx;
  int lvl = static_cast<int>(pi.size()) - 1;
  for (auto it = flats.rbegin(); it != flats.rend(); ++it) {
    cur = x.s(lvl, *it, cur);
    ++lvl;
  }
  return cur;
}

// x at level m, alpha: [m'] -> [m]; returns the image simplex at level m'.
inline int apply_map(const TruncSimpSet& x, const std::vector<int>& alpha, int m, int sx) {
  // epi-mono factorization through the image
  std::vector<int> image;
  for (int v : alpha)
    if (image.empty() || image.back() != v) image.push_back(v);
  const int k = static_cast<int>(image.size()) - 1;
  const int through = apply_injection(x, image, m, sx);
  // surjection [m'] ->> [k]
  std::vector<int> pi(alpha.size());
  for (std::size_t i = 0; i < alpha.size(); ++i)
    pi[i] = static_cast<int>(std::lower_bound(image.begin(), image.end(), alpha[i]) - image.begin());
  (void)k;
  return apply_surjection(x, pi, through);
}

inline int spine_edge(const TruncSimpSet& x, int m, int sx, int k) {
  std::vector<int> a{k, k + 1};
  return apply_map(x, a, m, sx);
}
inline int vertex_of(const TruncSimpSet& x, int m, int sx, int k) {
  return apply_map(x, {k}, m, sx);
}

// ---------------------------------------------------------------------------
// Eilenberg-Zilber decompositions.
// ---------------------------------------------------------------------------

struct EZDecomp {
  int base_level;
  int base;
  std::vector<int> surj;  // value list [m] ->> [base_level]
};

inline bool is_degenerate(const TruncSimpSet& x, int m, int sx) {
  if (m == 0) return false;
  for (int i = 0; i < m; ++i)
    for (int z = 0; z < x.size(m - 1); ++z)
      if (x.s(m - 1, i, z) == sx) return true;
  return false;
}

inline EZDecomp ez_decompose(const TruncSimpSet& x, int m, int sx) {
  int lvl = m, cur = sx;
  std::vector<int> pi(m + 1);
  std::iota(pi.begin(), pi.end(), 0);
  bool changed = true;
  while (changed && lvl > 0) {
    changed = false;
    for (int i = 0; i < lvl && !changed; ++i)
      for (int z = 0; z < x.size(lvl - 1) && !changed; ++z)
        if (x.s(lvl - 1, i, z) == cur) {
          cur = z;
          // compose pi with sigma_i
          std::vector<int> np(pi.size());
          for (std::size_t u = 0; u < pi.size(); ++u) {
            int v = pi[u];
            np[u] = v <= i ? v : v - 1;
          }
          // re-normalize: np should surject onto [lvl-1]
          pi = np;
          --lvl;
          changed = true;
        }
  }
  return {lvl, cur, pi};
}

// Uniqueness of the EZ decomposition, checked by enumerating all
// (surjection, nondegenerate base) pairs mapping onto each simplex.
inline CheckResult check_ez_unique(const TruncSimpSet& x) {
  std::vector<std::vector<char>> nondeg(x.dim + 1);
  for (int m = 0; m <= x.dim; ++m) {
    nondeg[m].resize(x.size(m));
    for (int s = 0; s < x.size(m); ++s) nondeg[m][s] = !is_degenerate(x, m, s);
  }
  for (int m = 0; m <= x.dim; ++m)
    for (int s = 0; s < x.size(m); ++s) {
      int count = 0;
      for (int k = 0; k <= m; ++k) {
        // all surjections [m] ->> [k]
        for (const auto& pi : monotone_maps(m, k)) {
          std::set<int> img(pi.begin(), pi.end());
          if (static_cast<int>(img.size()) != k + 1) continue;
          for (int y = 0; y < x.size(k); ++y) {
            if (!nondeg[k][y]) continue;
            if (apply_surjection(x, pi, y) == s) ++count;
          }
        }
      }
      if (count != 1)
        return fail("ez-uniqueness", x.name(m, s) + " has " + std::to_string(count) +
                                         " decompositions");
    }
  return pass();
}

inline Sset share(TruncSimpSet x) { return std::make_shared<const TruncSimpSet>(std::move(x)); }

inline Sset validated(TruncSimpSet x) {
  require_ok(validate_simpset(x));
  return share(std::move(x));
}

// ---------------------------------------------------------------------------
// Standard simplices, boundaries, horns.
// ---------------------------------------------------------------------------

namespace detail {
// simplicial set whose m-simplices are a stored list of monotone value lists
// closed under the operator action computed combinatorially
struct ChainLevels {
  std::vector<std::vector<std::vector<int>>> chains;  // per level
  std::vector<std::map<std::vector<int>, int>> index;
};

inline TruncSimpSet from_chains(ChainLevels cl, int dim) {
  TruncSimpSet x;
  x.dim = dim;
  x.size_.resize(dim + 1);
  for (int m = 0; m <= dim; ++m) x.size_[m] = static_cast<int>(cl.chains[m].size());
  x.alloc();
  x.label.assign(dim + 1, {});
  for (int m = 0; m <= dim; ++m)
    for (auto& c : cl.chains[m]) x.label[m].push_back("(" + join_ints(c) + ")");
  for (int m = 1; m <= dim; ++m)
    for (int i = 0; i <= m; ++i)
      for (int s = 0; s < x.size_[m]; ++s) {
        auto c = cl.chains[m][s];
        c.erase(c.begin() + i);
        x.face[m][i][s] = cl.index[m - 1].at(c);
      }
  for (int m = 0; m < dim; ++m)
    for (int i = 0; i <= m; ++i)
      for (int s = 0; s < x.size_[m]; ++s) {
        auto c = cl.chains[m][s];
        c.insert(c.begin() + i, c[i]);
        x.degen[m][i][s] = cl.index[m + 1].at(c);
      }
  return x;
}
}  // namespace detail

inline Sset standard_simplex(int n, int dim) {
  detail::ChainLevels cl;
  cl.chains.resize(dim + 1);
  cl.index.resize(dim + 1);
  for (int m = 0; m <= dim; ++m) {
    cl.chains[m] = monotone_maps(m, n);
    for (std::size_t i = 0; i < cl.chains[m].size(); ++i)
      cl.index[m][cl.chains[m][i]] = static_cast<int>(i);
  }
  return share(detail::from_chains(std::move(cl), dim));
}

// keep: predicate deciding which monotone chains survive (must be closed
// under taking sub/extended chains in the appropriate direction).
inline Sset simplex_subobject(int n, int dim, const std::function<bool(const std::vector<int>&)>& keep) {
  detail::ChainLevels cl;
  cl.chains.resize(dim + 1);
  cl.index.resize(dim + 1);
  for (int m = 0; m <= dim; ++m) {
    for (auto& c : monotone_maps(m, n))
      if (keep(c)) {
        cl.index[m][c] = static_cast<int>(cl.chains[m].size());
        cl.chains[m].push_back(c);
      }
  }
  return share(detail::from_chains(std::move(cl), dim));
}

inline Sset boundary_simplex(int n, int dim) {
  return simplex_subobject(n, dim, [n](const std::vector<int>& c) {
    std::set<int> img(c.begin(), c.end());
    return static_cast<int>(img.size()) < n + 1;
  });
}

inline Sset horn(int n, int k, int dim) {
  return simplex_subobject(n, dim, [n, k](const std::vector<int>& c) {
    std::set<int> img(c.begin(), c.end());
    img.insert(k);
    return static_cast<int>(img.size()) < n + 1;
  });
}

// ---------------------------------------------------------------------------
// Nerves.
// ---------------------------------------------------------------------------

inline Sset nerve(const Cat& c, int dim, const Budget& budget) {
  TruncSimpSet x;
  x.dim = dim;
  // level m = composable chains (f_1, ..., f_m)
  std::vector<std::vector<std::vector<int>>> chains(dim + 1);
  std::vector<std::map<std::vector<int>, int>> index(dim + 1);
  for (int o = 0; o < c->n_obj; ++o) {
    index[0][{o}] = static_cast<int>(chains[0].size());
    chains[0].push_back({o});
  }
  for (int m = 1; m <= dim; ++m) {
    if (m == 1) {
      for (int f = 0; f < c->n_mor(); ++f) {
        budget.tick();
        index[1][{f}] = static_cast<int>(chains[1].size());
        chains[1].push_back({f});
      }
    } else {
      for (const auto& pre : chains[m - 1])
        for (int f = 0; f < c->n_mor(); ++f) {
          budget.tick();
          if (c->msrc[f] != c->mtgt[pre.back()]) continue;
          auto ch = pre;
          ch.push_back(f);
          index[m][ch] = static_cast<int>(chains[m].size());
          chains[m].push_back(ch);
        }
    }
  }
  x.size_.resize(dim + 1);
  for (int m = 0; m <= dim; ++m) x.size_[m] = static_cast<int>(chains[m].size());
  x.alloc();
  x.label.assign(dim + 1, {});
  for (int m = 0; m <= dim; ++m)
    for (auto& ch : chains[m]) x.label[m].push_back("[" + join_ints(ch) + "]");
  for (int m = 1; m <= dim; ++m)
    for (int s = 0; s < x.size_[m]; ++s) {
      const auto& ch = chains[m][s];
      for (int i = 0; i <= m; ++i) {
        std::vector<int> nc;
        if (m == 1) {
          nc = {i == 0 ? c->mtgt[ch[0]] : c->msrc[ch[0]]};
        } else if (i == 0) {
          nc.assign(ch.begin() + 1, ch.end());
        } else if (i == m) {
          nc.assign(ch.begin(), ch.end() - 1);
        } else {
          nc.assign(ch.begin(), ch.end());
          nc[i - 1] = c->compose(ch[i], ch[i - 1]);
          nc.erase(nc.begin() + i);
        }
        x.face[m][i][s] = index[m - 1].at(nc);
      }
    }
  for (int m = 0; m < dim; ++m)
    for (int s = 0; s < x.size_[m]; ++s) {
      const auto& ch = chains[m][s];
      for (int i = 0; i <= m; ++i) {
        std::vector<int> nc;
        if (m == 0) {
          nc = {c->ident[ch[0]]};
        } else {
          nc.assign(ch.begin(), ch.end());
          int at_obj = i == 0 ? c->msrc[ch[0]] : c->mtgt[ch[i - 1]];
          nc.insert(nc.begin() + i, c->ident[at_obj]);
        }
        x.degen[m][i][s] = index[m + 1].at(nc);
      }
    }
  return share(std::move(x));
}

// ---------------------------------------------------------------------------
// The fundamental category tau1, by congruence closure on finite path sets.
// Requires direction-acyclic input.
// ---------------------------------------------------------------------------

struct Tau1Result {
  Cat cat;
  // object o of cat = vertex o of X; morphism -> class of edge paths
  std::vector<std::vector<int>> mor_path;  // representative path (external edge ids)
  std::vector<int> mor_path_src;
  // lookup: class id by (src vertex, internal edge index path)
  std::map<std::pair<int, std::vector<int>>, int> class_of;
  std::map<int, int> edge_index;  // external nondegenerate edge id -> internal index
};

namespace detail {
struct UF {
  std::vector<int> p;
  int find(int a) {
    while (p[a] != a) a = p[a] = p[p[a]];
    return a;
  }
  bool unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    p[std::max(a, b)] = std::min(a, b);
    return true;
  }
};
}  // namespace detail

inline Tau1Result tau1(const Sset& xs, const Budget& budget) {
  const auto& x = *xs;
  if (x.dim < 2) throw ValidationError({"insufficient-truncation", "tau1 needs dimension >= 2"});

  // nondegenerate edges and their endpoints
  std::vector<int> edges;
  std::vector<int> esrc, etgt, eidx(x.size(1), -1);
  for (int e = 0; e < x.size(1); ++e) {
    if (is_degenerate(x, 1, e)) continue;
    eidx[e] = static_cast<int>(edges.size());
    edges.push_back(e);
    esrc.push_back(x.d(1, 1, e));
    etgt.push_back(x.d(1, 0, e));
  }

  // direction-acyclicity: DFS for a directed cycle among nondegenerate edges
  {
    std::vector<std::vector<int>> out(x.size(0));
    for (std::size_t i = 0; i < edges.size(); ++i) out[esrc[i]].push_back(static_cast<int>(i));
    std::vector<int> state(x.size(0), 0);
    std::vector<int> stack, how;
    std::function<bool(int)> dfs = [&](int v) -> bool {
      state[v] = 1;
      stack.push_back(v);
      for (int ei : out[v]) {
        const int w = etgt[ei];
        if (state[w] == 1) {
          std::string cyc;
          for (std::size_t k = std::find(stack.begin(), stack.end(), w) - stack.begin();
               k < stack.size(); ++k)
            cyc += x.name(0, stack[k]) + " -> ";
          cyc += x.name(0, w);
          throw ValidationError({"cyclic-input", cyc});
        }
        if (state[w] == 0 && dfs(w)) return true;
      }
      stack.pop_back();
      state[v] = 2;
      return false;
    };
    for (int v = 0; v < x.size(0); ++v)
      if (state[v] == 0) dfs(v);
  }

  // enumerate all directed paths (vertex, edge list)
  struct Path {
    int src;
    std::vector<int> edges;  // internal edge indices
  };
  std::vector<Path> paths;
  std::map<std::pair<int, std::vector<int>>, int> pidx;
  auto add_path = [&](int src, std::vector<int> es) {
    auto key = std::make_pair(src, es);
    auto it = pidx.find(key);
    if (it != pidx.end()) return it->second;
    const int id = static_cast<int>(paths.size());
    pidx.emplace(key, id);
    paths.push_back({src, std::move(es)});
    return id;
  };
  for (int v = 0; v < x.size(0); ++v) add_path(v, {});
  {
    std::vector<std::vector<int>> out(x.size(0));
    for (std::size_t i = 0; i < edges.size(); ++i) out[esrc[i]].push_back(static_cast<int>(i));
    // BFS extension; paths are finite because the edge graph is acyclic
    for (std::size_t head = 0; head < paths.size(); ++head) {
      const Path p = paths[head];
      const int end = p.edges.empty() ? p.src : etgt[p.edges.back()];
      for (int ei : out[end]) {
        budget.tick();
        auto es = p.edges;
        es.push_back(ei);
        add_path(p.src, std::move(es));
      }
    }
  }
  auto path_tgt = [&](int pid) {
    const auto& p = paths[pid];
    return p.edges.empty() ? p.src : etgt[p.edges.back()];
  };

  detail::UF uf;
  uf.p.resize(paths.size());
  std::iota(uf.p.begin(), uf.p.end(), 0);

  // base relations from 2-simplices: d1 ~ d0 . d2 (degenerate faces act as
  // identity paths)
  auto interp = [&](int e1) -> std::optional<std::pair<int, std::vector<int>>> {
    if (eidx[e1] >= 0) return std::make_pair(x.d(1, 1, e1), std::vector<int>{eidx[e1]});
    const auto dec = ez_decompose(x, 1, e1);
    return std::make_pair(dec.base, std::vector<int>{});  // empty path at the vertex
  };
  for (int t = 0; t < x.size(2); ++t) {
    const auto f = interp(x.d(2, 2, t));   // 0 -> 1
    const auto g = interp(x.d(2, 0, t));   // 1 -> 2
    const auto h = interp(x.d(2, 1, t));   // 0 -> 2
    std::vector<int> gf = f->second;
    gf.insert(gf.end(), g->second.begin(), g->second.end());
    const int a = pidx.at({f->first, gf});
    const int b = pidx.at({h->first, h->second});
    uf.unite(a, b);
  }

  // close under pre/post composition until stable
  bool changed = true;
  while (changed) {
    changed = false;
    // group paths by class
    std::map<int, std::vector<int>> classes;
    for (std::size_t p = 0; p < paths.size(); ++p) classes[uf.find(static_cast<int>(p))].push_back(static_cast<int>(p));
    for (auto& [root, members] : classes) {
      if (members.size() < 2) continue;
      const int rep = members[0];
      for (std::size_t k = 1; k < members.size(); ++k) {
        const int q = members[k];
        // post-compose with each edge leaving the common target
        for (std::size_t ei = 0; ei < edges.size(); ++ei) {
          budget.tick();
          if (esrc[ei] == path_tgt(rep)) {
            auto e1 = paths[rep].edges;
            e1.push_back(static_cast<int>(ei));
            auto e2 = paths[q].edges;
            e2.push_back(static_cast<int>(ei));
            auto i1 = pidx.find({paths[rep].src, e1});
            auto i2 = pidx.find({paths[q].src, e2});
            if (i1 != pidx.end() && i2 != pidx.end() && uf.unite(i1->second, i2->second))
              changed = true;
          }
          if (etgt[ei] == paths[rep].src) {
            auto e1 = paths[rep].edges;
            e1.insert(e1.begin(), static_cast<int>(ei));
            auto e2 = paths[q].edges;
            e2.insert(e2.begin(), static_cast<int>(ei));
            auto i1 = pidx.find({esrc[ei], e1});
            auto i2 = pidx.find({esrc[ei], e2});
            if (i1 != pidx.end() && i2 != pidx.end() && uf.unite(i1->second, i2->second))
              changed = true;
          }
        }
      }
    }
  }

  // classes -> morphisms
  Tau1Result r;
  std::map<int, int> class_id;
  FiniteCategory c;
  c.n_obj = x.size(0);
  for (int v = 0; v < x.size(0); ++v) c.obj_label.push_back(x.name(0, v));
  for (std::size_t p = 0; p < paths.size(); ++p) {
    const int root = uf.find(static_cast<int>(p));
    if (!class_id.count(root)) {
      const int id = c.n_mor();
      class_id[root] = id;
      c.msrc.push_back(paths[root].src);
      c.mtgt.push_back(path_tgt(root));
      r.mor_path.push_back(paths[root].edges);
      r.mor_path_src.push_back(paths[root].src);
    }
  }
  for (std::size_t p = 0; p < paths.size(); ++p)
    r.class_of[{paths[p].src, paths[p].edges}] = class_id.at(uf.find(static_cast<int>(p)));
  c.ident.resize(c.n_obj);
  for (int v = 0; v < x.size(0); ++v) c.ident[v] = r.class_of.at({v, {}});
  const int nm = c.n_mor();
  c.comp.assign(static_cast<std::size_t>(nm) * nm, -1);
  for (int g = 0; g < nm; ++g)
    for (int f = 0; f < nm; ++f) {
      if (c.mtgt[f] != c.msrc[g]) continue;
      budget.tick();
      auto es = r.mor_path[f];
      es.insert(es.end(), r.mor_path[g].begin(), r.mor_path[g].end());
      c.comp[static_cast<std::size_t>(g) * nm + f] = r.class_of.at({c.msrc[f], es});
    }
  // store external edge ids in mor_path for reporting
  for (auto& mp : r.mor_path)
    for (auto& e : mp) e = edges[e];
  for (std::size_t i = 0; i < edges.size(); ++i) r.edge_index[edges[i]] = static_cast<int>(i);
  r.cat = validated(std::move(c));
  return r;
}

// tau1 of a simplicial map: the induced functor between fundamental
// categories.  Degenerate edge images become identities.
struct SimpMap {
  Sset dom, cod;
  std::vector<std::vector<int>> level;  // per level: dom simplex -> cod simplex
};

inline CheckResult check_simp_map(const SimpMap& f) {
  const auto& a = *f.dom;
  const auto& b = *f.cod;
  const int d = std::min(a.dim, b.dim);
  for (int m = 1; m <= d; ++m)
    for (int i = 0; i <= m; ++i)
      for (int s = 0; s < a.size(m); ++s)
        if (f.level[m - 1][a.d(m, i, s)] != b.d(m, i, f.level[m][s]))
          return fail("not-simplicial", "face square fails at " + a.name(m, s));
  for (int m = 0; m < d; ++m)
    for (int i = 0; i <= m; ++i)
      for (int s = 0; s < a.size(m); ++s)
        if (f.level[m + 1][a.s(m, i, s)] != b.s(m, i, f.level[m][s]))
          return fail("not-simplicial", "degeneracy square fails at " + a.name(m, s));
  return pass();
}

inline CatFunctor tau1_functor(const SimpMap& f, const Tau1Result& td, const Tau1Result& tc,
                               const Budget& budget) {
  CatFunctor F{td.cat, tc.cat, {}, {}};
  F.ob.resize(td.cat->n_obj);
  for (int v = 0; v < td.cat->n_obj; ++v) F.ob[v] = f.level[0][v];
  const auto& b = *f.cod;
  F.mor.resize(td.cat->n_mor());
  for (int m = 0; m < td.cat->n_mor(); ++m) {
    budget.tick();
    // image path: map each edge; edges with degenerate image act as identities
    std::vector<int> img;
    for (int e : td.mor_path[m]) {
      const int ie = f.level[1][e];
      if (!is_degenerate(b, 1, ie)) img.push_back(tc.edge_index.at(ie));
    }
    F.mor[m] = tc.class_of.at({F.ob[td.mor_path_src[m]], img});
  }
  return F;
}

// ---------------------------------------------------------------------------
// Ordinal subdivision.
// ---------------------------------------------------------------------------

// Sd(Delta[n]) directly: level m = monotone maps [2m+1] -> [n], operators act
// on both halves simultaneously.
inline Sset ordinal_sd(int n, int dim) {
  TruncSimpSet x;
  x.dim = dim;
  std::vector<std::vector<std::vector<int>>> chains(dim + 1);
  std::vector<std::map<std::vector<int>, int>> index(dim + 1);
  for (int m = 0; m <= dim; ++m) {
    chains[m] = monotone_maps(2 * m + 1, n);
    for (std::size_t i = 0; i < chains[m].size(); ++i)
      index[m][chains[m][i]] = static_cast<int>(i);
  }
  x.size_.resize(dim + 1);
  for (int m = 0; m <= dim; ++m) x.size_[m] = static_cast<int>(chains[m].size());
  x.alloc();
  x.label.assign(dim + 1, {});
  for (int m = 0; m <= dim; ++m)
    for (auto& c : chains[m]) {
      std::vector<int> ih(c.begin(), c.begin() + m + 1), jh(c.begin() + m + 1, c.end());
      x.label[m].push_back("(" + join_ints(ih) + "|" + join_ints(jh) + ")");
    }
  for (int m = 1; m <= dim; ++m)
    for (int i = 0; i <= m; ++i)
      for (int s = 0; s < x.size_[m]; ++s) {
        auto c = chains[m][s];
        c.erase(c.begin() + m + 1 + i);  // remove from j-half first (higher index)
        c.erase(c.begin() + i);
        x.face[m][i][s] = index[m - 1].at(c);
      }
  for (int m = 0; m < dim; ++m)
    for (int i = 0; i <= m; ++i)
      for (int s = 0; s < x.size_[m]; ++s) {
        auto c = chains[m][s];
        c.insert(c.begin() + m + 1 + i, c[m + 1 + i]);
        c.insert(c.begin() + i, c[i]);
        x.degen[m][i][s] = index[m + 1].at(c);
      }
  return share(std::move(x));
}

// Sd of an arbitrary (truncated) simplicial set via (Sd X)_m = X_{2m+1} with
// operators acting diagonally through the ordinal sum.
inline Sset ordinal_sd_of(const Sset& xs, int dim) {
  const auto& x = *xs;
  if (x.dim < 2 * dim + 1)
    throw ValidationError({"insufficient-truncation",
                           "subdivision to dimension " + std::to_string(dim) + " needs input up to " +
                               std::to_string(2 * dim + 1)});
  TruncSimpSet y;
  y.dim = dim;
  y.size_.resize(dim + 1);
  for (int m = 0; m <= dim; ++m) y.size_[m] = x.size(2 * m + 1);
  y.alloc();
  y.label.assign(dim + 1, {});
  for (int m = 0; m <= dim; ++m)
    for (int s = 0; s < y.size_[m]; ++s) y.label[m].push_back(x.name(2 * m + 1, s));
  auto join_values = [](const std::vector<int>& a, int shift) {
    std::vector<int> v = a;
    std::vector<int> w = a;
    for (auto& t : w) t += shift;
    v.insert(v.end(), w.begin(), w.end());
    return v;
  };
  for (int m = 1; m <= dim; ++m)
    for (int i = 0; i <= m; ++i) {
      // delta_i star delta_i : [2m-1] -> [2m+1]
      std::vector<int> di;
      for (int v = 0; v <= m; ++v)
        if (v != i) di.push_back(v);
      const auto a = join_values(di, m + 1);
      for (int s = 0; s < y.size_[m]; ++s) y.face[m][i][s] = apply_map(x, a, 2 * m + 1, s);
    }
  for (int m = 0; m < dim; ++m)
    for (int i = 0; i <= m; ++i) {
      // sigma_i star sigma_i : [2m+3] -> [2m+1]
      std::vector<int> si;
      for (int v = 0; v <= m + 1; ++v) si.push_back(v <= i ? v : v - 1);
      const auto a = join_values(si, m + 1);
      for (int s = 0; s < y.size_[m]; ++s) y.degen[m][i][s] = apply_map(x, a, 2 * m + 1, s);
    }
  return share(std::move(y));
}

// Categorical ordinal subdivision, realized through the nerve: Sd(C) =
// tau1(Sd(N C)).  Direction-acyclic C only (posets and friends).
inline Cat sd_category(const Cat& c, const Budget& budget) {
  auto n = nerve(c, 5, budget);
  auto sd = ordinal_sd_of(n, 2);
  return tau1(sd, budget).cat;
}

// ---------------------------------------------------------------------------
// The unit map Sd Delta[n] -> N tau1(Sd Delta[n]) and its property report.
// ---------------------------------------------------------------------------

struct UnitMapReport {
  SimpMap map;
  bool injective = false;
  bool vertex_bijective = false;
  bool tau1_iso = false;
};

// Unit of the (tau1, nerve) adjunction for any direction-acyclic X.
inline SimpMap unit_to_nerve(const Sset& xs, const Tau1Result& t, const Sset& ncod,
                             const Budget& budget) {
  const auto& x = *xs;
  const auto& nc = *ncod;
  SimpMap f;
  f.dom = xs;
  f.cod = ncod;
  const int d = std::min(x.dim, nc.dim);
  const auto& tr = t.edge_index;
  // The nerve() constructor enumerates chains deterministically; rebuild the
  // chain -> simplex id indexing the same way.
  std::vector<std::map<std::vector<int>, int>> nerve_index(d + 1);
  std::vector<std::vector<std::vector<int>>> chains(d + 1);
  {
    const Cat& c = t.cat;
    for (int o = 0; o < c->n_obj; ++o) chains[0].push_back({o});
    for (int m = 1; m <= d; ++m) {
      if (m == 1) {
        for (int fm = 0; fm < c->n_mor(); ++fm) chains[1].push_back({fm});
      } else {
        for (const auto& pre : chains[m - 1])
          for (int fm = 0; fm < c->n_mor(); ++fm) {
            if (c->msrc[fm] != c->mtgt[pre.back()]) continue;
            auto ch = pre;
            ch.push_back(fm);
            chains[m].push_back(ch);
          }
      }
    }
    for (int m = 0; m <= d; ++m)
      for (std::size_t i = 0; i < chains[m].size(); ++i)
        nerve_index[m][chains[m][i]] = static_cast<int>(i);
  }
  f.level.resize(d + 1);
  for (int m = 0; m <= d; ++m) {
    f.level[m].resize(x.size(m));
    for (int s = 0; s < x.size(m); ++s) {
      budget.tick();
      if (m == 0) {
        f.level[0][s] = s;  // objects of tau1 are the vertices
        continue;
      }
      std::vector<int> ch;
      for (int k = 0; k < m; ++k) {
        const int e = spine_edge(x, m, s, k);
        std::vector<int> key;
        if (!is_degenerate(x, 1, e)) key.push_back(tr.at(e));
        ch.push_back(t.class_of.at({vertex_of(x, m, s, k), key}));
      }
      f.level[m][s] = nerve_index[m].at(ch);
    }
  }
  require_ok(check_simp_map(f));
  return f;
}

inline UnitMapReport unit_map_sd(int n, int dim, const Budget& budget) {
  UnitMapReport r;
  auto sd = ordinal_sd(n, std::max(dim, 2));
  auto t = tau1(sd, budget);
  auto nc = nerve(t.cat, std::max(dim, 2), budget);
  r.map = unit_to_nerve(sd, t, nc, budget);
  r.injective = true;
  for (int m = 0; m < static_cast<int>(r.map.level.size()) && r.injective; ++m) {
    auto v = r.map.level[m];
    std::sort(v.begin(), v.end());
    if (std::adjacent_find(v.begin(), v.end()) != v.end()) r.injective = false;
  }
  r.vertex_bijective =
      r.map.level[0].size() == static_cast<std::size_t>(nc->size(0)) && r.injective;
  // tau1-isomorphism: the induced functor tau1(SdDelta[n]) -> tau1(N tau1 ...)
  auto tcod = tau1(nc, budget);
  auto F = tau1_functor(r.map, t, tcod, budget);
  r.tau1_iso = !check_functor(F).has_value();
  if (r.tau1_iso) {
    // bijective on objects and morphisms
    std::vector<int> ob = F.ob, mo = F.mor;
    std::sort(ob.begin(), ob.end());
    std::sort(mo.begin(), mo.end());
    r.tau1_iso = std::adjacent_find(ob.begin(), ob.end()) == ob.end() &&
                 std::adjacent_find(mo.begin(), mo.end()) == mo.end() &&
                 static_cast<int>(ob.size()) == tcod.cat->n_obj &&
                 static_cast<int>(mo.size()) == tcod.cat->n_mor();
  }
  return r;
}

// ---------------------------------------------------------------------------
// Simplicial map enumeration and mapping spaces into nerves.
// ---------------------------------------------------------------------------

inline std::vector<SimpMap> enumerate_simp_maps(const Sset& ks, const Sset& ys, const Budget& budget) {
  const auto& k = *ks;
  const auto& y = *ys;
  const int d = std::min(k.dim, y.dim);
  // nondegenerate simplices of k per level
  std::vector<std::vector<int>> nd(d + 1);
  for (int m = 0; m <= d; ++m)
    for (int s = 0; s < k.size(m); ++s)
      if (!is_degenerate(k, m, s)) nd[m].push_back(s);
  // boundary index of y: per level, map from face tuple -> candidates
  std::vector<std::map<std::vector<int>, std::vector<int>>> bindex(d + 1);
  for (int m = 1; m <= d; ++m)
    for (int s = 0; s < y.size(m); ++s) {
      std::vector<int> key(m + 1);
      for (int i = 0; i <= m; ++i) key[i] = y.d(m, i, s);
      bindex[m][key].push_back(s);
    }

  std::vector<std::vector<int>> img(d + 1);  // partial images (all simplices)
  for (int m = 0; m <= d; ++m) img[m].assign(k.size(m), -1);
  std::vector<SimpMap> out;

  // after assigning nondegenerate cells at level m, (re)derive degenerate ones
  std::vector<std::vector<char>> degenerate(d + 1);
  for (int m = 0; m <= d; ++m) {
    degenerate[m].resize(k.size(m));
    for (int s = 0; s < k.size(m); ++s) degenerate[m][s] = is_degenerate(k, m, s);
  }
  auto fill_degenerate = [&](int m) -> bool {
    for (int s = 0; s < k.size(m); ++s) {
      if (!degenerate[m][s]) continue;
      const auto dec = ez_decompose(k, m, s);
      if (img[dec.base_level][dec.base] < 0) return false;
      img[m][s] = apply_surjection(y, dec.surj, img[dec.base_level][dec.base]);
    }
    return true;
  };

  std::function<void(int, std::size_t)> go = [&](int m, std::size_t i) {
    budget.tick();
    if (m > d) {
      SimpMap f{ks, ys, img};
      if (!check_simp_map(f)) out.push_back(std::move(f));
      return;
    }
    if (i == nd[m].size()) {
      if (fill_degenerate(m)) go(m + 1, 0);
      return;
    }
    const int s = nd[m][i];
    if (m == 0) {
      for (int c = 0; c < y.size(0); ++c) {
        img[0][s] = c;
        go(m, i + 1);
      }
      img[0][s] = -1;
      return;
    }
    std::vector<int> key(m + 1);
    for (int j = 0; j <= m; ++j) key[j] = img[m - 1][k.d(m, j, s)];
    auto it = bindex[m].find(key);
    if (it != bindex[m].end()) {
      for (int c : it->second) {
        budget.tick();
        img[m][s] = c;
        go(m, i + 1);
      }
    }
    img[m][s] = -1;
  };
  go(0, 0);
  return out;
}

// Map(K, N C) computed as Fun(tau1 K, C); finite and truncation-independent.
inline std::vector<CatFunctor> map_into_nerve(const Sset& k, const Cat& c, const Budget& budget) {
  auto t = tau1(k, budget);
  return enumerate_functors(t.cat, c, budget);
}

// ---------------------------------------------------------------------------
// Segal, 2-Segal and horn-filling checkers.
// ---------------------------------------------------------------------------

struct SegalReport {
  bool ok = true;
  int fail_n = -1;
  std::string witness;
};

inline SegalReport is_segal(const Sset& xs, const Budget& budget) {
  const auto& x = *xs;
  for (int n = 2; n <= x.dim; ++n) {
    // spine tuples present in X
    std::map<std::vector<int>, int> hits;
    for (int s = 0; s < x.size(n); ++s) {
      budget.tick();
      std::vector<int> sp(n);
      for (int k2 = 0; k2 < n; ++k2) sp[k2] = spine_edge(x, n, s, k2);
      if (++hits[sp] > 1)
        return {false, n, "two " + std::to_string(n) + "-simplices share the spine"};
    }
    // all composable edge tuples
    std::size_t tuples = 0;
    std::string missing;
    std::vector<std::vector<int>> by_src(x.size(0));
    for (int e = 0; e < x.size(1); ++e) by_src[x.d(1, 1, e)].push_back(e);
    std::function<bool(std::vector<int>&)> ext = [&](std::vector<int>& cur) -> bool {
      if (static_cast<int>(cur.size()) == n) {
        ++tuples;
        if (!hits.count(cur)) {
          missing = "unfilled spine at level " + std::to_string(n);
          return false;
        }
        return true;
      }
      const int end = x.d(1, 0, cur.back());
      for (int e : by_src[end]) {
        budget.tick();
        cur.push_back(e);
        const bool ok = ext(cur);
        cur.pop_back();
        if (!ok) return false;
      }
      return true;
    };
    for (int e = 0; e < x.size(1); ++e) {
      std::vector<int> cur{e};
      if (!ext(cur)) return {false, n, missing};
    }
    if (tuples != hits.size()) return {false, n, "spine map not bijective"};
  }
  return {};
}

struct TwoSegalReport {
  bool ok = true;
  int n = -1, i = -1, j = -1;
  std::string witness;
};

// All single-diagonal polygonal subdivisions {0..i, j..n} u {i..j} glued
// along the edge {i,j}, for 3 <= n <= truncation.
inline TwoSegalReport is_two_segal(const Sset& xs, const Budget& budget) {
  const auto& x = *xs;
  for (int n = 3; n <= x.dim; ++n)
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j <= n; ++j) {
        if (i == 0 && j == n) continue;  // no subdivision
        std::vector<int> part1, part2;
        for (int v = 0; v <= i; ++v) part1.push_back(v);
        for (int v = j; v <= n; ++v) part1.push_back(v);
        for (int v = i; v <= j; ++v) part2.push_back(v);
        const int a = static_cast<int>(part1.size()) - 1;
        const int b = static_cast<int>(part2.size()) - 1;
        // restriction of the outer simplex
        std::map<std::pair<int, int>, int> seen;
        for (int s = 0; s < x.size(n); ++s) {
          budget.tick();
          const int u = apply_map(x, part1, n, s);
          const int v = apply_map(x, part2, n, s);
          auto key = std::make_pair(u, v);
          if (seen.count(key))
            return {false, n, i, j, "two " + std::to_string(n) + "-simplices restrict equally"};
          seen[key] = s;
        }
        // enumerate glued pairs: edge {i,j} sits at positions (i, i+1) in
        // part1 and (0, b) in part2
        std::map<int, std::vector<int>> v_by_edge;
        for (int v = 0; v < x.size(b); ++v)
          v_by_edge[apply_map(x, {0, b}, b, v)].push_back(v);
        std::size_t pairs = 0;
        for (int u = 0; u < x.size(a); ++u) {
          const int eu = apply_map(x, {i, i + 1}, a, u);
          auto it = v_by_edge.find(eu);
          if (it == v_by_edge.end()) continue;
          for (int v : it->second) {
            budget.tick();
            ++pairs;
            if (!seen.count({u, v}))
              return {false, n, i, j,
                      "glued pair (" + x.name(a, u) + ", " + x.name(b, v) + ") has no filler"};
          }
        }
        if (pairs != seen.size()) return {false, n, i, j, "subdivision map not bijective"};
      }
  return {};
}

// Removes a nondegenerate top-level simplex (nothing may reference it).
// Used by negative tests and the mutation suite.
inline Sset remove_top_simplex(const TruncSimpSet& x, int s) {
  const int m = x.dim;
  if (is_degenerate(x, m, s))
    throw ValidationError({"bad-mutation", "cannot remove a degenerate simplex"});
  TruncSimpSet y = x;
  y.size_[m] -= 1;
  for (int i = 0; i <= m; ++i) y.face[m][i].erase(y.face[m][i].begin() + s);
  if (m >= 1)
    for (int i = 0; i < m; ++i)
      for (auto& v : y.degen[m - 1][i]) {
        if (v == s) throw ValidationError({"bad-mutation", "simplex is a degeneracy image"});
        if (v > s) --v;
      }
  if (m < static_cast<int>(y.label.size()) && s < static_cast<int>(y.label[m].size()))
    y.label[m].erase(y.label[m].begin() + s);
  return validated(std::move(y));
}

struct HornReport {
  struct Entry {
    int n, k;
    std::size_t horns, filled, unique_filled;
    bool inner;
  };
  std::vector<Entry> entries;
  bool all_inner_unique() const {
    for (const auto& e : entries)
      if (e.inner && (e.filled != e.horns || e.unique_filled != e.horns)) return false;
    return true;
  }
};

inline HornReport check_horn_fillers(const Sset& xs, int n_max, const Budget& budget,
                                     bool include_outer = true) {
  HornReport rep;
  const auto& x = *xs;
  for (int n = 1; n <= std::min(n_max, x.dim); ++n)
    for (int k = 0; k <= n; ++k) {
      const bool inner = k > 0 && k < n;
      if (!inner && (!include_outer || n < 2)) continue;
      auto h = horn(n, k, n);
      auto maps = enumerate_simp_maps(h, xs, budget);
      // filler count per horn map: n-simplices restricting to it
      std::map<std::vector<int>, std::size_t> by_restriction;
      for (int s = 0; s < x.size(n); ++s) {
        budget.tick();
        // restriction = images of all horn cells, canonical order: iterate
        // horn levels and use the face tuple of s
        std::vector<int> key;
        for (int i = 0; i <= n; ++i)
          if (i != k) key.push_back(x.d(n, i, s));
        ++by_restriction[key];
      }
      // horn simplex ids of the facet chains, replicating the subobject's
      // deterministic enumeration order
      std::map<std::vector<int>, int> horn_index;
      {
        int next = 0;
        for (auto& c : monotone_maps(n - 1, n)) {
          std::set<int> img(c.begin(), c.end());
          img.insert(k);
          if (static_cast<int>(img.size()) < n + 1) horn_index[c] = next++;
        }
      }
      std::size_t filled = 0, uniq = 0;
      for (const auto& f : maps) {
        std::vector<int> key;
        for (int i = 0; i <= n; ++i) {
          if (i == k) continue;
          std::vector<int> chain;
          for (int v = 0; v <= n; ++v)
            if (v != i) chain.push_back(v);
          key.push_back(f.level[n - 1][horn_index.at(chain)]);
        }
        auto it = by_restriction.find(key);
        const std::size_t c = it == by_restriction.end() ? 0 : it->second;
        if (c >= 1) ++filled;
        if (c == 1) ++uniq;
      }
      rep.entries.push_back({n, k, maps.size(), filled, uniq, inner});
    }
  return rep;
}

}  // namespace sdot
