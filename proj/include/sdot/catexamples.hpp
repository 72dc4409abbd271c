#pragma once

#include "sdot/fincat.hpp"

namespace sdot {

// ---------------------------------------------------------------------------
// Example categories.  All are skeletal so they stay finite: objects are
// dimensions / sizes, morphisms are matrices / basepointed maps.
// ---------------------------------------------------------------------------

// The one-object one-morphism category.
inline Cat trivial_category() {
  FiniteCategory c;
  c.n_obj = 1;
  c.msrc = {0};
  c.mtgt = {0};
  c.ident = {0};
  c.comp = {0};
  c.obj_label = {"0"};
  return share(std::move(c));
}

// --- F2 vector spaces of dimension <= maxdim -------------------------------
//
// Objects are dimensions 0..maxdim; Hom(a,b) = b x a matrices over F2,
// encoded row-major as a bitmask (row i = bits [i*a, (i+1)*a)).

struct F2Mat {
  int rows = 0, cols = 0;
  std::uint32_t bits = 0;
  bool get(int r, int c) const { return (bits >> (r * cols + c)) & 1u; }
};

inline F2Mat f2_mul(const F2Mat& g, const F2Mat& f) {
  // g: b->c (c x b), f: a->b (b x a); result c x a
  F2Mat r{g.rows, f.cols, 0};
  for (int i = 0; i < g.rows; ++i)
    for (int j = 0; j < f.cols; ++j) {
      int v = 0;
      for (int k = 0; k < g.cols; ++k) v ^= (g.get(i, k) & f.get(k, j));
      if (v) r.bits |= 1u << (i * r.cols + j);
    }
  return r;
}

inline int f2_rank(F2Mat m) {
  int rank = 0;
  std::vector<std::uint32_t> rows(m.rows);
  for (int i = 0; i < m.rows; ++i)
    for (int j = 0; j < m.cols; ++j)
      if (m.get(i, j)) rows[i] |= 1u << j;
  for (int c = 0; c < m.cols; ++c) {
    int piv = -1;
    for (int i = rank; i < m.rows; ++i)
      if ((rows[i] >> c) & 1u) {
        piv = i;
        break;
      }
    if (piv < 0) continue;
    std::swap(rows[rank], rows[piv]);
    for (int i = 0; i < m.rows; ++i)
      if (i != rank && ((rows[i] >> c) & 1u)) rows[i] ^= rows[rank];
    ++rank;
  }
  return rank;
}

struct F2VectCat {
  Cat cat;
  int maxdim = 0;
  std::vector<F2Mat> mats;                 // morphism id -> matrix
  std::vector<char> injective, surjective; // per morphism
};

inline F2VectCat f2_vect(int maxdim) {
  F2VectCat v;
  v.maxdim = maxdim;
  FiniteCategory c;
  c.n_obj = maxdim + 1;
  for (int d = 0; d <= maxdim; ++d) c.obj_label.push_back(std::to_string(d));
  std::map<std::pair<std::pair<int, int>, std::uint32_t>, int> idx;
  for (int a = 0; a <= maxdim; ++a)
    for (int b = 0; b <= maxdim; ++b) {
      const int nbits = a * b;
      for (std::uint32_t bits = 0; bits < (1u << nbits); ++bits) {
        idx[{{a, b}, bits}] = c.n_mor();
        c.msrc.push_back(a);
        c.mtgt.push_back(b);
        v.mats.push_back(F2Mat{b, a, bits});
      }
    }
  c.ident.resize(c.n_obj);
  for (int d = 0; d <= maxdim; ++d) {
    std::uint32_t bits = 0;
    for (int i = 0; i < d; ++i) bits |= 1u << (i * d + i);
    c.ident[d] = idx.at({{d, d}, bits});
  }
  const int nm = c.n_mor();
  c.comp.assign(static_cast<std::size_t>(nm) * nm, -1);
  for (int g = 0; g < nm; ++g)
    for (int f = 0; f < nm; ++f) {
      if (c.mtgt[f] != c.msrc[g]) continue;
      const F2Mat r = f2_mul(v.mats[g], v.mats[f]);
      c.comp[static_cast<std::size_t>(g) * nm + f] = idx.at({{c.msrc[f], c.mtgt[g]}, r.bits});
    }
  for (int m = 0; m < nm; ++m) {
    const int rk = f2_rank(v.mats[m]);
    v.injective.push_back(rk == v.mats[m].cols);
    v.surjective.push_back(rk == v.mats[m].rows);
  }
  v.cat = share(std::move(c));
  return v;
}

// --- Pointed sets with <= maxextra points beyond the basepoint -------------
//
// Object k = {*, 1, .., k}; morphisms are basepoint-preserving maps, encoded
// by their values on 1..k.

struct PtdSetsCat {
  Cat cat;
  int maxextra = 0;
  std::vector<std::vector<int>> maps;  // morphism id -> values of 1..k (0 = basepoint)
  std::vector<char> injective;         // injective on all points
  std::vector<char> admissible_epi;    // surjective, injective away from basepoint fiber
};

inline PtdSetsCat pointed_sets(int maxextra) {
  PtdSetsCat p;
  p.maxextra = maxextra;
  FiniteCategory c;
  c.n_obj = maxextra + 1;
  for (int k = 0; k <= maxextra; ++k) c.obj_label.push_back("P" + std::to_string(k));
  std::map<std::pair<std::pair<int, int>, std::vector<int>>, int> idx;
  for (int a = 0; a <= maxextra; ++a)
    for (int b = 0; b <= maxextra; ++b) {
      std::vector<int> radix(a, b + 1);
      for_each_tuple(radix, [&](const std::vector<int>& vals) {
        idx[{{a, b}, vals}] = c.n_mor();
        c.msrc.push_back(a);
        c.mtgt.push_back(b);
        p.maps.push_back(vals);
        return true;
      });
    }
  c.ident.resize(c.n_obj);
  for (int k = 0; k <= maxextra; ++k) {
    std::vector<int> id(k);
    std::iota(id.begin(), id.end(), 1);
    c.ident[k] = idx.at({{k, k}, id});
  }
  const int nm = c.n_mor();
  c.comp.assign(static_cast<std::size_t>(nm) * nm, -1);
  for (int g = 0; g < nm; ++g)
    for (int f = 0; f < nm; ++f) {
      if (c.mtgt[f] != c.msrc[g]) continue;
      std::vector<int> r(p.maps[f].size());
      for (std::size_t i = 0; i < r.size(); ++i) {
        const int mid = p.maps[f][i];
        r[i] = mid == 0 ? 0 : p.maps[g][mid - 1];
      }
      c.comp[static_cast<std::size_t>(g) * nm + f] = idx.at({{c.msrc[f], c.mtgt[g]}, r});
    }
  for (int m = 0; m < nm; ++m) {
    const auto& vals = p.maps[m];
    const int b = c.mtgt[m];
    std::vector<int> count(b + 1, 0);
    ++count[0];  // basepoint maps to basepoint
    bool inj = true;
    for (std::size_t i = 0; i < vals.size(); ++i) {
      ++count[vals[i]];
      if (vals[i] == 0) inj = false;
      for (std::size_t j = 0; j < i; ++j)
        if (vals[i] == vals[j]) inj = false;
    }
    bool surj = true;
    for (int y = 0; y <= b; ++y)
      if (count[y] == 0) surj = false;
    bool inj_away = true;  // fibers over non-basepoints are singletons
    for (int y = 1; y <= b; ++y)
      if (count[y] > 1) inj_away = false;
    p.injective.push_back(inj);
    p.admissible_epi.push_back(surj && inj_away);
  }
  p.cat = share(std::move(c));
  return p;
}

}  // namespace sdot
