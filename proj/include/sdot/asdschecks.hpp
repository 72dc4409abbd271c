#pragma once

#include "sdot/gpdpresheaf.hpp"

namespace sdot {

// ---------------------------------------------------------------------------
// The double Segal, stability and augmentation conditions.
//
// For groupoid-valued objects every homotopy pullback is modeled by a strict
// pullback whenever one leg passes the isofibration check; otherwise the
// checker falls back to the iso-comma model.  The route taken is recorded per
// index in the report.
// ---------------------------------------------------------------------------

struct CondReport {
  std::string cond;
  bool ok = true;
  std::string witness;
  std::vector<std::string> routes;   // pullback-route annotations
  std::vector<std::string> checked;  // parameter tuples actually checked
};

// --- set-valued versions ----------------------------------------------------

namespace detail {

// restriction of a set-presheaf element along (alpha, beta) from level (q2,r2)
inline std::function<int(int)> set_oper(const SetPsh& y, std::vector<int> alpha,
                                        std::vector<int> beta, int q2, int r2) {
  return [y, alpha, beta, q2, r2](int x) { return psh_apply(*y, alpha, beta, q2, r2, x); };
}

inline std::vector<int> iota_vec(int n) {
  std::vector<int> v(n + 1);
  std::iota(v.begin(), v.end(), 0);
  return v;
}

}  // namespace detail

inline CondReport check_double_segal_set(const SetPsh& ys, const Budget& budget) {
  CondReport rep{"double-segal"};
  const auto& y = *ys;
  for (int q = 1; q <= y.trunc(); ++q)
    for (int r = 1; q + r <= y.trunc(); ++r) {
      // second variable: Y_{q,r} -> Y_{q,1} x_{Y_{q,0}} ... x_{Y_{q,0}} Y_{q,1}
      for (int variable = 0; variable < 2; ++variable) {
        const int folds = variable == 0 ? r : q;
        auto seg = [&](int a, int x) {
          if (variable == 0)
            return psh_apply(y, detail::iota_vec(q), {a, a + 1}, q, r, x);
          return psh_apply(y, {a, a + 1}, detail::iota_vec(r), q, r, x);
        };
        auto last_vertex = [&](int e) {
          return variable == 0 ? psh_apply(y, detail::iota_vec(q), {1}, q, 1, e)
                               : psh_apply(y, {1}, detail::iota_vec(r), 1, r, e);
        };
        auto first_vertex = [&](int e) {
          return variable == 0 ? psh_apply(y, detail::iota_vec(q), {0}, q, 1, e)
                               : psh_apply(y, {0}, detail::iota_vec(r), 1, r, e);
        };
        const int lvl = y.sh.id(q, r);
        std::map<std::vector<int>, int> seen;
        for (int x = 0; x < y.size(lvl); ++x) {
          budget.tick();
          std::vector<int> t(folds);
          for (int a = 0; a < folds; ++a) t[a] = seg(a, x);
          if (seen.count(t)) {
            rep.ok = false;
            rep.witness = "two elements of " + Lv{q, r, false}.str() + " share a spine";
            return rep;
          }
          seen[t] = x;
        }
        // enumerate glued tuples
        const int elvl = variable == 0 ? y.sh.id(q, 1) : y.sh.id(1, r);
        std::vector<std::vector<int>> by_first(
            variable == 0 ? y.size(q, 0) : y.size(0, r));
        for (int e = 0; e < y.size(elvl); ++e) by_first[first_vertex(e)].push_back(e);
        std::size_t count = 0;
        bool bad = false;
        std::vector<int> cur;
        std::function<void()> ext = [&]() {
          if (bad) return;
          if (static_cast<int>(cur.size()) == folds) {
            ++count;
            if (!seen.count(cur)) bad = true;
            return;
          }
          if (cur.empty()) {
            for (int e = 0; e < y.size(elvl); ++e) {
              cur.push_back(e);
              ext();
              cur.pop_back();
            }
          } else {
            for (int e : by_first[last_vertex(cur.back())]) {
              budget.tick();
              cur.push_back(e);
              ext();
              cur.pop_back();
            }
          }
        };
        ext();
        if (bad || count != seen.size()) {
          rep.ok = false;
          rep.witness = "spine map at " + Lv{q, r, false}.str() +
                        (variable == 0 ? " (second variable)" : " (first variable)") +
                        " is not bijective";
          return rep;
        }
        rep.checked.push_back(Lv{q, r, false}.str() +
                              (variable == 0 ? " second-variable" : " first-variable"));
      }
    }
  return rep;
}

inline CondReport check_stable_set(const SetPsh& ys, bool general, const Budget& budget) {
  CondReport rep{"stable"};
  const auto& y = *ys;
  auto run = [&](int q, int r) {
    // t-version: Y_{q,r} -> Y_{q,0} x_{Y_{0,0}} Y_{0,r}; s-version with 0s
    for (int version = 0; version < 2; ++version) {
      const int pick_i = version == 0 ? r : 0;   // which column for the vertical part
      const int pick_j = version == 0 ? q : 0;   // which row for the horizontal part
      auto to_v = detail::set_oper(ys, detail::iota_vec(q), {pick_i}, q, r);   // -> Y_{q,0}
      auto to_h = detail::set_oper(ys, {pick_j}, detail::iota_vec(r), q, r);   // -> Y_{0,r}
      auto leg_v = detail::set_oper(ys, {pick_j}, {0}, q, 0);                  // Y_{q,0} -> Y_{0,0}
      auto leg_h = detail::set_oper(ys, {0}, {pick_i}, 0, r);                  // Y_{0,r} -> Y_{0,0}
      std::map<std::pair<int, int>, int> seen;
      const int lvl = y.sh.id(q, r);
      for (int x = 0; x < y.size(lvl); ++x) {
        budget.tick();
        auto key = std::make_pair(to_v(x), to_h(x));
        if (seen.count(key)) {
          rep.ok = false;
          rep.witness = "stability map at " + Lv{q, r, false}.str() + " not injective";
          return;
        }
        seen[key] = x;
      }
      std::size_t pairs = 0;
      for (int a = 0; a < y.size(q, 0); ++a)
        for (int b2 = 0; b2 < y.size(0, r); ++b2) {
          budget.tick();
          if (leg_v(a) != leg_h(b2)) continue;
          ++pairs;
          if (!seen.count({a, b2})) {
            rep.ok = false;
            rep.witness = "stability " + std::string(version == 0 ? "cospan" : "span") +
                          " at " + Lv{q, r, false}.str() + " has an unfillable pair (" +
                          y.name(y.sh.id(q, 0), a) + ", " + y.name(y.sh.id(0, r), b2) + ")";
            return;
          }
        }
      if (pairs != seen.size()) {
        rep.ok = false;
        rep.witness = "stability map at " + Lv{q, r, false}.str() + " not surjective";
        return;
      }
      rep.checked.push_back(Lv{q, r, false}.str() + (version == 0 ? " cospan" : " span"));
    }
  };
  run(1, 1);
  if (general)
    for (int q = 1; q <= y.trunc(); ++q)
      for (int r = 1; q + r <= y.trunc(); ++r) {
        if (q == 1 && r == 1) continue;
        if (!rep.ok) return rep;
        run(q, r);
      }
  return rep;
}

inline CondReport check_augmented_set(const SetPsh& ys, const Budget& budget) {
  CondReport rep{"augmented"};
  const auto& y = *ys;
  for (int version = 0; version < 2; ++version) {
    // version 0: Y_{1,0} ^{t_v}x_{Y_{0,0}} Y_{-1} -> Y_{1,0} -> s_v -> Y_{0,0}
    // version 1: Y_{0,1} ^{s_h}x_{Y_{0,0}} Y_{-1} -> Y_{0,1} -> t_h -> Y_{0,0}
    auto glue = version == 0 ? detail::set_oper(ys, {1}, {0}, 1, 0)
                             : detail::set_oper(ys, {0}, {0}, 0, 1);
    auto out = version == 0 ? detail::set_oper(ys, {0}, {0}, 1, 0)
                            : detail::set_oper(ys, {0}, {1}, 0, 1);
    const int elvl = version == 0 ? y.sh.id(1, 0) : y.sh.id(0, 1);
    std::map<int, int> seen;  // target object -> count
    std::size_t pairs = 0;
    for (int e = 0; e < y.size(elvl); ++e)
      for (int w = 0; w < y.aug_size(); ++w) {
        budget.tick();
        if (glue(e) != y.aug[w]) continue;
        ++pairs;
        ++seen[out(e)];
      }
    bool bij = pairs == static_cast<std::size_t>(y.size(0, 0));
    for (int z = 0; z < y.size(0, 0) && bij; ++z)
      if (seen[z] != 1) bij = false;
    if (!bij) {
      rep.ok = false;
      rep.witness = std::string("augmentation composite ") + (version == 0 ? "1" : "2") +
                    " is not bijective (" + std::to_string(pairs) + " pairs over " +
                    std::to_string(y.size(0, 0)) + " targets)";
      return rep;
    }
    rep.checked.push_back(version == 0 ? "vertical" : "horizontal");
  }
  return rep;
}

// --- groupoid-valued versions -----------------------------------------------

namespace detail {

// iterated strict pullback F_0 x_B F_1 x_B ... glued by (last, first) legs
struct ChainPullback {
  Gpd gpd;
  std::vector<std::shared_ptr<const StrictPullbackGroupoid>> stages;

  int ob_of(const std::vector<int>& comps) const {
    int cur = comps[0];
    for (std::size_t k = 1; k < comps.size(); ++k) cur = stages[k - 1]->find(cur, comps[k]);
    return cur;
  }
  GMor mor_of(const std::vector<GMor>& comps) const {
    GMor cur = comps[0];
    int s = comps[0].src, t = comps[0].tgt;
    for (std::size_t k = 1; k < comps.size(); ++k) {
      const int ns = stages[k - 1]->find(s, comps[k].src);
      const int nt = stages[k - 1]->find(t, comps[k].tgt);
      cur = GMor{ns, nt, encode_parts({cur, comps[k]})};
      s = ns;
      t = nt;
    }
    return cur;
  }
};

inline ChainPullback chain_pullback(const std::vector<Gpd>& factors,
                                    const std::vector<GFunctor>& last_leg,
                                    const std::vector<GFunctor>& first_leg, const Budget& budget) {
  ChainPullback out;
  Gpd cur = factors[0];
  GFunctor cur_last = last_leg[0];
  for (std::size_t k = 1; k < factors.size(); ++k) {
    auto pb = strict_pullback(cur_last, first_leg[k], budget);
    out.stages.push_back(pb.gpd);
    cur_last = compose_gfunctors(last_leg[k], pb.pr2);
    cur = pb.gpd;
  }
  out.gpd = cur;
  return out;
}

}  // namespace detail

struct GpdCondOptions {
  bool strict_pullbacks_only = false;  // fail instead of falling back
  bool general_stability = true;
};

// equivalence via a binary strict or iso-comma pullback with route recording
inline bool binary_pullback_equivalence(const GFunctor& cmp_left, const GFunctor& cmp_right,
                                        const GFunctor& leg_left, const GFunctor& leg_right,
                                        const Gpd& source, const GpdCondOptions& opt,
                                        const Budget& budget, CondReport& rep,
                                        const std::string& tag) {
  auto fib = is_isofibration(leg_right, budget);
  if (fib.ok || opt.strict_pullbacks_only) {
    if (!fib.ok) {
      rep.ok = false;
      rep.witness = tag + ": isofibration precondition fails (" + fib.witness + ")";
      return false;
    }
    rep.routes.push_back(tag + ": strict (isofibration justified)");
    auto pb = strict_pullback(leg_left, leg_right, budget);
    GFunctor cmp{source, pb.gpd,
                 [pb, cmp_left, cmp_right](int x) {
                   return pb.gpd->find(cmp_left.ob(x), cmp_right.ob(x));
                 },
                 [pb, cmp_left, cmp_right](const GMor& m) {
                   const GMor a = cmp_left.mor(m);
                   const GMor b = cmp_right.mor(m);
                   return GMor{pb.gpd->find(a.src, b.src), pb.gpd->find(a.tgt, b.tgt),
                               encode_parts({a, b})};
                 },
                 "cmp"};
    auto eq = is_equivalence(cmp, budget);
    if (!eq.ok) {
      rep.ok = false;
      rep.witness = tag + ": " + eq.reason + " (" + eq.witness + ")";
      return false;
    }
    return true;
  }
  rep.routes.push_back(tag + ": 2-pullback fallback (" + fib.witness + ")");
  auto tp = two_pullback(leg_left, leg_right, budget);
  GFunctor cmp{source, tp,
               [tp, cmp_left, cmp_right, leg_left](int x) {
                 const GMor id = leg_left.cod->identity(leg_left.ob(cmp_left.ob(x)));
                 return tp->find(cmp_left.ob(x), cmp_right.ob(x), id);
               },
               [tp, cmp_left, cmp_right, leg_left](const GMor& m) {
                 const GMor a = cmp_left.mor(m);
                 const GMor b = cmp_right.mor(m);
                 const GMor ids = leg_left.cod->identity(leg_left.ob(a.src));
                 const GMor idt = leg_left.cod->identity(leg_left.ob(a.tgt));
                 return GMor{tp->find(a.src, b.src, ids), tp->find(a.tgt, b.tgt, idt),
                             encode_parts({a, b})};
               },
               "cmp2"};
  auto eq = is_equivalence(cmp, budget);
  if (!eq.ok) {
    rep.ok = false;
    rep.witness = tag + ": " + eq.reason + " (" + eq.witness + ")";
    return false;
  }
  return true;
}

inline CondReport check_double_segal_gpd(const GpdPsh& y, const GpdCondOptions& opt,
                                         const Budget& budget) {
  CondReport rep{"double-segal"};
  const int top = y->matdim;
  for (int q = 1; q <= top; ++q)
    for (int r = 1; q + r <= top; ++r)
      for (int variable = 0; variable < 2 && rep.ok; ++variable) {
        const int folds = variable == 0 ? r : q;
        const std::string tag =
            Lv{q, r, false}.str() + (variable == 0 ? " second-variable" : " first-variable");
        // factors and legs
        std::vector<Gpd> factors;
        std::vector<GFunctor> last_leg, first_leg, segs;
        for (int a = 0; a < folds; ++a) {
          if (variable == 0) {
            factors.push_back(y->level(q, 1));
            last_leg.push_back(gpsh_oper(y, detail::iota_vec(q), {1}, q, 1));
            first_leg.push_back(gpsh_oper(y, detail::iota_vec(q), {0}, q, 1));
            segs.push_back(gpsh_oper(y, detail::iota_vec(q), {a, a + 1}, q, r));
          } else {
            factors.push_back(y->level(1, r));
            last_leg.push_back(gpsh_oper(y, {1}, detail::iota_vec(r), 1, r));
            first_leg.push_back(gpsh_oper(y, {0}, detail::iota_vec(r), 1, r));
            segs.push_back(gpsh_oper(y, {a, a + 1}, detail::iota_vec(r), q, r));
          }
        }
        if (folds == 1) {
          rep.checked.push_back(tag + " (trivial)");
          continue;
        }
        // isofibration justification for each gluing stage (first-vertex leg)
        auto fib = is_isofibration(first_leg[1], budget);
        if (!fib.ok && opt.strict_pullbacks_only) {
          rep.ok = false;
          rep.witness = tag + ": isofibration precondition fails";
          break;
        }
        if (!fib.ok) {
          // fall back only for the binary case; report and bail otherwise
          if (folds != 2) {
            rep.ok = false;
            rep.witness = tag + ": isofibration fails and no fallback for " +
                          std::to_string(folds) + "-fold spine";
            break;
          }
          binary_pullback_equivalence(segs[0], segs[1], last_leg[0], first_leg[1],
                                      y->level(q, r), opt, budget, rep, tag);
          if (rep.ok) rep.checked.push_back(tag);
          continue;
        }
        rep.routes.push_back(tag + ": strict (isofibration justified)");
        auto cp = detail::chain_pullback(factors, last_leg, first_leg, budget);
        GFunctor cmp{y->level(q, r), cp.gpd,
                     [cp, segs](int x) {
                       std::vector<int> comps;
                       for (const auto& s : segs) comps.push_back(s.ob(x));
                       return cp.ob_of(comps);
                     },
                     [cp, segs](const GMor& m) {
                       std::vector<GMor> comps;
                       for (const auto& s : segs) comps.push_back(s.mor(m));
                       return cp.mor_of(comps);
                     },
                     "spine-cmp"};
        auto eq = is_equivalence(cmp, budget);
        if (!eq.ok) {
          rep.ok = false;
          rep.witness = tag + ": " + eq.reason + " (" + eq.witness + ")";
          break;
        }
        rep.checked.push_back(tag);
      }
  return rep;
}

inline CondReport check_stable_gpd(const GpdPsh& y, const GpdCondOptions& opt,
                                   const Budget& budget) {
  CondReport rep{"stable"};
  auto run = [&](int q, int r) {
    for (int version = 0; version < 2 && rep.ok; ++version) {
      const int pick_i = version == 0 ? r : 0;
      const int pick_j = version == 0 ? q : 0;
      const std::string tag = Lv{q, r, false}.str() +
                              (version == 0 ? " cospan" : " span");
      GFunctor to_v = gpsh_oper(y, detail::iota_vec(q), {pick_i}, q, r);  // -> Y_{q,0}
      GFunctor to_h = gpsh_oper(y, {pick_j}, detail::iota_vec(r), q, r);  // -> Y_{0,r}
      GFunctor leg_v = gpsh_oper(y, {pick_j}, {0}, q, 0);                 // Y_{q,0} -> Y_{0,0}
      GFunctor leg_h = gpsh_oper(y, {0}, {pick_i}, 0, r);                 // Y_{0,r} -> Y_{0,0}
      binary_pullback_equivalence(to_v, to_h, leg_v, leg_h, y->level(q, r), opt, budget, rep, tag);
      if (rep.ok) rep.checked.push_back(tag);
    }
  };
  run(1, 1);
  if (opt.general_stability)
    for (int q = 1; q <= y->matdim && rep.ok; ++q)
      for (int r = 1; q + r <= y->matdim && rep.ok; ++r) {
        if (q == 1 && r == 1) continue;
        run(q, r);
      }
  return rep;
}

inline CondReport check_augmented_gpd(const GpdPsh& y, const GpdCondOptions& opt,
                                      const Budget& budget) {
  CondReport rep{"augmented"};
  for (int version = 0; version < 2 && rep.ok; ++version) {
    const std::string tag = version == 0 ? "vertical" : "horizontal";
    GFunctor glue = version == 0 ? gpsh_oper(y, {1}, {0}, 1, 0) : gpsh_oper(y, {0}, {0}, 0, 1);
    GFunctor out = version == 0 ? gpsh_oper(y, {0}, {0}, 1, 0) : gpsh_oper(y, {0}, {1}, 0, 1);
    // strict pullback along the augmentation, justified by its isofibration
    auto fib = is_isofibration(y->aug, budget);
    if (!fib.ok && opt.strict_pullbacks_only) {
      rep.ok = false;
      rep.witness = tag + ": augmentation is not an isofibration";
      break;
    }
    Gpd pb_gpd;
    GFunctor pr1;
    if (fib.ok) {
      rep.routes.push_back(tag + ": strict (augmentation isofibration justified)");
      auto pb = strict_pullback(glue, y->aug, budget);
      pb_gpd = pb.gpd;
      pr1 = pb.pr1;
    } else {
      rep.routes.push_back(tag + ": 2-pullback fallback");
      auto tp = two_pullback(glue, y->aug, budget);
      pb_gpd = tp;
      pr1 = GFunctor{tp, glue.dom, [tp](int x) { return tp->objs[x].d; },
                     [tp](const GMor& m) {
                       auto parts = decode_parts(m.data, 2);
                       return GMor{tp->objs[m.src].d, tp->objs[m.tgt].d, parts[0]};
                     },
                     "pr1"};
    }
    GFunctor comp = compose_gfunctors(out, pr1);
    auto eq = is_equivalence(comp, budget);
    if (!eq.ok) {
      rep.ok = false;
      rep.witness = tag + " augmentation composite: " + eq.reason + " (" + eq.witness + ")";
      break;
    }
    rep.checked.push_back(tag);
  }
  return rep;
}

struct AsdsReport {
  CondReport double_segal, stable, augmented;
  bool ok() const { return double_segal.ok && stable.ok && augmented.ok; }
};

inline AsdsReport check_asds_gpd(const GpdPsh& y, const GpdCondOptions& opt, const Budget& budget) {
  return {check_double_segal_gpd(y, opt, budget), check_stable_gpd(y, opt, budget),
          check_augmented_gpd(y, opt, budget)};
}

inline AsdsReport check_asds_set(const SetPsh& y, const Budget& budget) {
  return {check_double_segal_set(y, budget), check_stable_set(y, true, budget),
          check_augmented_set(y, budget)};
}

// ---------------------------------------------------------------------------
// Groupoid-level 2-Segal checks for a simplicial groupoid.
// ---------------------------------------------------------------------------

// restriction along an injective vertex map: composite of face functors
inline GFunctor simpgpd_restrict(const SimpGpd& s, const std::vector<int>& verts, int m) {
  if (s.direct_restrict) return s.direct_restrict(verts, m);
  GFunctor f = identity_gfunctor(s.level[m]);
  std::vector<char> keep(m + 1, 0);
  for (int v : verts) keep[v] = 1;
  int cur = m;
  for (int v = m; v >= 0; --v)
    if (!keep[v]) {
      f = compose_gfunctors(s.face[cur][v], f);
      --cur;
    }
  return f;
}

struct TwoSegalGpdReport {
  bool ok = true;
  int n = -1, i = -1, j = -1;
  std::string witness;
  std::vector<std::string> routes;
};

inline TwoSegalGpdReport check_two_segal_gpd(const SimpGpd& s, const GpdCondOptions& opt,
                                             const Budget& budget) {
  TwoSegalGpdReport rep;
  for (int n = 3; n <= s.nmax; ++n)
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j <= n; ++j) {
        if (i == 0 && j == n) continue;
        std::vector<int> part1, part2;
        for (int v = 0; v <= i; ++v) part1.push_back(v);
        for (int v = j; v <= n; ++v) part1.push_back(v);
        for (int v = i; v <= j; ++v) part2.push_back(v);
        const int a = static_cast<int>(part1.size()) - 1;
        const int b = static_cast<int>(part2.size()) - 1;
        GFunctor res1 = simpgpd_restrict(s, part1, n);
        GFunctor res2 = simpgpd_restrict(s, part2, n);
        // legs to the shared edge {i,j}: in part1 at positions (i,i+1); in
        // part2 at positions (0,b)
        GFunctor leg1 = simpgpd_restrict(s, {i, i + 1}, a);
        GFunctor leg2 = simpgpd_restrict(s, {0, b}, b);
        CondReport sub{"two-segal"};
        binary_pullback_equivalence(res1, res2, leg1, leg2, s.level[n], opt, budget, sub,
                                    "(" + std::to_string(n) + "," + std::to_string(i) + "," +
                                        std::to_string(j) + ")");
        for (auto& r : sub.routes) rep.routes.push_back(r);
        if (!sub.ok) {
          rep.ok = false;
          rep.n = n;
          rep.i = i;
          rep.j = j;
          rep.witness = sub.witness;
          return rep;
        }
      }
  return rep;
}

}  // namespace sdot
