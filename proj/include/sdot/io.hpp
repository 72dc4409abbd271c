#pragma once

#include <fstream>
#include <sstream>

#include "sdot/relative.hpp"

namespace sdot {

// ---------------------------------------------------------------------------
// Structured-text file formats.  Writers emit a canonical form; reading what
// was written reproduces the object exactly, and re-writing reproduces the
// bytes.  Parse errors carry line numbers, validation errors carry witnesses.
// ---------------------------------------------------------------------------

struct ParseError : std::runtime_error {
  int line;
  ParseError(int ln, const std::string& what)
      : std::runtime_error("line " + std::to_string(ln) + ": " + what), line(ln) {}
};

namespace detail {
struct LineReader {
  std::istream& in;
  int lineno = 0;
  std::string cur;
  bool next() {
    while (std::getline(in, cur)) {
      ++lineno;
      if (!cur.empty() && cur[0] != '#') return true;
    }
    return false;
  }
  std::vector<std::string> tokens() const {
    std::vector<std::string> out;
    std::istringstream is(cur);
    std::string t;
    while (is >> t) out.push_back(t);
    return out;
  }
  [[noreturn]] void fail(const std::string& what) const { throw ParseError(lineno, what); }
};

inline int to_int(const LineReader& lr, const std::string& s) {
  try {
    std::size_t pos = 0;
    const int v = std::stoi(s, &pos);
    if (pos != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (...) {
    lr.fail("expected an integer, got '" + s + "'");
  }
}
}  // namespace detail

// --- category files ---------------------------------------------------------
//
// category
// objects <n>
// morphisms <m>
// mor <id> <src> <tgt>          (m lines, ids ascending)
// identities <id...>            (one per object)
// compose <g> <f> <gf>          (every composable pair, lex order)
// monos <ids...>                (optional marked subsets)
// epis <ids...>
// zeros <ids...>
// end

struct CategoryFile {
  FiniteCategory cat;
  std::vector<int> monos, epis, zeros;
  bool has_marks = false;
};

inline std::string write_category(const FiniteCategory& c, const std::vector<int>* monos = nullptr,
                                  const std::vector<int>* epis = nullptr,
                                  const std::vector<int>* zeros = nullptr) {
  std::ostringstream os;
  os << "category\n";
  os << "objects " << c.n_obj << "\n";
  os << "morphisms " << c.n_mor() << "\n";
  for (int m = 0; m < c.n_mor(); ++m) os << "mor " << m << " " << c.msrc[m] << " " << c.mtgt[m] << "\n";
  os << "identities";
  for (int o = 0; o < c.n_obj; ++o) os << " " << c.ident[o];
  os << "\n";
  for (int g = 0; g < c.n_mor(); ++g)
    for (int f = 0; f < c.n_mor(); ++f)
      if (c.mtgt[f] == c.msrc[g]) os << "compose " << g << " " << f << " " << c.compose(g, f) << "\n";
  auto marks = [&](const char* k, const std::vector<int>* v) {
    if (!v) return;
    os << k;
    for (int x : *v) os << " " << x;
    os << "\n";
  };
  marks("monos", monos);
  marks("epis", epis);
  marks("zeros", zeros);
  os << "end\n";
  return os.str();
}

inline std::string write_pex(const ProtoExactStructure& s) {
  std::vector<int> monos, epis;
  for (int m = 0; m < s.host->n_mor(); ++m) {
    if (s.mono[m]) monos.push_back(m);
    if (s.epi[m]) epis.push_back(m);
  }
  return write_category(*s.host, &monos, &epis, &s.zero_objs);
}

inline CategoryFile read_category(std::istream& in) {
  detail::LineReader lr{in};
  CategoryFile out;
  if (!lr.next() || lr.cur != "category") lr.fail("expected 'category' header");
  FiniteCategory& c = out.cat;
  int declared_mor = -1;
  while (lr.next()) {
    auto t = lr.tokens();
    if (t.empty()) continue;
    if (t[0] == "end") break;
    if (t[0] == "objects") {
      c.n_obj = detail::to_int(lr, t.at(1));
    } else if (t[0] == "morphisms") {
      declared_mor = detail::to_int(lr, t.at(1));
      c.msrc.assign(declared_mor, -1);
      c.mtgt.assign(declared_mor, -1);
      c.comp.assign(static_cast<std::size_t>(declared_mor) * declared_mor, -1);
    } else if (t[0] == "mor") {
      if (t.size() < 4) lr.fail("mor needs id, src, tgt");
      const int id = detail::to_int(lr, t[1]);
      if (id < 0 || id >= declared_mor) lr.fail("morphism id out of range");
      c.msrc[id] = detail::to_int(lr, t[2]);
      c.mtgt[id] = detail::to_int(lr, t[3]);
    } else if (t[0] == "identities") {
      for (std::size_t i = 1; i < t.size(); ++i) c.ident.push_back(detail::to_int(lr, t[i]));
    } else if (t[0] == "compose") {
      if (t.size() != 4) lr.fail("compose needs g, f, gf");
      const int g = detail::to_int(lr, t[1]), f = detail::to_int(lr, t[2]),
                gf = detail::to_int(lr, t[3]);
      if (g < 0 || g >= declared_mor || f < 0 || f >= declared_mor)
        lr.fail("compose ids out of range");
      c.comp[static_cast<std::size_t>(g) * declared_mor + f] = gf;
    } else if (t[0] == "monos" || t[0] == "epis" || t[0] == "zeros") {
      out.has_marks = true;
      auto& v = t[0] == "monos" ? out.monos : t[0] == "epis" ? out.epis : out.zeros;
      for (std::size_t i = 1; i < t.size(); ++i) v.push_back(detail::to_int(lr, t[i]));
    } else {
      lr.fail("unknown directive '" + t[0] + "'");
    }
  }
  if (declared_mor < 0) lr.fail("missing 'morphisms' count");
  return out;
}

// --- simplicial set files -----------------------------------------------------
//
// simpset
// trunc <D>
// sizes <n0> ... <nD>
// face <m> <i> <values...>
// degen <m> <i> <values...>
// end

inline std::string write_simpset(const TruncSimpSet& x) {
  std::ostringstream os;
  os << "simpset\ntrunc " << x.dim << "\nsizes";
  for (int m = 0; m <= x.dim; ++m) os << " " << x.size(m);
  os << "\n";
  for (int m = 1; m <= x.dim; ++m)
    for (int i = 0; i <= m; ++i) {
      os << "face " << m << " " << i;
      for (int s = 0; s < x.size(m); ++s) os << " " << x.d(m, i, s);
      os << "\n";
    }
  for (int m = 0; m < x.dim; ++m)
    for (int i = 0; i <= m; ++i) {
      os << "degen " << m << " " << i;
      for (int s = 0; s < x.size(m); ++s) os << " " << x.s(m, i, s);
      os << "\n";
    }
  os << "end\n";
  return os.str();
}

inline TruncSimpSet read_simpset(std::istream& in) {
  detail::LineReader lr{in};
  if (!lr.next() || lr.cur != "simpset") lr.fail("expected 'simpset' header");
  TruncSimpSet x;
  bool sized = false;
  while (lr.next()) {
    auto t = lr.tokens();
    if (t[0] == "end") break;
    if (t[0] == "trunc") {
      x.dim = detail::to_int(lr, t.at(1));
    } else if (t[0] == "sizes") {
      for (std::size_t i = 1; i < t.size(); ++i) x.size_.push_back(detail::to_int(lr, t[i]));
      if (static_cast<int>(x.size_.size()) != x.dim + 1) lr.fail("sizes arity mismatch");
      x.alloc();
      sized = true;
    } else if (t[0] == "face" || t[0] == "degen") {
      if (!sized) lr.fail("sizes must precede tables");
      const int m = detail::to_int(lr, t.at(1)), i = detail::to_int(lr, t.at(2));
      auto& tab = t[0] == "face" ? x.face : x.degen;
      if (m < 0 || m >= static_cast<int>(tab.size()) || i < 0 || i >= static_cast<int>(tab[m].size()))
        lr.fail("table index out of range");
      if (t.size() - 3 != tab[m][i].size()) lr.fail("table arity mismatch");
      for (std::size_t k = 3; k < t.size(); ++k) tab[m][i][k - 3] = detail::to_int(lr, t[k]);
    } else {
      lr.fail("unknown directive '" + t[0] + "'");
    }
  }
  return x;
}

// --- set-valued presheaf files -------------------------------------------------
//
// presheaf
// trunc <D>
// level -1 <size>
// level <q> <r> <size>
// aug <values...>
// fv <q> <r> <i> <values...>     (and fh, sv, sh)
// end

inline std::string write_presheaf(const SetPresheaf& y) {
  std::ostringstream os;
  os << "presheaf\ntrunc " << y.trunc() << "\n";
  os << "level -1 " << y.aug_size() << "\n";
  for (int lid = 1; lid < y.sh.n_levels(); ++lid) {
    const Lv l = y.sh.levels[lid];
    os << "level " << l.q << " " << l.r << " " << y.size(lid) << "\n";
  }
  os << "aug";
  for (int v : y.aug) os << " " << v;
  os << "\n";
  auto tabs = [&](const char* key, const std::map<std::pair<int, int>, std::vector<int>>& ts) {
    for (const auto& [k, tab] : ts) {
      const Lv l = y.sh.levels[k.first];
      os << key << " " << l.q << " " << l.r << " " << k.second;
      for (int v : tab) os << " " << v;
      os << "\n";
    }
  };
  tabs("fv", y.fv);
  tabs("fh", y.fh);
  tabs("sv", y.sv);
  tabs("sh", y.sh_);
  os << "end\n";
  return os.str();
}

inline SetPresheaf read_presheaf(std::istream& in) {
  detail::LineReader lr{in};
  if (!lr.next() || lr.cur != "presheaf") lr.fail("expected 'presheaf' header");
  SetPresheaf y;
  while (lr.next()) {
    auto t = lr.tokens();
    if (t[0] == "end") break;
    if (t[0] == "trunc") {
      y.sh = SigmaTrunc(detail::to_int(lr, t.at(1)));
      y.sizes.assign(y.sh.n_levels(), 0);
      y.label.resize(y.sh.n_levels());
    } else if (t[0] == "level") {
      if (t[1] == "-1") {
        y.sizes[0] = detail::to_int(lr, t.at(2));
      } else {
        const int q = detail::to_int(lr, t.at(1)), r = detail::to_int(lr, t.at(2));
        if (!y.sh.has(q, r)) lr.fail("level outside the truncation");
        y.sizes[y.sh.id(q, r)] = detail::to_int(lr, t.at(3));
      }
    } else if (t[0] == "aug") {
      for (std::size_t k = 1; k < t.size(); ++k) y.aug.push_back(detail::to_int(lr, t[k]));
    } else if (t[0] == "fv" || t[0] == "fh" || t[0] == "sv" || t[0] == "sh") {
      const int q = detail::to_int(lr, t.at(1)), r = detail::to_int(lr, t.at(2)),
                i = detail::to_int(lr, t.at(3));
      if (!y.sh.has(q, r)) lr.fail("table level outside the truncation");
      std::vector<int> tab;
      for (std::size_t k = 4; k < t.size(); ++k) tab.push_back(detail::to_int(lr, t[k]));
      auto& ts = t[0] == "fv" ? y.fv : t[0] == "fh" ? y.fh : t[0] == "sv" ? y.sv : y.sh_;
      ts[{y.sh.id(q, r), i}] = std::move(tab);
    } else {
      lr.fail("unknown directive '" + t[0] + "'");
    }
  }
  return y;
}

// --- functor files ---------------------------------------------------------
//
// functor
// <category block for the source>
// <category block for the target>
// obmap <values...>
// mormap <values...>
// end

struct FunctorFile {
  CategoryFile source, target;
  std::vector<int> obmap, mormap;
};

inline std::string write_functor_file(const ExactFunctor& f) {
  std::ostringstream os;
  os << "functor\n";
  os << write_pex(*f.src);
  os << write_pex(*f.tgt);
  os << "obmap";
  for (int v : f.f.ob) os << " " << v;
  os << "\nmormap";
  for (int v : f.f.mor) os << " " << v;
  os << "\nend\n";
  return os.str();
}

inline FunctorFile read_functor_file(std::istream& in) {
  detail::LineReader lr{in};
  if (!lr.next() || lr.cur != "functor") lr.fail("expected 'functor' header");
  FunctorFile out;
  out.source = read_category(in);
  out.target = read_category(in);
  while (lr.next()) {
    auto t = lr.tokens();
    if (t[0] == "end") break;
    if (t[0] == "obmap")
      for (std::size_t k = 1; k < t.size(); ++k) out.obmap.push_back(detail::to_int(lr, t[k]));
    else if (t[0] == "mormap")
      for (std::size_t k = 1; k < t.size(); ++k) out.mormap.push_back(detail::to_int(lr, t[k]));
    else
      lr.fail("unknown directive '" + t[0] + "'");
  }
  return out;
}

// --- the example registry and ingestion --------------------------------------

inline Pex example_by_name(const std::string& name, const Budget& budget) {
  if (name == "trivial") return pex_trivial();
  if (name.rfind("f2vect:", 0) == 0) return pex_f2vect(std::stoi(name.substr(7)), budget);
  if (name.rfind("ptdsets:", 0) == 0) return pex_ptdsets(std::stoi(name.substr(8)), budget);
  throw ValidationError(
      {"unknown-example", name + " (expected trivial, f2vect:<d> or ptdsets:<s>)"});
}

inline ExactFunctor functor_by_name(const std::string& name, const Budget& budget) {
  // builtins: id:<example>, <example>->trivial, trivial-><example>
  if (name.rfind("id:", 0) == 0) return exact_identity(example_by_name(name.substr(3), budget));
  const auto arrow = name.find("->");
  if (arrow != std::string::npos) {
    const std::string a = name.substr(0, arrow), b = name.substr(arrow + 2);
    if (b == "trivial") return exact_to_trivial(example_by_name(a, budget));
    if (a == "trivial") return exact_from_trivial(example_by_name(b, budget));
  }
  throw ValidationError({"unknown-functor",
                         name + " (expected id:<example>, <example>->trivial or trivial-><example>)"});
}

inline Pex pex_from_file(const CategoryFile& cf, const std::string& name, const Budget& budget) {
  require_ok(validate_category(cf.cat));
  auto host = share(cf.cat);
  std::vector<char> mono(host->n_mor(), 0), epi(host->n_mor(), 0), zero(host->n_obj, 0);
  for (int m : cf.monos) mono.at(m) = 1;
  for (int m : cf.epis) epi.at(m) = 1;
  for (int z : cf.zeros) zero.at(z) = 1;
  auto s = make_pex(host, mono, epi, zero, name, budget);
  require_ok(validate_protoexact(*s));
  return s;
}

inline ExactFunctor functor_from_file(const FunctorFile& ff, const Budget& budget) {
  auto src = pex_from_file(ff.source, "source", budget);
  auto tgt = pex_from_file(ff.target, "target", budget);
  CatFunctor f{src->host, tgt->host, ff.obmap, ff.mormap};
  require_ok(check_functor(f));
  ExactFunctor ef{f, src, tgt, "file"};
  require_ok(validate_exact_functor(ef));
  return ef;
}

}  // namespace sdot
