// Command-line batch runner for the finite S-construction toolkit: named
// check suites with machine-readable reports, plus one-shot subcommands for
// subdivision, fundamental categories, nerves and the comparison theorems.

#include <CLI11.hpp>
#include <fstream>
#include <iostream>

#include "sdot/suites.hpp"

using namespace sdot;

namespace {

struct GlobalOpts {
  std::uint64_t budget = default_budget_limit();
  bool budget_explicit = false;
  std::uint64_t seed = 0;
  int trunc = -1;
  int n_max = -1;
  std::string json_path;
  bool strict_pullbacks_only = false;
  bool with_timings = false;
};

int finish(const GlobalOpts& g, std::vector<CheckReport> reports) {
  sort_reports(reports);
  for (const auto& r : reports) {
    std::cout << "[" << r.verdict << "] " << r.suite << " / " << r.check;
    if (!r.input.empty()) std::cout << " (" << r.input << ")";
    std::cout << "\n";
    for (const auto& w : r.witnesses) std::cout << "    " << w << "\n";
  }
  const auto j = reports_to_json(reports, g.with_timings);
  if (!g.json_path.empty()) {
    std::ofstream out(g.json_path);
    out << j.dump(2) << "\n";
  }
  std::cout << j["summary"].dump() << "\n";
  return exit_code(reports);
}

SuiteParams params_of(const GlobalOpts& g, const std::vector<std::string>& examples = {}) {
  SuiteParams p;
  p.budget_limit = g.budget;
  p.budget_explicit = g.budget_explicit;
  p.seed = g.seed;
  p.trunc = g.trunc;
  p.n_max = g.n_max;
  p.strict_pullbacks_only = g.strict_pullbacks_only;
  p.examples = examples;
  return p;
}

Sset load_simpset(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError({"io", "cannot open " + path});
  auto x = read_simpset(in);
  require_ok(validate_simpset(x));
  require_ok(check_ez_unique(x));
  return share(std::move(x));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"finite checker suite for generalized S-constructions"};
  app.require_subcommand(1);
  app.fallthrough();
  GlobalOpts g;
  auto* budget_opt = app.add_option("--budget", g.budget, "enumeration budget (candidate checks)");
  app.add_option("--seed", g.seed, "seed for randomized suites");
  app.add_option("--trunc", g.trunc, "truncation override");
  app.add_option("--n-max", g.n_max, "maximal simplicial level");
  app.add_option("--json", g.json_path, "write the JSON report here");
  app.add_flag("--strict-pullbacks-only", g.strict_pullbacks_only,
               "fail instead of falling back to iso-comma pullbacks");
  app.add_flag("--timings", g.with_timings,
               "include wall-clock timings in the JSON (breaks byte-identical output)");

  // suite runner
  std::string suite_name;
  std::vector<std::string> suite_examples;
  std::string suite_help = "one of: all";
  for (const auto& s : suite_names()) suite_help += ", " + s;
  auto* suite = app.add_subcommand("suite", "run a named check suite");
  suite->add_option("--suite,suite", suite_name, suite_help)->required();
  suite->add_option("--example", suite_examples, "restrict to these examples");

  // sd
  std::string sd_in, sd_out;
  int sd_simplex = -1, sd_dim = 2;
  auto* sd = app.add_subcommand("sd", "ordinal subdivision of a simplicial set");
  sd->add_option("--in", sd_in, "simplicial set file");
  sd->add_option("--simplex", sd_simplex, "use the standard n-simplex instead");
  sd->add_option("--dim", sd_dim, "output truncation");
  sd->add_option("--out", sd_out, "write the subdivided set here");

  // tau1
  std::string t1_in, t1_out;
  auto* t1 = app.add_subcommand("tau1", "fundamental category of a simplicial set");
  t1->add_option("--in", t1_in, "simplicial set file")->required();
  t1->add_option("--out", t1_out, "write the category file here");

  // two-segal
  std::string ts_in;
  auto* ts = app.add_subcommand("two-segal", "decide the 2-Segal conditions for a simplicial set");
  ts->add_option("--in", ts_in, "simplicial set file")->required();

  // sdot (set-valued, from a presheaf file) and check-asds
  std::string sdot_in, sdot_example;
  int sdot_n = 1;
  bool sdot_kan = false;
  auto* sdotc = app.add_subcommand("sdot", "values of the generalized construction");
  sdotc->add_option("--in", sdot_in, "set-valued presheaf file");
  sdotc->add_option("--example", sdot_example, "or a built-in example nerve");
  sdotc->add_option("-n,--n", sdot_n, "simplicial level");
  sdotc->add_flag("--kan", sdot_kan, "cross-check against the pointwise limit");

  std::string asds_in, asds_example;
  auto* asds = app.add_subcommand("check-asds", "run the three structure checkers");
  asds->add_option("--in", asds_in, "set-valued presheaf file");
  asds->add_option("--example", asds_example, "or a built-in example nerve");

  // nerve / sdot-e / sdot-wald / compare
  std::string nerve_example;
  auto* nervec = app.add_subcommand("nerve", "level counts of an example nerve");
  nervec->add_option("--example", nerve_example)->required();

  std::string se_example;
  int se_n = 1;
  auto* sec = app.add_subcommand("sdot-e", "classical construction with arbitrary zeros");
  sec->add_option("--example", se_example)->required();
  sec->add_option("-n,--n", se_n);

  std::string sw_example;
  int sw_n = 1, sw_base = -1;
  auto* swc = app.add_subcommand("sdot-wald", "classical construction with a fixed basepoint");
  swc->add_option("--example", sw_example)->required();
  swc->add_option("-n,--n", sw_n);
  swc->add_option("--basepoint", sw_base, "zero object id (default: least)");

  std::string cmp_example;
  int cmp_n = 2;
  bool cmp_wald = false;
  auto* cmp = app.add_subcommand("compare", "comparison theorems for an example");
  cmp->add_option("--example", cmp_example)->required();
  cmp->add_option("-n,--n", cmp_n);
  cmp->add_flag("--wald", cmp_wald, "compare the fixed-basepoint and any-zero versions");

  // relative
  std::string rel_functor;
  int rel_n = 1;
  bool rel_compare = false;
  auto* rel = app.add_subcommand("relative", "relative construction for an exact functor");
  rel->add_option("--functor", rel_functor, "functor file or builtin name")->required();
  rel->add_option("-n,--n", rel_n);
  rel->add_flag("--compare", rel_compare, "verify the comparison theorem");

  // ingest
  std::string ing_path, ing_kind = "category";
  auto* ing = app.add_subcommand("ingest", "parse, validate and round-trip a file");
  ing->add_option("path", ing_path)->required();
  ing->add_option("--kind", ing_kind, "category | simpset | presheaf | functor");

  try {
    app.parse(argc, argv);
    g.budget_explicit = budget_opt->count() > 0;
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    Budget budget(g.budget);
    std::vector<CheckReport> reports;

    if (*suite) {
      if (suite_name == "all") {
        for (const auto& s : suite_names()) {
          auto rs = run_suite(s, params_of(g, suite_examples));
          reports.insert(reports.end(), rs.begin(), rs.end());
        }
      } else {
        reports = run_suite(suite_name, params_of(g, suite_examples));
      }
      return finish(g, std::move(reports));
    }

    if (*sd) {
      Sset x = sd_simplex >= 0 ? standard_simplex(sd_simplex, 2 * sd_dim + 1) : load_simpset(sd_in);
      auto y = sd_simplex >= 0 ? ordinal_sd(sd_simplex, sd_dim) : ordinal_sd_of(x, sd_dim);
      auto r = detail::base_report("sd", "subdivide",
                                   sd_simplex >= 0 ? "Delta[" + std::to_string(sd_simplex) + "]"
                                                   : sd_in);
      for (int m = 0; m <= y->dim; ++m) r.counts["level" + std::to_string(m)] = y->size(m);
      if (!sd_out.empty()) {
        std::ofstream out(sd_out);
        out << write_simpset(*y);
      }
      return finish(g, {r});
    }

    if (*t1) {
      auto x = load_simpset(t1_in);
      auto t = tau1(x, budget);
      auto r = detail::base_report("tau1", "fundamental-category", t1_in);
      r.counts["objects"] = t.cat->n_obj;
      r.counts["morphisms"] = t.cat->n_mor();
      if (!t1_out.empty()) {
        std::ofstream out(t1_out);
        out << write_category(*t.cat);
      }
      return finish(g, {r});
    }

    if (*ts) {
      auto x = load_simpset(ts_in);
      auto rep = is_two_segal(x, budget);
      auto sg = is_segal(x, budget);
      auto r = detail::base_report("two-segal", "decision", ts_in);
      r.counts["segal"] = sg.ok ? 1 : 0;
      if (!rep.ok)
        detail::fail_with(r, "(" + std::to_string(rep.n) + "," + std::to_string(rep.i) + "," +
                                 std::to_string(rep.j) + "): " + rep.witness);
      return finish(g, {r});
    }

    if (*sdotc) {
      auto r = detail::base_report("sdot", "S_" + std::to_string(sdot_n),
                                   sdot_in.empty() ? sdot_example : sdot_in);
      if (!sdot_in.empty()) {
        std::ifstream in(sdot_in);
        if (!in) throw ValidationError({"io", "cannot open " + sdot_in});
        auto y = validated(read_presheaf(in));
        auto vals = sdot_map_set(y, sdot_n, budget);
        r.counts["elements"] = static_cast<std::int64_t>(vals.size());
        if (sdot_kan) {
          auto kv = sdot_kan_set(y, sdot_n, budget);
          r.counts["limit_elements"] = static_cast<std::int64_t>(kv.size());
          if (kv.size() != vals.size()) detail::fail_with(r, "limit route disagrees");
        }
      } else {
        auto s = example_by_name(sdot_example, budget);
        NerveOptions opt;
        opt.matdim = std::min(sdot_n, 3);
        opt.trunc = sdot_n;
        auto y = exact_nerve(s, opt, budget);
        auto sg = sdot_gpd(y, sdot_n, budget);
        r.counts["objects"] = sg->size();
        r.counts["pi0"] = pi0(*sg, budget).count();
      }
      return finish(g, {r});
    }

    if (*asds) {
      auto r = detail::base_report("check-asds", "asds", asds_in.empty() ? asds_example : asds_in);
      if (!asds_in.empty()) {
        std::ifstream in(asds_in);
        if (!in) throw ValidationError({"io", "cannot open " + asds_in});
        auto y = validated(read_presheaf(in));
        auto rep = check_asds_set(y, budget);
        for (const auto* c : {&rep.double_segal, &rep.stable, &rep.augmented})
          if (!c->ok) detail::fail_with(r, c->cond + ": " + c->witness);
      } else {
        auto s = example_by_name(asds_example, budget);
        NerveOptions opt;
        opt.matdim = g.trunc < 0 ? 3 : g.trunc;
        opt.trunc = opt.matdim;
        auto y = exact_nerve(s, opt, budget);
        GpdCondOptions copt;
        copt.strict_pullbacks_only = g.strict_pullbacks_only;
        auto rep = check_asds_gpd(y, copt, budget);
        for (const auto* c : {&rep.double_segal, &rep.stable, &rep.augmented}) {
          for (const auto& route : c->routes) r.routes.push_back(c->cond + " " + route);
          if (!c->ok) detail::fail_with(r, c->cond + ": " + c->witness);
        }
      }
      return finish(g, {r});
    }

    if (*nervec) {
      auto s = example_by_name(nerve_example, budget);
      require_ok(validate_protoexact(*s));
      NerveOptions opt;
      opt.matdim = g.trunc < 0 ? 3 : g.trunc;
      opt.trunc = opt.matdim;
      auto y = exact_nerve(s, opt, budget);
      auto r = detail::base_report("nerve", "levels", nerve_example);
      for (int lid = 0; lid < y->sh.n_levels(); ++lid)
        if (y->materialized(lid)) {
          r.counts[y->sh.levels[lid].str()] = y->level(lid)->size();
          r.counts["pi0" + y->sh.levels[lid].str()] = pi0(*y->level(lid), budget).count();
        }
      return finish(g, {r});
    }

    if (*sec || *swc) {
      const bool wald = swc->parsed();
      auto s = example_by_name(wald ? sw_example : se_example, budget);
      const int n = wald ? sw_n : se_n;
      auto level = wald ? sdot_wald(s, n, sw_base < 0 ? s->zero_objs.at(0) : sw_base)
                        : sdot_e(s, n);
      auto r = detail::base_report(wald ? "sdot-wald" : "sdot-e", "S_" + std::to_string(n),
                                   s->name);
      r.counts["objects"] = level->size();
      auto pi = pi0(*level, budget);
      r.counts["pi0"] = pi.count();
      std::map<std::size_t, int> aut_profile;
      for (int rep2 : pi.reps) ++aut_profile[hom_count(*level, rep2, rep2)];
      for (auto [order, mult] : aut_profile)
        r.counts["aut_order_" + std::to_string(order)] = mult;
      return finish(g, {r});
    }

    if (*cmp) {
      auto s = example_by_name(cmp_example, budget);
      auto r = detail::base_report("compare", cmp_wald ? "fixed-basepoint" : "generalized",
                                   cmp_example + " n=" + std::to_string(cmp_n));
      if (cmp_wald) {
        auto rep = compare_wald_e(s, cmp_n, s->zero_objs.at(0), budget);
        if (!rep.ok) detail::fail_with(r, rep.witness);
      } else {
        auto rep = compare_e_generalized(s, cmp_n, budget).report;
        r.counts["objects"] = static_cast<std::int64_t>(rep.objects_lhs);
        r.counts["pi0"] = static_cast<std::int64_t>(rep.pi0);
        if (!rep.ok) detail::fail_with(r, rep.witness);
      }
      return finish(g, {r});
    }

    if (*rel) {
      ExactFunctor f = [&] {
        std::ifstream in(rel_functor);
        if (in && rel_functor.find("->") == std::string::npos &&
            rel_functor.rfind("id:", 0) != 0) {
          return functor_from_file(read_functor_file(in), budget);
        }
        return functor_by_name(rel_functor, budget);
      }();
      auto r = detail::base_report("relative", "S_" + std::to_string(rel_n), f.name);
      auto rs = relative_sdot(f, rel_n, budget);
      r.counts["objects"] = rs.gpd->size();
      r.counts["pi0"] = pi0(*rs.gpd, budget).count();
      r.routes.push_back(std::string("path leg ") +
                         (rs.d0_justification.ok ? "isofibration" : "NOT an isofibration"));
      if (rel_compare) {
        auto rep = compare_relative(f, rel_n, budget);
        if (!rep.ok) detail::fail_with(r, rep.witness);
      }
      return finish(g, {r});
    }

    if (*ing) {
      std::ifstream in(ing_path);
      if (!in) throw ValidationError({"io", "cannot open " + ing_path});
      auto r = detail::base_report("ingest", ing_kind, ing_path);
      if (ing_kind == "category") {
        auto cf = read_category(in);
        require_ok(validate_category(cf.cat));
        r.counts["objects"] = cf.cat.n_obj;
        r.counts["morphisms"] = cf.cat.n_mor();
        if (cf.has_marks) {
          auto s = pex_from_file(cf, ing_path, budget);
          r.counts["zeros"] = static_cast<std::int64_t>(s->zero_objs.size());
          r.witnesses.push_back("proto-exact structure validated");
        }
        // round trip
        const auto bytes = write_category(cf.cat, cf.has_marks ? &cf.monos : nullptr,
                                          cf.has_marks ? &cf.epis : nullptr,
                                          cf.has_marks ? &cf.zeros : nullptr);
        std::istringstream back(bytes);
        auto cf2 = read_category(back);
        if (write_category(cf2.cat, cf2.has_marks ? &cf2.monos : nullptr,
                           cf2.has_marks ? &cf2.epis : nullptr,
                           cf2.has_marks ? &cf2.zeros : nullptr) != bytes)
          detail::fail_with(r, "round trip is not byte-identical");
      } else if (ing_kind == "simpset") {
        auto x = read_simpset(in);
        require_ok(validate_simpset(x));
        require_ok(check_ez_unique(x));
        const auto bytes = write_simpset(x);
        std::istringstream back(bytes);
        if (write_simpset(read_simpset(back)) != bytes)
          detail::fail_with(r, "round trip is not byte-identical");
      } else if (ing_kind == "presheaf") {
        auto y = read_presheaf(in);
        require_ok(validate_set_presheaf(y));
        const auto bytes = write_presheaf(y);
        std::istringstream back(bytes);
        if (write_presheaf(read_presheaf(back)) != bytes)
          detail::fail_with(r, "round trip is not byte-identical");
      } else if (ing_kind == "functor") {
        auto f = functor_from_file(read_functor_file(in), budget);
        r.counts["source_objects"] = f.src->host->n_obj;
        r.counts["target_objects"] = f.tgt->host->n_obj;
      } else {
        throw ValidationError({"unknown-kind", ing_kind});
      }
      return finish(g, {r});
    }
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return 2;
  } catch (const BudgetExceeded& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
