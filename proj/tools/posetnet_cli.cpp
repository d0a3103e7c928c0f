// Command line front end: load fixtures, run the verification batteries,
// emit JSON reports. Exit codes: 0 all assertions pass, 1 failures,
// 2 usage error, 3 input error.

#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "posetnet/acceptance.hpp"
#include "posetnet/fixtures.hpp"
#include "posetnet/graded_algebra.hpp"
#include "posetnet/homotopy.hpp"
#include "posetnet/json_io.hpp"
#include "posetnet/net_algebras.hpp"
#include "posetnet/net_hilbert.hpp"
#include "posetnet/paths.hpp"
#include "posetnet/poset.hpp"

namespace pn = posetnet;

namespace {

struct Output {
  bool json = false;
  bool quiet = false;
};

int emit(const Output& out, pn::RunReport& run,
         std::chrono::steady_clock::time_point started) {
  run.elapsed_ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                       std::chrono::steady_clock::now() - started)
                       .count();
  if (out.json) {
    if (!out.quiet) std::cout << pn::run_report_to_json(run).dump(2) << "\n";
  } else if (!out.quiet) {
    if (!run.payload.is_null()) std::cout << run.payload.dump(2) << "\n";
    for (const auto& a : run.report.assertions) {
      const char* tag = a.status == pn::Assertion::Status::pass   ? "ok  "
                        : a.status == pn::Assertion::Status::fail ? "FAIL"
                                                                  : "skip";
      std::cout << tag << " " << a.name;
      if (!a.witness.empty()) std::cout << "  [" << a.witness << "]";
      std::cout << "\n";
    }
    if (!run.report.assertions.empty())
      std::cout << run.report.passes() << " passed, " << run.report.failures() << " failed\n";
  }
  return run.ok() ? 0 : 1;
}

pn::Poset require_poset(pn::RunReport& run, const std::string& path) {
  run.inputs[path] = pn::file_digest(path);
  return pn::load_poset(path);
}

pn::TruncatedNet require_net(pn::RunReport& run, const std::string& path) {
  run.inputs[path] = pn::file_digest(path);
  return pn::load_net(path);
}

std::vector<pn::PathClass> default_degrees(const pn::TruncatedNet& net, int base) {
  std::vector<pn::PathClass> degrees{pn::trivial_class(base)};
  pn::GroupPresentation pres =
      pn::loop_group_presentation(net.poset(), net.poset().label(base));
  for (std::size_t g = 0; g < pres.generators.size(); ++g) {
    pn::PathSeq loop = pn::detail::generator_loop(net.poset(), pres, g);
    pn::PathClass cls = pn::make_class(net.ctx(), loop);
    degrees.push_back(cls);
    degrees.push_back(pn::inverse_class(net.ctx(), cls));
  }
  return degrees;
}

void write_fixture_files(const std::string& dir) {
  auto dump = [&](const std::string& name, const pn::Json& j) {
    std::ofstream out(dir + "/" + name);
    if (!out) pn::fail(pn::ErrorCode::input_error, "cannot write " + dir + "/" + name);
    out << j.dump(2) << "\n";
  };
  dump("chain3.json", pn::poset_to_json(pn::fixtures::chain3()));
  dump("antichain2.json", pn::poset_to_json(pn::fixtures::antichain2()));
  dump("crown2.json", pn::poset_to_json(pn::fixtures::crown2()));
  dump("crown3.json", pn::poset_to_json(pn::fixtures::crown3()));
  dump("crown2_top.json", pn::poset_to_json(pn::fixtures::crown2_top()));
  dump("diamond_chain.json", pn::poset_to_json(pn::fixtures::diamond_chain()));
  dump("tree4.json", pn::poset_to_json(pn::fixtures::tree4()));
  dump("net_chain3.json", pn::net_to_json(pn::fixtures::net_chain3()));
  dump("net_crown2.json", pn::net_to_json(pn::fixtures::net_crown2()));
  dump("net_crown2_unit.json", pn::net_to_json(pn::fixtures::net_crown2_unit()));
  dump("net_cone_unit.json", pn::net_to_json(pn::fixtures::net_cone_unit()));
  pn::Json m;
  m["phi"] = {{"a1", "a1"}, {"a2", "a2"}, {"b1", "b1"}, {"b2", "b2"}};
  dump("morphism_crown2_into_cone.json", m);
  pn::Json e;
  e["base"] = "a1";
  e["parts"] = {{"d(a1,b2)*u(b2,a2)*d(a2,b1)*u(b1,a1)",
                 {{{"word", "d(a1,b2)*u(b2,a2)*d(a2,b1)*u(b1,a1)"}, {"coeff", "1"}}}}};
  dump("elem_crown2_generator.json", e);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact computations on nets of graded operator algebras over finite posets"};
  app.require_subcommand(1);
  app.fallthrough();  // global flags stay valid after a subcommand
  Output out;
  app.add_flag("--json", out.json, "emit a single JSON run report");
  app.add_flag("--quiet", out.quiet, "suppress output; exit code only");

  std::string poset_file, net_file, src_file, dst_file, map_file, elem_file, elem2_file;
  std::string path_text, path2_text, base, out_dir = "fixtures";
  int budget = 100000, max_len = 3, bound = 20;
  double tol = 1e-9;

  auto* poset_cmd = app.add_subcommand("poset", "order queries on a poset file");
  auto* poset_info = poset_cmd->add_subcommand("info", "directedness, connectivity, blocks");
  poset_info->add_option("--poset", poset_file, "poset JSON file")->required();
  poset_info->add_option("--bound", bound, "decomposition size bound");

  auto* paths_cmd = app.add_subcommand("paths", "path rewriting");
  auto* paths_reduce = paths_cmd->add_subcommand("reduce", "canonical representative");
  paths_reduce->add_option("--poset", poset_file)->required();
  paths_reduce->add_option("--path", path_text)->required();
  auto* paths_equiv = paths_cmd->add_subcommand("equivalent", "decide equivalence");
  paths_equiv->add_option("--poset", poset_file)->required();
  paths_equiv->add_option("--path", path_text)->required();
  paths_equiv->add_option("--path2", path2_text)->required();
  paths_equiv->add_option("--budget", budget);
  auto* paths_conf = paths_cmd->add_subcommand("confluence", "critical pair certification");
  paths_conf->add_option("--poset", poset_file)->required();
  paths_conf->add_option("--max-len", max_len);

  auto* pi1_cmd = app.add_subcommand("pi1", "loop group presentations");
  auto* pi1_present = pi1_cmd->add_subcommand("present", "spanning tree presentation");
  pi1_present->add_option("--poset", poset_file)->required();
  pi1_present->add_option("--base", base)->required();
  auto* pi1_abel = pi1_cmd->add_subcommand("abelianize", "rank and torsion");
  pi1_abel->add_option("--poset", poset_file)->required();
  pi1_abel->add_option("--base", base);

  auto* net_cmd = app.add_subcommand("net", "truncated nets of spaces");
  auto* net_verify = net_cmd->add_subcommand("verify", "step operator laws");
  net_verify->add_option("--net", net_file)->required();

  auto* alg_cmd = app.add_subcommand("algebra", "graded local algebras");
  auto* alg_mul = alg_cmd->add_subcommand("mul", "product of two elements");
  alg_mul->add_option("--net", net_file)->required();
  alg_mul->add_option("--base", base)->required();
  alg_mul->add_option("--elem", elem_file)->required();
  alg_mul->add_option("--elem2", elem2_file)->required();
  auto* alg_adj = alg_cmd->add_subcommand("adj", "adjoint");
  alg_adj->add_option("--net", net_file)->required();
  alg_adj->add_option("--base", base)->required();
  alg_adj->add_option("--elem", elem_file)->required();
  auto* alg_expect = alg_cmd->add_subcommand("expect", "conditional expectation");
  alg_expect->add_option("--net", net_file)->required();
  alg_expect->add_option("--base", base)->required();
  alg_expect->add_option("--elem", elem_file)->required();
  auto* alg_norm = alg_cmd->add_subcommand("norm", "norm estimate");
  alg_norm->add_option("--net", net_file)->required();
  alg_norm->add_option("--elem", elem_file)->required();
  alg_norm->add_option("--tol", tol);
  auto* alg_grading = alg_cmd->add_subcommand("grading", "grading axioms sweep");
  alg_grading->add_option("--net", net_file)->required();
  alg_grading->add_option("--base", base)->required();

  auto* corona_cmd = app.add_subcommand("corona", "quasi-local layer");
  auto* corona_build_cmd = corona_cmd->add_subcommand("build", "maximal directed blocks");
  corona_build_cmd->add_option("--net", net_file)->required();
  corona_build_cmd->add_option("--bound", bound);

  auto* morph_cmd = app.add_subcommand("morphism", "morphisms of nets");
  auto* morph_verify = morph_cmd->add_subcommand("verify", "validate and intertwine");
  morph_verify->add_option("--src", src_file)->required();
  morph_verify->add_option("--dst", dst_file)->required();
  morph_verify->add_option("--map", map_file)->required();

  auto* example_cmd = app.add_subcommand("example", "bundled closing scenario");
  example_cmd->add_subcommand("run", "run it");

  app.add_subcommand("suite", "full acceptance battery on bundled fixtures");

  auto* fixtures_cmd = app.add_subcommand("fixtures", "write bundled fixture files");
  fixtures_cmd->add_option("--out", out_dir, "target directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help
    app.exit(e);
    return 2;
  }

  auto started = std::chrono::steady_clock::now();
  pn::RunReport run;
  try {
    if (poset_info->parsed()) {
      run.command = "poset info";
      pn::Poset p = require_poset(run, poset_file);
      run.payload["elements"] = p.labels();
      run.payload["upward_directed"] = p.is_upward_directed();
      run.payload["path_connected"] = p.is_path_connected();
      pn::Json edges = pn::Json::array();
      for (auto& [a, b] : p.comparability_edges()) edges.push_back({a, b});
      run.payload["comparability_edges"] = std::move(edges);
      run.payload["maximal_directed_blocks"] = pn::maximal_directed_subsets(p, bound).blocks;
    } else if (paths_reduce->parsed()) {
      run.command = "paths reduce";
      pn::Poset p = require_poset(run, poset_file);
      pn::PathContext ctx(p);
      pn::PathSeq seq = pn::parse_path(p, path_text);
      run.payload["input"] = path_text;
      run.payload["reduced"] = pn::print_path(p, ctx.canonical(seq));
      run.payload["strategy"] = ctx.strategy() == pn::CanonStrategy::CertifiedGreedy
                                    ? "certified"
                                    : ctx.strategy() == pn::CanonStrategy::DirectedEndpoint
                                          ? "directed"
                                          : "bounded";
    } else if (paths_equiv->parsed()) {
      run.command = "paths equivalent";
      pn::Poset p = require_poset(run, poset_file);
      pn::PathContext ctx(p);
      pn::EquivalenceDecider decider(ctx);
      pn::EquivResult r = decider.decide(pn::parse_path(p, path_text),
                                         pn::parse_path(p, path2_text), budget);
      run.payload["verdict"] = pn::to_string(r);
    } else if (paths_conf->parsed()) {
      run.command = "paths confluence";
      pn::Poset p = require_poset(run, poset_file);
      pn::ConfluenceReport rep = pn::check_confluence(p, max_len);
      run.payload["certified"] = rep.certified;
      run.payload["terminating"] = rep.terminating;
      run.payload["peaks_checked"] = rep.peaks_checked;
      pn::Json pairs = pn::Json::array();
      for (const auto& cp : rep.critical_pairs) {
        if (cp.joinable || pairs.size() >= 10) continue;
        pairs.push_back({{"peak", pn::print_path(p, cp.peak)},
                         {"left", pn::print_path(p, cp.left_nf)},
                         {"right", pn::print_path(p, cp.right_nf)},
                         {"joinable", cp.joinable}});
      }
      run.payload["non_joinable_pairs"] = std::move(pairs);
    } else if (pi1_present->parsed() || pi1_abel->parsed()) {
      run.command = pi1_present->parsed() ? "pi1 present" : "pi1 abelianize";
      pn::Poset p = require_poset(run, poset_file);
      std::string at = base.empty() ? p.label(0) : base;
      pn::GroupPresentation g = pn::loop_group_presentation(p, at);
      pn::AbelianInvariants inv = pn::abelianization(g);
      pn::Json gens = pn::Json::array();
      for (auto& [u, v] : g.generators) gens.push_back({u, v});
      run.payload["basepoint"] = g.basepoint;
      run.payload["generators"] = std::move(gens);
      run.payload["relators"] = g.relators;
      run.payload["rank"] = inv.rank;
      run.payload["torsion"] = inv.torsion;
    } else if (net_verify->parsed()) {
      run.command = "net verify";
      pn::TruncatedNet net = require_net(run, net_file);
      run.report.merge(pn::verify_chi_laws(net));
      pn::AlgebraNet A(net);
      run.report.merge(pn::verify_isotony(A));
    } else if (alg_mul->parsed() || alg_adj->parsed() || alg_expect->parsed()) {
      pn::TruncatedNet net = require_net(run, net_file);
      int at = net.poset().id_of(base);
      pn::GradedElement x = pn::load_element(net, elem_file);
      run.inputs[elem_file] = pn::file_digest(elem_file);
      if (x.base() != at)
        pn::fail(pn::ErrorCode::basepoint_mismatch, "element is not based at " + base);
      if (alg_mul->parsed()) {
        run.command = "algebra mul";
        pn::GradedElement y = pn::load_element(net, elem2_file);
        run.inputs[elem2_file] = pn::file_digest(elem2_file);
        run.payload = pn::element_to_json(net, pn::multiply(net, x, y));
      } else if (alg_adj->parsed()) {
        run.command = "algebra adj";
        run.payload = pn::element_to_json(net, pn::adjoint(net, x));
      } else {
        run.command = "algebra expect";
        run.payload = pn::element_to_json(net, pn::conditional_expectation(x));
      }
    } else if (alg_norm->parsed()) {
      run.command = "algebra norm";
      pn::TruncatedNet net = require_net(run, net_file);
      pn::GradedElement x = pn::load_element(net, elem_file);
      run.inputs[elem_file] = pn::file_digest(elem_file);
      run.payload["norm"] = pn::norm_estimate(net, x, tol);
      run.payload["tol"] = tol;
    } else if (alg_grading->parsed()) {
      run.command = "algebra grading";
      pn::TruncatedNet net = require_net(run, net_file);
      int at = net.poset().id_of(base);
      run.report.merge(pn::grading_report(net, at, default_degrees(net, at)));
    } else if (corona_build_cmd->parsed()) {
      run.command = "corona build";
      pn::TruncatedNet net = require_net(run, net_file);
      pn::AlgebraNet A(net);
      pn::Corona corona = pn::build_corona(A, bound);
      run.payload["blocks"] = corona.decomposition().blocks;
    } else if (morph_verify->parsed()) {
      run.command = "morphism verify";
      pn::TruncatedNet src = require_net(run, src_file);
      pn::TruncatedNet dst = require_net(run, dst_file);
      run.inputs[map_file] = pn::file_digest(map_file);
      pn::NetMorphism m = pn::load_morphism(src, dst, map_file);
      pn::Report hm = pn::validate_hilbert_morphism(src, dst, m);
      run.report.merge(hm);
      if (hm.all_passed()) {
        run.report.merge(pn::verify_algebra_morphism(src, dst, m));
        pn::InducedGroupMap g = pn::induced_group_map(src, dst, m, 0);
        run.payload["group_map"] = {
            {"source", {{"rank", g.source.rank}, {"torsion", g.source.torsion}}},
            {"target", {{"rank", g.target.rank}, {"torsion", g.target.torsion}}},
            {"injective", g.injectivity == pn::InducedGroupMap::Injectivity::yes  ? "yes"
                          : g.injectivity == pn::InducedGroupMap::Injectivity::no ? "no"
                                                                                  : "undecided"}};
      }
    } else if (example_cmd->parsed()) {
      run.command = "example run";
      run.report.merge(pn::example_scenario());
    } else if (app.got_subcommand("suite")) {
      run.command = "suite";
      pn::acceptance::AcceptanceResult res = pn::acceptance::run_acceptance();
      for (const auto& rep : res.criteria) {
        if (!out.quiet && !out.json)
          std::printf("[%s] %s (%d checks, %d failures)\n", rep.all_passed() ? "PASS" : "FAIL",
                      rep.title.c_str(), rep.passes(), rep.failures());
        run.report.merge(rep);
      }
    } else if (fixtures_cmd->parsed()) {
      run.command = "fixtures";
      write_fixture_files(out_dir);
      run.payload["written_to"] = out_dir;
    }
  } catch (const pn::Error& e) {
    if (!out.quiet) std::cerr << "error: " << e.what() << "\n";
    return e.code() == pn::ErrorCode::usage_error ? 2 : 3;
  } catch (const std::exception& e) {
    if (!out.quiet) std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
  return emit(out, run, started);
}
