#include "loclab/algorithms.hpp"
#include "loclab/corpus.hpp"
#include "loclab/io.hpp"
#include "loclab/lift.hpp"
#include "loclab/suites.hpp"

#include <CLI11.hpp>

#include <cstdint>
#include <functional>
#include <iostream>
#include <string>
#include <vector>

using namespace loclab;
using io::json;

namespace {

struct Globals {
  bool as_json = false;
  std::string dot_path;
  std::uint64_t seed = 1;
};

Globals globals;

void emit_json(const json& doc) { std::cout << doc.dump(2) << "\n"; }

void emit_dot(const std::string& dot) {
  if (!globals.dot_path.empty()) io::write_text_file(globals.dot_path, dot);
}

/// Verdict output: the JSON document with --json, one status line otherwise.
int emit_verdict(bool ok, const json& doc, const std::string& detail = {}) {
  if (globals.as_json)
    emit_json(doc);
  else
    std::cout << (ok ? "ok" : "violation") << (detail.empty() ? "" : ": " + detail) << "\n";
  return ok ? 0 : 1;
}

std::string join(const std::vector<std::string>& parts, std::size_t limit = 5) {
  std::string s;
  for (std::size_t i = 0; i < parts.size() && i < limit; ++i) s += (i ? "; " : "") + parts[i];
  if (parts.size() > limit) s += "; ...";
  return s;
}

template <class T>
std::string join_ids(const std::vector<T>& ids) {
  std::string s;
  for (std::size_t i = 0; i < ids.size(); ++i) s += (i ? "," : "") + std::to_string(ids[i]);
  return s;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact experiments on locality models: LCLs, outcomes, matching LPs, gadgets and the lift"};
  app.require_subcommand(1);
  app.fallthrough();
  app.add_flag("--json", globals.as_json, "Print machine-readable JSON results");
  app.add_option("--dot", globals.dot_path, "Also write a DOT rendering to this path");
  app.add_option("--seed", globals.seed, "Seed for corpus generation and sampling");

  std::function<int()> action;
  auto verb = [&](CLI::App* sub, std::function<int()> f) { sub->callback([&action, f] { action = f; }); };

  // lcl ---------------------------------------------------------------------
  auto* lcl = app.add_subcommand("lcl", "Locally checkable labeling problems");
  lcl->require_subcommand(1);
  {
    auto* v = lcl->add_subcommand("verify", "Check an output labeling against an LCL problem");
    static std::string problem, graph, output;
    v->add_option("--problem", problem)->required();
    v->add_option("--graph", graph, "Labeled input graph")->required();
    v->add_option("--output", output, "Output labeling")->required();
    verb(v, [] {
      auto p = io::lcl_problem_from_json(io::read_json_file(problem));
      auto g = io::labeled_graph_from_json(io::read_json_file(graph));
      auto out = io::labeling_from_json(g.graph(), io::read_json_file(output));
      auto verdict = verify_lcl_solution(p, g, out);
      return emit_verdict(verdict.ok(), io::to_json(verdict), "nodes " + join_ids(verdict.violators));
    });
  }

  // sim ---------------------------------------------------------------------
  auto* sim = app.add_subcommand("sim", "LOCAL, randomized LOCAL and SLOCAL simulators");
  sim->require_subcommand(1);
  {
    auto* v = sim->add_subcommand("local", "Run a built-in LOCAL algorithm");
    static std::string graph, algorithm = "view-census";
    static std::size_t radius = 1;
    v->add_option("--graph", graph)->required();
    v->add_option("--algorithm", algorithm)->check(CLI::IsMember(algorithms::local_names()));
    v->add_option("-T,--radius", radius);
    verb(v, [] {
      auto g = io::labeled_graph_from_json(io::read_json_file(graph));
      auto out = run_local(algorithms::local_by_name(algorithm, radius), g);
      emit_json(io::labeling_to_json(g.graph(), out));
      emit_dot(io::to_dot(LabeledGraph(g.graph(), out)));
      return 0;
    });
  }
  {
    auto* v = sim->add_subcommand("rand-local", "Run a built-in randomized LOCAL algorithm");
    static std::string graph, algorithm = "seed-census";
    static std::size_t radius = 1, seeds = 2, samples = 1000;
    static bool exact = false;
    v->add_option("--graph", graph)->required();
    v->add_option("--algorithm", algorithm)->check(CLI::IsMember(algorithms::randomized_names()));
    v->add_option("-T,--radius", radius);
    v->add_option("--seeds", seeds, "Size of the per-node seed alphabet");
    v->add_flag("--exact", exact, "Enumerate every seed assignment");
    v->add_option("--samples", samples, "Samples when not exact");
    verb(v, [] {
      auto g = io::labeled_graph_from_json(io::read_json_file(graph));
      auto a = algorithms::randomized_by_name(algorithm, radius, seeds);
      corpus::Rng rng(globals.seed);
      auto o = exact ? run_rand_local(a, g) : sample_rand_local(a, g, samples, rng);
      emit_json(io::to_json(o));
      return 0;
    });
  }
  {
    auto* v = sim->add_subcommand("slocal", "Run the greedy SLOCAL matcher in a processing order");
    static std::string graph, algorithm = "greedy-matching";
    static std::vector<NodeId> order;
    v->add_option("--graph", graph)->required();
    v->add_option("--order", order, "Node order, comma separated")->delimiter(',');
    v->add_option("--algorithm", algorithm)->check(CLI::IsMember({"greedy-matching", "greedy-units"}));
    verb(v, [] {
      auto g = io::labeled_graph_from_json(io::read_json_file(graph));
      if (order.empty() && g.graph().node_count() > 0) {
        order.resize(g.graph().node_count());
        std::iota(order.begin(), order.end(), 0);
      }
      if (algorithm == "greedy-matching") {
        emit_json(io::to_json(run_greedy_matching(g.graph(), order)));
      } else {
        auto run = run_slocal(greedy_unit_algorithm(), g, order);
        emit_json(json{{"labels", io::labeling_to_json(g.graph(), run.labeling)}, {"locality", run.locality}});
      }
      return 0;
    });
  }

  // ns ----------------------------------------------------------------------
  auto* ns = app.add_subcommand("ns", "Non-signaling certification");
  ns->require_subcommand(1);
  {
    auto* v = ns->add_subcommand("verify", "Compare two outcomes on anchor sets with isomorphic views");
    v->set_help_flag("--help", "Print this help message and exit");
    static std::string og, oh;
    static std::vector<NodeId> ag, ah;
    static std::size_t radius = 0, cap = 100000;
    v->add_option("--g", og, "Outcome on the first graph")->required();
    v->add_option("--h", oh, "Outcome on the second graph")->required();
    v->add_option("--ag", ag, "Anchors in the first graph")->required()->delimiter(',');
    v->add_option("--ah", ah, "Anchors in the second graph")->required()->delimiter(',');
    v->add_option("-T,--radius", radius)->required();
    v->add_option("--max-isomorphisms", cap);
    verb(v, [] {
      auto a = io::outcome_from_json(io::read_json_file(og));
      auto b = io::outcome_from_json(io::read_json_file(oh));
      auto verdict = verify_non_signaling(a, b, ag, ah, radius, cap);
      if (verdict.status == NsStatus::precondition_unmet) {
        std::cerr << "error: " << verdict.detail << "\n";
        if (globals.as_json) emit_json(io::to_json(verdict));
        return 2;
      }
      return emit_verdict(verdict.ok(), io::to_json(verdict), verdict.detail);
    });
  }

  // lp ----------------------------------------------------------------------
  auto* lp = app.add_subcommand("lp", "Distributed linear programs");
  lp->require_subcommand(1);
  static std::string lp_path, point_path;
  auto lp_input = [](CLI::App* v) { v->add_option("--lp", lp_path)->required(); };
  {
    auto* v = lp->add_subcommand("matching", "Build the fractional matching LP of a graph");
    static std::string graph;
    v->add_option("--graph", graph)->required();
    verb(v, [] {
      emit_json(io::to_json(build_fractional_matching_lp(io::graph_from_json(io::read_json_file(graph)))));
      return 0;
    });
  }
  {
    auto* v = lp->add_subcommand("opt", "Exact optimum");
    lp_input(v);
    verb(v, [] {
      auto p = io::lp_from_json(io::read_json_file(lp_path));
      emit_json(io::to_json(p, exact_opt(p)));
      return 0;
    });
  }
  {
    auto* v = lp->add_subcommand("check", "Feasibility of a point");
    lp_input(v);
    v->add_option("--point", point_path)->required();
    verb(v, [] {
      auto p = io::lp_from_json(io::read_json_file(lp_path));
      auto verdict = check_feasible(p, io::point_from_json(io::read_json_file(point_path)));
      return emit_verdict(verdict.ok(), io::to_json(verdict), "rows " + join_ids(verdict.violated_rows));
    });
  }
  {
    auto* v = lp->add_subcommand("ratio", "Exact approximation ratio of a point");
    lp_input(v);
    v->add_option("--point", point_path)->required();
    verb(v, [] {
      auto p = io::lp_from_json(io::read_json_file(lp_path));
      auto x = io::point_from_json(io::read_json_file(point_path));
      auto r = approximation_ratio(p, x);
      if (globals.as_json)
        emit_json(json{{"ratio", io::to_json(r)}, {"objective", io::to_json(objective_value(p, x))}});
      else
        std::cout << r.str() << "\n";
      return r.kind == Ratio::Kind::infeasible ? 1 : 0;
    });
  }
  {
    auto* v = lp->add_subcommand("dequantize", "Coordinatewise expectation of an outcome");
    static std::string outcome;
    lp_input(v);
    v->add_option("--outcome", outcome)->required();
    verb(v, [] {
      auto p = io::lp_from_json(io::read_json_file(lp_path));
      emit_json(io::to_json(dequantize(p, io::outcome_from_json(io::read_json_file(outcome)))));
      return 0;
    });
  }

  // lin ---------------------------------------------------------------------
  auto* lin = app.add_subcommand("lin", "Linearizable problems on incidence graphs");
  lin->require_subcommand(1);
  static std::string incidence, problem_path, labels_path;
  auto lin_problem = [] {
    return problem_path.empty() ? matching_problem() : io::linearizable_from_json(io::read_json_file(problem_path));
  };
  {
    auto* v = lin->add_subcommand("incidence", "Incidence graph of a plain graph");
    static std::string graph;
    v->add_option("--graph", graph)->required();
    verb(v, [] {
      auto ig = incidence_graph(io::graph_from_json(io::read_json_file(graph)));
      emit_json(io::to_json(ig));
      emit_dot(io::to_dot(ig));
      return 0;
    });
  }
  {
    auto* v = lin->add_subcommand("verify", "Check an edge labeling");
    v->add_option("--incidence", incidence)->required();
    v->add_option("--labels", labels_path)->required();
    v->add_option("--problem", problem_path, "Defaults to maximal matching");
    verb(v, [lin_problem] {
      auto ig = io::incidence_from_json(io::read_json_file(incidence));
      auto verdict = verify_linearizable(lin_problem(), ig, io::edge_labels_from_json(io::read_json_file(labels_path)));
      return emit_verdict(verdict.ok(), io::to_json(verdict),
                          "whites " + join_ids(verdict.white_violations) + " blacks " + join_ids(verdict.black_violations));
    });
  }
  {
    auto* v = lin->add_subcommand("encode", "Encode a maximal matching given by black nodes");
    static std::vector<NodeId> matched;
    v->add_option("--incidence", incidence)->required();
    v->add_option("--matched", matched, "Matched black nodes, comma separated")->delimiter(',');
    verb(v, [] {
      auto ig = io::incidence_from_json(io::read_json_file(incidence));
      auto lab = encode_matching(ig, matched);
      emit_json(json{{"edge_labels", lab}});
      emit_dot(io::to_dot(ig, lab));
      return 0;
    });
  }
  {
    auto* v = lin->add_subcommand("decode", "Decode a labeling into matched black nodes");
    v->add_option("--incidence", incidence)->required();
    v->add_option("--labels", labels_path)->required();
    verb(v, [] {
      auto ig = io::incidence_from_json(io::read_json_file(incidence));
      auto lab = io::edge_labels_from_json(io::read_json_file(labels_path));
      try {
        emit_json(json{{"matched", decode_to_matching(ig, lab)}});
      } catch (const contract_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
      }
      return 0;
    });
  }
  {
    auto* v = lin->add_subcommand("greedy", "Greedy SLOCAL maximal matching in a white order");
    static std::vector<NodeId> order;
    v->add_option("--incidence", incidence)->required();
    v->add_option("--order", order, "White nodes, comma separated")->delimiter(',');
    verb(v, [] {
      auto ig = io::incidence_from_json(io::read_json_file(incidence));
      if (order.empty()) order = ig.whites();
      auto run = run_greedy(ig, order);
      auto doc = io::to_json(run);
      doc["edge_labels"] = encode_matching(ig, run.matched);
      emit_json(doc);
      return 0;
    });
  }

  // gadget ------------------------------------------------------------------
  auto* gadget = app.add_subcommand("gadget", "Tree-like gadgets and octopi");
  gadget->require_subcommand(1);
  {
    auto* v = gadget->add_subcommand("tree", "Generate a tree-like gadget");
    static std::size_t height = 1;
    v->add_option("--height", height)->required();
    verb(v, [] {
      auto t = gen_tree_like(height);
      emit_json(io::to_json(t));
      emit_dot(io::to_dot(LabeledGraph(t.graph)));
      return 0;
    });
  }
  {
    auto* v = gadget->add_subcommand("octopus", "Generate an octopus");
    static std::size_t x = 1;
    static std::vector<std::size_t> eta, heights;
    v->add_option("--x", x, "Head height")->required();
    v->add_option("--eta", eta, "Ports per head leaf (1 or 2), comma separated")->required()->delimiter(',');
    v->add_option("--heights", heights, "Port gadget heights, comma separated")->required()->delimiter(',');
    verb(v, [] {
      auto o = gen_octopus(x, eta, heights);
      emit_json(io::to_json(o));
      emit_dot(io::to_dot(LabeledGraph(o.graph)));
      return 0;
    });
  }
  {
    auto* v = gadget->add_subcommand("recognize", "Recover a witness from a bare graph");
    static std::string graph, kind = "proper";
    static std::size_t rank = 2;
    static bool generated = false;
    v->add_option("--graph", graph)->required();
    v->add_option("--kind", kind)->check(CLI::IsMember({"tree", "octopus", "proper"}));
    v->add_flag("--generated", generated, "Proper instances: also require generator form");
    v->add_option("--rank", rank, "Rank for the generator form");
    verb(v, [] {
      auto g = io::graph_from_json(io::read_json_file(graph));
      std::optional<json> found;
      if (kind == "tree") {
        if (auto c = recognize_tree_like(g)) found = io::coords_to_json(*c);
      } else if (kind == "octopus") {
        if (auto w = recognize_octopus(g)) found = io::to_json(*w);
      } else {
        RecognizeOptions opt;
        if (generated) opt.generator_rank = rank;
        if (auto w = recognize_proper_instance(g, opt)) found = io::to_json(*w);
      }
      if (!found) return emit_verdict(false, json{{"ok", false}}, "not a " + kind + " instance");
      emit_json(json{{"ok", true}, {"witness", *found}});
      return 0;
    });
  }

  // lift --------------------------------------------------------------------
  auto* lift = app.add_subcommand("lift", "Proper instances and the lifted problem");
  lift->require_subcommand(1);
  static std::string instance_path;
  {
    auto* v = lift->add_subcommand("build", "Proper instance of an incidence graph");
    static std::optional<std::size_t> k;
    v->add_option("--incidence", incidence)->required();
    v->add_option("--k", k, "Port gadget height");
    verb(v, [] {
      auto ig = io::incidence_from_json(io::read_json_file(incidence));
      auto [pi, f] = gen_proper_instance(ig, k);
      emit_json(io::to_json(pi, f, ig));
      emit_dot(io::to_dot(pi));
      return 0;
    });
  }
  {
    auto* v = lift->add_subcommand("run", "Lifted greedy matcher in an octopus order");
    static std::vector<NodeId> order;
    v->add_option("--instance", instance_path)->required();
    v->add_option("--order", order, "Octopus order, comma separated")->delimiter(',');
    verb(v, [] {
      auto b = io::proper_from_json(io::read_json_file(instance_path));
      auto run = order.empty() ? lift_slocal_algorithm(b.instance) : lift_slocal_algorithm(b.instance, order);
      emit_json(io::to_json(run));
      emit_dot(io::to_dot(LabeledGraph(b.instance.graph, node_output(b.instance.graph, run.labels))));
      return 0;
    });
  }
  {
    auto* v = lift->add_subcommand("pullback", "Move lifted labels or an outcome to the source incidence graph");
    static std::string outcome;
    v->add_option("--instance", instance_path)->required();
    auto* l = v->add_option("--labels", labels_path, "Output of lift run");
    auto* o = v->add_option("--outcome", outcome, "Outcome on the proper instance");
    l->excludes(o);
    verb(v, [] {
      auto b = io::proper_from_json(io::read_json_file(instance_path));
      Outcome src;
      if (!outcome.empty())
        src = io::outcome_from_json(io::read_json_file(outcome));
      else if (!labels_path.empty())
        src = Outcome::deterministic(b.instance.family,
                                     node_output(b.instance.graph, io::lift_labels_from_json(io::read_json_file(labels_path))));
      else
        throw input_error("pullback needs --labels or --outcome");
      emit_json(io::to_json(pullback_outcome(src, b.ports, b.source)));
      return 0;
    });
  }
  {
    auto* v = lift->add_subcommand("verify", "Check lifted labels against the promise problem");
    v->add_option("--instance", instance_path)->required();
    v->add_option("--labels", labels_path)->required();
    v->add_option("--problem", problem_path, "Defaults to maximal matching");
    verb(v, [lin_problem] {
      auto b = io::proper_from_json(io::read_json_file(instance_path));
      auto labels = io::lift_labels_from_json(io::read_json_file(labels_path));
      auto verdict = verify_pi_promise(b.instance, labels, lin_problem());
      return emit_verdict(verdict.ok(), io::to_json(verdict), join(verdict.violations));
    });
  }

  // corpus ------------------------------------------------------------------
  auto* corpus_cmd = app.add_subcommand("corpus", "Graph corpora");
  corpus_cmd->require_subcommand(1);
  {
    auto* v = corpus_cmd->add_subcommand("graphs", "All graphs up to isomorphism");
    static std::size_t nodes = 4;
    static bool connected = false;
    v->add_option("--nodes", nodes, "Largest node count (at most 8)")->check(CLI::Range(1, 8));
    v->add_flag("--connected", connected);
    verb(v, [] {
      json out = json::array();
      for (auto& g : corpus::graphs_up_to(nodes, connected)) out.push_back(io::graph_to_json(g));
      emit_json(out);
      return 0;
    });
  }
  {
    auto* v = corpus_cmd->add_subcommand("random", "Random graphs from --seed");
    static std::size_t nodes = 6, count = 1;
    v->add_option("--nodes", nodes)->required();
    v->add_option("--count", count);
    verb(v, [] {
      corpus::Rng rng(globals.seed);
      json out = json::array();
      for (std::size_t i = 0; i < count; ++i) out.push_back(io::graph_to_json(corpus::random_graph(rng, nodes)));
      emit_json(out);
      return 0;
    });
  }

  // suite -------------------------------------------------------------------
  {
    auto* v = app.add_subcommand("suite", "Run an acceptance suite and write its report");
    static std::string name, out_dir = "report";
    v->add_option("name", name, "dequantize, local-expectation, non-signaling, encoding, factor3, gadgets, lift, locality or all")
        ->required();
    v->add_option("--out", out_dir, "Report directory");
    verb(v, [] {
      auto rep = suites::run_suite(name, globals.seed, out_dir);
      if (globals.as_json)
        emit_json(suites::report_json(rep));
      else
        std::cout << suites::report_text(rep);
      return rep.passed() ? 0 : 1;
    });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }
  try {
    return action ? action() : 2;
  } catch (const input_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
