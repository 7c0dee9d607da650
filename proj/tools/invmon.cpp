// invmon: command-line front end.
//
// Exit status: 0 when an answer or artifact was produced, 2 when a budget ran
// out or the answer is unknown, 1 on errors.

#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "invmon/geometry.hpp"
#include "invmon/graph_io.hpp"
#include "invmon/langtools.hpp"
#include "invmon/sapling.hpp"
#include "invmon/stephen.hpp"

using namespace invmon;

namespace {

constexpr int kOk = 0;
constexpr int kError = 1;
constexpr int kUnknown = 2;

InvWord word_arg(const std::string& text, const Presentation* P = nullptr) {
  InvWord u;
  try {
    u = parse_word(text);
    if (P) P->check_word(u);
  } catch (const ParseError& e) {
    throw std::runtime_error("word \"" + text + "\": " + e.what());
  }
  return u;
}

nlohmann::json read_json(const std::string& path) {
  try {
    return nlohmann::json::parse(read_file(path));
  } catch (const nlohmann::json::parse_error& e) {
    throw std::runtime_error(path + ": " + e.what());
  }
}

void emit(const std::string& text, const std::string& out) {
  if (out.empty()) {
    std::cout << text << "\n";
  } else {
    write_file(out, text + "\n");
  }
}

InvWordGraph with_roots(const BirootedAutomaton& a) {
  InvWordGraph g = a.graph;
  g.marks["start"] = {a.start};
  g.marks["end"] = {a.end};
  return g;
}

std::function<void(const SearchProgress&)> progress_printer() {
  return [](const SearchProgress& p) {
    std::cerr << "round " << p.round << "  stage " << p.stage << "  |L| " << p.list_size << "\n";
  };
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Schützenberger graphs, saplings and tree-like inverse monoids"};
  app.require_subcommand(1);

  std::string pres, word, u_text, v_text, out, dot, json_out, in, graph_path, partition_path, subgroup;
  int n = 0, budget = 50, delta = 0, depth = 3, width = 0;
  std::optional<int> opt_delta;

  auto* munn = app.add_subcommand("munn", "Munn tree of a word");
  munn->add_option("word", word, "word, e.g. \"a b a'\"")->required();

  auto* expand_cmd = app.add_subcommand("expand", "Stephen approximation after N expansion steps");
  expand_cmd->add_option("-p", pres, "presentation file")->required()->check(CLI::ExistingFile);
  expand_cmd->add_option("-w", word, "word")->required();
  expand_cmd->add_option("-n", n, "expansion steps")->required()->check(CLI::NonNegativeNumber);
  expand_cmd->add_option("--dot", dot, "write Graphviz output here");
  expand_cmd->add_option("--json", json_out, "write JSON here instead of stdout");

  auto* decide = app.add_subcommand("decide", "decide u = v");
  decide->add_option("-p", pres, "presentation file")->required()->check(CLI::ExistingFile);
  decide->add_option("-u", u_text, "first word")->required();
  decide->add_option("-v", v_text, "second word")->required();
  decide->add_option("--budget", budget, "search rounds")->check(CLI::NonNegativeNumber);

  auto* sapling_cmd = app.add_subcommand("sapling", "search for a sapling of S(w)");
  sapling_cmd->add_option("-p", pres, "presentation file")->required()->check(CLI::ExistingFile);
  sapling_cmd->add_option("-w", word, "word")->required();
  sapling_cmd->add_option("--budget", budget, "search rounds")->check(CLI::NonNegativeNumber);
  sapling_cmd->add_option("--out", out, "output file");

  auto* pda_cmd = app.add_subcommand("pda", "compile a sapling to a pushdown automaton");
  pda_cmd->add_option("--sapling", in, "sapling JSON")->required()->check(CLI::ExistingFile);
  pda_cmd->add_option("--out", out, "output file");

  auto* accept = app.add_subcommand("accept", "run a pushdown automaton on a word");
  accept->add_option("--pda", in, "PDA JSON")->required()->check(CLI::ExistingFile);
  accept->add_option("-w", word, "word")->required();

  auto* geo = app.add_subcommand("geodesics", "geodesic automaton of S(w)");
  geo->add_option("-p", pres, "presentation file")->required()->check(CLI::ExistingFile);
  geo->add_option("-w", word, "word")->required();
  geo->add_option("--delta", delta, "hyperbolicity constant")->required()->check(CLI::NonNegativeNumber);
  geo->add_option("--depth", depth, "materialization steps")->required()->check(CLI::NonNegativeNumber);
  geo->add_option("--budget", budget, "search rounds")->check(CLI::NonNegativeNumber);
  geo->add_option("--out", out, "output file");

  auto* hyp = app.add_subcommand("hyperbolic", "Gromov delta and the polygon check");
  hyp->add_option("--graph", graph_path, "graph JSON")->required()->check(CLI::ExistingFile);
  hyp->add_option("--delta", opt_delta, "run the polygon check with this delta")->check(CLI::NonNegativeNumber);

  auto* tree = app.add_subcommand("treecheck", "check a strong tree decomposition");
  tree->add_option("--graph", graph_path, "graph JSON")->required()->check(CLI::ExistingFile);
  tree->add_option("--partition", partition_path, "partition JSON")->required()->check(CLI::ExistingFile);
  tree->add_option("--width", width, "width bound")->required()->check(CLI::NonNegativeNumber);

  auto* eword = app.add_subcommand("eword", "build the e-presentation of a subgroup");
  eword->add_option("-p", pres, "group presentation file")->required()->check(CLI::ExistingFile);
  eword->add_option("--subgroup", subgroup, "comma-separated subgroup generators")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kOk : kError;
  }

  try {
    if (*munn) {
      std::cout << export_json(with_roots(munn_tree(word_arg(word)))) << "\n";
      return kOk;
    }
    if (*expand_cmd) {
      Presentation P = load_presentation(pres);
      ApproxAutomaton A = expand(word_arg(word, &P), P, n);
      if (!dot.empty()) write_file(dot, export_dot(A.graph()));
      emit(export_json(A.graph()), json_out);
      return kOk;
    }
    if (*decide) {
      Presentation P = load_presentation(pres);
      auto r = word_problem(word_arg(u_text, &P), word_arg(v_text, &P), P, budget);
      switch (r.answer) {
        case WordAnswer::Equal: std::cout << "equal\n"; return kOk;
        case WordAnswer::Unequal: std::cout << "unequal\n"; return kOk;
        case WordAnswer::Exhausted: std::cout << "exhausted\n"; return kUnknown;
      }
    }
    if (*sapling_cmd) {
      Presentation P = load_presentation(pres);
      auto r = find_sapling(word_arg(word, &P), P, budget, {}, progress_printer());
      if (r.status == SearchStatus::Exhausted) {
        std::cout << "exhausted\n";
        return kUnknown;
      }
      Sapling s = r.status == SearchStatus::Finite ? trivial_sapling(*r.finite, P.K()) : *r.sapling;
      std::cerr << (r.status == SearchStatus::Finite ? "finite graph" : "sapling") << " at stage " << s.S.stage
                << ", " << s.n() << " subgraph pairs, k = " << s.k << "\n";
      emit(sapling_to_json(s).dump(2), out);
      return kOk;
    }
    if (*pda_cmd) {
      Sapling s = sapling_from_json(read_json(in));
      emit(pda_to_json(build_pda(s)).dump(2), out);
      return kOk;
    }
    if (*accept) {
      Pda p = pda_from_json(read_json(in));
      std::cout << (pda_accepts(p, word_arg(word)) ? "accept" : "reject") << "\n";
      return kOk;
    }
    if (*geo) {
      Presentation P = load_presentation(pres);
      auto r = find_sapling(word_arg(word, &P), P, budget, {}, progress_printer());
      if (r.status == SearchStatus::Exhausted) {
        std::cout << "exhausted\n";
        return kUnknown;
      }
      try {
        Fsa f = r.status == SearchStatus::Finite
                    ? geodesic_automaton(r.finite->graph(), r.finite->automaton.start, delta, P.K())
                    : geodesic_automaton_from_sapling(*r.sapling, delta, depth);
        emit(fsa_to_json(f).dump(2), out);
        return kOk;
      } catch (const GeodesicError& e) {
        std::cerr << "geodesics: " << e.what() << "\n";
        std::cout << "unknown\n";
        return kUnknown;
      }
    }
    if (*hyp) {
      InvWordGraph g = import_json(read_file(graph_path));
      Vertex x0 = g.marks.count("start") && !g.marks["start"].empty() ? g.marks["start"][0] : 0;
      nlohmann::json j;
      j["gromov_delta"] = format_rational(gromov_delta(g));
      j["polygon_delta"] = polygon_delta(g, x0);
      if (opt_delta) j["polygon_check"] = polygon_hyperbolic_check(g, x0, *opt_delta);
      std::cout << j.dump(2) << "\n";
      return kOk;
    }
    if (*tree) {
      InvWordGraph g = import_json(read_file(graph_path));
      auto blocks = partition_from_json(read_json(partition_path));
      check_partition(g, blocks);
      nlohmann::json j;
      j["quotient_tree"] = quotient_is_tree(g, blocks);
      j["width"] = partition_width(g, blocks);
      j["pass"] = strong_tree_check(g, blocks, width);
      std::cout << j.dump(2) << "\n";
      return kOk;
    }
    if (*eword) {
      Presentation P = load_presentation(pres);
      std::vector<InvWord> gens;
      std::stringstream ss(subgroup);
      std::string item;
      while (std::getline(ss, item, ',')) gens.push_back(word_arg(item, &P));
      EPresentation e = build_e_presentation(P, gens);
      std::cout << "# e = " << format_word(e.e) << "\n" << format_presentation(e.presentation);
      return kOk;
    }
  } catch (const std::exception& e) {
    std::cerr << "invmon: " << e.what() << "\n";
    return kError;
  }
  return kError;
}
