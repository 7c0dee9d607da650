#pragma once

#include <atomic>
#include <vector>

#include "invmon/graph.hpp"
#include "invmon/words.hpp"

namespace invmon {

/**
 * A deterministic birooted graph approximating the Schützenberger automaton
 * of `source_word`. The graph carries the marks "start", "end" and "M" (the
 * vertices of the path labeled by the source word), kept in step with
 * `automaton.start` / `automaton.end` through every expansion and fold.
 */
struct ApproxAutomaton {
  BirootedAutomaton automaton;
  Presentation presentation;
  int stage = 0;
  InvWord source_word;

  const InvWordGraph& graph() const { return automaton.graph; }
  VertexSet path_vertices() const;
};

BirootedAutomaton munn_tree(const InvWord& w);
bool fim_equal(const InvWord& u, const InvWord& w);

struct ExpansionResult {
  InvWordGraph graph;
  std::vector<Vertex> image;  ///< old vertex -> vertex of the expanded graph
};

/// All P-expansions available in g itself, applied at once. Expansions by an
/// empty right-hand side identify the two endpoints.
ExpansionResult full_p_expansion_with_map(const InvWordGraph& g, const Presentation& P);
InvWordGraph full_p_expansion(const InvWordGraph& g, const Presentation& P);

ApproxAutomaton approx_from_graph(InvWordGraph g, Vertex start, Vertex end, const Presentation& P,
                                  const InvWord& w, int stage);
ApproxAutomaton initial_approx(const InvWord& w, const Presentation& P);
ApproxAutomaton exp_step(const ApproxAutomaton& a);
ApproxAutomaton expand(const InvWord& w, const Presentation& P, int n);

/// Folded full expansion of an arbitrary deterministic graph, with vertex map.
FoldResult exp1_with_map(const InvWordGraph& g, const Presentation& P);

bool is_p_complete(const InvWordGraph& g, const Presentation& P);
bool is_relatively_p_complete(const VertexSet& sub, const InvWordGraph& g, const Presentation& P);

enum class Verdict { Yes, Unknown };
Verdict approx_accepts(const InvWord& w_target, const InvWord& u, const Presentation& P, int n);
bool accepts(const BirootedAutomaton& a, const InvWord& u);

enum class SemiResult { Equal, Exhausted };
struct SemiOutcome {
  SemiResult result = SemiResult::Exhausted;
  int iterations = 0;
};

/// Grows approximations of both words alternately, at most `budget` steps.
SemiOutcome decide_semi(const InvWord& u, const InvWord& v, const Presentation& P, int budget,
                        const std::atomic<bool>* cancel = nullptr);

struct EPresentation {
  Presentation presentation;
  InvWord e;
  int t_symbol = -1;
};

/// e(u1..um) = u1 u1' u2 u2' ... um um'
InvWord idempotent_word(const std::vector<InvWord>& us);

/// Inv<A, t | e r1 = 1, r2 = 1, ...> with
/// e = e(a1..an, t w1 t', ..., t wk t', a1'..an'). Relators are read off
/// `group` as lhs·rhs'. Throws std::invalid_argument if t is already used.
EPresentation build_e_presentation(const Presentation& group, const std::vector<InvWord>& subgroup_words,
                                   const std::string& t_name = "t");

}  // namespace invmon
