#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "invmon/graph.hpp"
#include "invmon/sapling.hpp"
#include "invmon/words.hpp"

namespace invmon {

// ---------------------------------------------------------------------------
// Finite automata

struct Fsa {
  struct Transition {
    Letter label;
    int to;
  };
  int initial = 0;
  std::vector<bool> terminal;
  std::vector<std::vector<Transition>> trans;

  int num_states() const { return static_cast<int>(trans.size()); }
  int add_state(bool is_terminal = false);
  void add_transition(int from, Letter x, int to);
  bool is_deterministic() const;
  bool accepts(const InvWord& u) const;
  /// Letters used on some transition, sorted by code.
  std::vector<Letter> alphabet() const;
};

/// Accepted words of length <= L in shortlex order.
std::vector<InvWord> fsa_language_upto(const Fsa& f, int L);
Fsa determinize(const Fsa& f);
/// Minimal complete-free DFA (unreachable and dead states removed).
Fsa minimize(const Fsa& f);

struct FsaComparison {
  bool equal = true;
  std::optional<InvWord> witness;  ///< shortest word accepted by exactly one side
};
FsaComparison fsa_compare(const Fsa& a, const Fsa& b);
bool fsa_equal(const Fsa& a, const Fsa& b);

nlohmann::json fsa_to_json(const Fsa& f);
Fsa fsa_from_json(const nlohmann::json& j);

// ---------------------------------------------------------------------------
// Geodesic automaton

class GeodesicError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Quotient of the geodesic digraph from x0 by disc types of radius delta+K.
/// Vertices within distance delta of x0 stay separate. Only vertices at
/// distance <= trusted_radius become states, and only those strictly inside
/// contribute transitions. Throws GeodesicError when a class disagrees on its
/// transitions or no member of a class has known transitions.
Fsa geodesic_automaton(const InvWordGraph& g, Vertex x0, int delta, int K, int trusted_radius = kInfinity);

/// Largest r such that the balls of radius r+margin around x0 agree in a and b.
/// The vertices of a must be an id-prefix of those of b. kInfinity when a == b.
int trusted_radius(const InvWordGraph& a, const InvWordGraph& b, Vertex x0, int margin);

/// Geodesic automaton of S(w) from a sapling, using materializations at
/// `steps` and `steps + 1` to fix the trusted radius.
Fsa geodesic_automaton_from_sapling(const Sapling& s, int delta, int steps);

// ---------------------------------------------------------------------------
// Pushdown automata

struct PdaTransition {
  int from = 0;
  std::optional<Letter> input;  ///< nullopt for epsilon
  int pop = 0;
  std::vector<int> push;        ///< replaces the popped symbol, top first
  int to = 0;
};

struct Pda {
  int num_states = 0;
  int initial = 0;
  int final_state = 0;
  std::vector<std::string> stack_symbols;  ///< index 0 is Z
  std::vector<PdaTransition> transitions;

  static constexpr int Z = 0;
};

/// States: S_0, one copy of each Gamma^c(x0, X_i), then f. Stack symbols
/// besides Z are pairs "i:k" (in copy i, entered from copy k, 0 = S_0).
Pda build_pda(const Sapling& s);

nlohmann::json pda_to_json(const Pda& p);
Pda pda_from_json(const nlohmann::json& j);

/// Grammar from the triple construction, normalised for parsing.
struct Cfg {
  struct Rule {
    int lhs = 0;
    std::optional<Letter> terminal;  ///< leading terminal, if any
    std::vector<int> rhs;            ///< at most two nonterminals
  };
  int start = 0;
  int num_nonterminals = 0;
  std::vector<Rule> rules;
};

/// Acceptance by final state becomes acceptance by empty stack at f; the
/// result keeps only productive nonterminals reachable from the start.
Cfg pda_to_cfg(const Pda& p);
bool cfg_accepts(const Cfg& g, const InvWord& u);
bool pda_accepts(const Pda& p, const InvWord& u);

// ---------------------------------------------------------------------------
// Word problem

enum class WordAnswer { Equal, Unequal, Exhausted };

struct WordProblemResult {
  WordAnswer answer = WordAnswer::Exhausted;
  std::string method;  ///< "approximation", "finite", "pda" or "budget"
};

/// u = v in Inv<A | R> iff each lies in the Schützenberger language of the other.
WordProblemResult word_problem(const InvWord& u, const InvWord& v, const Presentation& P, int budget);

}  // namespace invmon
