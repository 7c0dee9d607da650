#pragma once

#include <atomic>
#include <functional>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "invmon/graph.hpp"
#include "invmon/stephen.hpp"
#include "invmon/words.hpp"

namespace invmon {

/// Partial vertex map, used for phi: X_i^{+K} -> Y_i^{+K}.
using VertexMap = std::map<Vertex, Vertex>;

struct SaplingCandidate {
  ApproxAutomaton S;
  std::vector<VertexSet> Y;
  std::vector<VertexSet> X;
  std::vector<VertexMap> phi;
  int K = 2;

  int n() const { return static_cast<int>(Y.size()); }
  Vertex x0() const { return S.automaton.start; }
  const InvWordGraph& graph() const { return S.graph(); }
};

struct Sapling : SaplingCandidate {
  int k = 0;
};

/// First failed condition: 0 for a precondition, 1..5 for the sapling conditions.
struct Violation {
  int condition = 0;
  std::string message;
  VertexSet witness;
};

class PreconditionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct ColoredNeighborhood {
  ColoredBall ball;
  std::vector<Vertex> to_parent;
  std::vector<Vertex> to_local;  ///< parent -> local or -1
};

/// X^{+K} with vertices of Gamma^c(x0, X) red. Throws PreconditionError
/// when x0 is in X, X is empty or disconnected, or X meets M.
ColoredNeighborhood color_neighborhood(const InvWordGraph& S, const VertexSet& X, Vertex x0, int K,
                                       const VertexSet& M = {});

/// Conditions (1) to (4). On success the candidate carries the phi maps found.
std::variant<SaplingCandidate, Violation> candidate_check(const ApproxAutomaton& S, const std::vector<VertexSet>& Y,
                                                          const std::vector<VertexSet>& X, const Presentation& P);

/// Condition (5) for a single index at bound k.
bool embeds_after_expansion(const InvWordGraph& S, Vertex x0, const VertexSet& X, int K, const Presentation& P, int k);
std::optional<Sapling> sapling_check(const SaplingCandidate& c, int k);

/// All five conditions, including that each phi is a colored isomorphism.
std::optional<Violation> verify_sapling(const Sapling& s);

/// A P-complete finite graph as a sapling with an empty system.
Sapling trivial_sapling(const ApproxAutomaton& complete, int K);

struct GrowResult {
  Sapling sapling;
  std::vector<int> parent;  ///< for each new Y, the index i of the Y_i it hangs off
};

/// Glue fresh copies of Gamma^c(x0, X_i) onto Y_i^{+K} along phi_i.
/// Existing vertex ids are kept. Throws std::logic_error if the result is not deterministic.
GrowResult grow_with_parents(const Sapling& s);
Sapling grow(const Sapling& s);

struct Materialized {
  Sapling sapling;                            ///< S_steps with its system
  std::vector<std::vector<VertexSet>> levels; ///< Y systems of S_0 .. S_steps
  std::vector<std::vector<int>> parents;      ///< parents[l][j]: index in levels[l-1]
};

Materialized materialize_with_history(const Sapling& s, int steps);
ApproxAutomaton materialize(const Sapling& s, int steps);

struct TreePartition {
  std::vector<VertexSet> blocks;
  int width_bound = 0;
};

/// The block partition built from a materialization: the core block around
/// x0 plus, for each Y, the part of its far side not beyond its children.
TreePartition tree_partition(const Sapling& s0, const Materialized& m);

enum class SearchStatus { Sapling, Finite, Exhausted };

struct SearchOptions {
  int max_y_size = 8;          ///< vertices per Y
  int max_x_options = 4;       ///< X choices kept per Y
  int max_systems = 4000;      ///< systems tried per (D, N, m)
};

struct SearchProgress {
  int round = 0;
  int stage = 0;
  std::size_t list_size = 0;
};

struct SearchResult {
  SearchStatus status = SearchStatus::Exhausted;
  std::optional<Sapling> sapling;
  std::optional<ApproxAutomaton> finite;
  int rounds = 0;
  int stage = 0;              ///< largest m reached
  std::size_t list_size = 0;  ///< |L| at the end
};

/// Dovetailed search over (D, N, m): round t handles every triple with
/// D + N + m = t + 1 and N >= 1, then advances k for every list entry.
SearchResult find_sapling(const InvWord& w, const Presentation& P, int budget, const SearchOptions& opts = {},
                          const std::function<void(const SearchProgress&)>& progress = {},
                          const std::atomic<bool>* cancel = nullptr);

nlohmann::json sapling_to_json(const Sapling& s);
/// Throws SchemaError.
Sapling sapling_from_json(const nlohmann::json& j);

}  // namespace invmon
