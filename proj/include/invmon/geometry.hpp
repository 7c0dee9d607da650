#pragma once

#include <boost/rational.hpp>
#include <cstdint>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "invmon/graph.hpp"

namespace invmon {

using Rational = boost::rational<std::int64_t>;

std::string format_rational(const Rational& r);

/// Least delta for the four-point condition, by an exact scan over all
/// quadruples. Throws std::invalid_argument on a disconnected graph.
Rational gromov_delta(const InvWordGraph& g);

/// Induced subgraph on {y : d(x0,y) = d(x0,x) + d(x,y)}.
Subgraph cone(const InvWordGraph& g, Vertex x0, Vertex x);
VertexSet cone_set(const InvWordGraph& g, Vertex x0, Vertex x);

/// True iff for every x with d(x0,x) > delta, removing the ball D_delta(x)
/// separates x0 from every vertex of the cone of x.
bool polygon_hyperbolic_check(const InvWordGraph& g, Vertex x0, int delta);
/// Least delta passing polygon_hyperbolic_check (at most the eccentricity of x0).
int polygon_delta(const InvWordGraph& g, Vertex x0);

struct TreeDecomposition {
  std::vector<VertexSet> blocks;
  int width = 0;
};

/// Throws std::invalid_argument unless blocks are nonempty, disjoint and cover V(g).
void check_partition(const InvWordGraph& g, const std::vector<VertexSet>& blocks);
/// block index of every vertex
std::vector<int> block_index(const InvWordGraph& g, const std::vector<VertexSet>& blocks);
/// Simple quotient graph: pairs (i, j), i < j, joined by at least one edge.
std::set<std::pair<int, int>> quotient_edges(const InvWordGraph& g, const std::vector<VertexSet>& blocks);
bool quotient_is_tree(const InvWordGraph& g, const std::vector<VertexSet>& blocks);

bool strong_tree_check(const InvWordGraph& g, const std::vector<VertexSet>& blocks, int m);
/// Largest induced block diameter (kInfinity if some block is disconnected).
int partition_width(const InvWordGraph& g, const std::vector<VertexSet>& blocks);

nlohmann::json partition_to_json(const std::vector<VertexSet>& blocks);
std::vector<VertexSet> partition_from_json(const nlohmann::json& j);

struct DiscType {
  ColoredBall ball;
  Vertex center = 0;               ///< local id of x inside ball
  std::vector<Vertex> to_parent;   ///< local -> ambient vertex
};

/// Colored ball D_{delta+K}(x): red vertices are those cut off from x0 by D_delta(x).
DiscType disc_type(const InvWordGraph& g, Vertex x0, Vertex x, int delta, int K);
bool disc_type_equiv(const DiscType& a, const DiscType& b);

struct TreeOfHyperbolicReport {
  bool single_transitions = false;  ///< (a)
  bool quotient_tree = false;       ///< (b)
  bool blocks_hyperbolic = false;   ///< (c)
  bool whole_hyperbolic = false;    ///< (d)
  Rational whole_delta;
  Rational max_block_delta;
  bool applicable() const { return single_transitions && quotient_tree && blocks_hyperbolic; }
  bool counterexample() const { return applicable() && !whole_hyperbolic; }
};

TreeOfHyperbolicReport tree_of_hyperbolic_verify(const InvWordGraph& g, const std::vector<VertexSet>& blocks,
                                                 const Rational& delta);

}  // namespace invmon
