#pragma once

#include <limits>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "invmon/words.hpp"

namespace invmon {

using Vertex = int;
using VertexSet = std::vector<Vertex>;  ///< sorted, no duplicates

inline constexpr int kInfinity = std::numeric_limits<int>::max();

struct Arc {
  Letter label;
  Vertex to;
};

struct Edge {
  Vertex src;
  Letter label;
  Vertex dst;
  friend bool operator==(const Edge&, const Edge&) = default;
};

/**
 * Finite edge-labeled digraph whose edges come in inverse pairs: adding
 * (u, x, v) also adds (v, x', u). Vertices are 0..n-1. Parallel edges are
 * allowed until the graph is folded.
 */
class InvWordGraph {
 public:
  InvWordGraph() = default;
  explicit InvWordGraph(int n) : adj_(static_cast<std::size_t>(n)) {}

  int num_vertices() const { return static_cast<int>(adj_.size()); }
  Vertex add_vertex();
  void add_edge(Vertex u, Letter x, Vertex v);

  const std::vector<Arc>& arcs(Vertex v) const { return adj_[static_cast<std::size_t>(v)]; }
  std::optional<Vertex> follow(Vertex v, Letter x) const;
  bool has_edge(Vertex u, Letter x, Vertex v) const;
  int degree(Vertex v) const { return static_cast<int>(arcs(v).size()); }

  /// One representative per inverse pair: the orientation with a positive label.
  std::vector<Edge> edges() const;
  std::size_t num_edges() const;
  bool is_deterministic() const;

  /// Named vertex lists, e.g. "start", "end", "M"; carried through folding.
  std::map<std::string, std::vector<Vertex>> marks;

 private:
  std::vector<std::vector<Arc>> adj_;
};

struct BirootedAutomaton {
  InvWordGraph graph;
  Vertex start = 0;
  Vertex end = 0;
};

VertexSet make_set(std::vector<Vertex> v);
bool contains(const VertexSet& s, Vertex v);
VertexSet set_union(const VertexSet& a, const VertexSet& b);
VertexSet set_intersection(const VertexSet& a, const VertexSet& b);
VertexSet set_difference(const VertexSet& a, const VertexSet& b);
VertexSet all_vertices(const InvWordGraph& g);

struct FoldResult {
  InvWordGraph graph;
  std::vector<Vertex> image;  ///< old vertex -> new vertex
};

/// Identify same-label edges sharing a source (hence a target) until deterministic.
FoldResult fold_with_map(const InvWordGraph& g);
InvWordGraph fold(const InvWordGraph& g);

std::optional<Vertex> read_word(const InvWordGraph& g, Vertex v, const InvWord& u);

std::vector<int> bfs_distances(const InvWordGraph& g, const VertexSet& sources);
std::vector<int> bfs_distances(const InvWordGraph& g, Vertex source);
int distance(const InvWordGraph& g, Vertex u, Vertex v);
std::vector<std::vector<int>> distance_matrix(const InvWordGraph& g);

struct Path {
  std::vector<Vertex> vertices;
  InvWord labels;
};
std::optional<Path> geodesic(const InvWordGraph& g, Vertex u, Vertex v);

struct Subgraph {
  InvWordGraph graph;
  std::vector<Vertex> to_parent;  ///< local vertex -> parent vertex
  std::vector<Vertex> to_local;   ///< parent vertex -> local vertex or -1
};

/// Induced subgraph; marks are restricted to the kept vertices.
Subgraph induced(const InvWordGraph& g, const VertexSet& keep);

VertexSet neighborhood_set(const InvWordGraph& g, const VertexSet& X, int r);
Subgraph neighborhood(const InvWordGraph& g, const VertexSet& X, int r);

/// Connected components of the subgraph induced on `within`, each sorted.
std::vector<VertexSet> components(const InvWordGraph& g, const VertexSet& within);
bool is_connected(const InvWordGraph& g, const VertexSet& within);
/// Diameter of the induced subgraph on `within`; kInfinity when disconnected.
int induced_diameter(const InvWordGraph& g, const VertexSet& within);

struct RelComponents {
  VertexSet gamma;    ///< component of g - X containing x0
  VertexSet gamma_c;  ///< all other vertices of g - X
};
/// Throws std::invalid_argument if x0 is in X.
RelComponents components_rel(const InvWordGraph& g, const VertexSet& X, Vertex x0);

bool rooted_iso(const BirootedAutomaton& a, const BirootedAutomaton& b);

enum class Color : int { Blue = 0, Red = 1 };

struct ColoredBall {
  InvWordGraph graph;
  std::vector<Color> color;
  std::vector<bool> center;                ///< membership in the center subgraph
  std::optional<std::vector<int>> theta;   ///< compared up to a constant shift
};

/// A label-, color- and center-preserving isomorphism a -> b (theta-compatible
/// up to a shift when both carry theta), as a vertex map, or nullopt.
std::optional<std::vector<Vertex>> colored_iso(const ColoredBall& a, const ColoredBall& b);

}  // namespace invmon
