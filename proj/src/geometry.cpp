#include "invmon/geometry.hpp"

#include <algorithm>
#include <stdexcept>

#include "invmon/graph_io.hpp"

namespace invmon {

std::string format_rational(const Rational& r) {
  if (r.denominator() == 1) return std::to_string(r.numerator());
  return std::to_string(r.numerator()) + "/" + std::to_string(r.denominator());
}

Rational gromov_delta(const InvWordGraph& g) {
  const int n = g.num_vertices();
  if (n == 0) return 0;
  auto d = distance_matrix(g);
  for (int v = 0; v < n; ++v)
    if (d[0][static_cast<std::size_t>(v)] == kInfinity) throw std::invalid_argument("gromov_delta: graph is disconnected");
  // For each quadruple, the gap between the two largest of the three pair sums.
  std::int64_t best = 0;
  for (int i = 0; i < n; ++i) {
    const auto& di = d[static_cast<std::size_t>(i)];
    for (int j = i + 1; j < n; ++j) {
      const auto& dj = d[static_cast<std::size_t>(j)];
      const int dij = di[static_cast<std::size_t>(j)];
      for (int k = j + 1; k < n; ++k) {
        const int dik = di[static_cast<std::size_t>(k)], djk = dj[static_cast<std::size_t>(k)];
        const auto& dk = d[static_cast<std::size_t>(k)];
        for (int l = k + 1; l < n; ++l) {
          int s1 = dij + dk[static_cast<std::size_t>(l)];
          int s2 = dik + dj[static_cast<std::size_t>(l)];
          int s3 = djk + di[static_cast<std::size_t>(l)];
          if (s1 < s2) std::swap(s1, s2);
          if (s2 < s3) std::swap(s2, s3);
          if (s1 < s2) std::swap(s1, s2);
          best = std::max<std::int64_t>(best, s1 - s2);
        }
      }
    }
  }
  return Rational(best, 2);
}

VertexSet cone_set(const InvWordGraph& g, Vertex x0, Vertex x) {
  auto d0 = bfs_distances(g, x0);
  auto dx = bfs_distances(g, x);
  const int base = d0[static_cast<std::size_t>(x)];
  VertexSet out;
  if (base == kInfinity) return out;
  for (Vertex y = 0; y < g.num_vertices(); ++y) {
    const auto yi = static_cast<std::size_t>(y);
    if (dx[yi] != kInfinity && d0[yi] == base + dx[yi]) out.push_back(y);
  }
  return out;
}

Subgraph cone(const InvWordGraph& g, Vertex x0, Vertex x) { return induced(g, cone_set(g, x0, x)); }

namespace {

// Vertices reachable from s avoiding `blocked` (s itself not blocked).
std::vector<bool> reach_avoiding(const InvWordGraph& g, Vertex s, const std::vector<bool>& blocked) {
  std::vector<bool> seen(static_cast<std::size_t>(g.num_vertices()), false);
  std::vector<Vertex> stack{s};
  seen[static_cast<std::size_t>(s)] = true;
  while (!stack.empty()) {
    Vertex v = stack.back();
    stack.pop_back();
    for (const Arc& a : g.arcs(v)) {
      auto t = static_cast<std::size_t>(a.to);
      if (seen[t] || blocked[t]) continue;
      seen[t] = true;
      stack.push_back(a.to);
    }
  }
  return seen;
}

}  // namespace

bool polygon_hyperbolic_check(const InvWordGraph& g, Vertex x0, int delta) {
  const int n = g.num_vertices();
  auto d = distance_matrix(g);
  const auto& d0 = d[static_cast<std::size_t>(x0)];
  for (Vertex x = 0; x < n; ++x) {
    const auto xi = static_cast<std::size_t>(x);
    if (d0[xi] == kInfinity || d0[xi] <= delta) continue;
    std::vector<bool> blocked(static_cast<std::size_t>(n));
    for (Vertex y = 0; y < n; ++y) blocked[static_cast<std::size_t>(y)] = d[xi][static_cast<std::size_t>(y)] <= delta;
    auto seen = reach_avoiding(g, x0, blocked);
    for (Vertex y = 0; y < n; ++y) {
      const auto yi = static_cast<std::size_t>(y);
      if (blocked[yi] || d[xi][yi] == kInfinity) continue;
      if (d0[yi] == d0[xi] + d[xi][yi] && seen[yi]) return false;
    }
  }
  return true;
}

int polygon_delta(const InvWordGraph& g, Vertex x0) {
  for (int delta = 0;; ++delta)
    if (polygon_hyperbolic_check(g, x0, delta)) return delta;
}

void check_partition(const InvWordGraph& g, const std::vector<VertexSet>& blocks) {
  std::vector<int> seen(static_cast<std::size_t>(g.num_vertices()), 0);
  for (const auto& b : blocks) {
    if (b.empty()) throw std::invalid_argument("partition: empty block");
    for (Vertex v : b) {
      if (v < 0 || v >= g.num_vertices()) throw std::invalid_argument("partition: vertex " + std::to_string(v) + " out of range");
      if (seen[static_cast<std::size_t>(v)]++) throw std::invalid_argument("partition: vertex " + std::to_string(v) + " in two blocks");
    }
  }
  for (Vertex v = 0; v < g.num_vertices(); ++v)
    if (!seen[static_cast<std::size_t>(v)]) throw std::invalid_argument("partition: vertex " + std::to_string(v) + " not covered");
}

std::vector<int> block_index(const InvWordGraph& g, const std::vector<VertexSet>& blocks) {
  check_partition(g, blocks);
  std::vector<int> idx(static_cast<std::size_t>(g.num_vertices()), -1);
  for (std::size_t i = 0; i < blocks.size(); ++i)
    for (Vertex v : blocks[i]) idx[static_cast<std::size_t>(v)] = static_cast<int>(i);
  return idx;
}

std::set<std::pair<int, int>> quotient_edges(const InvWordGraph& g, const std::vector<VertexSet>& blocks) {
  auto idx = block_index(g, blocks);
  std::set<std::pair<int, int>> out;
  for (const Edge& e : g.edges()) {
    int a = idx[static_cast<std::size_t>(e.src)], b = idx[static_cast<std::size_t>(e.dst)];
    if (a != b) out.emplace(std::min(a, b), std::max(a, b));
  }
  return out;
}

bool quotient_is_tree(const InvWordGraph& g, const std::vector<VertexSet>& blocks) {
  auto q = quotient_edges(g, blocks);
  const int nb = static_cast<int>(blocks.size());
  if (nb == 0) return true;
  if (static_cast<int>(q.size()) != nb - 1) return false;
  InvWordGraph h(nb);
  for (auto [a, b] : q) h.add_edge(a, Letter::make(0, false), b);
  return is_connected(h, all_vertices(h));
}

int partition_width(const InvWordGraph& g, const std::vector<VertexSet>& blocks) {
  int w = 0;
  for (const auto& b : blocks) w = std::max(w, induced_diameter(g, b));
  return w;
}

bool strong_tree_check(const InvWordGraph& g, const std::vector<VertexSet>& blocks, int m) {
  if (!quotient_is_tree(g, blocks)) return false;
  return partition_width(g, blocks) <= m;
}

nlohmann::json partition_to_json(const std::vector<VertexSet>& blocks) {
  nlohmann::json j;
  j["blocks"] = nlohmann::json::array();
  for (const auto& b : blocks) j["blocks"].push_back(b);
  return j;
}

std::vector<VertexSet> partition_from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("blocks") || !j["blocks"].is_array())
    throw SchemaError("partition: expected an object with a \"blocks\" array");
  std::vector<VertexSet> out;
  for (const auto& b : j["blocks"]) {
    if (!b.is_array()) throw SchemaError("partition: each block must be an array");
    std::vector<Vertex> vs;
    for (const auto& v : b) {
      if (!v.is_number_integer()) throw SchemaError("partition: vertex ids must be integers");
      vs.push_back(v.get<int>());
    }
    out.push_back(make_set(std::move(vs)));
  }
  return out;
}

DiscType disc_type(const InvWordGraph& g, Vertex x0, Vertex x, int delta, int K) {
  VertexSet inner = neighborhood_set(g, {x}, delta);
  VertexSet outer = neighborhood_set(g, {x}, delta + K);
  VertexSet red;
  if (!contains(inner, x0)) red = components_rel(g, inner, x0).gamma_c;
  Subgraph s = induced(g, outer);
  auto d0 = bfs_distances(g, x0);
  const int base = d0[static_cast<std::size_t>(x)];
  DiscType t;
  t.ball.graph = std::move(s.graph);
  t.to_parent = s.to_parent;
  const auto n = t.to_parent.size();
  t.ball.color.assign(n, Color::Blue);
  t.ball.center.assign(n, false);
  std::vector<int> theta(n);
  for (std::size_t i = 0; i < n; ++i) {
    Vertex y = t.to_parent[i];
    if (contains(red, y)) t.ball.color[i] = Color::Red;
    theta[i] = d0[static_cast<std::size_t>(y)] - base;
    if (y == x) {
      t.ball.center[i] = true;
      t.center = static_cast<Vertex>(i);
    }
  }
  t.ball.theta = std::move(theta);
  return t;
}

bool disc_type_equiv(const DiscType& a, const DiscType& b) { return colored_iso(a.ball, b.ball).has_value(); }

TreeOfHyperbolicReport tree_of_hyperbolic_verify(const InvWordGraph& g, const std::vector<VertexSet>& blocks,
                                                 const Rational& delta) {
  auto idx = block_index(g, blocks);
  TreeOfHyperbolicReport r;
  std::set<std::pair<int, int>> pairs;
  r.single_transitions = true;
  for (const Edge& e : g.edges()) {
    int a = idx[static_cast<std::size_t>(e.src)], b = idx[static_cast<std::size_t>(e.dst)];
    if (a == b) continue;
    if (!pairs.emplace(std::min(a, b), std::max(a, b)).second) r.single_transitions = false;
  }
  r.quotient_tree = quotient_is_tree(g, blocks);
  r.blocks_hyperbolic = true;
  r.max_block_delta = 0;
  for (const auto& b : blocks) {
    if (!is_connected(g, b)) {
      r.blocks_hyperbolic = false;
      continue;
    }
    Rational bd = gromov_delta(induced(g, b).graph);
    r.max_block_delta = std::max(r.max_block_delta, bd);
    if (bd > delta) r.blocks_hyperbolic = false;
  }
  r.whole_delta = gromov_delta(g);
  r.whole_hyperbolic = r.whole_delta <= delta;
  return r;
}

}  // namespace invmon
