#include <doctest.h>

#include <algorithm>

#include "invmon/graph_io.hpp"
#include "support.hpp"

using namespace invmon;
using testsupport::w;

namespace {

const Letter a = Letter::named("a");
const Letter b = Letter::named("b");

/// Merge vertex q into p and renumber.
InvWordGraph merge_vertices(const InvWordGraph& g, Vertex p, Vertex q, Vertex& tracked) {
  if (p > q) std::swap(p, q);
  auto id = [&](Vertex v) { return v == q ? p : (v > q ? v - 1 : v); };
  InvWordGraph h(g.num_vertices() - 1);
  for (const Edge& e : g.edges()) {
    Vertex s = id(e.src), t = id(e.dst);
    if (!h.has_edge(s, e.label, t)) h.add_edge(s, e.label, t);
  }
  tracked = id(tracked);
  return h;
}

/// Folding one conflict at a time, the conflict chosen by `rng`.
InvWordGraph naive_fold(InvWordGraph g, std::mt19937& rng, Vertex& tracked) {
  for (;;) {
    std::vector<std::pair<Vertex, Vertex>> conflicts;
    for (Vertex v = 0; v < g.num_vertices(); ++v) {
      const auto& arcs = g.arcs(v);
      for (std::size_t i = 0; i < arcs.size(); ++i)
        for (std::size_t j = i + 1; j < arcs.size(); ++j)
          if (arcs[i].label == arcs[j].label && arcs[i].to != arcs[j].to)
            conflicts.emplace_back(arcs[i].to, arcs[j].to);
    }
    if (conflicts.empty()) {
      // drop duplicate parallel arcs
      Vertex t = tracked;
      InvWordGraph h(g.num_vertices());
      for (const Edge& e : g.edges())
        if (!h.has_edge(e.src, e.label, e.dst)) h.add_edge(e.src, e.label, e.dst);
      tracked = t;
      return h;
    }
    std::uniform_int_distribution<std::size_t> pick(0, conflicts.size() - 1);
    auto [p, q] = conflicts[pick(rng)];
    g = merge_vertices(g, p, q, tracked);
  }
}

InvWordGraph random_connected(std::mt19937& rng, int n, int extra) {
  std::vector<Letter> labels{a, b};
  InvWordGraph g = testsupport::random_tree(rng, n, labels);
  std::uniform_int_distribution<int> v(0, n - 1);
  std::uniform_int_distribution<std::size_t> l(0, 1);
  for (int i = 0; i < extra; ++i) g.add_edge(v(rng), labels[l(rng)], v(rng));
  return g;
}

}  // namespace

TEST_CASE("fold: single fold and fixed point") {
  InvWordGraph g(3);
  g.add_edge(0, a, 1);
  g.add_edge(0, a, 2);
  InvWordGraph f = fold(g);
  CHECK(f.num_vertices() == 2);
  CHECK(f.num_edges() == 1);
  CHECK(f.is_deterministic());

  auto r = testsupport::ray(a, 4);
  InvWordGraph f2 = fold(r.graph);
  CHECK(rooted_iso(r, BirootedAutomaton{f2, 0, 0}));
}

TEST_CASE("fold: star of three parallel edges in every order") {
  InvWordGraph g(4);
  g.add_edge(0, a, 1);
  g.add_edge(0, a, 2);
  g.add_edge(0, a, 3);
  InvWordGraph f = fold(g);
  CHECK(f.num_vertices() == 2);
  CHECK(f.num_edges() == 1);
  std::vector<int> perm{1, 2, 3};
  int orders = 0;
  do {
    Vertex tracked = 0;
    InvWordGraph h = merge_vertices(g, perm[0], perm[1], tracked);
    Vertex third = perm[2] > std::max(perm[0], perm[1]) ? perm[2] - 1 : perm[2];
    Vertex first = std::min(perm[0], perm[1]);
    h = merge_vertices(h, first, third, tracked);
    std::mt19937 rng(0);
    h = naive_fold(h, rng, tracked);
    CHECK(rooted_iso(BirootedAutomaton{h, tracked, tracked}, BirootedAutomaton{f, 0, 0}));
    ++orders;
  } while (std::next_permutation(perm.begin(), perm.end()));
  CHECK(orders == 6);
}

TEST_CASE("fold: order independence on random graphs") {
  std::mt19937 rng(11);
  for (int trial = 0; trial < 25; ++trial) {
    std::uniform_int_distribution<int> nv(2, 12);
    InvWordGraph g = random_connected(rng, nv(rng), 6);
    FoldResult fr = fold_with_map(g);
    CHECK(fr.graph.is_deterministic());
    for (const Edge& e : g.edges())
      CHECK(fr.graph.has_edge(fr.image[e.src], e.label, fr.image[e.dst]));
    BirootedAutomaton ref{fr.graph, fr.image[0], fr.image[0]};
    for (int order = 0; order < 4; ++order) {
      Vertex tracked = 0;
      std::mt19937 r2(static_cast<unsigned>(trial * 10 + order));
      InvWordGraph h = naive_fold(g, r2, tracked);
      CHECK(rooted_iso(BirootedAutomaton{h, tracked, tracked}, ref));
    }
    InvWordGraph twice = fold(fr.graph);
    CHECK(rooted_iso(BirootedAutomaton{twice, 0, 0}, BirootedAutomaton{fr.graph, 0, 0}));
  }
}

TEST_CASE("fold carries marks") {
  InvWordGraph g(3);
  g.add_edge(0, a, 1);
  g.add_edge(0, a, 2);
  g.marks["end"] = {2};
  g.marks["M"] = {1, 2};
  InvWordGraph f = fold(g);
  CHECK(f.marks["end"] == std::vector<Vertex>{1});
  CHECK(f.marks["M"] == std::vector<Vertex>{1});
}

TEST_CASE("read_word") {
  auto r = testsupport::ray(a, 2);
  CHECK(read_word(r.graph, 0, w("a a")) == 2);
  CHECK_FALSE(read_word(r.graph, 0, w("a'")).has_value());
  CHECK(read_word(r.graph, 1, w("1")) == 1);
  // the base of the bicyclic ray after one expansion has no inverse edge out
  Presentation bicyclic = make_presentation({"a"}, {{"a a'", "1"}});
  auto e1 = expand(w("1"), bicyclic, 1);
  CHECK_FALSE(read_word(e1.graph(), e1.automaton.start, w("a'")).has_value());
}

TEST_CASE("distance and geodesic") {
  auto p = testsupport::ray(a, 3);
  CHECK(distance(p.graph, 0, 3) == 3);
  auto geo = geodesic(p.graph, 0, 3);
  REQUIRE(geo);
  CHECK(geo->labels == w("a a a"));
  CHECK(geo->vertices.size() == 4);

  InvWordGraph two(2);
  CHECK(distance(two, 0, 1) == kInfinity);
  CHECK_FALSE(geodesic(two, 0, 1).has_value());

  InvWordGraph cyc(8);
  for (int i = 0; i < 8; ++i) cyc.add_edge(i, a, (i + 1) % 8);
  CHECK(distance(cyc, 0, 4) == 4);
  CHECK(distance(cyc, 1, 7) == 2);
}

TEST_CASE("distance is a metric on random connected graphs") {
  std::mt19937 rng(3);
  for (int t = 0; t < 20; ++t) {
    InvWordGraph g = random_connected(rng, 10, 4);
    auto d = distance_matrix(g);
    std::uniform_int_distribution<int> v(0, 9);
    for (int k = 0; k < 30; ++k) {
      int x = v(rng), y = v(rng), z = v(rng);
      CHECK(d[x][y] == d[y][x]);
      CHECK(d[x][z] <= d[x][y] + d[y][z]);
    }
  }
}

TEST_CASE("neighborhood") {
  auto r = testsupport::ray(a, 2);
  CHECK(neighborhood_set(r.graph, {1}, 0) == VertexSet{1});
  CHECK(neighborhood_set(r.graph, {1}, 1) == VertexSet{0, 1, 2});
  CHECK(neighborhood_set(r.graph, {0}, 2) == VertexSet{0, 1, 2});
  Subgraph s = neighborhood(r.graph, {1}, 1);
  CHECK(s.graph.num_vertices() == 3);
  CHECK(s.graph.num_edges() == 2);
  Subgraph s0 = neighborhood(r.graph, {0, 1}, 0);
  CHECK(s0.graph.num_edges() == 1);
}

TEST_CASE("components_rel") {
  // u - X - v
  auto p = testsupport::ray(a, 2);
  auto rc = components_rel(p.graph, {1}, 0);
  CHECK(rc.gamma == VertexSet{0});
  CHECK(rc.gamma_c == VertexSet{2});
  auto leaf = components_rel(p.graph, {2}, 0);
  CHECK(leaf.gamma_c.empty());
  CHECK_THROWS_AS(components_rel(p.graph, {0}, 0), std::invalid_argument);
  // v-2 .. v2 as 0..4, X = {v0}
  auto line = testsupport::ray(a, 4);
  auto lc = components_rel(line.graph, {2}, 0);
  CHECK(lc.gamma == VertexSet{0, 1});
  CHECK(lc.gamma_c == VertexSet{3, 4});
}

TEST_CASE("components_rel partitions the vertex set") {
  std::mt19937 rng(5);
  for (int t = 0; t < 30; ++t) {
    InvWordGraph g = random_connected(rng, 12, 3);
    std::uniform_int_distribution<int> v(1, 11);
    VertexSet X = make_set({v(rng), v(rng)});
    auto rc = components_rel(g, X, 0);
    CHECK(set_intersection(rc.gamma, rc.gamma_c).empty());
    CHECK(set_union(set_union(rc.gamma, rc.gamma_c), X) == all_vertices(g));
  }
}

TEST_CASE("rooted_iso") {
  auto r = testsupport::ray(a, 3, 2);
  InvWordGraph renamed(4);
  // 0->3, 1->0, 2->2, 3->1
  renamed.add_edge(3, a, 0);
  renamed.add_edge(0, a, 2);
  renamed.add_edge(2, a, 1);
  CHECK(rooted_iso(r, BirootedAutomaton{renamed, 3, 2}));
  CHECK_FALSE(rooted_iso(r, BirootedAutomaton{renamed, 3, 1}));
  CHECK_FALSE(rooted_iso(munn_tree(w("a b b'")), munn_tree(w("a"))));
  CHECK(rooted_iso(munn_tree(w("a a' a")), munn_tree(w("a"))));
}

TEST_CASE("rooted_iso is an equivalence on generated automata") {
  std::mt19937 rng(9);
  auto letters = testsupport::doubled({"a", "b"});
  std::vector<BirootedAutomaton> xs;
  for (int i = 0; i < 30; ++i) xs.push_back(munn_tree(testsupport::random_word(rng, letters, 5)));
  for (auto& x : xs) CHECK(rooted_iso(x, x));
  for (auto& x : xs)
    for (auto& y : xs) {
      CHECK(rooted_iso(x, y) == rooted_iso(y, x));
      if (!rooted_iso(x, y)) continue;
      for (auto& z : xs)
        if (rooted_iso(y, z)) CHECK(rooted_iso(x, z));
    }
}

namespace {

ColoredBall ball_of(const InvWordGraph& g, Vertex c, int r, const std::vector<Vertex>& red) {
  Subgraph s = neighborhood(g, {c}, r);
  ColoredBall b;
  b.graph = s.graph;
  for (Vertex v : s.to_parent) {
    b.color.push_back(std::find(red.begin(), red.end(), v) != red.end() ? Color::Red : Color::Blue);
    b.center.push_back(v == c);
  }
  return b;
}

}  // namespace

TEST_CASE("colored_iso") {
  auto line = testsupport::ray(a, 8);  // v-4 .. v4 as 0..8
  ColoredBall x = ball_of(line.graph, 4, 2, {5, 6});
  auto id = colored_iso(x, x);
  REQUIRE(id);
  for (Vertex v = 0; v < x.graph.num_vertices(); ++v) CHECK((*id)[v] == v);

  ColoredBall y = x;
  y.color[3] = Color::Blue;  // vertex 5 recolored
  CHECK_FALSE(colored_iso(x, y).has_value());

  // exhaustive anchoring oracle for the shift on the line
  ColoredBall s = ball_of(line.graph, 5, 2, {6, 7});
  auto f = colored_iso(x, s);
  REQUIRE(f);
  Subgraph bx = neighborhood(line.graph, {4}, 2), bs = neighborhood(line.graph, {5}, 2);
  for (Vertex v = 0; v < x.graph.num_vertices(); ++v) CHECK(bs.to_parent[(*f)[v]] == bx.to_parent[v] + 1);

  ColoredBall t = x, u = s;
  t.theta = std::vector<int>{-2, -1, 0, 1, 2};
  u.theta = std::vector<int>{-1, 0, 1, 2, 3};
  CHECK(colored_iso(t, u).has_value());
  u.theta = std::vector<int>{-1, 0, 1, 2, 4};
  CHECK_FALSE(colored_iso(t, u).has_value());
}

TEST_CASE("json round trip and dot") {
  std::mt19937 rng(1);
  for (int t = 0; t < 20; ++t) {
    InvWordGraph g = random_connected(rng, 8, 3);
    g.marks["start"] = {0};
    InvWordGraph h = import_json(export_json(g));
    CHECK(h.num_vertices() == g.num_vertices());
    CHECK(h.edges() == g.edges());
    CHECK(h.marks == g.marks);
  }
  InvWordGraph empty;
  CHECK(import_json(export_json(empty)).num_vertices() == 0);
  CHECK(export_dot(empty).find("digraph") != std::string::npos);

  InvWordGraph two(2);
  two.add_edge(0, a, 1);
  std::string dot = export_dot(two);
  CHECK(std::count(dot.begin(), dot.end(), '>') == 1);
  CHECK(dot.find("label=\"a\"") != std::string::npos);

  CHECK_THROWS_AS(import_json("{\"vertices\":[0],\"edges\":[{\"src\":0,\"label\":\"a\",\"dst\":5}]}"), SchemaError);
  CHECK_THROWS_AS(import_json("{\"edges\":[]}"), SchemaError);
  CHECK_THROWS_AS(import_json("[1,2"), SchemaError);
  InvWordGraph sparse = import_json(
      "{\"vertices\":[10,20],\"edges\":[{\"src\":20,\"label\":\"b'\",\"dst\":10}],\"marks\":{\"end\":[20]}}");
  CHECK(sparse.has_edge(0, b, 1));
  CHECK(sparse.marks["end"] == std::vector<Vertex>{1});
}
