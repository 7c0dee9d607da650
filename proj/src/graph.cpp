#include "invmon/graph.hpp"

#include <algorithm>
#include <deque>
#include <numeric>
#include <set>
#include <stdexcept>
#include <tuple>

namespace invmon {

Vertex InvWordGraph::add_vertex() {
  adj_.emplace_back();
  return num_vertices() - 1;
}

void InvWordGraph::add_edge(Vertex u, Letter x, Vertex v) {
  if (u < 0 || v < 0 || u >= num_vertices() || v >= num_vertices())
    throw std::out_of_range("add_edge: vertex out of range");
  adj_[static_cast<std::size_t>(u)].push_back({x, v});
  adj_[static_cast<std::size_t>(v)].push_back({x.inverse(), u});
}

std::optional<Vertex> InvWordGraph::follow(Vertex v, Letter x) const {
  for (const Arc& a : arcs(v))
    if (a.label == x) return a.to;
  return std::nullopt;
}

bool InvWordGraph::has_edge(Vertex u, Letter x, Vertex v) const {
  for (const Arc& a : arcs(u))
    if (a.label == x && a.to == v) return true;
  return false;
}

std::vector<Edge> InvWordGraph::edges() const {
  std::vector<Edge> out;
  for (Vertex v = 0; v < num_vertices(); ++v)
    for (const Arc& a : arcs(v))
      if (!a.label.is_inverse()) out.push_back({v, a.label, a.to});
  return out;
}

std::size_t InvWordGraph::num_edges() const {
  std::size_t n = 0;
  for (const auto& l : adj_) n += l.size();
  return n / 2;
}

bool InvWordGraph::is_deterministic() const {
  for (const auto& l : adj_)
    for (std::size_t i = 0; i < l.size(); ++i)
      for (std::size_t j = i + 1; j < l.size(); ++j)
        if (l[i].label == l[j].label) return false;
  return true;
}

VertexSet make_set(std::vector<Vertex> v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
  return v;
}

bool contains(const VertexSet& s, Vertex v) { return std::binary_search(s.begin(), s.end(), v); }

VertexSet set_union(const VertexSet& a, const VertexSet& b) {
  VertexSet out;
  std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

VertexSet set_intersection(const VertexSet& a, const VertexSet& b) {
  VertexSet out;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

VertexSet set_difference(const VertexSet& a, const VertexSet& b) {
  VertexSet out;
  std::set_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

VertexSet all_vertices(const InvWordGraph& g) {
  VertexSet v(static_cast<std::size_t>(g.num_vertices()));
  std::iota(v.begin(), v.end(), 0);
  return v;
}

namespace {

std::vector<Vertex> remap_list(const std::vector<Vertex>& xs, const std::vector<Vertex>& image) {
  std::vector<Vertex> out;
  for (Vertex x : xs) {
    Vertex y = image[static_cast<std::size_t>(x)];
    if (y >= 0 && std::find(out.begin(), out.end(), y) == out.end()) out.push_back(y);
  }
  return out;
}

}  // namespace

FoldResult fold_with_map(const InvWordGraph& g) {
  const int n = g.num_vertices();
  std::vector<int> parent(static_cast<std::size_t>(n));
  std::vector<int> size(static_cast<std::size_t>(n), 1);
  std::iota(parent.begin(), parent.end(), 0);
  std::vector<std::vector<Arc>> adj(static_cast<std::size_t>(n));
  for (Vertex v = 0; v < n; ++v) adj[static_cast<std::size_t>(v)] = g.arcs(v);

  auto find = [&](int x) {
    while (parent[static_cast<std::size_t>(x)] != x) {
      auto& p = parent[static_cast<std::size_t>(x)];
      p = parent[static_cast<std::size_t>(p)];
      x = p;
    }
    return x;
  };

  std::vector<Vertex> work(static_cast<std::size_t>(n));
  std::iota(work.begin(), work.end(), 0);
  std::vector<std::pair<int, int>> merges;
  while (!work.empty()) {
    Vertex v = find(work.back());
    work.pop_back();
    auto& lst = adj[static_cast<std::size_t>(v)];
    merges.clear();
    std::vector<Arc> kept;
    kept.reserve(lst.size());
    for (const Arc& a : lst) {
      int t = find(a.to);
      auto it = std::find_if(kept.begin(), kept.end(), [&](const Arc& k) { return k.label == a.label; });
      if (it == kept.end())
        kept.push_back({a.label, t});
      else if (find(it->to) != t)
        merges.emplace_back(it->to, t);
    }
    lst = std::move(kept);
    if (merges.empty()) continue;
    for (auto [p, q] : merges) {
      int rp = find(p), rq = find(q);
      if (rp == rq) continue;
      if (size[static_cast<std::size_t>(rp)] < size[static_cast<std::size_t>(rq)]) std::swap(rp, rq);
      parent[static_cast<std::size_t>(rq)] = rp;
      size[static_cast<std::size_t>(rp)] += size[static_cast<std::size_t>(rq)];
      auto& dst = adj[static_cast<std::size_t>(rp)];
      auto& src = adj[static_cast<std::size_t>(rq)];
      dst.insert(dst.end(), src.begin(), src.end());
      src.clear();
      src.shrink_to_fit();
      work.push_back(rp);
    }
    work.push_back(find(v));
  }

  FoldResult res;
  std::vector<Vertex> rootid(static_cast<std::size_t>(n), -1);
  res.image.assign(static_cast<std::size_t>(n), -1);
  int next = 0;
  for (Vertex v = 0; v < n; ++v) {
    int r = find(v);
    if (rootid[static_cast<std::size_t>(r)] < 0) rootid[static_cast<std::size_t>(r)] = next++;
    res.image[static_cast<std::size_t>(v)] = rootid[static_cast<std::size_t>(r)];
  }
  res.graph = InvWordGraph(next);
  std::set<std::tuple<int, std::uint32_t, int>> seen;
  for (Vertex v = 0; v < n; ++v) {
    if (find(v) != v) continue;
    for (const Arc& a : adj[static_cast<std::size_t>(v)]) {
      if (a.label.is_inverse()) continue;
      int s = rootid[static_cast<std::size_t>(v)];
      int t = rootid[static_cast<std::size_t>(find(a.to))];
      if (seen.emplace(s, a.label.code, t).second) res.graph.add_edge(s, a.label, t);
    }
  }
  for (const auto& [k, xs] : g.marks) res.graph.marks[k] = remap_list(xs, res.image);
  return res;
}

InvWordGraph fold(const InvWordGraph& g) { return fold_with_map(g).graph; }

std::optional<Vertex> read_word(const InvWordGraph& g, Vertex v, const InvWord& u) {
  for (Letter x : u) {
    auto nx = g.follow(v, x);
    if (!nx) return std::nullopt;
    v = *nx;
  }
  return v;
}

std::vector<int> bfs_distances(const InvWordGraph& g, const VertexSet& sources) {
  std::vector<int> d(static_cast<std::size_t>(g.num_vertices()), kInfinity);
  std::deque<Vertex> q;
  for (Vertex s : sources) {
    d[static_cast<std::size_t>(s)] = 0;
    q.push_back(s);
  }
  while (!q.empty()) {
    Vertex v = q.front();
    q.pop_front();
    for (const Arc& a : g.arcs(v)) {
      auto& dt = d[static_cast<std::size_t>(a.to)];
      if (dt == kInfinity) {
        dt = d[static_cast<std::size_t>(v)] + 1;
        q.push_back(a.to);
      }
    }
  }
  return d;
}

std::vector<int> bfs_distances(const InvWordGraph& g, Vertex source) {
  return bfs_distances(g, VertexSet{source});
}

int distance(const InvWordGraph& g, Vertex u, Vertex v) {
  return bfs_distances(g, u)[static_cast<std::size_t>(v)];
}

std::vector<std::vector<int>> distance_matrix(const InvWordGraph& g) {
  std::vector<std::vector<int>> m;
  m.reserve(static_cast<std::size_t>(g.num_vertices()));
  for (Vertex v = 0; v < g.num_vertices(); ++v) m.push_back(bfs_distances(g, v));
  return m;
}

std::optional<Path> geodesic(const InvWordGraph& g, Vertex u, Vertex v) {
  std::vector<int> prev(static_cast<std::size_t>(g.num_vertices()), -1);
  std::vector<Letter> via(static_cast<std::size_t>(g.num_vertices()));
  std::vector<bool> seen(static_cast<std::size_t>(g.num_vertices()), false);
  std::deque<Vertex> q{u};
  seen[static_cast<std::size_t>(u)] = true;
  while (!q.empty() && !seen[static_cast<std::size_t>(v)]) {
    Vertex x = q.front();
    q.pop_front();
    for (const Arc& a : g.arcs(x)) {
      if (seen[static_cast<std::size_t>(a.to)]) continue;
      seen[static_cast<std::size_t>(a.to)] = true;
      prev[static_cast<std::size_t>(a.to)] = x;
      via[static_cast<std::size_t>(a.to)] = a.label;
      q.push_back(a.to);
    }
  }
  if (!seen[static_cast<std::size_t>(v)]) return std::nullopt;
  Path p;
  for (Vertex x = v; x != u; x = prev[static_cast<std::size_t>(x)]) {
    p.vertices.push_back(x);
    p.labels.push_back(via[static_cast<std::size_t>(x)]);
  }
  p.vertices.push_back(u);
  std::reverse(p.vertices.begin(), p.vertices.end());
  std::reverse(p.labels.begin(), p.labels.end());
  return p;
}

Subgraph induced(const InvWordGraph& g, const VertexSet& keep) {
  Subgraph s;
  s.to_local.assign(static_cast<std::size_t>(g.num_vertices()), -1);
  s.to_parent = keep;
  s.graph = InvWordGraph(static_cast<int>(keep.size()));
  for (std::size_t i = 0; i < keep.size(); ++i) s.to_local[static_cast<std::size_t>(keep[i])] = static_cast<Vertex>(i);
  for (Vertex v : keep)
    for (const Arc& a : g.arcs(v)) {
      if (a.label.is_inverse()) continue;
      Vertex t = s.to_local[static_cast<std::size_t>(a.to)];
      if (t >= 0) s.graph.add_edge(s.to_local[static_cast<std::size_t>(v)], a.label, t);
    }
  for (const auto& [k, xs] : g.marks) {
    auto m = remap_list(xs, s.to_local);
    if (!m.empty()) s.graph.marks[k] = std::move(m);
  }
  return s;
}

VertexSet neighborhood_set(const InvWordGraph& g, const VertexSet& X, int r) {
  auto d = bfs_distances(g, X);
  VertexSet out;
  for (Vertex v = 0; v < g.num_vertices(); ++v)
    if (d[static_cast<std::size_t>(v)] <= r) out.push_back(v);
  return out;
}

Subgraph neighborhood(const InvWordGraph& g, const VertexSet& X, int r) {
  return induced(g, neighborhood_set(g, X, r));
}

std::vector<VertexSet> components(const InvWordGraph& g, const VertexSet& within) {
  std::vector<char> in(static_cast<std::size_t>(g.num_vertices()), 0);
  for (Vertex v : within) in[static_cast<std::size_t>(v)] = 1;
  std::vector<VertexSet> out;
  for (Vertex s : within) {
    if (in[static_cast<std::size_t>(s)] != 1) continue;
    VertexSet comp;
    std::deque<Vertex> q{s};
    in[static_cast<std::size_t>(s)] = 2;
    while (!q.empty()) {
      Vertex v = q.front();
      q.pop_front();
      comp.push_back(v);
      for (const Arc& a : g.arcs(v))
        if (in[static_cast<std::size_t>(a.to)] == 1) {
          in[static_cast<std::size_t>(a.to)] = 2;
          q.push_back(a.to);
        }
    }
    out.push_back(make_set(std::move(comp)));
  }
  return out;
}

bool is_connected(const InvWordGraph& g, const VertexSet& within) {
  return components(g, within).size() <= 1;
}

int induced_diameter(const InvWordGraph& g, const VertexSet& within) {
  if (within.empty()) return 0;
  Subgraph s = induced(g, within);
  int best = 0;
  for (Vertex v = 0; v < s.graph.num_vertices(); ++v)
    for (int d : bfs_distances(s.graph, v)) best = std::max(best, d);
  return best;
}

RelComponents components_rel(const InvWordGraph& g, const VertexSet& X, Vertex x0) {
  if (contains(X, x0)) throw std::invalid_argument("components_rel: base vertex lies in X");
  VertexSet rest = set_difference(all_vertices(g), X);
  RelComponents rc;
  for (auto& c : components(g, rest)) {
    if (contains(c, x0))
      rc.gamma = std::move(c);
    else
      rc.gamma_c = set_union(rc.gamma_c, c);
  }
  return rc;
}

bool rooted_iso(const BirootedAutomaton& a, const BirootedAutomaton& b) {
  const auto& ga = a.graph;
  const auto& gb = b.graph;
  if (ga.num_vertices() != gb.num_vertices() || ga.num_edges() != gb.num_edges()) return false;
  std::vector<Vertex> f(static_cast<std::size_t>(ga.num_vertices()), -1);
  std::vector<Vertex> finv(static_cast<std::size_t>(gb.num_vertices()), -1);
  f[static_cast<std::size_t>(a.start)] = b.start;
  finv[static_cast<std::size_t>(b.start)] = a.start;
  std::deque<Vertex> q{a.start};
  while (!q.empty()) {
    Vertex u = q.front();
    q.pop_front();
    Vertex fu = f[static_cast<std::size_t>(u)];
    if (ga.degree(u) != gb.degree(fu)) return false;
    for (const Arc& arc : ga.arcs(u)) {
      auto t = gb.follow(fu, arc.label);
      if (!t) return false;
      Vertex& ft = f[static_cast<std::size_t>(arc.to)];
      if (ft < 0) {
        if (finv[static_cast<std::size_t>(*t)] >= 0) return false;
        ft = *t;
        finv[static_cast<std::size_t>(*t)] = arc.to;
        q.push_back(arc.to);
      } else if (ft != *t) {
        return false;
      }
    }
  }
  for (Vertex v : f)
    if (v < 0) return false;
  return f[static_cast<std::size_t>(a.end)] == b.end;
}

namespace {

struct Signature {
  int color, center, degree;
  friend bool operator<(const Signature& x, const Signature& y) {
    return std::tie(x.color, x.center, x.degree) < std::tie(y.color, y.center, y.degree);
  }
  friend bool operator==(const Signature& x, const Signature& y) {
    return std::tie(x.color, x.center, x.degree) == std::tie(y.color, y.center, y.degree);
  }
};

Signature sig(const ColoredBall& b, Vertex v) {
  return {static_cast<int>(b.color[static_cast<std::size_t>(v)]),
          b.center[static_cast<std::size_t>(v)] ? 1 : 0, b.graph.degree(v)};
}

std::optional<std::vector<Vertex>> propagate(const ColoredBall& a, const ColoredBall& b, Vertex from,
                                             Vertex to) {
  const int n = a.graph.num_vertices();
  std::vector<Vertex> f(static_cast<std::size_t>(n), -1);
  std::vector<Vertex> finv(static_cast<std::size_t>(n), -1);
  const bool use_theta = a.theta && b.theta;
  const int shift = use_theta ? (*a.theta)[static_cast<std::size_t>(from)] - (*b.theta)[static_cast<std::size_t>(to)] : 0;
  auto compatible = [&](Vertex x, Vertex y) {
    if (!(sig(a, x) == sig(b, y))) return false;
    if (use_theta && (*a.theta)[static_cast<std::size_t>(x)] - (*b.theta)[static_cast<std::size_t>(y)] != shift)
      return false;
    return true;
  };
  if (!compatible(from, to)) return std::nullopt;
  f[static_cast<std::size_t>(from)] = to;
  finv[static_cast<std::size_t>(to)] = from;
  std::deque<Vertex> q{from};
  int mapped = 1;
  while (!q.empty()) {
    Vertex u = q.front();
    q.pop_front();
    Vertex fu = f[static_cast<std::size_t>(u)];
    for (const Arc& arc : a.graph.arcs(u)) {
      auto t = b.graph.follow(fu, arc.label);
      if (!t) return std::nullopt;
      Vertex& ft = f[static_cast<std::size_t>(arc.to)];
      if (ft < 0) {
        if (finv[static_cast<std::size_t>(*t)] >= 0 || !compatible(arc.to, *t)) return std::nullopt;
        ft = *t;
        finv[static_cast<std::size_t>(*t)] = arc.to;
        ++mapped;
        q.push_back(arc.to);
      } else if (ft != *t) {
        return std::nullopt;
      }
    }
  }
  if (mapped != n) return std::nullopt;
  return f;
}

}  // namespace

std::optional<std::vector<Vertex>> colored_iso(const ColoredBall& a, const ColoredBall& b) {
  const int n = a.graph.num_vertices();
  if (n != b.graph.num_vertices() || a.graph.num_edges() != b.graph.num_edges()) return std::nullopt;
  if (n == 0) return std::vector<Vertex>{};
  std::map<Signature, int> freq_a, freq_b;
  for (Vertex v = 0; v < n; ++v) {
    ++freq_a[sig(a, v)];
    ++freq_b[sig(b, v)];
  }
  if (freq_a != freq_b) return std::nullopt;
  Vertex anchor = 0;
  int best = kInfinity;
  for (Vertex v = 0; v < n; ++v) {
    int fr = freq_a[sig(a, v)];
    if (fr < best) {
      best = fr;
      anchor = v;
    }
  }
  const Signature s = sig(a, anchor);
  for (Vertex y = 0; y < n; ++y) {
    if (!(sig(b, y) == s)) continue;
    if (auto f = propagate(a, b, anchor, y)) return f;
  }
  return std::nullopt;
}

}  // namespace invmon
