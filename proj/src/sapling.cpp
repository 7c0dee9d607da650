#include "invmon/sapling.hpp"

#include <algorithm>
#include <deque>
#include <numeric>
#include <set>

#include "invmon/graph_io.hpp"

namespace invmon {

namespace {

std::size_t ix(int v) { return static_cast<std::size_t>(v); }

bool subset(const VertexSet& a, const VertexSet& b) { return std::includes(b.begin(), b.end(), a.begin(), a.end()); }

// Extend `seed` along every arc of src inside `domain`; dst must follow. Fails on
// a missing arc, a clash, an unreached domain vertex or a non-injective result.
std::optional<VertexMap> forced_map(const InvWordGraph& src, const VertexSet& domain, const InvWordGraph& dst,
                                   VertexMap seed) {
  VertexMap f = std::move(seed);
  std::deque<Vertex> q;
  for (const auto& kv : f) q.push_back(kv.first);
  while (!q.empty()) {
    Vertex u = q.front();
    q.pop_front();
    Vertex fu = f.at(u);
    for (const Arc& a : src.arcs(u)) {
      if (!contains(domain, a.to)) continue;
      auto t = dst.follow(fu, a.label);
      if (!t) return std::nullopt;
      auto [it, fresh] = f.try_emplace(a.to, *t);
      if (fresh)
        q.push_back(a.to);
      else if (it->second != *t)
        return std::nullopt;
    }
  }
  if (f.size() != domain.size()) return std::nullopt;
  std::set<Vertex> img;
  for (const auto& kv : f)
    if (!img.insert(kv.second).second) return std::nullopt;
  return f;
}

VertexSet image_of(const VertexMap& f, const VertexSet& xs) {
  std::vector<Vertex> out;
  for (Vertex x : xs) out.push_back(f.at(x));
  return make_set(std::move(out));
}

std::size_t induced_edge_count(const InvWordGraph& g, const VertexSet& vs) { return induced(g, vs).graph.num_edges(); }

void check_subset_precondition(const InvWordGraph& S, const VertexSet& X, Vertex x0, const VertexSet& M,
                               const char* what) {
  const std::string w(what);
  if (X.empty()) throw PreconditionError(w + " is empty");
  for (Vertex v : X)
    if (v < 0 || v >= S.num_vertices()) throw PreconditionError(w + " has an unknown vertex " + std::to_string(v));
  if (contains(X, x0)) throw PreconditionError(w + " contains the base vertex");
  if (!set_intersection(X, M).empty()) throw PreconditionError(w + " meets the word path M");
  if (!is_connected(S, X)) throw PreconditionError(w + " is not connected");
}

VertexSet intersect_gammas(const InvWordGraph& g, const std::vector<VertexSet>& gammas) {
  VertexSet inter = all_vertices(g);
  for (const auto& gm : gammas) inter = set_intersection(inter, gm);
  return inter;
}

bool far_apart(const InvWordGraph& g, const VertexSet& A, const VertexSet& B) {
  if (!set_intersection(A, B).empty()) return false;
  for (Vertex u : A)
    for (const Arc& a : g.arcs(u))
      if (contains(B, a.to)) return false;
  return true;
}

// exp_k of a standalone ball, with the ball's vertices tracked.
struct ExpansionTrack {
  Subgraph ball;
  InvWordGraph h;
  std::vector<Vertex> img;  // ball-local -> h
  int k = 0;

  ExpansionTrack(const InvWordGraph& S, const VertexSet& X, int K) : ball(induced(S, neighborhood_set(S, X, K))) {
    h = ball.graph;
    img.resize(ix(h.num_vertices()));
    std::iota(img.begin(), img.end(), 0);
  }
  void step(const Presentation& P) {
    FoldResult fr = exp1_with_map(h, P);
    for (auto& v : img) v = fr.image[ix(v)];
    h = std::move(fr.graph);
    ++k;
  }
  bool embeds(const InvWordGraph& S, const VertexSet& domain, const VertexSet& X) const {
    VertexMap seed;
    for (Vertex x : X) seed[x] = img[ix(ball.to_local[ix(x)])];
    return forced_map(S, domain, h, seed).has_value();
  }
};

VertexSet embed_domain(const InvWordGraph& S, const VertexSet& X, Vertex x0) {
  return set_union(X, components_rel(S, X, x0).gamma_c);
}

}  // namespace

ColoredNeighborhood color_neighborhood(const InvWordGraph& S, const VertexSet& X, Vertex x0, int K,
                                       const VertexSet& M) {
  check_subset_precondition(S, X, x0, M, "X");
  VertexSet ball = neighborhood_set(S, X, K);
  VertexSet red = set_intersection(ball, components_rel(S, X, x0).gamma_c);
  Subgraph sub = induced(S, ball);
  ColoredNeighborhood c;
  c.to_parent = sub.to_parent;
  c.to_local = sub.to_local;
  const auto n = sub.to_parent.size();
  c.ball.color.assign(n, Color::Blue);
  c.ball.center.assign(n, false);
  for (std::size_t i = 0; i < n; ++i) {
    Vertex v = sub.to_parent[i];
    if (contains(red, v)) c.ball.color[i] = Color::Red;
    if (contains(X, v)) c.ball.center[i] = true;
  }
  c.ball.graph = std::move(sub.graph);
  return c;
}

std::variant<SaplingCandidate, Violation> candidate_check(const ApproxAutomaton& S, const std::vector<VertexSet>& Y,
                                                          const std::vector<VertexSet>& X, const Presentation& P) {
  const InvWordGraph& g = S.graph();
  const Vertex x0 = S.automaton.start;
  const VertexSet M = S.path_vertices();
  const int K = P.K();
  const std::size_t n = Y.size();
  if (X.size() != n) return Violation{0, "Y and X lists differ in length", {}};

  std::vector<RelComponents> rc;
  for (std::size_t i = 0; i < n; ++i) {
    try {
      check_subset_precondition(g, Y[i], x0, M, ("Y" + std::to_string(i + 1)).c_str());
    } catch (const PreconditionError& e) {
      return Violation{0, e.what(), Y[i]};
    }
    rc.push_back(components_rel(g, Y[i], x0));
  }
  std::vector<VertexSet> gammas;
  for (const auto& r : rc) gammas.push_back(r.gamma);
  const VertexSet inter = intersect_gammas(g, gammas);
  if (!is_relatively_p_complete(inter, g, P))
    return Violation{1, "intersection of the near sides is not relatively P-complete", inter};
  for (std::size_t i = 0; i < n; ++i) {
    VertexSet outside = set_difference(rc[i].gamma_c, neighborhood_set(g, Y[i], K));
    if (!outside.empty())
      return Violation{2, "far side of Y" + std::to_string(i + 1) + " leaves its K-neighborhood", outside};
  }
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (!far_apart(g, set_union(Y[i], rc[i].gamma_c), set_union(Y[j], rc[j].gamma_c)))
        return Violation{3, "Y" + std::to_string(i + 1) + " and Y" + std::to_string(j + 1) + " are closer than 2",
                         set_union(Y[i], Y[j])};

  SaplingCandidate c;
  c.S = S;
  c.Y = Y;
  c.X = X;
  c.K = K;
  for (std::size_t i = 0; i < n; ++i) {
    ColoredNeighborhood cx, cy;
    try {
      cx = color_neighborhood(g, X[i], x0, K, M);
      cy = color_neighborhood(g, Y[i], x0, K, M);
    } catch (const PreconditionError& e) {
      return Violation{0, e.what(), X[i]};
    }
    if (!subset(neighborhood_set(g, X[i], K), inter))
      return Violation{4, "X" + std::to_string(i + 1) + "^{+K} leaves the near sides", X[i]};
    auto f = colored_iso(cx.ball, cy.ball);
    if (!f) return Violation{4, "X" + std::to_string(i + 1) + "^{+K} and Y" + std::to_string(i + 1) +
                                    "^{+K} are not colored-isomorphic", X[i]};
    VertexMap phi;
    for (std::size_t l = 0; l < f->size(); ++l) phi[cx.to_parent[l]] = cy.to_parent[ix((*f)[l])];
    c.phi.push_back(std::move(phi));
  }
  return c;
}

bool embeds_after_expansion(const InvWordGraph& S, Vertex x0, const VertexSet& X, int K, const Presentation& P,
                            int k) {
  ExpansionTrack t(S, X, K);
  for (int i = 0; i < k; ++i) t.step(P);
  return t.embeds(S, embed_domain(S, X, x0), X);
}

std::optional<Sapling> sapling_check(const SaplingCandidate& c, int k) {
  for (std::size_t i = 0; i < c.X.size(); ++i)
    if (!embeds_after_expansion(c.graph(), c.x0(), c.X[i], c.K, c.S.presentation, k)) return std::nullopt;
  Sapling s;
  static_cast<SaplingCandidate&>(s) = c;
  s.k = k;
  return s;
}

std::optional<Violation> verify_sapling(const Sapling& s) {
  auto r = candidate_check(s.S, s.Y, s.X, s.S.presentation);
  if (auto* v = std::get_if<Violation>(&r)) return *v;
  if (s.K != s.S.presentation.K()) return Violation{0, "K does not match the presentation", {}};
  const InvWordGraph& g = s.graph();
  if (s.phi.size() != s.X.size()) return Violation{4, "phi list has the wrong length", {}};
  for (std::size_t i = 0; i < s.X.size(); ++i) {
    const std::string name = "phi" + std::to_string(i + 1);
    VertexSet dom = neighborhood_set(g, s.X[i], s.K);
    VertexSet codom = neighborhood_set(g, s.Y[i], s.K);
    const VertexMap& f = s.phi[i];
    std::vector<Vertex> keys;
    for (const auto& kv : f) keys.push_back(kv.first);
    if (make_set(keys) != dom) return Violation{4, name + " is not defined on X^{+K}", dom};
    auto fm = forced_map(g, dom, g, {{s.X[i].front(), f.at(s.X[i].front())}});
    if (!fm || *fm != f) return Violation{4, name + " does not respect the edges", s.X[i]};
    if (image_of(f, dom) != codom || induced_edge_count(g, dom) != induced_edge_count(g, codom))
      return Violation{4, name + " is not onto Y^{+K}", s.Y[i]};
    if (image_of(f, s.X[i]) != s.Y[i]) return Violation{4, name + " does not map X onto Y", s.X[i]};
    VertexSet redx = set_intersection(dom, components_rel(g, s.X[i], s.x0()).gamma_c);
    VertexSet redy = set_intersection(codom, components_rel(g, s.Y[i], s.x0()).gamma_c);
    if (image_of(f, redx) != redy) return Violation{4, name + " does not respect colors", s.X[i]};
  }
  for (std::size_t i = 0; i < s.X.size(); ++i)
    if (!embeds_after_expansion(g, s.x0(), s.X[i], s.K, s.S.presentation, s.k))
      return Violation{5, "X" + std::to_string(i + 1) + " and its far side do not embed in exp_k", s.X[i]};
  return std::nullopt;
}

Sapling trivial_sapling(const ApproxAutomaton& complete, int K) {
  Sapling s;
  s.S = complete;
  s.K = K;
  s.k = 0;
  return s;
}

GrowResult grow_with_parents(const Sapling& s) {
  const InvWordGraph& g = s.graph();
  const Vertex x0 = s.x0();
  const int n = g.num_vertices();
  InvWordGraph h = g;
  std::vector<VertexSet> gc(s.X.size());
  std::vector<VertexMap> psi(s.X.size());
  for (std::size_t i = 0; i < s.X.size(); ++i) {
    gc[i] = components_rel(g, s.X[i], x0).gamma_c;
    VertexSet ball = neighborhood_set(g, s.X[i], s.K);
    for (Vertex t : gc[i]) psi[i][t] = contains(ball, t) ? s.phi[i].at(t) : h.add_vertex();
    for (const Edge& e : g.edges()) {
      if (!contains(gc[i], e.src) || !contains(gc[i], e.dst)) continue;
      Vertex u = psi[i][e.src], v = psi[i][e.dst];
      if (!h.has_edge(u, e.label, v)) h.add_edge(u, e.label, v);
    }
  }
  if (!h.is_deterministic()) throw std::logic_error("grow: glued graph is not deterministic");

  GrowResult r;
  Sapling& t = r.sapling;
  t.S = s.S;
  t.S.automaton.graph = std::move(h);
  t.K = s.K;
  t.k = s.k;
  const InvWordGraph& hg = t.graph();
  for (std::size_t i = 0; i < s.X.size(); ++i) {
    for (std::size_t j = 0; j < s.Y.size(); ++j) {
      if (!subset(s.Y[j], gc[i])) continue;
      VertexMap phi;
      for (Vertex z : neighborhood_set(hg, s.Y[j], s.K)) {
        if (z >= n) throw std::logic_error("grow: neighborhood of an old Y reaches a new vertex");
        if (contains(gc[i], z))
          phi[z] = psi[i].at(z);
        else if (auto it = s.phi[i].find(z); it != s.phi[i].end())
          phi[z] = it->second;
        else
          throw std::logic_error("grow: neighborhood of Y outside the glued region");
      }
      t.Y.push_back(image_of(psi[i], s.Y[j]));
      t.X.push_back(s.Y[j]);
      t.phi.push_back(std::move(phi));
      r.parent.push_back(static_cast<int>(i));
    }
  }
  return r;
}

Sapling grow(const Sapling& s) { return grow_with_parents(s).sapling; }

Materialized materialize_with_history(const Sapling& s, int steps) {
  Materialized m;
  m.sapling = s;
  m.levels.push_back(s.Y);
  m.parents.emplace_back();
  for (int i = 0; i < steps; ++i) {
    GrowResult r = grow_with_parents(m.sapling);
    m.levels.push_back(r.sapling.Y);
    m.parents.push_back(std::move(r.parent));
    m.sapling = std::move(r.sapling);
  }
  return m;
}

ApproxAutomaton materialize(const Sapling& s, int steps) { return materialize_with_history(s, steps).sapling.S; }

TreePartition tree_partition(const Sapling& s0, const Materialized& m) {
  const InvWordGraph& g = m.sapling.graph();
  const Vertex x0 = m.sapling.x0();
  TreePartition tp;
  auto gamma = [&](const VertexSet& Y) { return components_rel(g, Y, x0); };

  VertexSet core = all_vertices(g);
  VertexSet ys;
  for (const auto& Y : m.levels[0]) {
    core = set_intersection(core, gamma(Y).gamma);
    ys = set_union(ys, Y);
  }
  core = set_union(core, ys);
  tp.blocks.push_back(core);

  for (std::size_t l = 0; l < m.levels.size(); ++l) {
    for (std::size_t j = 0; j < m.levels[l].size(); ++j) {
      VertexSet region = gamma(m.levels[l][j]).gamma_c;
      if (l + 1 < m.levels.size()) {
        VertexSet kids;
        for (std::size_t c = 0; c < m.levels[l + 1].size(); ++c) {
          if (m.parents[l + 1][c] != static_cast<int>(j)) continue;
          const VertexSet& Yc = m.levels[l + 1][c];
          region = set_intersection(region, gamma(Yc).gamma);
          kids = set_union(kids, Yc);
        }
        region = set_union(region, kids);
      }
      for (auto& comp : components(g, region)) tp.blocks.push_back(std::move(comp));
    }
  }

  const InvWordGraph& g0 = s0.graph();
  int ysum = 0;
  for (const auto& Y : s0.Y) ysum += induced_diameter(g0, Y) + 1;
  int bound = induced_diameter(g, core);
  for (const auto& X : s0.X)
    for (const auto& comp : components(g0, components_rel(g0, X, s0.x0()).gamma_c))
      bound = std::max(bound, induced_diameter(g0, comp) + ysum);
  tp.width_bound = bound;
  return tp;
}

// ---------------------------------------------------------------------------
// Search

namespace {

struct XOption {
  VertexSet X;
  VertexMap phi;  // X^{+K} -> Y^{+K}
  VertexSet ball;
};

struct YCand {
  VertexSet Y;
  VertexSet gamma;
  VertexSet closure;  // Y with its far side
  std::vector<XOption> xs;
};

struct Stage {
  ApproxAutomaton A;
  VertexSet M;
  bool complete = false;
  std::map<int, std::vector<YCand>> ycands;  // by D
};

struct XTrack {
  XOption opt;
  VertexSet domain;
  ExpansionTrack exp;
  bool dead = false;
};

struct Entry {
  int m = 0;
  std::vector<VertexSet> Y;
  std::vector<std::vector<XTrack>> xs;
  int k = 0;
};

// Connected vertex sets containing v as their least element, inside `allowed`.
void enumerate_connected(const InvWordGraph& g, Vertex v, const std::vector<bool>& allowed, int max_size,
                         std::size_t cap, std::vector<VertexSet>& out) {
  std::vector<Vertex> sub{v};
  std::function<void(std::vector<Vertex>, std::set<Vertex>)> extend = [&](std::vector<Vertex> ext,
                                                                         std::set<Vertex> nbhd) {
    out.push_back(make_set(sub));
    if (static_cast<int>(sub.size()) >= max_size || out.size() >= cap) return;
    while (!ext.empty()) {
      Vertex w = ext.back();
      ext.pop_back();
      std::vector<Vertex> ext2 = ext;
      std::set<Vertex> nb2 = nbhd;
      for (const Arc& a : g.arcs(w)) {
        Vertex u = a.to;
        if (u <= v || !allowed[ix(u)] || nbhd.count(u)) continue;
        if (std::find(sub.begin(), sub.end(), u) != sub.end()) continue;
        if (nb2.insert(u).second) ext2.push_back(u);
      }
      sub.push_back(w);
      extend(ext2, nb2);
      sub.pop_back();
      if (out.size() >= cap) return;
    }
  };
  std::vector<Vertex> ext;
  std::set<Vertex> nbhd{v};
  for (const Arc& a : g.arcs(v)) {
    Vertex u = a.to;
    if (u <= v || !allowed[ix(u)]) continue;
    if (nbhd.insert(u).second) ext.push_back(u);
  }
  extend(ext, nbhd);
}

// Every X whose colored K-ball is a forced copy of Y's and lies on the near side of Y.
std::vector<XOption> x_options(const InvWordGraph& g, Vertex x0, const VertexSet& M, const VertexSet& Y,
                               const VertexSet& gammaY, int K) {
  std::vector<XOption> out;
  VertexSet ballY = neighborhood_set(g, Y, K);
  VertexSet redY = set_intersection(ballY, components_rel(g, Y, x0).gamma_c);
  const std::size_t edgesY = induced_edge_count(g, ballY);
  const Vertex anchor = Y.front();
  for (Vertex x = 0; x < g.num_vertices(); ++x) {
    if (contains(M, x) || !contains(gammaY, x)) continue;
    auto f = forced_map(g, ballY, g, {{anchor, x}});
    if (!f) continue;
    VertexSet X = image_of(*f, Y);
    if (contains(X, x0) || !set_intersection(X, M).empty()) continue;
    VertexSet img = image_of(*f, ballY);
    if (neighborhood_set(g, X, K) != img) continue;
    if (!subset(img, gammaY)) continue;
    if (induced_edge_count(g, img) != edgesY) continue;
    VertexSet redX = set_intersection(img, components_rel(g, X, x0).gamma_c);
    if (image_of(*f, redY) != redX) continue;
    XOption o;
    o.X = X;
    o.ball = img;
    for (const auto& [y, xx] : *f) o.phi[xx] = y;
    out.push_back(std::move(o));
  }
  return out;
}

class Searcher {
 public:
  Searcher(const InvWord& w, const Presentation& P, const SearchOptions& o) : P_(P), K_(P.K()), opts_(o) {
    stages_.push_back(make_stage(initial_approx(w, P)));
  }

  SearchResult run(int budget, const std::function<void(const SearchProgress&)>& progress,
                   const std::atomic<bool>* cancel) {
    SearchResult res;
    for (int round = 0; round < budget; ++round) {
      if (cancel && cancel->load()) break;
      res.rounds = round + 1;
      const int t = round + 1;
      Stage& top = stage(t - 1);
      res.stage = t - 1;
      if (top.complete) {
        res.status = SearchStatus::Finite;
        res.finite = top.A;
        res.list_size = entries_.size();
        return res;
      }
      for (auto& e : entries_) {
        for (auto& opts : e.xs)
          for (auto& x : opts)
            if (!x.dead) {
              x.exp.step(P_);
              if (x.exp.h.num_vertices() > kMaxExpansion) x.dead = true;
            }
        ++e.k;
      }
      for (int m = 0; m < t; ++m)
        for (int N = 1; N <= t - m; ++N) process(t - m - N, N, m);
      for (std::size_t i = 0; i < entries_.size(); ++i) {
        if (auto s = try_entry(entries_[i])) {
          res.status = SearchStatus::Sapling;
          res.sapling = std::move(s);
          res.list_size = entries_.size();
          return res;
        }
      }
      res.list_size = entries_.size();
      if (progress) progress({round, t - 1, entries_.size()});
    }
    res.status = SearchStatus::Exhausted;
    return res;
  }

 private:
  static constexpr int kMaxExpansion = 20000;

  Stage make_stage(ApproxAutomaton a) {
    Stage s;
    s.M = a.path_vertices();
    s.complete = is_p_complete(a.graph(), P_);
    s.A = std::move(a);
    return s;
  }

  Stage& stage(int m) {
    while (static_cast<int>(stages_.size()) <= m) stages_.push_back(make_stage(exp_step(stages_.back().A)));
    return stages_[ix(m)];
  }

  const std::vector<YCand>& ycands(int m, int D) {
    Stage& st = stage(m);
    auto it = st.ycands.find(D);
    if (it != st.ycands.end()) return it->second;
    const InvWordGraph& g = st.A.graph();
    const Vertex x0 = st.A.automaton.start;
    auto dist = distance_matrix(g);
    std::vector<YCand> out;
    for (Vertex v = 0; v < g.num_vertices(); ++v) {
      if (contains(st.M, v)) continue;
      std::vector<bool> allowed(ix(g.num_vertices()), false);
      for (Vertex u = 0; u < g.num_vertices(); ++u)
        allowed[ix(u)] = !contains(st.M, u) && dist[ix(v)][ix(u)] <= D;
      std::vector<VertexSet> sets;
      enumerate_connected(g, v, allowed, opts_.max_y_size, 20000, sets);
      for (auto& Y : sets) {
        if (induced_diameter(g, Y) > D) continue;
        RelComponents rc = components_rel(g, Y, x0);
        if (rc.gamma_c.empty()) continue;
        if (!subset(rc.gamma_c, neighborhood_set(g, Y, K_))) continue;
        YCand c;
        c.xs = x_options(g, x0, st.M, Y, rc.gamma, K_);
        if (c.xs.empty()) continue;
        c.Y = Y;
        c.gamma = rc.gamma;
        c.closure = set_union(Y, rc.gamma_c);
        out.push_back(std::move(c));
      }
    }
    return st.ycands.emplace(D, std::move(out)).first->second;
  }

  void process(int D, int N, int m) {
    const auto& cands = ycands(m, D);
    const InvWordGraph& g = stage(m).A.graph();
    int tried = 0;
    std::vector<std::size_t> pick;
    std::function<void(std::size_t)> rec = [&](std::size_t from) {
      if (tried >= opts_.max_systems) return;
      if (!pick.empty()) {
        ++tried;
        consider(m, pick, cands);
      }
      if (static_cast<int>(pick.size()) >= N) return;
      for (std::size_t c = from; c < cands.size(); ++c) {
        bool ok = true;
        for (std::size_t p : pick) ok = ok && far_apart(g, cands[p].closure, cands[c].closure);
        if (!ok) continue;
        pick.push_back(c);
        rec(c + 1);
        pick.pop_back();
        if (tried >= opts_.max_systems) return;
      }
    };
    rec(0);
  }

  void consider(int m, const std::vector<std::size_t>& pick, const std::vector<YCand>& cands) {
    std::vector<VertexSet> Ys;
    for (std::size_t p : pick) Ys.push_back(cands[p].Y);
    std::vector<VertexSet> key = Ys;
    std::sort(key.begin(), key.end());
    if (!seen_.insert({m, key}).second) return;
    Stage& st = stage(m);
    const InvWordGraph& g = st.A.graph();
    std::vector<VertexSet> gammas;
    for (std::size_t p : pick) gammas.push_back(cands[p].gamma);
    VertexSet inter = intersect_gammas(g, gammas);
    if (!is_relatively_p_complete(inter, g, P_)) return;
    Entry e;
    e.m = m;
    e.Y = Ys;
    for (std::size_t p : pick) {
      std::vector<XTrack> opts;
      for (const XOption& o : cands[p].xs) {
        if (!subset(o.ball, inter)) continue;
        opts.push_back(XTrack{o, embed_domain(g, o.X, st.A.automaton.start), ExpansionTrack(g, o.X, K_)});
        if (static_cast<int>(opts.size()) >= opts_.max_x_options) break;
      }
      if (opts.empty()) return;
      e.xs.push_back(std::move(opts));
    }
    entries_.push_back(std::move(e));
  }

  std::optional<Sapling> try_entry(const Entry& e) {
    const Stage& st = stages_[ix(e.m)];
    const InvWordGraph& g = st.A.graph();
    std::vector<const XTrack*> chosen;
    for (const auto& opts : e.xs) {
      const XTrack* hit = nullptr;
      for (const auto& x : opts)
        if (!x.dead && x.exp.embeds(g, x.domain, x.opt.X)) {
          hit = &x;
          break;
        }
      if (!hit) return std::nullopt;
      chosen.push_back(hit);
    }
    Sapling s;
    s.S = st.A;
    s.Y = e.Y;
    s.K = K_;
    s.k = e.k;
    for (const XTrack* x : chosen) {
      s.X.push_back(x->opt.X);
      s.phi.push_back(x->opt.phi);
    }
    if (auto v = verify_sapling(s)) throw std::logic_error("find_sapling: produced an invalid sapling: " + v->message);
    return s;
  }

  Presentation P_;
  int K_;
  SearchOptions opts_;
  std::vector<Stage> stages_;
  std::vector<Entry> entries_;
  std::set<std::pair<int, std::vector<VertexSet>>> seen_;
};

}  // namespace

SearchResult find_sapling(const InvWord& w, const Presentation& P, int budget, const SearchOptions& opts,
                          const std::function<void(const SearchProgress&)>& progress,
                          const std::atomic<bool>* cancel) {
  P.check_word(w);
  Searcher s(w, P, opts);
  return s.run(budget, progress, cancel);
}

// ---------------------------------------------------------------------------
// JSON

nlohmann::json sapling_to_json(const Sapling& s) {
  nlohmann::json j = graph_to_json(s.graph());
  j["presentation"] = format_presentation(s.S.presentation);
  j["word"] = format_word(s.S.source_word);
  j["stage"] = s.S.stage;
  j["roots"] = {{"start", s.S.automaton.start}, {"end", s.S.automaton.end}};
  j["Y"] = nlohmann::json::array();
  j["X"] = nlohmann::json::array();
  for (const auto& Y : s.Y) j["Y"].push_back(Y);
  for (const auto& X : s.X) j["X"].push_back(X);
  j["phi"] = nlohmann::json::array();
  for (std::size_t i = 0; i < s.phi.size(); ++i)
    for (const auto& [u, v] : s.phi[i]) j["phi"].push_back({{"index", i}, {"from", u}, {"to", v}});
  j["k"] = s.k;
  j["K"] = s.K;
  return j;
}

Sapling sapling_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw SchemaError("sapling: expected an object");
  for (const char* key : {"presentation", "word", "roots", "Y", "X", "phi", "k", "K"})
    if (!j.contains(key)) throw SchemaError(std::string("sapling: missing \"") + key + "\"");
  InvWordGraph g = graph_from_json(j);
  const int nv = g.num_vertices();
  Presentation P;
  InvWord w;
  try {
    P = parse_presentation(j["presentation"].get<std::string>());
    w = parse_word(j["word"].get<std::string>());
  } catch (const std::exception& e) {
    throw SchemaError(std::string("sapling: ") + e.what());
  }
  auto vertex = [&](const nlohmann::json& v) {
    if (!v.is_number_integer()) throw SchemaError("sapling: vertex ids must be integers");
    int x = v.get<int>();
    if (x < 0 || x >= nv) throw SchemaError("sapling: unknown vertex " + v.dump());
    return x;
  };
  auto sets = [&](const nlohmann::json& arr, const char* what) {
    if (!arr.is_array()) throw SchemaError(std::string("sapling: \"") + what + "\" must be an array");
    std::vector<VertexSet> out;
    for (const auto& b : arr) {
      if (!b.is_array()) throw SchemaError(std::string("sapling: entries of \"") + what + "\" must be arrays");
      std::vector<Vertex> vs;
      for (const auto& v : b) vs.push_back(vertex(v));
      out.push_back(make_set(std::move(vs)));
    }
    return out;
  };
  Sapling s;
  const auto& roots = j["roots"];
  if (!roots.is_object() || !roots.contains("start") || !roots.contains("end"))
    throw SchemaError("sapling: \"roots\" needs start and end");
  Vertex start = vertex(roots["start"]), end = vertex(roots["end"]);
  const int stage = j.contains("stage") && j["stage"].is_number_integer() ? j["stage"].get<int>() : 0;
  s.S = approx_from_graph(std::move(g), start, end, P, w, stage);
  s.Y = sets(j["Y"], "Y");
  s.X = sets(j["X"], "X");
  if (s.X.size() != s.Y.size()) throw SchemaError("sapling: X and Y differ in length");
  s.phi.resize(s.X.size());
  if (!j["phi"].is_array()) throw SchemaError("sapling: \"phi\" must be an array");
  for (const auto& p : j["phi"]) {
    if (!p.is_object() || !p.contains("index") || !p.contains("from") || !p.contains("to") ||
        !p["index"].is_number_integer())
      throw SchemaError("sapling: phi entries need index, from, to");
    int i = p["index"].get<int>();
    if (i < 0 || i >= static_cast<int>(s.phi.size())) throw SchemaError("sapling: phi index out of range");
    s.phi[ix(i)][vertex(p["from"])] = vertex(p["to"]);
  }
  if (!j["k"].is_number_integer() || !j["K"].is_number_integer()) throw SchemaError("sapling: k and K must be integers");
  s.k = j["k"].get<int>();
  s.K = j["K"].get<int>();
  return s;
}

}  // namespace invmon
