#include "invmon/stephen.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <stdexcept>

namespace invmon {

VertexSet ApproxAutomaton::path_vertices() const {
  auto it = graph().marks.find("M");
  if (it == graph().marks.end()) return {automaton.start};
  return make_set(it->second);
}

BirootedAutomaton munn_tree(const InvWord& w) {
  BirootedAutomaton a;
  auto& g = a.graph;
  std::map<std::vector<std::uint32_t>, Vertex> id;
  std::vector<std::uint32_t> cur;
  id[cur] = g.add_vertex();
  Vertex at = 0;
  std::vector<Vertex> path{at};
  for (Letter x : w) {
    if (!cur.empty() && cur.back() == x.inverse().code) {
      cur.pop_back();
      at = id.at(cur);
    } else {
      cur.push_back(x.code);
      auto [it, fresh] = id.try_emplace(cur, -1);
      if (fresh) {
        it->second = g.add_vertex();
        g.add_edge(at, x, it->second);
      }
      at = it->second;
    }
    path.push_back(at);
  }
  a.start = 0;
  a.end = at;
  g.marks["start"] = {a.start};
  g.marks["end"] = {a.end};
  g.marks["M"] = make_set(path);
  return a;
}

bool fim_equal(const InvWord& u, const InvWord& w) { return rooted_iso(munn_tree(u), munn_tree(w)); }

ExpansionResult full_p_expansion_with_map(const InvWordGraph& g, const Presentation& P) {
  struct Pending {
    Vertex from;
    const InvWord* label;
    Vertex to;
  };
  std::vector<Pending> todo;
  for (const Relation& r : P.relations) {
    for (int dir = 0; dir < 2; ++dir) {
      const InvWord& s = dir == 0 ? r.lhs : r.rhs;
      const InvWord& t = dir == 0 ? r.rhs : r.lhs;
      for (Vertex u = 0; u < g.num_vertices(); ++u) {
        auto v = read_word(g, u, s);
        if (!v) continue;
        auto vt = read_word(g, u, t);
        if (vt && *vt == *v) continue;
        todo.push_back({u, &t, *v});
      }
    }
  }
  InvWordGraph h = g;
  std::vector<std::pair<Vertex, Vertex>> identify;
  for (const Pending& p : todo) {
    const InvWord& t = *p.label;
    if (t.empty()) {
      identify.emplace_back(p.from, p.to);
      continue;
    }
    Vertex cur = p.from;
    for (std::size_t i = 0; i < t.size(); ++i) {
      Vertex nxt = (i + 1 == t.size()) ? p.to : h.add_vertex();
      h.add_edge(cur, t[i], nxt);
      cur = nxt;
    }
  }
  ExpansionResult res;
  if (identify.empty()) {
    res.image.resize(static_cast<std::size_t>(g.num_vertices()));
    std::iota(res.image.begin(), res.image.end(), 0);
    res.graph = std::move(h);
    return res;
  }
  // Contract identified endpoints without folding.
  std::vector<int> parent(static_cast<std::size_t>(h.num_vertices()));
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int x) {
    while (parent[static_cast<std::size_t>(x)] != x) x = parent[static_cast<std::size_t>(x)] =
        parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(x)])];
    return x;
  };
  for (auto [a, b] : identify) {
    int ra = find(a), rb = find(b);
    if (ra != rb) parent[static_cast<std::size_t>(std::max(ra, rb))] = std::min(ra, rb);
  }
  std::vector<Vertex> newid(static_cast<std::size_t>(h.num_vertices()), -1);
  int next = 0;
  for (Vertex v = 0; v < h.num_vertices(); ++v)
    if (find(v) == v) newid[static_cast<std::size_t>(v)] = next++;
  InvWordGraph q(next);
  for (const Edge& e : h.edges())
    q.add_edge(newid[static_cast<std::size_t>(find(e.src))], e.label, newid[static_cast<std::size_t>(find(e.dst))]);
  std::vector<Vertex> full(static_cast<std::size_t>(h.num_vertices()));
  for (Vertex v = 0; v < h.num_vertices(); ++v) full[static_cast<std::size_t>(v)] = newid[static_cast<std::size_t>(find(v))];
  for (const auto& [k, xs] : g.marks) {
    std::vector<Vertex> m;
    for (Vertex x : xs) {
      Vertex y = full[static_cast<std::size_t>(x)];
      if (std::find(m.begin(), m.end(), y) == m.end()) m.push_back(y);
    }
    q.marks[k] = m;
  }
  res.graph = std::move(q);
  res.image.assign(full.begin(), full.begin() + g.num_vertices());
  return res;
}

InvWordGraph full_p_expansion(const InvWordGraph& g, const Presentation& P) {
  return full_p_expansion_with_map(g, P).graph;
}

FoldResult exp1_with_map(const InvWordGraph& g, const Presentation& P) {
  ExpansionResult ex = full_p_expansion_with_map(g, P);
  FoldResult fr = fold_with_map(ex.graph);
  std::vector<Vertex> img(static_cast<std::size_t>(g.num_vertices()));
  for (Vertex v = 0; v < g.num_vertices(); ++v)
    img[static_cast<std::size_t>(v)] = fr.image[static_cast<std::size_t>(ex.image[static_cast<std::size_t>(v)])];
  fr.image = std::move(img);
  return fr;
}

ApproxAutomaton approx_from_graph(InvWordGraph g, Vertex start, Vertex end, const Presentation& P,
                                  const InvWord& w, int stage) {
  ApproxAutomaton a;
  g.marks["start"] = {start};
  g.marks["end"] = {end};
  a.automaton.graph = std::move(g);
  a.automaton.start = start;
  a.automaton.end = end;
  a.presentation = P;
  a.source_word = w;
  a.stage = stage;
  return a;
}

ApproxAutomaton initial_approx(const InvWord& w, const Presentation& P) {
  ApproxAutomaton a;
  a.automaton = munn_tree(w);
  a.presentation = P;
  a.source_word = w;
  a.stage = 0;
  return a;
}

ApproxAutomaton exp_step(const ApproxAutomaton& a) {
  FoldResult fr = exp1_with_map(a.graph(), a.presentation);
  ApproxAutomaton b;
  b.presentation = a.presentation;
  b.source_word = a.source_word;
  b.stage = a.stage + 1;
  b.automaton.start = fr.image[static_cast<std::size_t>(a.automaton.start)];
  b.automaton.end = fr.image[static_cast<std::size_t>(a.automaton.end)];
  b.automaton.graph = std::move(fr.graph);
  return b;
}

ApproxAutomaton expand(const InvWord& w, const Presentation& P, int n) {
  ApproxAutomaton a = initial_approx(w, P);
  for (int i = 0; i < n; ++i) a = exp_step(a);
  return a;
}

bool is_relatively_p_complete(const VertexSet& sub, const InvWordGraph& g, const Presentation& P) {
  for (const Relation& r : P.relations) {
    for (int dir = 0; dir < 2; ++dir) {
      const InvWord& s = dir == 0 ? r.lhs : r.rhs;
      const InvWord& t = dir == 0 ? r.rhs : r.lhs;
      for (Vertex u : sub) {
        Vertex cur = u;
        bool inside = true;
        for (Letter x : s) {
          auto nx = g.follow(cur, x);
          if (!nx || !contains(sub, *nx)) {
            inside = false;
            break;
          }
          cur = *nx;
        }
        if (!inside) continue;
        auto vt = read_word(g, u, t);
        if (!vt || *vt != cur) return false;
      }
    }
  }
  return true;
}

bool is_p_complete(const InvWordGraph& g, const Presentation& P) {
  return is_relatively_p_complete(all_vertices(g), g, P);
}

bool accepts(const BirootedAutomaton& a, const InvWord& u) {
  auto v = read_word(a.graph, a.start, u);
  return v && *v == a.end;
}

Verdict approx_accepts(const InvWord& w_target, const InvWord& u, const Presentation& P, int n) {
  return accepts(expand(w_target, P, n).automaton, u) ? Verdict::Yes : Verdict::Unknown;
}

SemiOutcome decide_semi(const InvWord& u, const InvWord& v, const Presentation& P, int budget,
                        const std::atomic<bool>* cancel) {
  ApproxAutomaton au = initial_approx(u, P);
  ApproxAutomaton av = initial_approx(v, P);
  bool v_in_u = false, u_in_v = false;
  SemiOutcome out;
  for (int it = 0;; ++it) {
    if (cancel && cancel->load()) break;
    v_in_u = v_in_u || accepts(au.automaton, v);
    u_in_v = u_in_v || accepts(av.automaton, u);
    out.iterations = it;
    if (v_in_u && u_in_v) {
      out.result = SemiResult::Equal;
      return out;
    }
    if (it >= budget) break;
    if (!v_in_u && !u_in_v) {
      if (it % 2 == 0)
        au = exp_step(au);
      else
        av = exp_step(av);
    } else if (!v_in_u) {
      au = exp_step(au);
    } else {
      av = exp_step(av);
    }
  }
  out.result = SemiResult::Exhausted;
  return out;
}

InvWord idempotent_word(const std::vector<InvWord>& us) {
  InvWord e;
  for (const InvWord& u : us) {
    e.insert(e.end(), u.begin(), u.end());
    InvWord ui = invert_word(u);
    e.insert(e.end(), ui.begin(), ui.end());
  }
  return e;
}

EPresentation build_e_presentation(const Presentation& group, const std::vector<InvWord>& subgroup_words,
                                   const std::string& t_name) {
  const int t = intern_symbol(t_name);
  if (group.has_symbol(t)) throw std::invalid_argument("letter '" + t_name + "' already in the alphabet");
  auto mentions_t = [&](const InvWord& w) {
    for (Letter x : w)
      if (x.symbol() == t) return true;
    return false;
  };
  for (const Relation& r : group.relations)
    if (mentions_t(r.lhs) || mentions_t(r.rhs)) throw std::invalid_argument("relator mentions '" + t_name + "'");
  for (const InvWord& w : subgroup_words) {
    if (mentions_t(w)) throw std::invalid_argument("subgroup word mentions '" + t_name + "'");
    group.check_word(w);
  }
  std::vector<InvWord> parts;
  for (int a : group.alphabet) parts.push_back({Letter::make(a, false)});
  for (const InvWord& w : subgroup_words) {
    InvWord c{Letter::make(t, false)};
    c.insert(c.end(), w.begin(), w.end());
    c.push_back(Letter::make(t, true));
    parts.push_back(std::move(c));
  }
  for (int a : group.alphabet) parts.push_back({Letter::make(a, true)});

  EPresentation ep;
  ep.t_symbol = t;
  ep.e = idempotent_word(parts);
  ep.presentation.alphabet = group.alphabet;
  ep.presentation.alphabet.push_back(t);
  std::vector<InvWord> relators;
  for (const Relation& r : group.relations) relators.push_back(concat(r.lhs, invert_word(r.rhs)));
  if (relators.empty()) {
    ep.presentation.relations.push_back({ep.e, {}});
  } else {
    ep.presentation.relations.push_back({concat(ep.e, relators[0]), {}});
    for (std::size_t i = 1; i < relators.size(); ++i) ep.presentation.relations.push_back({relators[i], {}});
  }
  return ep;
}

}  // namespace invmon
