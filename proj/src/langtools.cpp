#include "invmon/langtools.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <set>
#include <tuple>

#include "invmon/geometry.hpp"
#include "invmon/graph_io.hpp"

namespace invmon {

namespace {

std::size_t idx(int i) { return static_cast<std::size_t>(i); }

Letter parse_letter(const std::string& s, const char* where) {
  InvWord u;
  try {
    u = parse_word(s);
  } catch (const ParseError& e) {
    throw SchemaError(std::string(where) + ": " + e.what());
  }
  if (u.size() != 1) throw SchemaError(std::string(where) + ": expected a single letter, got \"" + s + "\"");
  return u[0];
}

}  // namespace

// ---------------------------------------------------------------------------
// Fsa

int Fsa::add_state(bool is_terminal) {
  trans.emplace_back();
  terminal.push_back(is_terminal);
  return num_states() - 1;
}

void Fsa::add_transition(int from, Letter x, int to) {
  auto& t = trans[idx(from)];
  for (const auto& e : t)
    if (e.label == x && e.to == to) return;
  t.push_back({x, to});
}

bool Fsa::is_deterministic() const {
  for (const auto& t : trans) {
    std::set<Letter> seen;
    for (const auto& e : t)
      if (!seen.insert(e.label).second) return false;
  }
  return true;
}

bool Fsa::accepts(const InvWord& u) const {
  if (num_states() == 0) return false;
  std::set<int> cur{initial};
  for (Letter x : u) {
    std::set<int> next;
    for (int s : cur)
      for (const auto& e : trans[idx(s)])
        if (e.label == x) next.insert(e.to);
    if (next.empty()) return false;
    cur = std::move(next);
  }
  return std::any_of(cur.begin(), cur.end(), [&](int s) { return terminal[idx(s)]; });
}

std::vector<Letter> Fsa::alphabet() const {
  std::set<Letter> out;
  for (const auto& t : trans)
    for (const auto& e : t) out.insert(e.label);
  return {out.begin(), out.end()};
}

Fsa determinize(const Fsa& f) {
  Fsa d;
  if (f.num_states() == 0) return d;
  const auto sigma = f.alphabet();
  std::map<std::set<int>, int> id;
  std::deque<std::set<int>> queue;
  auto state_of = [&](const std::set<int>& s) {
    auto it = id.find(s);
    if (it != id.end()) return it->second;
    bool term = std::any_of(s.begin(), s.end(), [&](int q) { return f.terminal[idx(q)]; });
    int n = d.add_state(term);
    id.emplace(s, n);
    queue.push_back(s);
    return n;
  };
  d.initial = state_of({f.initial});
  while (!queue.empty()) {
    std::set<int> s = queue.front();
    queue.pop_front();
    int from = id.at(s);
    for (Letter x : sigma) {
      std::set<int> t;
      for (int q : s)
        for (const auto& e : f.trans[idx(q)])
          if (e.label == x) t.insert(e.to);
      if (!t.empty()) d.add_transition(from, x, state_of(t));
    }
  }
  return d;
}

Fsa minimize(const Fsa& f) {
  Fsa d = determinize(f);
  const int n = d.num_states();
  if (n == 0) return d;
  // drop states that cannot reach a terminal state
  std::vector<std::vector<int>> rev(idx(n));
  for (int s = 0; s < n; ++s)
    for (const auto& e : d.trans[idx(s)]) rev[idx(e.to)].push_back(s);
  std::vector<bool> live(idx(n), false);
  std::deque<int> q;
  for (int s = 0; s < n; ++s)
    if (d.terminal[idx(s)]) {
      live[idx(s)] = true;
      q.push_back(s);
    }
  while (!q.empty()) {
    int s = q.front();
    q.pop_front();
    for (int p : rev[idx(s)])
      if (!live[idx(p)]) {
        live[idx(p)] = true;
        q.push_back(p);
      }
  }
  Fsa empty;
  if (!live[idx(d.initial)]) {
    empty.initial = empty.add_state(false);
    return empty;
  }

  const auto sigma = d.alphabet();
  // Moore refinement; a missing transition goes to the implicit dead class -1
  std::vector<int> cls(idx(n), 0);
  for (int s = 0; s < n; ++s) cls[idx(s)] = live[idx(s)] ? (d.terminal[idx(s)] ? 1 : 0) : -1;
  for (;;) {
    std::map<std::vector<int>, int> sig_id;
    std::vector<int> next(idx(n), -1);
    for (int s = 0; s < n; ++s) {
      if (!live[idx(s)]) continue;
      std::vector<int> sig{cls[idx(s)]};
      for (Letter x : sigma) {
        int t = -1;
        for (const auto& e : d.trans[idx(s)])
          if (e.label == x) t = cls[idx(e.to)];
        sig.push_back(t);
      }
      auto [it, fresh] = sig_id.emplace(sig, static_cast<int>(sig_id.size()));
      (void)fresh;
      next[idx(s)] = it->second;
    }
    std::set<int> before(cls.begin(), cls.end()), after(next.begin(), next.end());
    cls = std::move(next);
    if (after.size() == before.size()) break;
  }
  // renumber classes in BFS order from the initial state
  Fsa m;
  std::map<int, int> num;
  std::deque<int> rep;
  std::map<int, int> rep_of;
  for (int s = 0; s < n; ++s)
    if (live[idx(s)] && !rep_of.count(cls[idx(s)])) rep_of[cls[idx(s)]] = s;
  auto state_of = [&](int c) {
    auto it = num.find(c);
    if (it != num.end()) return it->second;
    int id = m.add_state(d.terminal[idx(rep_of.at(c))]);
    num.emplace(c, id);
    rep.push_back(c);
    return id;
  };
  m.initial = state_of(cls[idx(d.initial)]);
  while (!rep.empty()) {
    int c = rep.front();
    rep.pop_front();
    int s = rep_of.at(c);
    int from = num.at(c);
    for (const auto& e : d.trans[idx(s)])
      if (cls[idx(e.to)] >= 0) m.add_transition(from, e.label, state_of(cls[idx(e.to)]));
  }
  return m;
}

std::vector<InvWord> fsa_language_upto(const Fsa& f, int L) {
  std::vector<InvWord> out;
  Fsa d = determinize(f);
  if (d.num_states() == 0) return out;
  const auto sigma = d.alphabet();
  std::vector<std::pair<int, InvWord>> level{{d.initial, {}}};
  for (int len = 0; len <= L && !level.empty(); ++len) {
    std::vector<std::pair<int, InvWord>> next;
    for (const auto& [s, u] : level) {
      if (d.terminal[idx(s)]) out.push_back(u);
      if (len == L) continue;
      for (Letter x : sigma)
        for (const auto& e : d.trans[idx(s)])
          if (e.label == x) {
            InvWord v = u;
            v.push_back(x);
            next.emplace_back(e.to, std::move(v));
          }
    }
    level = std::move(next);
  }
  return out;
}

FsaComparison fsa_compare(const Fsa& a, const Fsa& b) {
  Fsa da = minimize(a), db = minimize(b);
  std::set<Letter> sig;
  for (Letter x : da.alphabet()) sig.insert(x);
  for (Letter x : db.alphabet()) sig.insert(x);
  auto step = [](const Fsa& d, int s, Letter x) {
    if (s < 0) return -1;
    for (const auto& e : d.trans[idx(s)])
      if (e.label == x) return e.to;
    return -1;
  };
  auto term = [](const Fsa& d, int s) { return s >= 0 && d.terminal[idx(s)]; };
  using Pair = std::pair<int, int>;
  std::map<Pair, std::pair<Pair, Letter>> parent;
  Pair start{da.initial, db.initial};
  std::set<Pair> seen{start};
  std::deque<Pair> q{start};
  while (!q.empty()) {
    Pair p = q.front();
    q.pop_front();
    if (term(da, p.first) != term(db, p.second)) {
      InvWord u;
      for (Pair c = p; c != start;) {
        const auto& [prev, x] = parent.at(c);
        u.push_back(x);
        c = prev;
      }
      std::reverse(u.begin(), u.end());
      return {false, u};
    }
    for (Letter x : sig) {
      Pair n{step(da, p.first, x), step(db, p.second, x)};
      if (n.first < 0 && n.second < 0) continue;
      if (seen.insert(n).second) {
        parent.emplace(n, std::make_pair(p, x));
        q.push_back(n);
      }
    }
  }
  return {true, std::nullopt};
}

bool fsa_equal(const Fsa& a, const Fsa& b) { return fsa_compare(a, b).equal; }

nlohmann::json fsa_to_json(const Fsa& f) {
  nlohmann::json j;
  j["states"] = nlohmann::json::array();
  for (int s = 0; s < f.num_states(); ++s) j["states"].push_back(s);
  j["initial"] = f.initial;
  j["terminal"] = nlohmann::json::array();
  for (int s = 0; s < f.num_states(); ++s)
    if (f.terminal[idx(s)]) j["terminal"].push_back(s);
  j["transitions"] = nlohmann::json::array();
  for (int s = 0; s < f.num_states(); ++s)
    for (const auto& e : f.trans[idx(s)])
      j["transitions"].push_back({{"from", s}, {"input", e.label.text()}, {"to", e.to}});
  return j;
}

Fsa fsa_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw SchemaError("fsa: expected an object");
  for (const char* key : {"states", "initial", "terminal", "transitions"})
    if (!j.contains(key)) throw SchemaError(std::string("fsa: missing \"") + key + "\"");
  if (!j["states"].is_array()) throw SchemaError("fsa: \"states\" must be an array");
  Fsa f;
  const int n = static_cast<int>(j["states"].size());
  for (int s = 0; s < n; ++s) f.add_state(false);
  auto state = [&](const nlohmann::json& v) {
    if (!v.is_number_integer() || v.get<int>() < 0 || v.get<int>() >= n)
      throw SchemaError("fsa: unknown state " + v.dump());
    return v.get<int>();
  };
  f.initial = state(j["initial"]);
  for (const auto& t : j["terminal"]) f.terminal[idx(state(t))] = true;
  for (const auto& t : j["transitions"]) {
    if (!t.is_object() || !t.contains("from") || !t.contains("input") || !t.contains("to") ||
        !t["input"].is_string())
      throw SchemaError("fsa: malformed transition " + t.dump());
    f.add_transition(state(t["from"]), parse_letter(t["input"].get<std::string>(), "fsa"), state(t["to"]));
  }
  return f;
}

// ---------------------------------------------------------------------------
// Geodesic automaton

Fsa geodesic_automaton(const InvWordGraph& g, Vertex x0, int delta, int K, int trusted_radius) {
  if (trusted_radius < 0) throw GeodesicError("trusted radius is negative; materialize deeper");
  const int n = g.num_vertices();
  const auto d = bfs_distances(g, x0);
  std::vector<Vertex> order;
  for (Vertex v = 0; v < n; ++v)
    if (d[idx(v)] != kInfinity && d[idx(v)] <= trusted_radius) order.push_back(v);
  std::stable_sort(order.begin(), order.end(), [&](Vertex u, Vertex v) { return d[idx(u)] < d[idx(v)]; });

  struct Rep {
    DiscType type;
    int cls;
  };
  using Key = std::tuple<int, std::size_t, int>;
  std::map<Key, std::vector<Rep>> reps;
  std::vector<int> cls(idx(n), -1);
  int num_classes = 0;
  for (Vertex v : order) {
    if (d[idx(v)] <= delta) {
      cls[idx(v)] = num_classes++;
      continue;
    }
    DiscType t = disc_type(g, x0, v, delta, K);
    int red = static_cast<int>(std::count(t.ball.color.begin(), t.ball.color.end(), Color::Red));
    Key key{t.ball.graph.num_vertices(), t.ball.graph.num_edges(), red};
    auto& bucket = reps[key];
    for (const Rep& r : bucket)
      if (disc_type_equiv(r.type, t)) {
        cls[idx(v)] = r.cls;
        break;
      }
    if (cls[idx(v)] < 0) {
      cls[idx(v)] = num_classes++;
      bucket.push_back({std::move(t), cls[idx(v)]});
    }
  }

  std::vector<std::optional<std::map<Letter, int>>> out(idx(num_classes));
  for (Vertex u : order) {
    if (d[idx(u)] >= trusted_radius) continue;
    std::map<Letter, int> m;
    for (const Arc& a : g.arcs(u))
      if (d[idx(a.to)] == d[idx(u)] + 1) m[a.label] = cls[idx(a.to)];
    auto& slot = out[idx(cls[idx(u)])];
    if (!slot) {
      slot = std::move(m);
    } else if (*slot != m) {
      throw GeodesicError("vertices " + std::to_string(u) + " and another member of cone class " +
                          std::to_string(cls[idx(u)]) + " disagree on their transitions; materialize deeper");
    }
  }
  Fsa f;
  for (int c = 0; c < num_classes; ++c) {
    if (!out[idx(c)])
      throw GeodesicError("cone class " + std::to_string(c) + " has no member inside the trusted radius");
    f.add_state(true);
  }
  for (int c = 0; c < num_classes; ++c)
    for (const auto& [x, t] : *out[idx(c)]) f.add_transition(c, x, t);
  f.initial = cls[idx(x0)];
  return f;
}

namespace {

bool same_ball(const InvWordGraph& a, const InvWordGraph& b, const VertexSet& ball) {
  for (Vertex v : ball) {
    std::vector<std::pair<std::uint32_t, Vertex>> ea, eb;
    for (const Arc& e : a.arcs(v))
      if (contains(ball, e.to)) ea.emplace_back(e.label.code, e.to);
    for (const Arc& e : b.arcs(v))
      if (contains(ball, e.to)) eb.emplace_back(e.label.code, e.to);
    std::sort(ea.begin(), ea.end());
    std::sort(eb.begin(), eb.end());
    if (ea != eb) return false;
  }
  return true;
}

}  // namespace

int trusted_radius(const InvWordGraph& a, const InvWordGraph& b, Vertex x0, int margin) {
  if (a.num_vertices() > b.num_vertices()) throw std::invalid_argument("trusted_radius: a is not a prefix of b");
  VertexSet prev;
  for (int R = margin;; ++R) {
    VertexSet ba = neighborhood_set(a, {x0}, R);
    VertexSet bb = neighborhood_set(b, {x0}, R);
    if (ba != bb || !same_ball(a, b, ba)) return R - 1 - margin;
    if (ba == prev) return kInfinity;
    prev = std::move(ba);
  }
}

Fsa geodesic_automaton_from_sapling(const Sapling& s, int delta, int steps) {
  ApproxAutomaton a = materialize(s, steps);
  ApproxAutomaton b = materialize(s, steps + 1);
  const Vertex x0 = a.automaton.start;
  int r = trusted_radius(a.graph(), b.graph(), x0, delta + s.K + 1);
  if (r < 0) throw GeodesicError("materialization depth " + std::to_string(steps) + " leaves no trusted ball");
  return geodesic_automaton(a.graph(), x0, delta, s.K, r);
}

// ---------------------------------------------------------------------------
// PDA

Pda build_pda(const Sapling& s) {
  const InvWordGraph& S = s.graph();
  const int n0 = S.num_vertices();
  const int n = s.n();
  Pda p;
  p.stack_symbols.push_back("Z");

  std::vector<VertexSet> far(idx(n)), red(idx(n));
  std::vector<std::map<Vertex, int>> psi(idx(n));
  int next_state = n0;
  for (int i = 0; i < n; ++i) {
    far[idx(i)] = components_rel(S, s.X[idx(i)], s.x0()).gamma_c;
    red[idx(i)] = set_intersection(neighborhood_set(S, s.X[idx(i)], s.K), far[idx(i)]);
    for (Vertex v : far[idx(i)]) psi[idx(i)][v] = next_state++;
  }
  p.num_states = next_state + 1;
  p.final_state = next_state;
  p.initial = s.x0();

  // stack symbol (i, k): inside copy i, entered from copy k (0 = S_0, else k-1)
  std::map<std::pair<int, int>, int> sym;
  auto symbol = [&](int i, int k) {
    auto [it, fresh] = sym.emplace(std::make_pair(i, k), static_cast<int>(p.stack_symbols.size()));
    if (fresh) p.stack_symbols.push_back(std::to_string(i + 1) + ":" + std::to_string(k));
    return it->second;
  };
  std::vector<std::vector<int>> parents(idx(n));  // copies k-1 a copy of j can be entered from
  for (int j = 0; j < n; ++j) {
    symbol(j, 0);
    for (int i = 0; i < n; ++i)
      if (std::includes(far[idx(i)].begin(), far[idx(i)].end(), s.Y[idx(j)].begin(), s.Y[idx(j)].end())) {
        symbol(j, i + 1);
        parents[idx(j)].push_back(i);
      }
  }
  auto tops_of_copy = [&](int i) {
    std::vector<int> out;
    for (const auto& [key, id] : sym)
      if (key.first == i) out.push_back(id);
    return out;
  };

  auto add = [&](int from, std::optional<Letter> x, int pop, std::vector<int> push, int to) {
    p.transitions.push_back({from, x, pop, std::move(push), to});
  };
  // (i)
  add(s.S.automaton.end, std::nullopt, Pda::Z, {Pda::Z}, p.final_state);
  // (ii) S_0 runs with Z alone on the stack
  for (Vertex u = 0; u < n0; ++u)
    for (const Arc& e : S.arcs(u)) add(u, e.label, Pda::Z, {Pda::Z}, e.to);
  for (int i = 0; i < n; ++i) {
    const auto tops = tops_of_copy(i);
    for (Vertex u : far[idx(i)])
      for (const Arc& e : S.arcs(u)) {
        if (!contains(far[idx(i)], e.to)) continue;
        for (int t : tops) add(psi[idx(i)].at(u), e.label, t, {t}, psi[idx(i)].at(e.to));
      }
  }
  // (iii) entering and leaving copies
  for (int j = 0; j < n; ++j) {
    const int from_s0 = sym.at({j, 0});
    for (Vertex u : red[idx(j)]) {
      const Vertex image = s.phi[idx(j)].at(u);
      const int into = psi[idx(j)].at(u);
      add(image, std::nullopt, Pda::Z, {from_s0, Pda::Z}, into);
      add(into, std::nullopt, from_s0, {}, image);
      for (int i : parents[idx(j)]) {
        auto it = psi[idx(i)].find(image);
        if (it == psi[idx(i)].end()) continue;
        const int marker = sym.at({j, i + 1});
        for (int t : tops_of_copy(i)) add(it->second, std::nullopt, t, {marker, t}, into);
        add(into, std::nullopt, marker, {}, it->second);
      }
    }
  }
  return p;
}

nlohmann::json pda_to_json(const Pda& p) {
  nlohmann::json j;
  j["states"] = nlohmann::json::array();
  for (int s = 0; s < p.num_states; ++s) j["states"].push_back(s);
  j["stack"] = p.stack_symbols;
  j["initial"] = p.initial;
  j["final"] = p.final_state;
  j["transitions"] = nlohmann::json::array();
  for (const auto& t : p.transitions) {
    nlohmann::json push = nlohmann::json::array();
    for (int x : t.push) push.push_back(p.stack_symbols[idx(x)]);
    j["transitions"].push_back({{"from", t.from},
                                {"input", t.input ? nlohmann::json(t.input->text()) : nlohmann::json(nullptr)},
                                {"pop", p.stack_symbols[idx(t.pop)]},
                                {"push", push},
                                {"to", t.to}});
  }
  return j;
}

Pda pda_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw SchemaError("pda: expected an object");
  for (const char* key : {"states", "stack", "initial", "final", "transitions"})
    if (!j.contains(key)) throw SchemaError(std::string("pda: missing \"") + key + "\"");
  if (!j["states"].is_array() || !j["stack"].is_array() || !j["transitions"].is_array())
    throw SchemaError("pda: \"states\", \"stack\" and \"transitions\" must be arrays");
  Pda p;
  p.num_states = static_cast<int>(j["states"].size());
  std::map<std::string, int> sym;
  for (const auto& s : j["stack"]) {
    if (!s.is_string()) throw SchemaError("pda: stack symbols must be strings");
    sym.emplace(s.get<std::string>(), static_cast<int>(p.stack_symbols.size()));
    p.stack_symbols.push_back(s.get<std::string>());
  }
  if (p.stack_symbols.empty() || p.stack_symbols[0] != "Z") throw SchemaError("pda: the first stack symbol must be Z");
  auto state = [&](const nlohmann::json& v) {
    if (!v.is_number_integer() || v.get<int>() < 0 || v.get<int>() >= p.num_states)
      throw SchemaError("pda: unknown state " + v.dump());
    return v.get<int>();
  };
  auto stack = [&](const nlohmann::json& v) {
    if (!v.is_string() || !sym.count(v.get<std::string>())) throw SchemaError("pda: unknown stack symbol " + v.dump());
    return sym.at(v.get<std::string>());
  };
  p.initial = state(j["initial"]);
  p.final_state = state(j["final"]);
  for (const auto& t : j["transitions"]) {
    for (const char* key : {"from", "input", "pop", "push", "to"})
      if (!t.is_object() || !t.contains(key)) throw SchemaError("pda: malformed transition " + t.dump());
    PdaTransition tr;
    tr.from = state(t["from"]);
    tr.to = state(t["to"]);
    if (!t["input"].is_null()) {
      if (!t["input"].is_string()) throw SchemaError("pda: input must be a letter or null");
      tr.input = parse_letter(t["input"].get<std::string>(), "pda");
    }
    tr.pop = stack(t["pop"]);
    if (!t["push"].is_array()) throw SchemaError("pda: push must be an array");
    for (const auto& x : t["push"]) tr.push.push_back(stack(x));
    p.transitions.push_back(std::move(tr));
  }
  return p;
}

// ---------------------------------------------------------------------------
// Grammar

Cfg pda_to_cfg(const Pda& p0) {
  // normal form: every transition pushes at most two symbols
  Pda p = p0;
  p.transitions.clear();
  int extra = p0.num_states;
  for (const auto& t : p0.transitions) {
    if (t.push.size() <= 2) {
      p.transitions.push_back(t);
      continue;
    }
    const auto& y = t.push;
    const std::size_t m = y.size();
    int cur = extra++;
    p.transitions.push_back({t.from, t.input, t.pop, {y[m - 2], y[m - 1]}, cur});
    for (std::size_t r = m - 2; r > 0; --r) {
      int nxt = r == 1 ? t.to : extra++;
      p.transitions.push_back({cur, std::nullopt, y[r], {y[r - 1], y[r]}, nxt});
      cur = nxt;
    }
  }
  p.num_states = extra;
  const int nsym = static_cast<int>(p.stack_symbols.size());
  // f empties the stack
  for (int x = 0; x < nsym; ++x) p.transitions.push_back({p.final_state, std::nullopt, x, {}, p.final_state});

  std::map<std::pair<int, int>, std::vector<const PdaTransition*>> by_top;
  for (const auto& t : p.transitions) by_top[{t.from, t.pop}].push_back(&t);

  // nonterminal [q X r]: from q with X on top, reach r having popped X
  Cfg g;
  std::map<std::tuple<int, int, int>, int> nt;
  std::vector<std::tuple<int, int, int>> names;
  std::deque<int> todo;
  auto N = [&](int q, int x, int r) {
    auto [it, fresh] = nt.emplace(std::make_tuple(q, x, r), static_cast<int>(names.size()));
    if (fresh) {
      names.emplace_back(q, x, r);
      todo.push_back(it->second);
    }
    return it->second;
  };
  std::vector<Cfg::Rule> rules;
  g.start = N(p.initial, Pda::Z, p.final_state);
  while (!todo.empty()) {
    const int A = todo.front();
    todo.pop_front();
    const auto [q, x, r] = names[idx(A)];
    auto it = by_top.find({q, x});
    if (it == by_top.end()) continue;
    for (const PdaTransition* t : it->second) {
      if (t->push.empty()) {
        if (t->to == r) rules.push_back({A, t->input, {}});
      } else if (t->push.size() == 1) {
        rules.push_back({A, t->input, {N(t->to, t->push[0], r)}});
      } else {
        for (int s = 0; s < p.num_states; ++s)
          rules.push_back({A, t->input, {N(t->to, t->push[0], s), N(s, t->push[1], r)}});
      }
    }
  }
  const int total = static_cast<int>(names.size());

  // productive
  std::vector<bool> prod(idx(total), false);
  for (bool changed = true; changed;) {
    changed = false;
    for (const auto& rule : rules) {
      if (prod[idx(rule.lhs)]) continue;
      if (std::all_of(rule.rhs.begin(), rule.rhs.end(), [&](int B) { return prod[idx(B)]; })) {
        prod[idx(rule.lhs)] = true;
        changed = true;
      }
    }
  }
  // reachable through productive rules
  std::vector<std::vector<const Cfg::Rule*>> by_lhs(idx(total));
  for (const auto& rule : rules)
    if (prod[idx(rule.lhs)] &&
        std::all_of(rule.rhs.begin(), rule.rhs.end(), [&](int B) { return prod[idx(B)]; }))
      by_lhs[idx(rule.lhs)].push_back(&rule);
  std::vector<int> renum(idx(total), -1);
  if (!prod[idx(g.start)]) {
    g.start = 0;
    g.num_nonterminals = 1;
    return g;
  }
  std::deque<int> q{g.start};
  renum[idx(g.start)] = 0;
  int count = 1;
  std::vector<int> visit{g.start};
  while (!q.empty()) {
    int A = q.front();
    q.pop_front();
    for (const Cfg::Rule* rule : by_lhs[idx(A)])
      for (int B : rule->rhs)
        if (renum[idx(B)] < 0) {
          renum[idx(B)] = count++;
          visit.push_back(B);
          q.push_back(B);
        }
  }
  g.start = 0;
  g.num_nonterminals = count;
  for (int A : visit)
    for (const Cfg::Rule* rule : by_lhs[idx(A)]) {
      Cfg::Rule out{renum[idx(A)], rule->terminal, {}};
      for (int B : rule->rhs) out.rhs.push_back(renum[idx(B)]);
      g.rules.push_back(std::move(out));
    }
  return g;
}

bool cfg_accepts(const Cfg& g, const InvWord& u) {
  if (g.rules.empty()) return false;
  // binarize: A -> x B C becomes A -> T_x A', A' -> B C
  int num = g.num_nonterminals;
  std::map<Letter, int> term_nt;
  std::vector<std::pair<int, Letter>> terminal_rules;
  std::vector<int> empty_rules;
  std::vector<std::pair<int, int>> unit_rules;                 // A -> B
  std::vector<std::tuple<int, int, int>> binary_rules;         // A -> B C
  auto T = [&](Letter x) {
    auto [it, fresh] = term_nt.emplace(x, num);
    if (fresh) {
      terminal_rules.emplace_back(num, x);
      ++num;
    }
    return it->second;
  };
  for (const auto& r : g.rules) {
    std::vector<int> rhs;
    if (r.terminal) rhs.push_back(T(*r.terminal));
    rhs.insert(rhs.end(), r.rhs.begin(), r.rhs.end());
    if (rhs.empty()) {
      empty_rules.push_back(r.lhs);
    } else if (rhs.size() == 1) {
      unit_rules.emplace_back(r.lhs, rhs[0]);
    } else if (rhs.size() == 2) {
      binary_rules.emplace_back(r.lhs, rhs[0], rhs[1]);
    } else {
      int mid = num++;
      binary_rules.emplace_back(r.lhs, rhs[0], mid);
      binary_rules.emplace_back(mid, rhs[1], rhs[2]);
    }
  }

  std::vector<std::vector<int>> units_of(idx(num));                     // B -> {A}
  std::vector<std::vector<std::pair<int, int>>> as_left(idx(num));      // B -> {(A, C)}
  std::vector<std::vector<std::pair<int, int>>> as_right(idx(num));     // C -> {(A, B)}
  for (auto [A, B] : unit_rules) units_of[idx(B)].push_back(A);
  for (auto [A, B, C] : binary_rules) {
    as_left[idx(B)].emplace_back(A, C);
    as_right[idx(C)].emplace_back(A, B);
  }

  const int L = static_cast<int>(u.size());
  const std::size_t span = idx(L + 1);
  // chart[A][i*span + j]
  std::vector<std::vector<bool>> chart(idx(num), std::vector<bool>(span * span, false));
  std::vector<std::vector<std::vector<int>>> ends_at(idx(num), std::vector<std::vector<int>>(span));   // (A,j) -> i
  std::vector<std::vector<std::vector<int>>> starts_at(idx(num), std::vector<std::vector<int>>(span)); // (A,i) -> j
  std::deque<std::tuple<int, int, int>> work;
  auto add = [&](int A, int i, int j) {
    if (chart[idx(A)][idx(i) * span + idx(j)]) return;
    chart[idx(A)][idx(i) * span + idx(j)] = true;
    ends_at[idx(A)][idx(j)].push_back(i);
    starts_at[idx(A)][idx(i)].push_back(j);
    work.emplace_back(A, i, j);
  };
  for (int A : empty_rules)
    for (int i = 0; i <= L; ++i) add(A, i, i);
  for (auto [A, x] : terminal_rules)
    for (int i = 0; i < L; ++i)
      if (u[idx(i)] == x) add(A, i, i + 1);
  while (!work.empty()) {
    auto [B, i, j] = work.front();
    work.pop_front();
    for (int A : units_of[idx(B)]) add(A, i, j);
    for (auto [A, C] : as_left[idx(B)]) {
      auto js = starts_at[idx(C)][idx(j)];
      for (int k : js) add(A, i, k);
    }
    for (auto [A, Bl] : as_right[idx(B)]) {
      auto is = ends_at[idx(Bl)][idx(i)];
      for (int h : is) add(A, h, j);
    }
  }
  return chart[idx(g.start)][0 * span + idx(L)];
}

bool pda_accepts(const Pda& p, const InvWord& u) { return cfg_accepts(pda_to_cfg(p), u); }

// ---------------------------------------------------------------------------
// Word problem

WordProblemResult word_problem(const InvWord& u, const InvWord& v, const Presentation& P, int budget) {
  if (decide_semi(u, v, P, std::min(budget, 8)).result == SemiResult::Equal) return {WordAnswer::Equal, "approximation"};
  struct Acceptor {
    std::optional<BirootedAutomaton> finite;
    std::optional<Cfg> grammar;
    bool accepts(const InvWord& x) const {
      return finite ? invmon::accepts(*finite, x) : cfg_accepts(*grammar, x);
    }
  };
  auto acceptor = [&](const InvWord& x) -> std::optional<Acceptor> {
    auto r = find_sapling(x, P, budget);
    if (r.status == SearchStatus::Finite) return Acceptor{r.finite->automaton, std::nullopt};
    if (r.status == SearchStatus::Sapling) return Acceptor{std::nullopt, pda_to_cfg(build_pda(*r.sapling))};
    return std::nullopt;
  };
  auto au = acceptor(u);
  if (!au) return {WordAnswer::Exhausted, "budget"};
  auto av = acceptor(v);
  if (!av) return {WordAnswer::Exhausted, "budget"};
  const std::string method = au->finite && av->finite ? "finite" : "pda";
  bool eq = au->accepts(v) && av->accepts(u);
  return {eq ? WordAnswer::Equal : WordAnswer::Unequal, method};
}

}  // namespace invmon
