#include <doctest.h>

#include <random>

#include "invmon/langtools.hpp"
#include "invmon/graph_io.hpp"
#include "support.hpp"

using namespace invmon;
using testsupport::w;

namespace {

const Letter a = Letter::named("a");

Presentation bicyclic() { return make_presentation({"a"}, {{"a a'", "1"}}); }
Presentation integers() { return make_presentation({"a"}, {{"a a'", "1"}, {"a' a", "1"}}); }
Presentation freered() { return make_presentation({"a"}, {{"a' a", "a' a a a'"}}); }
// aa' b^{n^2} c c' b^{-n^2} = aa' for n = 1, 2
Presentation irrtree() {
  return make_presentation({"a", "b", "c"},
                           {{"a a' b c c' b'", "a a'"}, {"a a' b b b b c c' b' b' b' b'", "a a'"}});
}

Fsa star(Letter x) {
  Fsa f;
  f.add_state(true);
  f.add_transition(0, x, 0);
  return f;
}

Fsa even(Letter x) {
  Fsa f;
  f.add_state(true);
  f.add_state(false);
  f.add_transition(0, x, 1);
  f.add_transition(1, x, 0);
  return f;
}

Fsa random_nfa(std::mt19937& rng, int n, const std::vector<Letter>& sigma) {
  Fsa f;
  std::bernoulli_distribution coin(0.4);
  for (int i = 0; i < n; ++i) f.add_state(coin(rng));
  std::uniform_int_distribution<int> st(0, n - 1);
  std::uniform_int_distribution<std::size_t> lt(0, sigma.size() - 1);
  for (int e = 0; e < 2 * n; ++e) f.add_transition(st(rng), sigma[lt(rng)], st(rng));
  return f;
}

struct Case {
  const char* name;
  Presentation P;
  InvWord w;
};

std::vector<Case> cases() {
  return {{"bicyclic", bicyclic(), w("1")},
          {"integers", integers(), w("a a'")},
          {"free", make_presentation({"a", "b"}, {}), w("a b b'")},
          {"free-reducible", freered(), w("a")}};
}

Sapling found(const Case& c) {
  auto r = find_sapling(c.w, c.P, 50);
  REQUIRE(r.status != SearchStatus::Exhausted);
  if (r.status == SearchStatus::Finite) return trivial_sapling(*r.finite, c.P.K());
  return *r.sapling;
}

// Labels of all paths from x0 along which the distance to x0 goes up by one each step.
std::set<InvWord> geodesic_words(const InvWordGraph& g, Vertex x0, int L) {
  auto d = bfs_distances(g, x0);
  std::set<InvWord> out;
  std::vector<std::pair<Vertex, InvWord>> level{{x0, {}}};
  for (int len = 0; len <= L; ++len) {
    std::vector<std::pair<Vertex, InvWord>> next;
    for (const auto& [v, u] : level) {
      out.insert(u);
      for (const Arc& e : g.arcs(v))
        if (d[static_cast<std::size_t>(e.to)] == d[static_cast<std::size_t>(v)] + 1) {
          InvWord x = u;
          x.push_back(e.label);
          next.emplace_back(e.to, x);
        }
    }
    level = std::move(next);
  }
  return out;
}

std::set<InvWord> as_set(const std::vector<InvWord>& v) { return {v.begin(), v.end()}; }

}  // namespace

TEST_CASE("fsa basics") {
  auto words = fsa_language_upto(star(a), 3);
  REQUIRE(words.size() == 4);
  CHECK(words[0].empty());
  CHECK(words[3] == w("a a a"));
  CHECK(fsa_equal(star(a), star(a)));
  auto cmp = fsa_compare(star(a), even(a));
  CHECK_FALSE(cmp.equal);
  REQUIRE(cmp.witness);
  CHECK(*cmp.witness == w("a"));
  CHECK(fsa_language_upto(even(a), 4).size() == 3);
  CHECK(minimize(star(a)).num_states() == 1);

  Fsa two;  // a* written with two states
  two.add_state(true);
  two.add_state(true);
  two.add_transition(0, a, 1);
  two.add_transition(1, a, 0);
  CHECK(fsa_equal(two, star(a)));
  CHECK(minimize(two).num_states() == 1);
}

TEST_CASE("determinize and minimize keep the language") {
  std::mt19937 rng(7);
  const auto sigma = testsupport::doubled({"a", "b"});
  for (int t = 0; t < 60; ++t) {
    Fsa f = random_nfa(rng, 5, sigma);
    Fsa g = random_nfa(rng, 5, sigma);
    auto lf = fsa_language_upto(f, 5);
    CHECK(as_set(fsa_language_upto(determinize(f), 5)) == as_set(lf));
    CHECK(as_set(fsa_language_upto(minimize(f), 5)) == as_set(lf));
    CHECK(determinize(f).is_deterministic());
    CHECK(fsa_equal(f, minimize(f)));
    CHECK(minimize(minimize(f)).num_states() == minimize(f).num_states());
    auto all = testsupport::all_words(sigma, 4);
    for (const auto& u : all) CHECK(f.accepts(u) == minimize(f).accepts(u));
    auto cmp = fsa_compare(f, g);
    if (cmp.equal) {
      CHECK(as_set(fsa_language_upto(g, 5)) == as_set(lf));
    } else {
      REQUIRE(cmp.witness);
      CHECK(f.accepts(*cmp.witness) != g.accepts(*cmp.witness));
    }
  }
}

TEST_CASE("fsa json") {
  Fsa f = even(a);
  auto j = fsa_to_json(f);
  CHECK(j["initial"] == 0);
  CHECK(fsa_equal(fsa_from_json(nlohmann::json::parse(j.dump())), f));
  auto bad = j;
  bad["transitions"][0]["to"] = 7;
  CHECK_THROWS_AS(fsa_from_json(bad), SchemaError);
  bad = j;
  bad["transitions"][0]["input"] = "a b";
  CHECK_THROWS_AS(fsa_from_json(bad), SchemaError);
  CHECK_THROWS_AS(fsa_from_json(nlohmann::json::array()), SchemaError);
}

TEST_CASE("pda for the bicyclic sapling") {
  Sapling s = found(cases()[0]);
  Pda p = build_pda(s);
  int gamma_c = 0;
  for (const auto& X : s.X) gamma_c += static_cast<int>(components_rel(s.graph(), X, s.x0()).gamma_c.size());
  CHECK(p.num_states == s.graph().num_vertices() + gamma_c + 1);
  CHECK(p.stack_symbols[0] == "Z");

  CHECK(pda_accepts(p, w("a a'")));
  CHECK(pda_accepts(p, w("1")));
  CHECK_FALSE(pda_accepts(p, w("a' a")));
  CHECK_FALSE(pda_accepts(p, w("a")));
  Cfg g = pda_to_cfg(p);
  for (int n = 0; n <= 6; ++n) {
    InvWord u(static_cast<std::size_t>(n), a);
    u.insert(u.end(), static_cast<std::size_t>(n), a.inverse());
    CHECK(cfg_accepts(g, u));
    if (n > 0) {
      InvWord v = u;
      v.pop_back();
      CHECK_FALSE(cfg_accepts(g, v));
    }
    // walking out twice as far as the sapling itself
    InvWord far(static_cast<std::size_t>(2 * n + 10), a);
    far.insert(far.end(), far.size(), a.inverse());
    CHECK(cfg_accepts(g, far));
  }
  CHECK(pda_to_json(p)["stack"].size() == p.stack_symbols.size());
}

TEST_CASE("pda without a system is a finite automaton") {
  Sapling s = found(cases()[2]);
  Pda p = build_pda(s);
  CHECK(p.num_states == s.graph().num_vertices() + 1);
  CHECK(p.stack_symbols.size() == 1);
  for (const auto& t : p.transitions) CHECK(t.push == std::vector<int>{Pda::Z});
  for (const auto& u : testsupport::all_words(testsupport::doubled({"a", "b"}), 4))
    CHECK(pda_accepts(p, u) == accepts(s.S.automaton, u));
}

TEST_CASE("pda json round trip") {
  Pda p = build_pda(found(cases()[1]));
  auto j = pda_to_json(p);
  Pda q = pda_from_json(nlohmann::json::parse(j.dump()));
  CHECK(pda_to_json(q) == j);
  auto bad = j;
  bad["transitions"][0]["pop"] = "7:7";
  CHECK_THROWS_AS(pda_from_json(bad), SchemaError);
  bad = j;
  bad["stack"][0] = "Y";
  CHECK_THROWS_AS(pda_from_json(bad), SchemaError);
}

TEST_CASE("long pushes are split for the grammar") {
  // (a^n, push n symbols) then pop each on a'
  Pda p;
  p.num_states = 3;
  p.initial = 0;
  p.final_state = 2;
  p.stack_symbols = {"Z", "X"};
  p.transitions.push_back({0, a, Pda::Z, {1, 1, 1, Pda::Z}, 1});
  p.transitions.push_back({1, a.inverse(), 1, {}, 1});
  p.transitions.push_back({1, std::nullopt, Pda::Z, {Pda::Z}, 2});
  CHECK(pda_accepts(p, w("a a' a' a'")));
  CHECK_FALSE(pda_accepts(p, w("a a' a'")));
  CHECK_FALSE(pda_accepts(p, w("a a' a' a' a'")));
}

TEST_CASE("pda, expansions and materializations agree on short words") {
  for (const Case& c : cases()) {
    CAPTURE(c.name);
    Sapling s = found(c);
    Cfg g = pda_to_cfg(build_pda(s));
    std::vector<ApproxAutomaton> ex, mat;
    for (int m = 0; m <= 12; ++m) ex.push_back(expand(c.w, c.P, m));
    for (int i = 0; i <= 4; ++i) mat.push_back(materialize(s, i));
    const int len = c.P.alphabet.size() == 1 ? 8 : 5;
    int accepted = 0;
    for (const auto& u : testsupport::all_words(c.P.letters(), len)) {
      bool in_pda = cfg_accepts(g, u);
      bool in_ex = std::any_of(ex.begin(), ex.end(), [&](const auto& e) { return accepts(e.automaton, u); });
      bool in_mat = std::any_of(mat.begin(), mat.end(), [&](const auto& e) { return accepts(e.automaton, u); });
      CAPTURE(format_word(u));
      CHECK(in_pda == in_ex);
      CHECK(in_pda == in_mat);
      accepted += in_pda;
    }
    CHECK(accepted > 0);
    CHECK(cfg_accepts(g, c.w));
  }
}

TEST_CASE("acceptance respects x x' x = x") {
  std::mt19937 rng(11);
  for (const Case& c : cases()) {
    CAPTURE(c.name);
    Cfg g = pda_to_cfg(build_pda(found(c)));
    const auto letters = c.P.letters();
    for (int t = 0; t < 80; ++t) {
      InvWord u = testsupport::random_word(rng, letters, 6);
      InvWord x = testsupport::random_word(rng, letters, 2);
      std::uniform_int_distribution<std::size_t> at(0, u.size());
      std::size_t pos = at(rng);
      InvWord lhs(u.begin(), u.begin() + static_cast<long>(pos));
      InvWord rhs(u.begin() + static_cast<long>(pos), u.end());
      InvWord longer = concat(concat(lhs, concat(concat(x, invert_word(x)), x)), rhs);
      InvWord shorter = concat(concat(lhs, x), rhs);
      CHECK(cfg_accepts(g, longer) == cfg_accepts(g, shorter));
    }
  }
}

TEST_CASE("geodesic automaton of the bicyclic ray") {
  Sapling s = found(cases()[0]);
  Fsa f = geodesic_automaton_from_sapling(s, 0, 2);
  CHECK(fsa_equal(f, star(a)));
  auto words = fsa_language_upto(f, 10);
  CHECK(words.size() == 11);

  // a depth that leaves no trusted ball
  CHECK_THROWS_AS(geodesic_automaton(materialize(s, 0).graph(), 0, 0, 2, 2), GeodesicError);
  CHECK(fsa_equal(geodesic_automaton(materialize(s, 0).graph(), 0, 0, 2, 3), star(a)));
  // trusting a truncated ray all the way is inconsistent at the tip
  CHECK_THROWS_AS(geodesic_automaton(testsupport::ray(a, 10).graph, 0, 0, 2), GeodesicError);
  CHECK(fsa_equal(geodesic_automaton_from_sapling(s, 0, 0), star(a)));
  CHECK_THROWS_AS(geodesic_automaton(materialize(s, 0).graph(), 0, 0, 2, -1), GeodesicError);
}

TEST_CASE("geodesic automaton on finite trees") {
  std::mt19937 rng(3);
  const auto labels = testsupport::doubled({"a", "b"});
  for (int t = 0; t < 20; ++t) {
    InvWordGraph g = fold(testsupport::random_tree(rng, 12, labels));
    Fsa f = geodesic_automaton(g, 0, 1, 2);
    std::set<InvWord> paths;
    for (Vertex v = 0; v < g.num_vertices(); ++v) paths.insert(geodesic(g, 0, v)->labels);
    CHECK(as_set(fsa_language_upto(f, g.num_vertices())) == paths);
  }
}

TEST_CASE("geodesic automaton matches brute force on materializations") {
  for (const Case& c : cases()) {
    CAPTURE(c.name);
    Sapling s = found(c);
    const int steps = 3;
    ApproxAutomaton m = materialize(s, steps);
    ApproxAutomaton m1 = materialize(s, steps + 1);
    int r = trusted_radius(m.graph(), m1.graph(), m.automaton.start, s.K + 1);
    REQUIRE(r >= 0);
    Fsa f = geodesic_automaton(m.graph(), m.automaton.start, 0, s.K, r);
    const int L = std::min(8, r);
    CHECK(as_set(fsa_language_upto(f, L)) == geodesic_words(m.graph(), m.automaton.start, L));
    // no accepted word has a shorter path to the same endpoint
    for (const auto& u : fsa_language_upto(f, L)) {
      Vertex end = *read_word(m.graph(), m.automaton.start, u);
      CHECK(distance(m.graph(), m.automaton.start, end) == static_cast<int>(u.size()));
    }
  }
}

TEST_CASE("geodesics of the truncated irrtree example") {
  Presentation P = irrtree();
  CHECK(P.K() == 12);
  auto r = find_sapling(w("a a'"), P, 20);
  REQUIRE(r.status == SearchStatus::Finite);
  Fsa f = geodesic_automaton(r.finite->graph(), r.finite->automaton.start, 0, P.K());
  for (const char* u : {"1", "a", "b", "b b", "b c", "b b b", "b b b b", "b b b b c"}) CHECK(f.accepts(w(u)));
  for (const char* u : {"b b c", "c", "a b", "b b b c", "b c c'", "a a'"}) CHECK_FALSE(f.accepts(w(u)));
}

TEST_CASE("word problem") {
  auto B = bicyclic();
  auto r = word_problem(w("a a'"), w("1"), B, 50);
  CHECK(r.answer == WordAnswer::Equal);
  r = word_problem(w("a' a"), w("1"), B, 50);
  CHECK(r.answer == WordAnswer::Unequal);
  CHECK(r.method == "pda");
  CHECK(word_problem(w("a' a"), w("1"), B, 3).answer == WordAnswer::Exhausted);
  CHECK(word_problem(w("a a a' a'"), w("1"), integers(), 50).answer == WordAnswer::Equal);
  CHECK(word_problem(w("a a' a a'"), w("a a'"), B, 50).answer == WordAnswer::Equal);
  CHECK(word_problem(w("a' a a a'"), w("a a' a' a"), B, 50).answer == WordAnswer::Equal);
  CHECK(word_problem(w("a"), w("a a' a"), freered(), 50).answer == WordAnswer::Equal);
  CHECK(word_problem(w("a"), w("a a"), freered(), 50).answer == WordAnswer::Unequal);

  std::mt19937 rng(5);
  auto F = make_presentation({"a", "b"}, {});
  const auto letters = F.letters();
  for (int t = 0; t < 40; ++t) {
    InvWord u = testsupport::random_word(rng, letters, 5);
    InvWord v = t % 3 == 0 ? concat(u, concat(invert_word(u), u)) : testsupport::random_word(rng, letters, 5);
    auto res = word_problem(u, v, F, 10);
    REQUIRE(res.answer != WordAnswer::Exhausted);
    CHECK((res.answer == WordAnswer::Equal) == fim_equal(u, v));
  }
}
