#pragma once

#include <random>
#include <set>
#include <string>
#include <vector>

#include "invmon/graph.hpp"
#include "invmon/stephen.hpp"
#include "invmon/words.hpp"

namespace testsupport {

using namespace invmon;

inline InvWord w(const std::string& s) { return parse_word(s); }

inline std::vector<Letter> doubled(const std::vector<std::string>& bases) {
  std::vector<Letter> out;
  for (const auto& b : bases) {
    out.push_back(Letter::named(b, false));
    out.push_back(Letter::named(b, true));
  }
  return out;
}

inline InvWord random_word(std::mt19937& rng, const std::vector<Letter>& letters, int max_len) {
  std::uniform_int_distribution<int> len(0, max_len);
  std::uniform_int_distribution<std::size_t> pick(0, letters.size() - 1);
  InvWord u;
  int n = len(rng);
  for (int i = 0; i < n; ++i) u.push_back(letters[pick(rng)]);
  return u;
}

/// Every word over `letters` of length <= max_len, shortest first.
inline std::vector<InvWord> all_words(const std::vector<Letter>& letters, int max_len) {
  std::vector<InvWord> out{{}};
  std::size_t lo = 0;
  for (int l = 1; l <= max_len; ++l) {
    std::size_t hi = out.size();
    for (std::size_t i = lo; i < hi; ++i)
      for (Letter x : letters) {
        InvWord u = out[i];
        u.push_back(x);
        out.push_back(std::move(u));
      }
    lo = hi;
  }
  return out;
}

/// Path 0 -x-> 1 -x-> ... -x-> n.
inline BirootedAutomaton ray(Letter x, int n, Vertex end = 0) {
  BirootedAutomaton a;
  a.graph = InvWordGraph(n + 1);
  for (int i = 0; i < n; ++i) a.graph.add_edge(i, x, i + 1);
  a.start = 0;
  a.end = end;
  return a;
}

inline InvWordGraph random_tree(std::mt19937& rng, int n, const std::vector<Letter>& labels) {
  InvWordGraph g(n);
  std::uniform_int_distribution<std::size_t> pick(0, labels.size() - 1);
  for (int v = 1; v < n; ++v) {
    std::uniform_int_distribution<int> parent(0, v - 1);
    g.add_edge(parent(rng), labels[pick(rng)], v);
  }
  return g;
}

}  // namespace testsupport
