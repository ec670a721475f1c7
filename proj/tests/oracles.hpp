#pragma once

// Independent reference implementations shared by the unit tests and the
// acceptance runner. They use only the word type and plain edge lists.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <map>
#include <numeric>
#include <random>
#include <set>
#include <vector>

#include "stallings/automaton.hpp"
#include "stallings/word.hpp"
#include "test_support.hpp"

namespace stallings::testing_support {

// Random generating set: 1..4 words of length 1..8.
inline std::vector<Word> random_generators(std::mt19937_64& rng, std::size_t r) {
  std::uniform_int_distribution<std::size_t> count(1, 4), len(1, 8);
  std::vector<Word> gens(count(rng));
  for (Word& w : gens) w = random_reduced(rng, r, len(rng));
  return gens;
}

// Edge-list folding with no shared code: merge the far ends of the first
// clashing pair until none is left, then strip degree-one vertices.
struct NaiveGraph {
  std::size_t n;
  std::vector<Edge> edges;
};

inline NaiveGraph naive_stallings(std::vector<Word> const& gens) {
  NaiveGraph g{1, {}};
  for (Word const& w : gens) {
    Vertex from = 0;
    for (std::size_t i = 0; i < w.size(); ++i) {
      Vertex to = i + 1 == w.size() ? 0 : static_cast<Vertex>(g.n++);
      auto a = static_cast<std::uint32_t>(w[i].index());
      if (w[i].is_positive()) {
        g.edges.push_back({from, a, to});
      } else {
        g.edges.push_back({to, a, from});
      }
      from = to;
    }
  }
  std::vector<Vertex> rep(g.n);
  std::iota(rep.begin(), rep.end(), Vertex{0});
  auto find = [&](Vertex v) {
    while (rep[v] != v) v = rep[v];
    return v;
  };
  for (bool again = true; again;) {
    again = false;
    for (std::size_t i = 0; i < g.edges.size() && !again; ++i) {
      for (std::size_t j = i + 1; j < g.edges.size() && !again; ++j) {
        Edge x = g.edges[i], y = g.edges[j];
        if (x.letter != y.letter) continue;
        bool same_src = find(x.src) == find(y.src);
        bool same_dst = find(x.dst) == find(y.dst);
        if (!same_src && !same_dst) continue;
        Vertex a = same_src ? find(x.dst) : find(x.src);
        Vertex b = same_src ? find(y.dst) : find(y.src);
        if (a != b) rep[std::max(a, b)] = std::min(a, b);
        g.edges.erase(g.edges.begin() + static_cast<long>(j));
        again = true;
      }
    }
  }
  for (Edge& e : g.edges) e = {find(e.src), e.letter, find(e.dst)};
  for (bool again = true; again;) {
    again = false;
    std::map<Vertex, int> degree;
    for (Edge const& e : g.edges) {
      ++degree[e.src];
      ++degree[e.dst];
    }
    for (std::size_t i = 0; i < g.edges.size(); ++i) {
      Edge const& e = g.edges[i];
      if ((e.src != 0 && degree[e.src] == 1) || (e.dst != 0 && degree[e.dst] == 1)) {
        g.edges.erase(g.edges.begin() + static_cast<long>(i));
        again = true;
        break;
      }
    }
  }
  std::set<Vertex> live{0};
  for (Edge const& e : g.edges) {
    live.insert(e.src);
    live.insert(e.dst);
  }
  std::map<Vertex, Vertex> number;
  for (Vertex v : live) number.emplace(v, static_cast<Vertex>(number.size()));
  for (Edge& e : g.edges) e = {number[e.src], e.letter, number[e.dst]};
  g.n = live.size();
  return g;
}

inline Automaton to_automaton(NaiveGraph const& g, std::size_t r) {
  return Automaton(r, g.n, 0, g.edges);
}

// Products of at most three generators or inverses.
inline std::vector<Word> short_products(std::vector<Word> const& gens) {
  std::vector<Word> letters;
  for (Word const& g : gens) {
    letters.push_back(g);
    letters.push_back(invert(g));
  }
  std::vector<Word> out{Word{}};
  std::vector<Word> frontier{Word{}};
  for (int len = 0; len < 3; ++len) {
    std::vector<Word> next;
    for (Word const& p : frontier) {
      for (Word const& l : letters) next.push_back(multiply(p, l));
    }
    out.insert(out.end(), next.begin(), next.end());
    frontier = std::move(next);
  }
  return out;
}

}  // namespace stallings::testing_support
