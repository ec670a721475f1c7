#pragma once

// Folding a homomorphism theta0: Gamma0 -> Delta0 of arbitrary connected
// automata down to theta_{H,K} between the Stallings automata, keeping a
// homomorphism at every stage and recording where surjectivity is lost.

#include <algorithm>
#include <array>
#include <cstddef>
#include <numeric>
#include <span>
#include <unordered_map>
#include <utility>
#include <vector>

#include "stallings/automaton.hpp"
#include "stallings/endomorphism.hpp"
#include "stallings/error.hpp"
#include "stallings/union_find.hpp"

namespace stallings {

namespace detail {

// Builds an automaton from raw edges; position[i] is the index of raw edge i
// in the sorted edge list.
struct Assembled {
  Automaton automaton;
  std::vector<std::size_t> position;
};

inline Assembled assemble(std::size_t alphabet_size, std::size_t vertex_count,
                          Vertex basepoint, std::vector<Edge> raw) {
  std::vector<std::size_t> order(raw.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return raw[a] < raw[b]; });
  std::vector<std::size_t> position(raw.size());
  for (std::size_t k = 0; k < order.size(); ++k) position[order[k]] = k;
  return {Automaton(alphabet_size, vertex_count, basepoint, std::move(raw)),
          std::move(position)};
}

// Subdivision of every edge into the path reading the image of its label.
struct Expansion {
  Assembled graph;
  // Per original edge: first inner vertex and first raw path edge.
  std::vector<Vertex> first_inner;
  std::vector<std::size_t> first_edge;
};

inline Expansion expand_graph(Automaton const& g, Endomorphism const& phi) {
  if (phi.arity_in() != g.alphabet_size()) {
    throw ArityMismatch("endomorphism domain differs from the automaton alphabet");
  }
  for (Word const& w : phi.images()) {
    if (w.is_identity()) throw NotAutomorphism("a letter has trivial image");
  }
  Expansion out;
  std::vector<Edge> raw;
  auto next = static_cast<Vertex>(g.vertex_count());
  for (Edge const& e : g.edges()) {
    Word const& w = phi.image(e.letter);
    out.first_inner.push_back(next);
    out.first_edge.push_back(raw.size());
    Vertex from = e.src;
    for (std::size_t j = 0; j < w.size(); ++j) {
      Vertex to = j + 1 == w.size() ? e.dst : next++;
      Letter l = w[j];
      auto a = static_cast<std::uint32_t>(l.index());
      if (l.is_positive()) {
        raw.push_back({from, a, to});
      } else {
        raw.push_back({to, a, from});
      }
      from = to;
    }
  }
  out.graph = assemble(phi.arity_out(), next, g.basepoint(), std::move(raw));
  return out;
}

}  // namespace detail

// Replaces each edge labelled a by a path reading the image of a. The
// language of the result is the image of the language under phi.
inline Automaton expand(Automaton const& g, Endomorphism const& phi) {
  return detail::expand_graph(g, phi).graph.automaton;
}

// The homomorphism between expansions induced by theta.
inline Morphism expand_morphism(Morphism const& theta, Endomorphism const& phi) {
  theta.validate();
  auto s = detail::expand_graph(theta.source, phi);
  auto t = detail::expand_graph(theta.target, phi);
  Morphism m{s.graph.automaton, t.graph.automaton, {}, {}};
  m.vertex_map.assign(m.source.vertex_count(), kNoVertex);
  m.edge_map.assign(m.source.edge_count(), kNoEdge);
  for (Vertex v = 0; v < theta.source.vertex_count(); ++v) {
    m.vertex_map[v] = theta.vertex_map[v];
  }
  for (std::size_t i = 0; i < theta.source.edge_count(); ++i) {
    std::size_t const f = theta.edge_map[i];
    std::size_t const len = phi.image(theta.source.edge(i).letter).size();
    for (std::size_t j = 0; j + 1 < len; ++j) {
      m.vertex_map[s.first_inner[i] + j] = t.first_inner[f] + static_cast<Vertex>(j);
    }
    for (std::size_t j = 0; j < len; ++j) {
      m.edge_map[s.graph.position[s.first_edge[i] + j]] =
          t.graph.position[t.first_edge[f] + j];
    }
  }
  return m;
}

// Glues the sources (and the targets) along their basepoints.
inline Morphism wedge(std::span<Morphism const> parts) {
  if (parts.empty()) throw InvalidMorphism("empty wedge");
  std::size_t const alphabet = parts.front().source.alphabet_size();
  struct Side {
    std::vector<Edge> raw;
    Vertex next = 1;
    std::vector<std::vector<Vertex>> number;
    std::vector<std::size_t> first_edge;
  };
  auto glue = [&](Side& side, Automaton const& g) {
    if (g.alphabet_size() != alphabet) {
      throw ArityMismatch("wedge of automata over different alphabets");
    }
    std::vector<Vertex> number(g.vertex_count());
    for (Vertex v = 0; v < g.vertex_count(); ++v) {
      number[v] = v == g.basepoint() ? 0 : side.next++;
    }
    side.first_edge.push_back(side.raw.size());
    for (Edge const& e : g.edges()) {
      side.raw.push_back({number[e.src], e.letter, number[e.dst]});
    }
    side.number.push_back(std::move(number));
  };
  Side src, dst;
  for (Morphism const& p : parts) {
    p.validate();
    glue(src, p.source);
    glue(dst, p.target);
  }
  auto s = detail::assemble(alphabet, src.next, 0, std::move(src.raw));
  auto t = detail::assemble(alphabet, dst.next, 0, std::move(dst.raw));
  Morphism m{s.automaton, t.automaton, {}, {}};
  m.vertex_map.assign(m.source.vertex_count(), kNoVertex);
  m.edge_map.assign(m.source.edge_count(), kNoEdge);
  for (std::size_t k = 0; k < parts.size(); ++k) {
    Morphism const& p = parts[k];
    for (Vertex v = 0; v < p.source.vertex_count(); ++v) {
      m.vertex_map[src.number[k][v]] = dst.number[k][p.vertex_map[v]];
    }
    for (std::size_t i = 0; i < p.source.edge_count(); ++i) {
      m.edge_map[s.position[src.first_edge[k] + i]] =
          t.position[dst.first_edge[k] + p.edge_map[i]];
    }
  }
  return m;
}

// State after one step of the synchronized fold.
struct SyncFoldStep {
  bool onto = false;
  std::size_t source_vertices = 0;
  std::size_t source_edges = 0;
  std::size_t target_vertices = 0;
  std::size_t target_edges = 0;
};

struct SyncFoldTrace {
  // steps[0] is the input; steps[i] the state after step i.
  std::array<SyncFoldStep, 5> steps;

  bool onto_after(std::size_t step) const { return steps.at(step).onto; }

  // Whether step i changed neither automaton.
  bool step_empty(std::size_t step) const {
    SyncFoldStep const& a = steps.at(step - 1);
    SyncFoldStep const& b = steps.at(step);
    return a.source_vertices == b.source_vertices &&
           a.source_edges == b.source_edges &&
           a.target_vertices == b.target_vertices &&
           a.target_edges == b.target_edges;
  }
};

struct SyncFoldResult {
  // theta_{H,K} between canonical Stallings automata.
  Morphism theta;
  SyncFoldTrace trace;
};

namespace detail {

class SyncFolder {
 public:
  explicit SyncFolder(Morphism const& m)
      : alphabet_(m.source.alphabet_size()),
        src_(m.source),
        dst_(m.target),
        vmap_(m.vertex_map),
        emap_(m.edge_map) {}

  SyncFoldResult run() {
    SyncFoldResult out;
    out.trace.steps[0] = state();
    // (1) fold the source, mirroring each fold in the target.
    while (fold_pass(src_, true)) {}
    out.trace.steps[1] = state();
    // (2) finish folding the target.
    while (fold_pass(dst_, false)) {}
    out.trace.steps[2] = state();
    // (3) trim the target, dropping preimages of removed cells.
    trim(dst_);
    for (std::size_t e = 0; e < src_.edges.size(); ++e) {
      if (src_.alive[e] && !dst_.alive[dst_.edge_uf.find(emap_[e])]) {
        src_.alive[e] = false;
      }
    }
    for (std::size_t v = 0; v < src_.present.size(); ++v) {
      if (src_.present[v] && !dst_.present[dst_.find(vmap_[v])]) {
        src_.present[v] = false;
      }
    }
    out.trace.steps[3] = state();
    // (4) finish trimming the source.
    trim(src_);
    out.trace.steps[4] = state();
    out.theta = final_morphism();
    return out;
  }

 private:
  struct Side {
    explicit Side(Automaton const& g)
        : vertex_uf(g.vertex_count()),
          edge_uf(g.edge_count()),
          present(g.vertex_count(), true),
          alive(g.edge_count(), true),
          basepoint(g.basepoint()) {
      edges.assign(g.edges().begin(), g.edges().end());
    }

    Vertex find(Vertex v) { return static_cast<Vertex>(vertex_uf.find(v)); }

    UnionFind vertex_uf;
    UnionFind edge_uf;
    std::vector<bool> present;  // meaningful on roots only
    std::vector<bool> alive;    // meaningful on roots only
    std::vector<Edge> edges;
    Vertex basepoint;
  };

  // One sweep over the live edges of `side`, folding every clash found.
  // Returns whether anything was folded.
  bool fold_pass(Side& side, bool mirror) {
    std::unordered_map<std::uint64_t, std::size_t> first;
    bool folded = false;
    for (std::size_t e = 0; e < side.edges.size(); ++e) {
      if (!side.alive[e]) continue;
      for (int end = 0; end < 2 && side.alive[e]; ++end) {
        std::uint64_t const k = key(side, e, end);
        auto [it, fresh] = first.try_emplace(k, e);
        if (fresh) continue;
        std::size_t const f = it->second;
        if (!side.alive[f] || key(side, f, end) != k) {
          it->second = e;
          continue;
        }
        std::size_t const survivor = fold(side, f, e, end);
        if (mirror) mirror_fold(f, e, end);
        it->second = survivor;
        folded = true;
      }
    }
    return folded;
  }

  // (root of the vertex at this end, letter code read leaving it).
  std::uint64_t key(Side& side, std::size_t e, int end) const {
    Edge const& x = side.edges[e];
    Vertex const v = side.find(end == 0 ? x.src : x.dst);
    std::uint64_t const code = 2 * std::uint64_t{x.letter} + static_cast<unsigned>(end);
    return (std::uint64_t{v} << 32) | code;
  }

  // Folds edges a and b sharing the vertex at `end`; returns the survivor.
  static std::size_t fold(Side& side, std::size_t a, std::size_t b, int end) {
    Edge const& x = side.edges[a];
    Edge const& y = side.edges[b];
    Vertex const p = end == 0 ? x.dst : x.src;
    Vertex const q = end == 0 ? y.dst : y.src;
    side.vertex_uf.join(p, q);
    std::size_t const r = side.edge_uf.join(a, b);
    side.alive[r == a ? b : a] = false;
    return r;
  }

  void mirror_fold(std::size_t a, std::size_t b, int end) {
    std::size_t const fa = dst_.edge_uf.find(emap_[a]);
    std::size_t const fb = dst_.edge_uf.find(emap_[b]);
    if (fa != fb) fold(dst_, fa, fb, end);
  }

  // Restricts `side` to the core of its current quotient.
  void trim(Side& side) {
    auto snap = snapshot(side);
    auto core = trim_core(snap.automaton);
    for (std::size_t i = 0; i < snap.roots.size(); ++i) {
      if (core.vertex_map[i] == kNoVertex) side.present[snap.roots[i]] = false;
    }
    for (std::size_t i = 0; i < snap.edges.size(); ++i) {
      Edge const& e = snap.automaton.edge(snap.position[i]);
      if (core.vertex_map[e.src] == kNoVertex || core.vertex_map[e.dst] == kNoVertex) {
        side.alive[snap.edges[i]] = false;
      }
    }
  }

  struct Snapshot {
    Automaton automaton;
    std::vector<Vertex> roots;           // automaton vertex -> root
    std::vector<Vertex> index;           // root -> automaton vertex
    std::vector<std::size_t> edges;      // raw edge -> side edge
    std::vector<std::size_t> position;   // raw edge -> automaton edge
  };

  Snapshot snapshot(Side& side) const {
    Snapshot s;
    s.index.assign(side.present.size(), kNoVertex);
    for (Vertex v = 0; v < side.present.size(); ++v) {
      if (side.find(v) == v && side.present[v]) {
        s.index[v] = static_cast<Vertex>(s.roots.size());
        s.roots.push_back(v);
      }
    }
    std::vector<Edge> raw;
    for (std::size_t e = 0; e < side.edges.size(); ++e) {
      if (!side.alive[e]) continue;
      Edge const& x = side.edges[e];
      raw.push_back({s.index[side.find(x.src)], x.letter, s.index[side.find(x.dst)]});
      s.edges.push_back(e);
    }
    auto a = assemble(alphabet_, s.roots.size(), s.index[side.find(side.basepoint)],
                      std::move(raw));
    s.automaton = std::move(a.automaton);
    s.position = std::move(a.position);
    return s;
  }

  SyncFoldStep state() {
    SyncFoldStep st;
    std::vector<bool> hit_v(dst_.present.size(), false);
    std::vector<bool> hit_e(dst_.edges.size(), false);
    for (Vertex v = 0; v < src_.present.size(); ++v) {
      if (src_.find(v) != v || !src_.present[v]) continue;
      ++st.source_vertices;
      hit_v[dst_.find(vmap_[v])] = true;
    }
    for (std::size_t e = 0; e < src_.edges.size(); ++e) {
      if (!src_.alive[e]) continue;
      ++st.source_edges;
      hit_e[dst_.edge_uf.find(emap_[e])] = true;
    }
    st.onto = true;
    for (Vertex v = 0; v < dst_.present.size(); ++v) {
      if (dst_.find(v) != v || !dst_.present[v]) continue;
      ++st.target_vertices;
      st.onto = st.onto && hit_v[v];
    }
    for (std::size_t e = 0; e < dst_.edges.size(); ++e) {
      if (!dst_.alive[e]) continue;
      ++st.target_edges;
      st.onto = st.onto && hit_e[e];
    }
    return st;
  }

  Morphism final_morphism() {
    auto s = snapshot(src_);
    auto t = snapshot(dst_);
    auto const s_number = canonical_numbering(s.automaton);
    auto const t_number = canonical_numbering(t.automaton);
    Morphism m{renumber(s.automaton, s_number), renumber(t.automaton, t_number), {}, {}};
    m.vertex_map.assign(m.source.vertex_count(), kNoVertex);
    for (std::size_t i = 0; i < s.roots.size(); ++i) {
      Vertex const image = t.index[dst_.find(vmap_[s.roots[i]])];
      m.vertex_map[s_number[i]] = t_number[image];
    }
    Transitions const tt(m.target);
    m.edge_map.resize(m.source.edge_count());
    for (std::size_t i = 0; i < m.source.edge_count(); ++i) {
      Edge const& e = m.source.edge(i);
      m.edge_map[i] = tt.edge(m.vertex_map[e.src], 2 * std::size_t{e.letter});
    }
    m.validate();
    return m;
  }

  std::size_t alphabet_;
  Side src_;
  Side dst_;
  std::vector<Vertex> vmap_;
  std::vector<std::size_t> emap_;
};

}  // namespace detail

// Runs steps (0)-(4): fold the source while folding the images of each folded
// pair in the target; finish folding the target; trim the target together
// with the preimages of what it loses; finish trimming the source.
inline SyncFoldResult synchronized_fold(Morphism const& theta0) {
  theta0.validate();
  if (theta0.source.alphabet_size() != theta0.target.alphabet_size()) {
    throw InvalidMorphism("automata over different alphabets");
  }
  if (!theta0.source.is_connected() || !theta0.target.is_connected()) {
    throw InvalidAutomaton("synchronized folding needs connected automata");
  }
  return detail::SyncFolder(theta0).run();
}

}  // namespace stallings
