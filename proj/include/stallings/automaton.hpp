#pragma once

// Involutive A-automata and the Stallings machinery on them: flower
// automata, folding, core extraction, canonical numbering, languages, bases,
// morphisms, quotients and intersections.
//
// Only positive edges are stored. An edge (p, a, q) is read forwards with the
// letter a and backwards with a^{-1}; its formal inverse is never
// materialized.

#include <algorithm>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <deque>
#include <limits>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "stallings/error.hpp"
#include "stallings/union_find.hpp"
#include "stallings/word.hpp"

namespace stallings {

using Vertex = std::uint32_t;
inline constexpr Vertex kNoVertex = std::numeric_limits<Vertex>::max();
inline constexpr std::size_t kNoEdge = std::numeric_limits<std::size_t>::max();

struct Edge {
  Vertex src = 0;
  std::uint32_t letter = 0;
  Vertex dst = 0;

  friend auto operator<=>(Edge const&, Edge const&) = default;
};

// A finite connected involutive automaton with a basepoint. Edges are kept
// sorted by (src, letter, dst), so two automata with the same vertex
// numbering compare equal exactly when they have the same edge multiset.
class Automaton {
 public:
  Automaton() = default;
  Automaton(std::size_t alphabet_size, std::size_t vertex_count,
            Vertex basepoint, std::vector<Edge> edges)
      : alphabet_size_(alphabet_size),
        vertex_count_(vertex_count),
        basepoint_(basepoint),
        edges_(std::move(edges)) {
    if (vertex_count_ == 0 || basepoint_ >= vertex_count_) {
      throw InvalidAutomaton("basepoint outside vertex range");
    }
    for (Edge const& e : edges_) {
      if (e.src >= vertex_count_ || e.dst >= vertex_count_) {
        throw InvalidAutomaton("edge endpoint outside vertex range");
      }
      if (e.letter >= alphabet_size_) {
        throw InvalidAutomaton("edge letter outside alphabet");
      }
    }
    std::sort(edges_.begin(), edges_.end());
  }

  // The one-vertex, edgeless automaton of the trivial subgroup.
  static Automaton trivial(std::size_t alphabet_size) {
    return Automaton(alphabet_size, 1, 0, {});
  }

  // The one-vertex automaton with a loop for every letter: F_A itself.
  static Automaton bouquet(std::size_t alphabet_size) {
    std::vector<Edge> edges;
    for (std::uint32_t a = 0; a < alphabet_size; ++a) edges.push_back({0, a, 0});
    return Automaton(alphabet_size, 1, 0, std::move(edges));
  }

  std::size_t alphabet_size() const noexcept { return alphabet_size_; }
  std::size_t vertex_count() const noexcept { return vertex_count_; }
  std::size_t edge_count() const noexcept { return edges_.size(); }
  Vertex basepoint() const noexcept { return basepoint_; }
  std::vector<Edge> const& edges() const noexcept { return edges_; }
  Edge const& edge(std::size_t i) const { return edges_.at(i); }

  // Same graph, seen over a larger alphabet.
  Automaton widened(std::size_t alphabet_size) const {
    if (alphabet_size < alphabet_size_) {
      throw InvalidAutomaton("cannot shrink the alphabet");
    }
    return Automaton(alphabet_size, vertex_count_, basepoint_, edges_);
  }

  // Number of edge ends at each vertex of the involutive closure (a loop
  // counts twice).
  std::vector<std::size_t> degrees() const {
    std::vector<std::size_t> d(vertex_count_, 0);
    for (Edge const& e : edges_) {
      ++d[e.src];
      ++d[e.dst];
    }
    return d;
  }

  bool is_connected() const {
    detail::UnionFind uf(vertex_count_);
    std::size_t classes = vertex_count_;
    for (Edge const& e : edges_) {
      if (!uf.same(e.src, e.dst)) {
        uf.join(e.src, e.dst);
        --classes;
      }
    }
    return classes == 1;
  }

  bool is_deterministic() const {
    std::vector<std::uint8_t> used(vertex_count_ * code_count(alphabet_size_), 0);
    std::size_t const k = code_count(alphabet_size_);
    for (Edge const& e : edges_) {
      auto& out = used[e.src * k + 2 * e.letter];
      auto& in = used[e.dst * k + 2 * e.letter + 1];
      if (out || in) return false;
      out = in = 1;
    }
    return true;
  }

  // No vertex other than the basepoint has degree below two. For connected
  // deterministic automata this is equivalent to every vertex lying on a
  // reduced closed path at the basepoint.
  bool is_trim() const {
    auto d = degrees();
    for (Vertex v = 0; v < vertex_count_; ++v) {
      if (v != basepoint_ && d[v] < 2) return false;
    }
    return true;
  }

  bool is_stallings() const {
    return is_connected() && is_deterministic() && is_trim();
  }

  // Rank of the language: |E+| - |V| + 1.
  std::size_t rank() const { return edges_.size() + 1 - vertex_count_; }

  friend bool operator==(Automaton const&, Automaton const&) = default;

 private:
  std::size_t alphabet_size_ = 0;
  std::size_t vertex_count_ = 1;
  Vertex basepoint_ = 0;
  std::vector<Edge> edges_;
};

// Lookup table for a deterministic automaton: for every vertex and signed
// letter, the edge read and the vertex reached (if any).
class Transitions {
 public:
  explicit Transitions(Automaton const& a)
      : codes_(code_count(a.alphabet_size())),
        target_(a.vertex_count() * codes_, kNoVertex),
        edge_(a.vertex_count() * codes_, kNoEdge) {
    for (std::size_t i = 0; i < a.edge_count(); ++i) {
      Edge const& e = a.edge(i);
      std::size_t fwd = e.src * codes_ + 2 * e.letter;
      std::size_t bwd = e.dst * codes_ + 2 * e.letter + 1;
      if (edge_[fwd] != kNoEdge || edge_[bwd] != kNoEdge) {
        throw InvalidAutomaton("automaton is not deterministic");
      }
      target_[fwd] = e.dst;
      edge_[fwd] = i;
      target_[bwd] = e.src;
      edge_[bwd] = i;
    }
  }

  std::size_t codes() const noexcept { return codes_; }

  Vertex target(Vertex v, std::size_t code) const {
    return target_[v * codes_ + code];
  }
  Vertex target(Vertex v, Letter l) const { return target(v, l.code()); }
  std::size_t edge(Vertex v, std::size_t code) const {
    return edge_[v * codes_ + code];
  }
  std::size_t edge(Vertex v, Letter l) const { return edge(v, l.code()); }

  // End of the path reading w from `from`, if the path exists.
  std::optional<Vertex> read(Vertex from, Word const& w) const {
    Vertex v = from;
    for (Letter l : w) {
      if (l.code() >= codes_) return std::nullopt;
      v = target(v, l);
      if (v == kNoVertex) return std::nullopt;
    }
    return v;
  }

 private:
  std::size_t codes_;
  std::vector<Vertex> target_;
  std::vector<std::size_t> edge_;
};

// An A-homomorphism: basepoint to basepoint, labels and incidences preserved.
struct Morphism {
  Automaton source;
  Automaton target;
  std::vector<Vertex> vertex_map;
  std::vector<std::size_t> edge_map;

  // Checks the homomorphism conditions; throws InvalidMorphism otherwise.
  void validate() const {
    if (vertex_map.size() != source.vertex_count() ||
        edge_map.size() != source.edge_count()) {
      throw InvalidMorphism("map sizes do not match the source automaton");
    }
    if (vertex_map[source.basepoint()] != target.basepoint()) {
      throw InvalidMorphism("basepoint not mapped to basepoint");
    }
    for (std::size_t i = 0; i < source.edge_count(); ++i) {
      Edge const& e = source.edge(i);
      if (edge_map[i] >= target.edge_count()) {
        throw InvalidMorphism("edge image out of range");
      }
      Edge const& f = target.edge(edge_map[i]);
      if (f.letter != e.letter || f.src != vertex_map[e.src] ||
          f.dst != vertex_map[e.dst]) {
        throw InvalidMorphism("edge image does not preserve label/incidence");
      }
    }
  }
};

inline bool is_onto(Morphism const& m) {
  std::vector<bool> hit_v(m.target.vertex_count(), false);
  std::vector<bool> hit_e(m.target.edge_count(), false);
  for (Vertex v : m.vertex_map) hit_v[v] = true;
  for (std::size_t e : m.edge_map) hit_e[e] = true;
  return std::all_of(hit_v.begin(), hit_v.end(), [](bool b) { return b; }) &&
         std::all_of(hit_e.begin(), hit_e.end(), [](bool b) { return b; });
}

inline bool is_injective(Morphism const& m) {
  std::vector<bool> hit_v(m.target.vertex_count(), false);
  std::vector<bool> hit_e(m.target.edge_count(), false);
  for (Vertex v : m.vertex_map) {
    if (hit_v[v]) return false;
    hit_v[v] = true;
  }
  for (std::size_t e : m.edge_map) {
    if (hit_e[e]) return false;
    hit_e[e] = true;
  }
  return true;
}

////////////////////////////////////////////////////////////////////////
// Flower automaton
////////////////////////////////////////////////////////////////////////

// One petal per non-trivial generator, glued at the basepoint 0. Vertex count
// is 1 + sum(|w| - 1).
inline Automaton flower(std::span<Word const> generators,
                        std::size_t alphabet_size) {
  std::vector<Edge> edges;
  Vertex next = 1;
  for (Word const& w : generators) {
    if (w.empty()) continue;
    if (w.min_rank() > alphabet_size) {
      throw ArityMismatch("generator uses a letter outside the alphabet");
    }
    Vertex from = 0;
    for (std::size_t i = 0; i < w.size(); ++i) {
      Vertex to = (i + 1 == w.size()) ? 0 : next++;
      Letter l = w[i];
      auto a = static_cast<std::uint32_t>(l.index());
      if (l.is_positive()) {
        edges.push_back({from, a, to});
      } else {
        edges.push_back({to, a, from});
      }
      from = to;
    }
  }
  return Automaton(alphabet_size, next, 0, std::move(edges));
}

////////////////////////////////////////////////////////////////////////
// Folding
////////////////////////////////////////////////////////////////////////

namespace detail {

// Folding engine: a union-find over vertices plus, for every class
// representative, one transition per signed letter. A second transition for
// the same (vertex, letter) records a coincidence, resolved by merging.
class Folder {
 public:
  Folder(std::size_t alphabet_size, std::size_t vertex_count)
      : codes_(code_count(alphabet_size)),
        uf_(vertex_count),
        trans_(vertex_count * codes_, kNoVertex) {}

  std::size_t find(std::size_t v) { return uf_.find(v); }

  void add_edge(Vertex u, std::uint32_t letter, Vertex v) {
    Vertex ru = static_cast<Vertex>(uf_.find(u));
    Vertex rv = static_cast<Vertex>(uf_.find(v));
    set(ru, 2 * letter, rv);
    set(rv, 2 * letter + 1, ru);
  }

  void identify(Vertex u, Vertex v) { pending_.emplace_back(u, v); }

  // Resolves coincidences; `lifo` only changes the order, never the result.
  void run(bool lifo = false) {
    while (!pending_.empty()) {
      std::pair<Vertex, Vertex> p;
      if (lifo) {
        p = pending_.back();
        pending_.pop_back();
      } else {
        p = pending_.front();
        pending_.pop_front();
      }
      merge(p.first, p.second);
    }
  }

  Vertex target(std::size_t root, std::size_t code) {
    Vertex t = trans_[root * codes_ + code];
    return t == kNoVertex ? kNoVertex : static_cast<Vertex>(uf_.find(t));
  }

 private:
  void set(Vertex x, std::size_t code, Vertex y) {
    Vertex& slot = trans_[x * codes_ + code];
    if (slot == kNoVertex) {
      slot = y;
    } else {
      auto t = static_cast<Vertex>(uf_.find(slot));
      if (t != y) pending_.emplace_back(t, y);
    }
  }

  void merge(Vertex a, Vertex b) {
    std::size_t ra = uf_.find(a);
    std::size_t rb = uf_.find(b);
    if (ra == rb) return;
    std::size_t keep = uf_.join(ra, rb);
    std::size_t gone = keep == ra ? rb : ra;
    for (std::size_t c = 0; c < codes_; ++c) {
      Vertex tg = trans_[gone * codes_ + c];
      if (tg == kNoVertex) continue;
      auto g = static_cast<Vertex>(uf_.find(tg));
      Vertex& slot = trans_[keep * codes_ + c];
      if (slot == kNoVertex) {
        slot = g;
      } else {
        auto k = static_cast<Vertex>(uf_.find(slot));
        if (k != g) pending_.emplace_back(k, g);
      }
    }
  }

  std::size_t codes_;
  UnionFind uf_;
  std::vector<Vertex> trans_;
  std::deque<std::pair<Vertex, Vertex>> pending_;
};

// Reads the folded automaton off a finished Folder. Surviving classes are
// numbered by increasing representative; `vertex_map` sends each original
// vertex to its class.
inline Automaton extract(Folder& f, std::size_t alphabet_size,
                         std::size_t vertex_count, Vertex basepoint,
                         std::vector<Vertex>& vertex_map) {
  std::vector<Vertex> number(vertex_count, kNoVertex);
  Vertex next = 0;
  for (std::size_t v = 0; v < vertex_count; ++v) {
    if (f.find(v) == v) number[v] = next++;
  }
  vertex_map.resize(vertex_count);
  for (std::size_t v = 0; v < vertex_count; ++v) {
    vertex_map[v] = number[f.find(v)];
  }
  std::vector<Edge> edges;
  for (std::size_t v = 0; v < vertex_count; ++v) {
    if (number[v] == kNoVertex) continue;
    for (std::uint32_t a = 0; a < alphabet_size; ++a) {
      Vertex t = f.target(v, 2 * a);
      if (t != kNoVertex) edges.push_back({number[v], a, number[t]});
    }
  }
  return Automaton(alphabet_size, next, vertex_map[basepoint], std::move(edges));
}

inline Morphism collapse_morphism(Automaton const& source, Automaton target,
                                  std::vector<Vertex> vertex_map) {
  Transitions t(target);
  std::vector<std::size_t> edge_map(source.edge_count());
  for (std::size_t i = 0; i < source.edge_count(); ++i) {
    Edge const& e = source.edge(i);
    edge_map[i] = t.edge(vertex_map[e.src], 2 * e.letter);
  }
  return Morphism{source, std::move(target), std::move(vertex_map),
                  std::move(edge_map)};
}

}  // namespace detail

struct FoldResult {
  Automaton automaton;
  // From the input onto the folded automaton.
  Morphism morphism;
};

// Folds with edges inserted in `insertion_order` (a permutation of the edge
// indices; empty means natural order). The result does not depend on the
// order; the parameters exist so that this can be tested.
inline FoldResult fold(Automaton const& g,
                       std::span<std::size_t const> insertion_order,
                       bool lifo = false) {
  detail::Folder f(g.alphabet_size(), g.vertex_count());
  if (insertion_order.empty()) {
    for (Edge const& e : g.edges()) f.add_edge(e.src, e.letter, e.dst);
  } else {
    if (insertion_order.size() != g.edge_count()) {
      throw InvalidAutomaton("insertion order must list every edge once");
    }
    for (std::size_t i : insertion_order) {
      Edge const& e = g.edge(i);
      f.add_edge(e.src, e.letter, e.dst);
      if (lifo) f.run(true);
    }
  }
  f.run(lifo);
  std::vector<Vertex> vmap;
  Automaton out = detail::extract(f, g.alphabet_size(), g.vertex_count(),
                                  g.basepoint(), vmap);
  Morphism m = detail::collapse_morphism(g, out, std::move(vmap));
  return FoldResult{std::move(out), std::move(m)};
}

inline FoldResult fold(Automaton const& g) { return fold(g, {}); }

// The folded automaton alone, without the collapsing morphism.
inline Automaton fold_automaton(Automaton const& g) {
  detail::Folder f(g.alphabet_size(), g.vertex_count());
  for (Edge const& e : g.edges()) f.add_edge(e.src, e.letter, e.dst);
  f.run();
  std::vector<Vertex> vmap;
  return detail::extract(f, g.alphabet_size(), g.vertex_count(), g.basepoint(),
                         vmap);
}

////////////////////////////////////////////////////////////////////////
// Core, canonical numbering
////////////////////////////////////////////////////////////////////////

namespace detail {

// Edges incident to each vertex, in one flat array (a loop appears twice).
class Incidence {
 public:
  explicit Incidence(Automaton const& g)
      : offset_(g.vertex_count() + 1, 0), edges_(2 * g.edge_count()) {
    for (Edge const& e : g.edges()) {
      ++offset_[e.src + 1];
      ++offset_[e.dst + 1];
    }
    for (std::size_t v = 0; v < g.vertex_count(); ++v) {
      offset_[v + 1] += offset_[v];
    }
    std::vector<std::size_t> fill(offset_.begin(), offset_.end() - 1);
    for (std::size_t i = 0; i < g.edge_count(); ++i) {
      edges_[fill[g.edge(i).src]++] = i;
      edges_[fill[g.edge(i).dst]++] = i;
    }
  }

  std::span<std::size_t const> of(Vertex v) const {
    return {edges_.data() + offset_[v], offset_[v + 1] - offset_[v]};
  }

 private:
  std::vector<std::size_t> offset_;
  std::vector<std::size_t> edges_;
};

}  // namespace detail

struct TrimResult {
  Automaton core;
  // Old vertex -> core vertex, kNoVertex for removed vertices.
  std::vector<Vertex> vertex_map;
};

// Restricts to the given vertices and edges (which must keep the basepoint
// and stay connected), renumbering survivors in increasing order.
inline TrimResult restrict_to(Automaton const& g,
                              std::vector<bool> const& keep_vertex,
                              std::vector<bool> const& keep_edge) {
  std::vector<Vertex> vmap(g.vertex_count(), kNoVertex);
  Vertex next = 0;
  for (Vertex v = 0; v < g.vertex_count(); ++v) {
    if (keep_vertex[v]) vmap[v] = next++;
  }
  std::vector<Edge> edges;
  for (std::size_t i = 0; i < g.edge_count(); ++i) {
    if (!keep_edge[i]) continue;
    Edge const& e = g.edge(i);
    edges.push_back({vmap[e.src], e.letter, vmap[e.dst]});
  }
  Automaton core(g.alphabet_size(), next, vmap[g.basepoint()], std::move(edges));
  return TrimResult{std::move(core), std::move(vmap)};
}

// Largest trim subautomaton: repeatedly deletes degree-one vertices other
// than the basepoint together with their edge. Vertices not connected to the
// basepoint are dropped as well.
inline TrimResult trim_core(Automaton const& g) {
  std::size_t const n = g.vertex_count();
  detail::Incidence inc(g);
  std::vector<bool> keep_v(n, false), keep_e(g.edge_count(), true);
  // Component of the basepoint.
  {
    std::vector<Vertex> stack{g.basepoint()};
    keep_v[g.basepoint()] = true;
    while (!stack.empty()) {
      Vertex v = stack.back();
      stack.pop_back();
      for (std::size_t i : inc.of(v)) {
        Edge const& e = g.edge(i);
        Vertex w = e.src == v ? e.dst : e.src;
        if (!keep_v[w]) {
          keep_v[w] = true;
          stack.push_back(w);
        }
      }
    }
    for (std::size_t i = 0; i < g.edge_count(); ++i) {
      if (!keep_v[g.edge(i).src]) keep_e[i] = false;
    }
  }
  std::vector<std::size_t> degree(n, 0);
  for (std::size_t i = 0; i < g.edge_count(); ++i) {
    if (!keep_e[i]) continue;
    ++degree[g.edge(i).src];
    ++degree[g.edge(i).dst];
  }
  std::vector<Vertex> work;
  for (Vertex v = 0; v < n; ++v) {
    if (keep_v[v] && v != g.basepoint() && degree[v] <= 1) work.push_back(v);
  }
  while (!work.empty()) {
    Vertex v = work.back();
    work.pop_back();
    if (!keep_v[v]) continue;
    keep_v[v] = false;
    for (std::size_t i : inc.of(v)) {
      if (!keep_e[i]) continue;
      keep_e[i] = false;
      Edge const& e = g.edge(i);
      Vertex w = e.src == v ? e.dst : e.src;
      --degree[w];
      --degree[v];
      if (keep_v[w] && w != g.basepoint() && degree[w] <= 1) work.push_back(w);
    }
  }
  return restrict_to(g, keep_v, keep_e);
}

// The core of the underlying unbased graph: degree-one vertices are peeled
// off, the basepoint included, and the smallest surviving vertex becomes the
// basepoint. Its language is a conjugate of the original one. The trivial
// subgroup yields the one-vertex automaton.
inline Automaton cyclic_core(Automaton const& g) {
  if (g.edge_count() + 1 == g.vertex_count()) return Automaton::trivial(g.alphabet_size());
  std::size_t const n = g.vertex_count();
  detail::Incidence inc(g);
  std::vector<std::size_t> degree = g.degrees();
  std::vector<bool> keep_v(n, true), keep_e(g.edge_count(), true);
  std::vector<Vertex> work;
  for (Vertex v = 0; v < n; ++v) {
    if (degree[v] <= 1) work.push_back(v);
  }
  while (!work.empty()) {
    Vertex v = work.back();
    work.pop_back();
    if (!keep_v[v]) continue;
    keep_v[v] = false;
    for (std::size_t i : inc.of(v)) {
      if (!keep_e[i]) continue;
      keep_e[i] = false;
      Edge const& e = g.edge(i);
      Vertex w = e.src == v ? e.dst : e.src;
      if (--degree[w] <= 1 && keep_v[w]) work.push_back(w);
    }
  }
  std::vector<Vertex> vmap(n, kNoVertex);
  Vertex next = 0;
  for (Vertex v = 0; v < n; ++v) {
    if (keep_v[v]) vmap[v] = next++;
  }
  std::vector<Edge> edges;
  for (std::size_t i = 0; i < g.edge_count(); ++i) {
    if (!keep_e[i]) continue;
    Edge const& e = g.edge(i);
    edges.push_back({vmap[e.src], e.letter, vmap[e.dst]});
  }
  return Automaton(g.alphabet_size(), next, 0, std::move(edges));
}

// Breadth-first numbering from the basepoint, reading signed letters in the
// order a, a^-1, b, b^-1, ... For deterministic automata this numbering is
// a complete isomorphism invariant.
inline std::vector<Vertex> canonical_numbering(Automaton const& g) {
  Transitions t(g);
  std::vector<Vertex> number(g.vertex_count(), kNoVertex);
  std::vector<Vertex> order{g.basepoint()};
  number[g.basepoint()] = 0;
  for (std::size_t head = 0; head < order.size(); ++head) {
    Vertex v = order[head];
    for (std::size_t c = 0; c < t.codes(); ++c) {
      Vertex w = t.target(v, c);
      if (w != kNoVertex && number[w] == kNoVertex) {
        number[w] = static_cast<Vertex>(order.size());
        order.push_back(w);
      }
    }
  }
  return number;
}

inline Automaton renumber(Automaton const& g, std::vector<Vertex> const& number) {
  std::size_t count = 0;
  for (Vertex x : number) count += (x != kNoVertex);
  std::vector<Edge> edges;
  edges.reserve(g.edge_count());
  for (Edge const& e : g.edges()) {
    if (number[e.src] == kNoVertex) continue;
    edges.push_back({number[e.src], e.letter, number[e.dst]});
  }
  return Automaton(g.alphabet_size(), count, number[g.basepoint()],
                   std::move(edges));
}

inline Automaton canonicalize(Automaton const& g) {
  return renumber(g, canonical_numbering(g));
}

// Folds, trims and canonicalizes an arbitrary connected automaton.
inline Automaton normalize(Automaton const& g) {
  return canonicalize(trim_core(fold_automaton(g)).core);
}

namespace detail {

// flower, fold, trim_core and canonicalize fused into one pass over reusable
// buffers. Produces exactly normalize(flower(generators)).
class StallingsBuilder {
 public:
  Automaton build(std::span<Word const> generators, std::size_t alphabet_size) {
    codes_ = code_count(alphabet_size);
    std::size_t n = 1;
    for (Word const& w : generators) {
      if (w.min_rank() > alphabet_size) {
        throw ArityMismatch("generator uses a letter outside the alphabet");
      }
      if (!w.empty()) n += w.size() - 1;
    }
    parent_.resize(n);
    for (std::size_t v = 0; v < n; ++v) parent_[v] = static_cast<Vertex>(v);
    trans_.assign(n * codes_, kNoVertex);
    pending_.clear();
    Vertex next = 1;
    for (Word const& w : generators) {
      Vertex from = 0;
      for (std::size_t i = 0; i < w.size(); ++i) {
        Vertex to = (i + 1 == w.size()) ? 0 : next++;
        Letter l = w[i];
        set(find(from), l.code(), find(to));
        set(find(to), l.inverse().code(), find(from));
        drain();
        from = to;
      }
    }
    drain();
    // Peel degree-one vertices other than the basepoint.
    Vertex const base = find(0);
    alive_.assign(n, false);
    degree_.assign(n, 0);
    for (Vertex v = 0; v < n; ++v) {
      if (parent_[v] != v) continue;
      alive_[v] = true;
      for (std::size_t c = 0; c < codes_; ++c) {
        if (trans_[v * codes_ + c] != kNoVertex) ++degree_[v];
      }
    }
    stack_.clear();
    for (Vertex v = 0; v < n; ++v) {
      if (alive_[v] && v != base && degree_[v] <= 1) stack_.push_back(v);
    }
    while (!stack_.empty()) {
      Vertex v = stack_.back();
      stack_.pop_back();
      if (!alive_[v]) continue;
      alive_[v] = false;
      for (std::size_t c = 0; c < codes_; ++c) {
        Vertex t = target(v, c);
        if (t == kNoVertex || !alive_[t]) continue;
        if (--degree_[t] <= 1 && t != base) stack_.push_back(t);
      }
    }
    // Canonical breadth-first numbering and edge emission.
    number_.assign(n, kNoVertex);
    order_.clear();
    order_.push_back(base);
    number_[base] = 0;
    for (std::size_t head = 0; head < order_.size(); ++head) {
      Vertex v = order_[head];
      for (std::size_t c = 0; c < codes_; ++c) {
        Vertex t = target(v, c);
        if (t == kNoVertex || !alive_[t] || number_[t] != kNoVertex) continue;
        number_[t] = static_cast<Vertex>(order_.size());
        order_.push_back(t);
      }
    }
    std::vector<Edge> edges;
    for (Vertex v : order_) {
      for (std::uint32_t a = 0; 2 * a < codes_; ++a) {
        Vertex t = target(v, 2 * a);
        if (t != kNoVertex && alive_[t]) edges.push_back({number_[v], a, number_[t]});
      }
    }
    return Automaton(alphabet_size, order_.size(), 0, std::move(edges));
  }

 private:
  Vertex find(Vertex x) {
    while (parent_[x] != x) {
      parent_[x] = parent_[parent_[x]];
      x = parent_[x];
    }
    return x;
  }

  Vertex target(Vertex v, std::size_t c) {
    Vertex t = trans_[v * codes_ + c];
    return t == kNoVertex ? kNoVertex : find(t);
  }

  void set(Vertex x, std::size_t c, Vertex y) {
    Vertex& slot = trans_[x * codes_ + c];
    if (slot == kNoVertex) {
      slot = y;
    } else if (Vertex t = find(slot); t != y) {
      pending_.emplace_back(t, y);
    }
  }

  void drain() {
    while (!pending_.empty()) {
      auto [a, b] = pending_.back();
      pending_.pop_back();
      a = find(a);
      b = find(b);
      if (a == b) continue;
      if (b < a) std::swap(a, b);
      parent_[b] = a;
      for (std::size_t c = 0; c < codes_; ++c) {
        Vertex t = trans_[b * codes_ + c];
        if (t != kNoVertex) set(a, c, find(t));
      }
    }
  }

  std::size_t codes_ = 0;
  std::vector<Vertex> parent_;
  std::vector<Vertex> trans_;
  std::vector<std::pair<Vertex, Vertex>> pending_;
  std::vector<bool> alive_;
  std::vector<std::size_t> degree_;
  std::vector<Vertex> stack_;
  std::vector<Vertex> number_;
  std::vector<Vertex> order_;
};

}  // namespace detail

// The Stallings automaton of the subgroup generated by `generators`.
inline Automaton stallings(std::span<Word const> generators,
                           std::size_t alphabet_size) {
  thread_local detail::StallingsBuilder builder;
  return builder.build(generators, alphabet_size);
}

inline bool isomorphic(Automaton const& a, Automaton const& b) {
  if (a.alphabet_size() != b.alphabet_size() ||
      a.vertex_count() != b.vertex_count() || a.edge_count() != b.edge_count()) {
    return false;
  }
  return canonicalize(a) == canonicalize(b);
}

////////////////////////////////////////////////////////////////////////
// Language
////////////////////////////////////////////////////////////////////////

inline bool membership(Automaton const& g, Word const& w) {
  Transitions t(g);
  auto end = t.read(g.basepoint(), w);
  return end && *end == g.basepoint();
}

namespace detail {

// Breadth-first spanning tree in canonical letter order.
struct SpanningTree {
  std::vector<Word> prefix;          // geodesic label basepoint -> v
  std::vector<bool> tree_edge;       // per edge index
  std::vector<std::size_t> basis_of; // per edge index, kNoEdge for tree edges
  std::size_t rank = 0;
};

inline SpanningTree spanning_tree(Automaton const& g, Transitions const& t) {
  SpanningTree st;
  st.prefix.assign(g.vertex_count(), Word{});
  st.tree_edge.assign(g.edge_count(), false);
  st.basis_of.assign(g.edge_count(), kNoEdge);
  std::vector<bool> seen(g.vertex_count(), false);
  std::vector<Vertex> order{g.basepoint()};
  seen[g.basepoint()] = true;
  for (std::size_t head = 0; head < order.size(); ++head) {
    Vertex v = order[head];
    for (std::size_t c = 0; c < t.codes(); ++c) {
      Vertex w = t.target(v, c);
      if (w == kNoVertex || seen[w]) continue;
      seen[w] = true;
      st.tree_edge[t.edge(v, c)] = true;
      st.prefix[w] = st.prefix[v];
      st.prefix[w].push(Letter::from_code(c));
      order.push_back(w);
    }
  }
  for (std::size_t i = 0; i < g.edge_count(); ++i) {
    if (!st.tree_edge[i]) st.basis_of[i] = st.rank++;
  }
  return st;
}

}  // namespace detail

// Free basis of the language: one word per positive edge outside the
// breadth-first spanning tree, in edge order.
inline std::vector<Word> basis(Automaton const& g) {
  Transitions t(g);
  auto st = detail::spanning_tree(g, t);
  std::vector<Word> out;
  out.reserve(st.rank);
  for (std::size_t i = 0; i < g.edge_count(); ++i) {
    if (st.tree_edge[i]) continue;
    Edge const& e = g.edge(i);
    Word h = st.prefix[e.src];
    h.push(Letter::positive(e.letter));
    h.append(invert(st.prefix[e.dst]));
    out.push_back(std::move(h));
  }
  return out;
}

// Expresses a member of the language in the basis returned by basis(g):
// letter i of the result stands for basis word i.
inline Word rewrite_in_basis(Automaton const& g, Word const& w) {
  Transitions t(g);
  auto st = detail::spanning_tree(g, t);
  Vertex v = g.basepoint();
  Word out;
  for (Letter l : w) {
    if (l.code() >= t.codes() || t.target(v, l) == kNoVertex) {
      throw NotMember("word is not readable in the automaton");
    }
    std::size_t e = t.edge(v, l);
    if (std::size_t b = st.basis_of[e]; b != kNoEdge) {
      out.push(Letter(b, l.sign()));
    }
    v = t.target(v, l);
  }
  if (v != g.basepoint()) throw NotMember("word does not close at the basepoint");
  return out;
}

////////////////////////////////////////////////////////////////////////
// Morphisms between deterministic automata
////////////////////////////////////////////////////////////////////////

// The unique A-homomorphism from `from` to `to` (both deterministic, `from`
// connected), or nothing when some transition has no image.
inline std::optional<Morphism> morphism(Automaton const& from,
                                        Automaton const& to) {
  if (from.alphabet_size() != to.alphabet_size()) {
    throw ArityMismatch("automata over different alphabets");
  }
  Transitions tf(from);
  Transitions tt(to);
  std::vector<Vertex> vmap(from.vertex_count(), kNoVertex);
  std::vector<Vertex> order{from.basepoint()};
  vmap[from.basepoint()] = to.basepoint();
  for (std::size_t head = 0; head < order.size(); ++head) {
    Vertex v = order[head];
    for (std::size_t c = 0; c < tf.codes(); ++c) {
      Vertex w = tf.target(v, c);
      if (w == kNoVertex) continue;
      Vertex image = tt.target(vmap[v], c);
      if (image == kNoVertex) return std::nullopt;
      if (vmap[w] == kNoVertex) {
        vmap[w] = image;
        order.push_back(w);
      } else if (vmap[w] != image) {
        return std::nullopt;
      }
    }
  }
  if (order.size() != from.vertex_count()) {
    throw InvalidAutomaton("source automaton is not connected");
  }
  std::vector<std::size_t> emap(from.edge_count());
  for (std::size_t i = 0; i < from.edge_count(); ++i) {
    Edge const& e = from.edge(i);
    emap[i] = tt.edge(vmap[e.src], 2 * e.letter);
  }
  return Morphism{from, to, std::move(vmap), std::move(emap)};
}

////////////////////////////////////////////////////////////////////////
// Quotients and intersections
////////////////////////////////////////////////////////////////////////

struct Partition {
  // Block index of every vertex.
  std::vector<std::size_t> block_of;

  static Partition discrete(std::size_t n) {
    Partition p;
    p.block_of.resize(n);
    for (std::size_t i = 0; i < n; ++i) p.block_of[i] = i;
    return p;
  }
  static Partition full(std::size_t n) {
    return Partition{std::vector<std::size_t>(n, 0)};
  }
};

// Identifies the vertices of each block, then folds, trims and
// canonicalizes. The language contains that of g.
inline Automaton quotient(Automaton const& g, Partition const& p) {
  if (p.block_of.size() != g.vertex_count()) {
    throw InvalidAutomaton("partition does not cover the vertex set");
  }
  detail::Folder f(g.alphabet_size(), g.vertex_count());
  std::vector<std::size_t> first(g.vertex_count(), kNoEdge);
  for (Vertex v = 0; v < g.vertex_count(); ++v) {
    std::size_t b = p.block_of[v];
    if (b >= g.vertex_count()) throw InvalidAutomaton("block index out of range");
    if (first[b] == kNoEdge) {
      first[b] = v;
    } else {
      f.identify(static_cast<Vertex>(first[b]), v);
    }
  }
  f.run();
  for (Edge const& e : g.edges()) f.add_edge(e.src, e.letter, e.dst);
  f.run();
  std::vector<Vertex> vmap;
  Automaton folded =
      detail::extract(f, g.alphabet_size(), g.vertex_count(), g.basepoint(), vmap);
  return canonicalize(trim_core(folded).core);
}

// Pullback of two Stallings automata; its language is the intersection of
// the two languages.
inline Automaton intersection(Automaton const& g, Automaton const& h) {
  if (g.alphabet_size() != h.alphabet_size()) {
    throw ArityMismatch("automata over different alphabets");
  }
  Transitions tg(g);
  Transitions th(h);
  std::size_t const hn = h.vertex_count();
  std::vector<Vertex> id(g.vertex_count() * hn, kNoVertex);
  std::vector<std::pair<Vertex, Vertex>> pairs{{g.basepoint(), h.basepoint()}};
  id[g.basepoint() * hn + h.basepoint()] = 0;
  std::vector<Edge> edges;
  for (std::size_t head = 0; head < pairs.size(); ++head) {
    auto [p, q] = pairs[head];
    for (std::size_t c = 0; c < tg.codes(); ++c) {
      Vertex p2 = tg.target(p, c);
      Vertex q2 = th.target(q, c);
      if (p2 == kNoVertex || q2 == kNoVertex) continue;
      Vertex& slot = id[p2 * hn + q2];
      if (slot == kNoVertex) {
        slot = static_cast<Vertex>(pairs.size());
        pairs.emplace_back(p2, q2);
      }
      if (c % 2 == 0) {
        edges.push_back({static_cast<Vertex>(head),
                         static_cast<std::uint32_t>(c / 2), slot});
      }
    }
  }
  Automaton product(g.alphabet_size(), pairs.size(), 0, std::move(edges));
  return canonicalize(trim_core(product).core);
}

}  // namespace stallings
