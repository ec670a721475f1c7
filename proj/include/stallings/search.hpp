#pragma once

// Bounded breadth-first search over the Aut(F_n)-orbit of a pair of
// subgroups H <= K for an ambient basis in which theta_{H,K} fails to be onto
// (or injective).
//
// Every product of at most d Whitehead automorphisms equals a letter
// permutation times a product of at most d multiplier automorphisms, and
// letter permutations commute with the set of multiplier automorphisms up to
// relabelling. Both properties in question are invariant under relabelling,
// so the search walks multiplier moves only and identifies pairs of
// automata that differ by a signed letter permutation.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <thread>
#include <unordered_set>
#include <vector>

#include "stallings/automaton.hpp"
#include "stallings/endomorphism.hpp"
#include "stallings/hash.hpp"
#include "stallings/whitehead.hpp"
#include "stallings/word.hpp"

namespace stallings {

enum class SearchProperty { onto, injective };

struct SearchOutcome {
  // psi with theta_{H psi, K psi} failing the property, if found.
  std::optional<Endomorphism> psi;
  // Number of multiplier moves in psi, or the depth exhausted.
  std::size_t depth = 0;
  std::size_t states = 0;
};

namespace detail {

using Key = std::vector<std::uint32_t>;

struct KeyHash {
  std::size_t operator()(Key const& k) const noexcept {
    std::uint64_t h = k.size();
    for (std::uint32_t x : k) h = mix(h, x);
    return static_cast<std::size_t>(h);
  }
};

// theta_{H,K} as vertex and edge maps; false if some transition is missing.
inline bool theta_maps(Automaton const& h, Transitions const& th,
                       Automaton const& k, Transitions const& tk,
                       std::vector<Vertex>& vmap, std::vector<std::size_t>& emap) {
  vmap.assign(h.vertex_count(), kNoVertex);
  std::vector<Vertex> order{h.basepoint()};
  vmap[h.basepoint()] = k.basepoint();
  for (std::size_t head = 0; head < order.size(); ++head) {
    Vertex v = order[head];
    for (std::size_t c = 0; c < th.codes(); ++c) {
      Vertex w = th.target(v, c);
      if (w == kNoVertex) continue;
      Vertex image = tk.target(vmap[v], c);
      if (image == kNoVertex) return false;
      if (vmap[w] == kNoVertex) {
        vmap[w] = image;
        order.push_back(w);
      } else if (vmap[w] != image) {
        return false;
      }
    }
  }
  emap.resize(h.edge_count());
  for (std::size_t i = 0; i < h.edge_count(); ++i) {
    Edge const& e = h.edge(i);
    emap[i] = tk.edge(vmap[e.src], 2 * e.letter);
  }
  return true;
}

// Whether theta_{H,K} has the property. H <= K is assumed.
inline bool has_property(Automaton const& h, Automaton const& k,
                         SearchProperty property) {
  if (property == SearchProperty::onto &&
      (h.vertex_count() < k.vertex_count() || h.edge_count() < k.edge_count())) {
    return false;
  }
  Transitions th(h), tk(k);
  std::vector<Vertex> vmap;
  std::vector<std::size_t> emap;
  if (!theta_maps(h, th, k, tk, vmap, emap)) {
    throw NotASubgroup("first subgroup is not contained in the second");
  }
  std::vector<bool> hit_v(k.vertex_count(), false), hit_e(k.edge_count(), false);
  if (property == SearchProperty::injective) {
    for (Vertex v : vmap) {
      if (hit_v[v]) return false;
      hit_v[v] = true;
    }
    for (std::size_t e : emap) {
      if (hit_e[e]) return false;
      hit_e[e] = true;
    }
    return true;
  }
  for (Vertex v : vmap) hit_v[v] = true;
  for (std::size_t e : emap) hit_e[e] = true;
  return std::all_of(hit_v.begin(), hit_v.end(), [](bool b) { return b; }) &&
         std::all_of(hit_e.begin(), hit_e.end(), [](bool b) { return b; });
}

// Stallings automaton of H phi, H given by its automaton.
inline Automaton image_graph(Automaton const& g, Endomorphism const& phi) {
  return stallings(phi.apply(basis(g)), phi.arity_out());
}

// Relabels by a signed letter permutation (letter i becomes perm[i]).
inline Automaton relabel(Automaton const& g, std::vector<Letter> const& perm) {
  std::vector<Edge> edges;
  edges.reserve(g.edge_count());
  for (Edge const& e : g.edges()) {
    Letter l = perm[e.letter];
    auto a = static_cast<std::uint32_t>(l.index());
    if (l.is_positive()) {
      edges.push_back({e.src, a, e.dst});
    } else {
      edges.push_back({e.dst, a, e.src});
    }
  }
  return Automaton(g.alphabet_size(), g.vertex_count(), g.basepoint(),
                   std::move(edges));
}

inline void append_encoding(Automaton const& g, Key& key) {
  key.push_back(static_cast<std::uint32_t>(g.vertex_count()));
  key.push_back(static_cast<std::uint32_t>(g.edge_count()));
  for (Edge const& e : g.edges()) {
    key.push_back(e.src);
    key.push_back(e.letter);
    key.push_back(e.dst);
  }
}

class OrbitSearch {
 public:
  OrbitSearch(std::size_t rank, SearchProperty property, unsigned threads)
      : rank_(rank), property_(property), threads_(std::max(1u, threads)) {
    for (auto const& g : multiplier_automorphisms(rank)) {
      moves_.push_back(g.endomorphism());
    }
    for (auto const& p : letter_permutations(rank)) {
      Endomorphism const e = p.endomorphism();
      std::vector<Letter> images;
      for (Word const& w : e.images()) images.push_back(w[0]);
      perms_.push_back(std::move(images));
    }
  }

  // Canonical graphs of H and K in F_rank; H <= K.
  SearchOutcome run(Automaton const& h, Automaton const& k, std::size_t depth) {
    nodes_.clear();
    seen_.clear();
    SearchOutcome out;
    nodes_.push_back({h, k, 0, 0, basis(h), basis(k)});
    seen_.insert(key_of(h, k));
    if (!has_property(h, k, property_)) {
      out.psi = Endomorphism::identity(rank_);
      out.states = 1;
      return out;
    }
    std::size_t level_begin = 0;
    for (std::size_t d = 1; d <= depth; ++d) {
      std::size_t const level_end = nodes_.size();
      bool const last = d == depth;
      for (std::size_t block = level_begin; block < level_end; block += kBlock) {
        std::size_t const block_end = std::min(level_end, block + kBlock);
        auto found = expand_block(block, block_end, last);
        if (found) {
          out.psi = path_to(found->first, found->second);
          out.depth = d;
          out.states = nodes_.size();
          return out;
        }
      }
      if (nodes_.size() == level_end && !last) {
        // The orbit closed up before reaching the requested depth.
        break;
      }
      level_begin = level_end;
    }
    out.depth = depth;
    out.states = nodes_.size();
    return out;
  }

 private:
  static constexpr std::size_t kBlock = 64;

  struct Node {
    Automaton h;
    Automaton k;
    std::uint32_t parent;
    std::uint32_t move;
    std::vector<Word> h_basis;
    std::vector<Word> k_basis;
  };

  struct Successor {
    Automaton h;
    Automaton k;
    Key key;
    bool fails;
  };

  Key key_of(Automaton const& h, Automaton const& k) const {
    Key best;
    Key candidate;
    for (auto const& p : perms_) {
      candidate.clear();
      append_encoding(canonicalize(relabel(h, p)), candidate);
      append_encoding(canonicalize(relabel(k, p)), candidate);
      if (best.empty() || candidate < best) best.swap(candidate);
    }
    return best;
  }

  Successor successor(Node const& n, std::size_t move, bool last) const {
    Endomorphism const& g = moves_[move];
    Successor s{stallings(g.apply(n.h_basis), rank_),
                stallings(g.apply(n.k_basis), rank_), {}, false};
    s.fails = !has_property(s.h, s.k, property_);
    if (!last && !s.fails) s.key = key_of(s.h, s.k);
    return s;
  }

  // Expands nodes [begin, end). Returns the first (node, move) in order whose
  // successor fails the property.
  std::optional<std::pair<std::size_t, std::size_t>> expand_block(
      std::size_t begin, std::size_t end, bool last) {
    std::size_t const per_node = moves_.size();
    std::size_t const total = (end - begin) * per_node;
    std::vector<std::optional<Successor>> results(total);
    auto work = [&](std::size_t t) {
      for (std::size_t i = t; i < total; i += threads_) {
        results[i] = successor(nodes_[begin + i / per_node], i % per_node, last);
      }
    };
    if (threads_ == 1) {
      work(0);
    } else {
      std::vector<std::thread> pool;
      for (unsigned t = 0; t < threads_; ++t) pool.emplace_back(work, t);
      for (auto& th : pool) th.join();
    }
    for (std::size_t i = 0; i < total; ++i) {
      Successor& s = *results[i];
      if (s.fails) return std::make_pair(begin + i / per_node, i % per_node);
      if (last) continue;
      if (seen_.insert(std::move(s.key)).second) {
        auto hb = basis(s.h);
        auto kb = basis(s.k);
        nodes_.push_back({std::move(s.h), std::move(s.k),
                          static_cast<std::uint32_t>(begin + i / per_node),
                          static_cast<std::uint32_t>(i % per_node),
                          std::move(hb), std::move(kb)});
      }
    }
    return std::nullopt;
  }

  Endomorphism path_to(std::size_t node, std::size_t move) const {
    std::vector<std::size_t> moves{move};
    for (std::size_t n = node; n != 0; n = nodes_[n].parent) {
      moves.push_back(nodes_[n].move);
    }
    Endomorphism psi = Endomorphism::identity(rank_);
    for (auto it = moves.rbegin(); it != moves.rend(); ++it) {
      psi = compose(psi, moves_[*it]);
    }
    return psi;
  }

  std::size_t rank_;
  SearchProperty property_;
  unsigned threads_;
  std::vector<Endomorphism> moves_;
  std::vector<std::vector<Letter>> perms_;
  std::vector<Node> nodes_;
  std::unordered_set<Key, KeyHash> seen_;
};

}  // namespace detail

// Looks for psi, a product of at most `depth` Whitehead automorphisms of
// F_rank, such that theta_{H psi, K psi} lacks the property. The first psi in
// breadth-first order wins, whatever the thread count.
inline SearchOutcome search_orbit(Automaton const& h, Automaton const& k,
                                  SearchProperty property, std::size_t depth,
                                  unsigned threads = 1) {
  if (h.alphabet_size() != k.alphabet_size()) {
    throw ArityMismatch("automata over different alphabets");
  }
  detail::OrbitSearch s(h.alphabet_size(), property, threads);
  return s.run(h, k, depth);
}

}  // namespace stallings
