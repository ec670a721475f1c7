#pragma once

#include <cstddef>
#include <cstdint>
#include <utility>
#include <vector>

#include "stallings/automaton.hpp"
#include "stallings/endomorphism.hpp"
#include "stallings/error.hpp"
#include "stallings/word.hpp"

namespace stallings {

namespace detail {

// Folding of the flower of (h_1, ..., h_n) in which every edge also carries
// a word over formal generators x_1, ..., x_n. The invariant is that every
// closed path at the basepoint has x-value w with w(h_1, ..., h_n) equal to
// its label. When two edges are folded their endpoints are re-gauged so that
// the x-labels agree first; a mismatch on parallel edges witnesses a
// non-trivial relation among the h_i.
class TrackedFolding {
 public:
  TrackedFolding(std::vector<Word> const& generators, std::size_t rank)
      : rank_(rank) {
    vertex_alive_.push_back(true);
    for (std::size_t j = 0; j < generators.size(); ++j) {
      Word const& w = generators[j];
      if (w.empty()) {
        relation_found_ = true;
        continue;
      }
      std::uint32_t from = 0;
      for (std::size_t i = 0; i < w.size(); ++i) {
        std::uint32_t to = 0;
        if (i + 1 != w.size()) {
          to = static_cast<std::uint32_t>(vertex_alive_.size());
          vertex_alive_.push_back(true);
        }
        Word x = i == 0 ? Word::generator(j) : Word{};
        Letter l = w[i];
        if (l.is_positive()) {
          edges_.push_back({from, static_cast<std::uint32_t>(l.index()), to, x, true});
        } else {
          edges_.push_back({to, static_cast<std::uint32_t>(l.index()), from,
                            invert(x), true});
        }
        from = to;
      }
    }
    run();
  }

  // True when the generators satisfy a non-trivial relation (or one is 1).
  bool relation_found() const noexcept { return relation_found_; }

  // For the one-vertex result: x-word of the loop labelled by each letter,
  // or nothing if some letter has no loop or other vertices survive.
  std::optional<std::vector<Word>> loop_labels() const {
    for (std::size_t v = 1; v < vertex_alive_.size(); ++v) {
      if (vertex_alive_[v]) return std::nullopt;
    }
    std::vector<std::optional<Word>> loops(rank_);
    for (auto const& e : edges_) {
      if (e.alive) loops[e.letter] = e.xlabel;
    }
    std::vector<Word> out;
    for (auto& l : loops) {
      if (!l) return std::nullopt;
      out.push_back(*l);
    }
    return out;
  }

 private:
  struct TEdge {
    std::uint32_t src;
    std::uint32_t letter;
    std::uint32_t dst;
    Word xlabel;
    bool alive;
  };

  // Finds two live edges with the same label sharing their source (or
  // their target). Returns indices and whether they share the source.
  bool find_violation(std::size_t& i, std::size_t& j, bool& same_source) const {
    for (i = 0; i < edges_.size(); ++i) {
      if (!edges_[i].alive) continue;
      for (j = i + 1; j < edges_.size(); ++j) {
        if (!edges_[j].alive || edges_[j].letter != edges_[i].letter) continue;
        if (edges_[j].src == edges_[i].src) {
          same_source = true;
          return true;
        }
        if (edges_[j].dst == edges_[i].dst) {
          same_source = false;
          return true;
        }
      }
    }
    return false;
  }

  // Multiplies the x-labels around v so that every path value through v is
  // unchanged: incoming labels get ·g, outgoing labels g^{-1}·.
  void regauge(std::uint32_t v, Word const& g) {
    Word gi = invert(g);
    for (auto& e : edges_) {
      if (!e.alive) continue;
      if (e.dst == v) e.xlabel = multiply(e.xlabel, g);
      if (e.src == v) e.xlabel = multiply(gi, e.xlabel);
    }
  }

  void run() {
    std::size_t i = 0, j = 0;
    bool same_source = false;
    while (find_violation(i, j, same_source)) {
      // Orient both edges away from the shared vertex: far ends v (edge i)
      // and w (edge j); path value of the edge read outwards.
      auto far = [&](std::size_t k) {
        return same_source ? edges_[k].dst : edges_[k].src;
      };
      auto outward = [&](std::size_t k) {
        return same_source ? edges_[k].xlabel : invert(edges_[k].xlabel);
      };
      std::uint32_t const u = same_source ? edges_[i].src : edges_[i].dst;
      std::uint32_t v = far(i);
      std::uint32_t w = far(j);
      if (v == w) {
        if (edges_[i].xlabel != edges_[j].xlabel) relation_found_ = true;
        edges_[i].alive = false;
        continue;
      }
      // The removed vertex v must not be the basepoint; prefer one that is
      // not the shared vertex either, so edge j is untouched by the gauge.
      // Otherwise {v, w} = {u, 0} and v = u is re-gauged, loop included; the
      // same g works in that case.
      bool const v_free = v != 0 && v != u;
      bool const w_free = w != 0 && w != u;
      if ((!v_free && w_free) || (!v_free && !w_free && v == 0)) {
        std::swap(i, j);
        std::swap(v, w);
      }
      // Re-gauge v so that the outward value of edge i becomes that of j:
      // outward(i) · g = outward(j).
      Word g = multiply(invert(outward(i)), outward(j));
      regauge(v, g);
      for (auto& e : edges_) {
        if (!e.alive) continue;
        if (e.src == v) e.src = w;
        if (e.dst == v) e.dst = w;
      }
      vertex_alive_[v] = false;
      edges_[i].alive = false;
    }
  }

  std::size_t rank_;
  std::vector<bool> vertex_alive_;
  std::vector<TEdge> edges_;
  bool relation_found_ = false;
};

}  // namespace detail

// Inverse of an automorphism of F_r. Throws NotAutomorphism when the images
// do not form a basis of F_r.
inline Endomorphism invert_automorphism(Endomorphism const& phi) {
  std::size_t const r = phi.arity_out();
  if (phi.arity_in() != r) {
    throw NotAutomorphism("domain and target ranks differ");
  }
  detail::TrackedFolding tf(phi.images(), r);
  auto loops = tf.loop_labels();
  if (tf.relation_found() || !loops) {
    throw NotAutomorphism("images do not form a basis");
  }
  Endomorphism psi(r, std::move(*loops));
  if (!compose(phi, psi).is_identity() || !compose(psi, phi).is_identity()) {
    throw NotAutomorphism("images do not form a basis");
  }
  return psi;
}

inline bool is_automorphism(Endomorphism const& phi) {
  try {
    invert_automorphism(phi);
    return true;
  } catch (NotAutomorphism const&) {
    return false;
  }
}

}  // namespace stallings
