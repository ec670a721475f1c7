#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "stallings/automaton.hpp"
#include "stallings/error.hpp"
#include "stallings/word.hpp"

namespace stallings {

// A finitely generated subgroup of F_r, carried by its generators and its
// canonical Stallings automaton. Equality compares automata only.
class Subgroup {
 public:
  Subgroup() : Subgroup(std::vector<Word>{}, 1) {}
  Subgroup(std::vector<Word> generators, std::size_t rank)
      : generators_(std::move(generators)),
        graph_(stallings::stallings(generators_, rank)) {}

  // The subgroup recognized by a Stallings automaton; generators are its
  // canonical basis.
  static Subgroup from_automaton(Automaton const& g) {
    Subgroup h;
    h.graph_ = canonicalize(g);
    h.generators_ = stallings::basis(h.graph_);
    return h;
  }

  static Subgroup parse(std::span<std::string const> words, std::size_t rank) {
    return Subgroup(parse_words(words, rank), rank);
  }

  static Subgroup whole(std::size_t rank) {
    std::vector<Word> gens;
    for (std::size_t i = 0; i < rank; ++i) gens.push_back(Word::generator(i));
    return Subgroup(std::move(gens), rank);
  }

  std::size_t ambient_rank() const noexcept { return graph_.alphabet_size(); }
  std::vector<Word> const& generators() const noexcept { return generators_; }
  Automaton const& graph() const noexcept { return graph_; }
  std::size_t rank() const { return graph_.rank(); }
  std::vector<Word> basis() const { return stallings::basis(graph_); }

  bool contains(Word const& w) const { return membership(graph_, w); }
  bool is_subgroup_of(Subgroup const& k) const {
    return morphism(graph_, k.graph_).has_value();
  }

  // The same words in F_{r + extra}.
  Subgroup widened(std::size_t extra) const {
    return Subgroup(generators_, ambient_rank() + extra);
  }

  friend bool operator==(Subgroup const& a, Subgroup const& b) {
    return a.graph_ == b.graph_;
  }

 private:
  std::vector<Word> generators_;
  Automaton graph_;
};

inline Subgroup join(Subgroup const& a, Subgroup const& b) {
  if (a.ambient_rank() != b.ambient_rank()) {
    throw ArityMismatch("subgroups of free groups of different ranks");
  }
  std::vector<Word> gens = a.generators();
  gens.insert(gens.end(), b.generators().begin(), b.generators().end());
  return Subgroup(std::move(gens), a.ambient_rank());
}

inline Subgroup intersection(Subgroup const& a, Subgroup const& b) {
  return Subgroup::from_automaton(intersection(a.graph(), b.graph()));
}

inline std::string to_string(Subgroup const& h) {
  std::string s = "<";
  auto gens = h.basis();
  for (std::size_t i = 0; i < gens.size(); ++i) {
    if (i) s += ", ";
    s += to_string(gens[i]);
  }
  return s + ">";
}

}  // namespace stallings
