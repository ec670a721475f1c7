#pragma once

// Finite sets of overgroups of a base subgroup H, ordered by inclusion, with
// join, meet, covers and the semimodularity/distributivity checks.

#include <cstddef>
#include <optional>
#include <utility>
#include <vector>

#include "stallings/automaton.hpp"
#include "stallings/error.hpp"
#include "stallings/subgroup.hpp"

namespace stallings {

class ExtensionLattice {
 public:
  // Deduplicates `elements` (keeping first occurrences) and puts `base` at
  // index 0, adding it if absent. Throws ElementMissingBase if some element
  // does not contain the base.
  static ExtensionLattice build(std::vector<Subgroup> const& elements,
                                Subgroup const& base) {
    ExtensionLattice l;
    l.elements_.push_back(base);
    for (Subgroup const& x : elements) {
      if (x.ambient_rank() != base.ambient_rank()) {
        throw ArityMismatch("lattice elements in free groups of different ranks");
      }
      if (l.index_of(x)) continue;
      if (!base.is_subgroup_of(x)) {
        throw ElementMissingBase("element " + to_string(x) +
                                 " does not contain the base subgroup");
      }
      l.elements_.push_back(x);
    }
    std::size_t const n = l.elements_.size();
    l.leq_.assign(n * n, false);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        l.leq_[i * n + j] = i == j || l.elements_[i].is_subgroup_of(l.elements_[j]);
      }
    }
    return l;
  }

  std::size_t size() const noexcept { return elements_.size(); }
  std::vector<Subgroup> const& elements() const noexcept { return elements_; }
  Subgroup const& element(std::size_t i) const { return elements_.at(i); }
  Subgroup const& base() const { return elements_.front(); }

  std::optional<std::size_t> index_of(Subgroup const& x) const {
    for (std::size_t i = 0; i < elements_.size(); ++i) {
      if (elements_[i] == x) return i;
    }
    return std::nullopt;
  }

  bool leq(std::size_t i, std::size_t j) const { return leq_.at(i * size() + j); }
  bool less(std::size_t i, std::size_t j) const { return i != j && leq(i, j); }

  // j covers i: i < j with nothing strictly in between.
  bool covers(std::size_t i, std::size_t j) const {
    if (!less(i, j)) return false;
    for (std::size_t k = 0; k < size(); ++k) {
      if (less(i, k) && less(k, j)) return false;
    }
    return true;
  }

  // Pairs (i, j) with j covering i, ordered by i then j.
  std::vector<std::pair<std::size_t, std::size_t>> cover_relation() const {
    std::vector<std::pair<std::size_t, std::size_t>> out;
    for (std::size_t i = 0; i < size(); ++i) {
      for (std::size_t j = 0; j < size(); ++j) {
        if (covers(i, j)) out.emplace_back(i, j);
      }
    }
    return out;
  }

  // The subgroup generated by both; throws ResultOutsideLattice if it is not
  // an element.
  std::size_t join(std::size_t i, std::size_t j) const {
    if (leq(i, j)) return j;
    if (leq(j, i)) return i;
    Subgroup const s = stallings::join(element(i), element(j));
    auto k = index_of(s);
    if (!k) {
      throw ResultOutsideLattice("join " + to_string(s) + " is not an element");
    }
    return *k;
  }

  // The subgroup generated by the elements inside the intersection.
  Subgroup meet_subgroup(std::size_t i, std::size_t j) const {
    if (leq(i, j)) return element(i);
    if (leq(j, i)) return element(j);
    Subgroup const cap = intersection(element(i), element(j));
    std::vector<Word> gens;
    for (Subgroup const& x : elements_) {
      if (x.is_subgroup_of(cap)) {
        gens.insert(gens.end(), x.generators().begin(), x.generators().end());
      }
    }
    return Subgroup(std::move(gens), base().ambient_rank());
  }

  std::size_t meet(std::size_t i, std::size_t j) const {
    Subgroup const s = meet_subgroup(i, j);
    auto k = index_of(s);
    if (!k) {
      throw ResultOutsideLattice("meet " + to_string(s) + " is not an element");
    }
    return *k;
  }

  Subgroup join(Subgroup const& x, Subgroup const& y) const {
    return element(join(require(x), require(y)));
  }
  Subgroup meet(Subgroup const& x, Subgroup const& y) const {
    return meet_subgroup(require(x), require(y));
  }

  // All (x, y) with x covering x ^ y while x v y does not cover y, scanning
  // x then y in element order.
  std::vector<std::pair<std::size_t, std::size_t>> semimodularity_violations() const {
    std::vector<std::pair<std::size_t, std::size_t>> out;
    for (std::size_t x = 0; x < size(); ++x) {
      for (std::size_t y = 0; y < size(); ++y) {
        if (x != y && violates(x, y)) out.emplace_back(x, y);
      }
    }
    return out;
  }

  std::optional<std::pair<std::size_t, std::size_t>> semimodularity_violation() const {
    for (std::size_t x = 0; x < size(); ++x) {
      for (std::size_t y = 0; y < size(); ++y) {
        if (x != y && violates(x, y)) return std::make_pair(x, y);
      }
    }
    return std::nullopt;
  }

  bool is_semimodular() const { return !semimodularity_violation(); }

  bool is_distributive() const {
    for (std::size_t x = 0; x < size(); ++x) {
      for (std::size_t y = 0; y < size(); ++y) {
        for (std::size_t z = 0; z < size(); ++z) {
          if (meet(x, join(y, z)) != join(meet(x, y), meet(x, z))) return false;
        }
      }
    }
    return true;
  }

 private:
  bool violates(std::size_t x, std::size_t y) const {
    return covers(meet(x, y), x) && !covers(y, join(x, y));
  }

  std::size_t require(Subgroup const& x) const {
    auto i = index_of(x);
    if (!i) throw Error("subgroup " + to_string(x) + " is not a lattice element");
    return *i;
  }

  std::vector<Subgroup> elements_;
  std::vector<bool> leq_;
};

}  // namespace stallings
