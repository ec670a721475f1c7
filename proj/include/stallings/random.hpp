#pragma once

// Seeded generators for random subgroups and extensions.

#include <cstddef>
#include <random>
#include <vector>

#include "stallings/automaton.hpp"
#include "stallings/error.hpp"
#include "stallings/subgroup.hpp"
#include "stallings/word.hpp"

namespace stallings {

struct RandomSubgroupSpec {
  std::size_t ambient_rank = 2;
  std::size_t max_vertices = 6;
  std::size_t min_rank = 1;
  std::size_t max_rank = 3;
  std::size_t max_word_length = 8;
  std::size_t max_attempts = 10000;
};

inline Word random_reduced_word(std::mt19937_64& rng, std::size_t rank,
                                std::size_t length) {
  std::uniform_int_distribution<std::size_t> code(0, code_count(rank) - 1);
  std::vector<Letter> letters;
  while (letters.size() < length) {
    Letter l = Letter::from_code(code(rng));
    if (!letters.empty() && letters.back() == l.inverse()) continue;
    letters.push_back(l);
  }
  return Word(letters);
}

// Rejection sampling over generating sets of random reduced words until the
// Stallings automaton fits the bounds.
inline Subgroup random_subgroup(std::mt19937_64& rng, RandomSubgroupSpec const& spec) {
  if (spec.ambient_rank == 0 || spec.min_rank > spec.max_rank ||
      spec.max_word_length == 0 || spec.max_vertices == 0) {
    throw Error("empty random subgroup bounds");
  }
  std::uniform_int_distribution<std::size_t> count(spec.min_rank,
                                                   std::max(spec.min_rank, spec.max_rank));
  std::uniform_int_distribution<std::size_t> length(1, spec.max_word_length);
  for (std::size_t attempt = 0; attempt < spec.max_attempts; ++attempt) {
    std::vector<Word> gens(count(rng));
    for (Word& w : gens) w = random_reduced_word(rng, spec.ambient_rank, length(rng));
    Subgroup h(std::move(gens), spec.ambient_rank);
    if (h.graph().vertex_count() <= spec.max_vertices && h.rank() >= spec.min_rank &&
        h.rank() <= spec.max_rank) {
      return h;
    }
  }
  throw BudgetExceeded("max_attempts", "no random subgroup met the bounds");
}

// A proper overgroup: identifies two distinct vertices of the automaton and
// folds. Needs at least two vertices.
inline Subgroup random_proper_extension(std::mt19937_64& rng, Subgroup const& h) {
  std::size_t const n = h.graph().vertex_count();
  if (n < 2) throw Error("a one-vertex automaton has no proper quotient");
  std::uniform_int_distribution<std::size_t> pick(0, n - 1);
  std::size_t u = pick(rng);
  std::size_t v = pick(rng);
  while (v == u) v = pick(rng);
  Partition p = Partition::discrete(n);
  p.block_of[std::max(u, v)] = p.block_of[std::min(u, v)];
  return Subgroup::from_automaton(quotient(h.graph(), p));
}

}  // namespace stallings
