#pragma once

// Fringes, free factors, algebraic extensions and closures, and the bounded
// onto / fully onto / into checks.

#include <algorithm>
#include <cstddef>
#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <tuple>
#include <vector>

#include "stallings/automaton.hpp"
#include "stallings/automorphism.hpp"
#include "stallings/endomorphism.hpp"
#include "stallings/error.hpp"
#include "stallings/partitions.hpp"
#include "stallings/search.hpp"
#include "stallings/subgroup.hpp"
#include "stallings/whitehead.hpp"

namespace stallings {

struct Budget {
  std::size_t depth = 4;
  std::size_t extra_letters = 1;
  unsigned long long bell_cap = 1000000;
  unsigned threads = 1;
};

struct Verdict {
  enum class Outcome { no, yes_certified, unknown };

  Outcome outcome = Outcome::unknown;
  // For `no`: phi whose image tuple is the refuting basis, over F_{r + e}.
  std::optional<Endomorphism> witness;
  // Moves needed for the witness, or the depth exhausted.
  std::size_t depth = 0;
  // Extra letters in the ambient group of the witness (or the most tried).
  std::size_t extra_letters = 0;

  bool refuted() const noexcept { return outcome == Outcome::no; }
};

inline char const* to_string(Verdict::Outcome o) {
  switch (o) {
    case Verdict::Outcome::no:
      return "no";
    case Verdict::Outcome::yes_certified:
      return "yes";
    case Verdict::Outcome::unknown:
      return "unknown";
  }
  return "unknown";
}

inline void require_subgroup(Subgroup const& h, Subgroup const& k) {
  if (h.ambient_rank() != k.ambient_rank()) {
    throw ArityMismatch("subgroups of free groups of different ranks");
  }
  if (!h.is_subgroup_of(k)) {
    throw NotASubgroup("first subgroup is not contained in the second");
  }
}

// Gamma_{A'}(H) for the basis A' = (a_1 phi, ..., a_r phi).
inline Automaton in_basis(Subgroup const& h, Endomorphism const& phi) {
  if (phi.arity_out() != h.ambient_rank()) {
    throw ArityMismatch("basis and subgroup live in different free groups");
  }
  Endomorphism inv = invert_automorphism(phi);
  return stallings(inv.apply(h.generators()), h.ambient_rank());
}

// theta_{H,K} read in the basis given by phi.
inline bool onto_at(Subgroup const& h, Subgroup const& k, Endomorphism const& phi) {
  require_subgroup(h, k);
  return detail::has_property(in_basis(h, phi), in_basis(k, phi),
                              SearchProperty::onto);
}

inline bool injective_at(Subgroup const& h, Subgroup const& k,
                         Endomorphism const& phi) {
  require_subgroup(h, k);
  return detail::has_property(in_basis(h, phi), in_basis(k, phi),
                              SearchProperty::injective);
}

////////////////////////////////////////////////////////////////////////
// Fringe
////////////////////////////////////////////////////////////////////////

// All quotients of Gamma(H) by vertex partitions, in order of first
// appearance (H comes first).
inline std::vector<Subgroup> fringe(Subgroup const& h,
                                    unsigned long long bell_cap = Budget{}.bell_cap) {
  Automaton const& g = h.graph();
  std::size_t const n = g.vertex_count();
  if (bell_number(n, bell_cap) > bell_cap) {
    throw PartitionBudgetExceeded(n, bell_cap);
  }
  std::vector<Subgroup> out;
  std::vector<Automaton> seen;
  for_each_partition(n, [&](std::vector<std::size_t> const& blocks) {
    Automaton q = quotient(g, Partition{blocks});
    if (std::find(seen.begin(), seen.end(), q) == seen.end()) {
      seen.push_back(q);
      out.push_back(Subgroup::from_automaton(q));
    }
  });
  return out;
}

////////////////////////////////////////////////////////////////////////
// Free factors
////////////////////////////////////////////////////////////////////////

namespace detail {

// Generators of the subgroup read from a vertex of its cyclic core.
inline std::vector<Word> cyclic_generators(Automaton const& core) {
  return basis(canonicalize(core));
}

}  // namespace detail

// Decides H <=ff K: H is rewritten in a basis of K, and the edge count of the
// unbased core of its automaton is lowered by multiplier automorphisms until
// no single one helps. H is a free factor exactly when the minimum is a
// one-vertex bouquet.
inline bool is_free_factor(Subgroup const& h, Subgroup const& k) {
  require_subgroup(h, k);
  if (h == k || h.rank() == 0) return true;
  auto theta = morphism(h.graph(), k.graph());
  if (theta && is_injective(*theta)) return true;
  if (h.rank() >= k.rank()) return false;
  std::size_t const s = k.rank();
  std::vector<Word> words;
  for (Word const& w : h.generators()) words.push_back(rewrite_in_basis(k.graph(), w));
  Automaton core = cyclic_core(stallings(words, s));
  auto const moves = multiplier_automorphisms(s);
  bool improved = true;
  while (improved && core.vertex_count() > 1) {
    improved = false;
    auto gens = detail::cyclic_generators(core);
    for (auto const& m : moves) {
      Automaton next = cyclic_core(stallings(m.endomorphism().apply(gens), s));
      if (next.edge_count() < core.edge_count()) {
        core = std::move(next);
        improved = true;
        break;
      }
    }
  }
  return core.vertex_count() == 1;
}

////////////////////////////////////////////////////////////////////////
// Algebraic extensions
////////////////////////////////////////////////////////////////////////

// Fringe members M for which no other member L with L <=ff M exists.
inline std::vector<Subgroup> algebraic_extensions(
    Subgroup const& h, unsigned long long bell_cap = Budget{}.bell_cap) {
  auto f = fringe(h, bell_cap);
  std::vector<Subgroup> out;
  for (std::size_t j = 0; j < f.size(); ++j) {
    bool keep = true;
    for (std::size_t i = 0; i < f.size() && keep; ++i) {
      if (i == j || !f[i].is_subgroup_of(f[j])) continue;
      if (is_free_factor(f[i], f[j])) keep = false;
    }
    if (keep) out.push_back(f[j]);
  }
  return out;
}

// Cl_K(H): the largest algebraic extension of H inside K.
inline Subgroup algebraic_closure(Subgroup const& h, Subgroup const& k,
                                  unsigned long long bell_cap = Budget{}.bell_cap) {
  require_subgroup(h, k);
  std::vector<Subgroup> inside;
  for (auto& l : algebraic_extensions(h, bell_cap)) {
    if (l.is_subgroup_of(k)) inside.push_back(std::move(l));
  }
  for (auto const& top : inside) {
    bool contains_all = std::all_of(inside.begin(), inside.end(), [&](Subgroup const& l) {
      return l.is_subgroup_of(top);
    });
    if (contains_all) return top;
  }
  throw Error("algebraic extensions inside K have no maximum");
}

inline bool is_algebraic(Subgroup const& h, Subgroup const& k,
                         unsigned long long bell_cap = Budget{}.bell_cap) {
  return algebraic_closure(h, k, bell_cap) == k;
}

////////////////////////////////////////////////////////////////////////
// Onto, fully onto, into
////////////////////////////////////////////////////////////////////////

namespace detail {

// Search results keyed by the problem, shared by all callers in the process.
class SearchMemo {
 public:
  static SearchMemo& instance() {
    static SearchMemo memo;
    return memo;
  }

  SearchOutcome run(Automaton const& h, Automaton const& k, SearchProperty p,
                    std::size_t depth, unsigned threads) {
    auto key = std::make_tuple(h, k, p);
    {
      std::lock_guard<std::mutex> lock(mutex_);
      auto it = results_.find(key);
      if (it != results_.end()) {
        SearchOutcome const& o = it->second.second;
        // A refutation within a smaller budget stays valid; an exhausted
        // search answers any smaller depth.
        if ((o.psi && o.depth <= depth) || (!o.psi && it->second.first >= depth)) {
          SearchOutcome copy = o;
          if (!o.psi) copy.depth = depth;
          return copy;
        }
      }
    }
    SearchOutcome o = search_orbit(h, k, p, depth, threads);
    std::lock_guard<std::mutex> lock(mutex_);
    results_[key] = {depth, o};
    return o;
  }

 private:
  struct Less {
    bool operator()(std::tuple<Automaton, Automaton, SearchProperty> const& a,
                    std::tuple<Automaton, Automaton, SearchProperty> const& b) const {
      auto enc = [](auto const& t) {
        Key key;
        append_encoding(std::get<0>(t), key);
        append_encoding(std::get<1>(t), key);
        key.push_back(static_cast<std::uint32_t>(std::get<0>(t).alphabet_size()));
        key.push_back(static_cast<std::uint32_t>(std::get<2>(t)));
        return key;
      };
      return enc(a) < enc(b);
    }
  };

  std::mutex mutex_;
  std::map<std::tuple<Automaton, Automaton, SearchProperty>,
           std::pair<std::size_t, SearchOutcome>, Less>
      results_;
};

inline std::optional<Verdict> certify_algebraic(Subgroup const& h, Subgroup const& k,
                                                unsigned long long bell_cap) {
  try {
    if (is_algebraic(h, k, bell_cap)) {
      Verdict v;
      v.outcome = Verdict::Outcome::yes_certified;
      return v;
    }
  } catch (PartitionBudgetExceeded const&) {
    // No certificate within the budget; the search still runs.
  }
  return std::nullopt;
}

inline Verdict search_verdict(Subgroup const& h, Subgroup const& k,
                              SearchProperty p, std::size_t depth,
                              std::size_t extra, unsigned threads) {
  SearchOutcome o = SearchMemo::instance().run(h.graph(), k.graph(), p, depth, threads);
  Verdict v;
  v.depth = o.depth;
  v.extra_letters = extra;
  if (o.psi) {
    v.outcome = Verdict::Outcome::no;
    v.witness = invert_automorphism(*o.psi);
  }
  return v;
}

}  // namespace detail

// Looks for an ambient basis, within `budget.depth` Whitehead moves, in which
// theta_{H,K} is not onto. Algebraic extensions are reported certified.
inline Verdict check_onto(Subgroup const& h, Subgroup const& k,
                          Budget const& budget = {}) {
  require_subgroup(h, k);
  if (auto v = detail::certify_algebraic(h, k, budget.bell_cap)) return *v;
  return detail::search_verdict(h, k, SearchProperty::onto, budget.depth, 0,
                                budget.threads);
}

// As check_onto, also trying F_{r+e} for e = 1 .. budget.extra_letters with
// the same words.
inline Verdict check_fully_onto(Subgroup const& h, Subgroup const& k,
                                Budget const& budget = {}) {
  require_subgroup(h, k);
  if (auto v = detail::certify_algebraic(h, k, budget.bell_cap)) {
    v->extra_letters = budget.extra_letters;
    return *v;
  }
  Verdict last;
  for (std::size_t e = 0; e <= budget.extra_letters; ++e) {
    last = detail::search_verdict(h.widened(e), k.widened(e), SearchProperty::onto,
                                  budget.depth, e, budget.threads);
    if (last.refuted()) return last;
  }
  return last;
}

// Looks for a basis in which theta_{H,K} is not injective; H = K is the
// only certified case.
inline Verdict check_into(Subgroup const& h, Subgroup const& k,
                          Budget const& budget = {}) {
  require_subgroup(h, k);
  if (h == k) {
    Verdict v;
    v.outcome = Verdict::Outcome::yes_certified;
    return v;
  }
  return detail::search_verdict(h, k, SearchProperty::injective, budget.depth, 0,
                                budget.threads);
}

////////////////////////////////////////////////////////////////////////
// Closures
////////////////////////////////////////////////////////////////////////

enum class ClosureKind { algebraic, onto, fully_onto };

struct ClosureResult {
  Subgroup closure;
  // Weakest verdict among the accepted candidates; yes_certified when all
  // were certified.
  Verdict::Outcome status = Verdict::Outcome::yes_certified;
  // Candidates from the fringe inside K with the verdict each received; a
  // candidate below an accepted one is not checked and carries nothing.
  std::vector<std::pair<Subgroup, std::optional<Verdict>>> candidates;
};

// The join of the fringe members of H inside K that are not refuted. Larger
// candidates are examined first so that candidates below an accepted one
// can be skipped.
inline ClosureResult closure(Subgroup const& h, Subgroup const& k,
                             ClosureKind kind, Budget const& budget = {}) {
  require_subgroup(h, k);
  ClosureResult result;
  if (kind == ClosureKind::algebraic) {
    result.closure = algebraic_closure(h, k, budget.bell_cap);
    return result;
  }
  std::vector<Subgroup> inside;
  for (auto& l : fringe(h, budget.bell_cap)) {
    if (l.is_subgroup_of(k)) inside.push_back(std::move(l));
  }
  std::vector<std::size_t> below(inside.size(), 0);
  for (std::size_t i = 0; i < inside.size(); ++i) {
    for (std::size_t j = 0; j < inside.size(); ++j) {
      if (i != j && inside[j].is_subgroup_of(inside[i])) ++below[i];
    }
  }
  std::vector<std::size_t> order(inside.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return below[a] > below[b]; });
  std::vector<std::optional<Verdict>> verdicts(inside.size());
  std::vector<std::size_t> accepted;
  for (std::size_t i : order) {
    bool covered = std::any_of(accepted.begin(), accepted.end(), [&](std::size_t a) {
      return inside[i].is_subgroup_of(inside[a]);
    });
    if (covered) continue;
    Verdict v = kind == ClosureKind::onto ? check_onto(h, inside[i], budget)
                                          : check_fully_onto(h, inside[i], budget);
    verdicts[i] = v;
    if (v.refuted()) continue;
    accepted.push_back(i);
    if (v.outcome == Verdict::Outcome::unknown) {
      result.status = Verdict::Outcome::unknown;
    }
  }
  Subgroup joined = h;
  for (std::size_t a : accepted) joined = join(joined, inside[a]);
  result.closure = Subgroup::from_automaton(joined.graph());
  for (std::size_t i = 0; i < inside.size(); ++i) {
    result.candidates.emplace_back(inside[i], verdicts[i]);
  }
  return result;
}

inline ClosureResult onto_closure(Subgroup const& h, Subgroup const& k,
                                  Budget const& budget = {}) {
  return closure(h, k, ClosureKind::onto, budget);
}

inline ClosureResult fully_onto_closure(Subgroup const& h, Subgroup const& k,
                                        Budget const& budget = {}) {
  return closure(h, k, ClosureKind::fully_onto, budget);
}

}  // namespace stallings
