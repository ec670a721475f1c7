#include <gtest/gtest.h>

#include <algorithm>
#include <random>
#include <string>
#include <vector>

#include "stallings/automorphism.hpp"
#include "stallings/extensions.hpp"
#include "stallings/random.hpp"
#include "stallings/whitehead.hpp"
#include "test_support.hpp"

namespace stallings {
namespace {

Subgroup S(std::vector<std::string> const& words, std::size_t r) {
  return Subgroup::parse(words, r);
}

bool same_set(std::vector<Subgroup> const& a, std::vector<Subgroup> const& b) {
  if (a.size() != b.size()) return false;
  return std::all_of(a.begin(), a.end(), [&](Subgroup const& x) {
    return std::find(b.begin(), b.end(), x) != b.end();
  });
}

bool contains(std::vector<Subgroup> const& set, Subgroup const& x) {
  return std::find(set.begin(), set.end(), x) != set.end();
}

// Small subgroups used throughout: the worked examples plus a few more.
std::vector<Subgroup> corpus() {
  return {S({"ab", "acba"}, 3),        S({"aabb"}, 2),
          S({"aa", "bb", "abba"}, 2),  S({"bbabA"}, 2),
          S({"aa", "bb"}, 2),          S({"aaa", "bbb"}, 2),
          S({"abAB"}, 2),              S({"aab"}, 2),
          S({"ab", "ba"}, 2),          S({"aa", "ab"}, 2)};
}

TEST(Fringe, ThreeLetterExample) {
  auto h = S({"ab", "acba"}, 3);
  std::vector<Subgroup> expect{h,
                               S({"ab", "ac", "ba"}, 3),
                               S({"Abaa", "Ab", "Acba"}, 3),
                               S({"ab", "ac", "aB", "aa"}, 3),
                               S({"ab", "aca", "acba"}, 3),
                               Subgroup::whole(3)};
  auto f = fringe(h);
  EXPECT_TRUE(same_set(f, expect));
  EXPECT_EQ(f.front(), h);
  EXPECT_EQ(fringe(S({"b", "c"}, 3)).size(), 1u);
  // The conjugate by a of <ba, bA, cb> is a member; that subgroup itself
  // does not contain ab.
  EXPECT_FALSE(h.is_subgroup_of(S({"ba", "bA", "cb"}, 3)));
}

TEST(Fringe, SquareProductExample) {
  auto h = S({"aabb"}, 2);
  std::vector<Subgroup> expect{h,
                               S({"a", "bb"}, 2),
                               S({"aa", "b"}, 2),
                               S({"aa", "bb"}, 2),
                               S({"ab", "aabb"}, 2),
                               S({"aa", "bb", "ab"}, 2),
                               Subgroup::whole(2)};
  EXPECT_TRUE(same_set(fringe(h), expect));
  EXPECT_TRUE(same_set(algebraic_extensions(h), {h, Subgroup::whole(2)}));
}

TEST(Fringe, EveryMemberContainsH) {
  for (auto const& h : corpus()) {
    for (auto const& m : fringe(h)) ASSERT_TRUE(h.is_subgroup_of(m)) << to_string(m);
  }
}

TEST(Fringe, RespectsTheBellCap) {
  auto h = S({"aaaaaabbbbbb"}, 2);  // 12 vertices
  EXPECT_THROW(fringe(h, 1000), PartitionBudgetExceeded);
  try {
    fringe(h, 1000);
  } catch (BudgetExceeded const& e) {
    EXPECT_EQ(e.cap_name(), "bell_cap");
  }
}

TEST(FreeFactor, WorkedExamples) {
  auto h = S({"aabb"}, 2);
  EXPECT_TRUE(is_free_factor(h, S({"aabb", "ab"}, 2)));
  EXPECT_FALSE(is_free_factor(h, Subgroup::whole(2)));
  EXPECT_TRUE(is_free_factor(S({"bbabA"}, 2), S({"b", "abA"}, 2)));
  EXPECT_TRUE(is_free_factor(S({"ab", "acba"}, 3), Subgroup::whole(3)));
  EXPECT_FALSE(is_free_factor(S({"aa"}, 2), S({"a"}, 2)));
  EXPECT_FALSE(is_free_factor(S({"abAB"}, 2), Subgroup::whole(2)));
  EXPECT_TRUE(is_free_factor(S({"1"}, 2), S({"ab"}, 2)));
  EXPECT_THROW(is_free_factor(S({"a"}, 2), S({"b"}, 2)), NotASubgroup);
}

TEST(FreeFactor, ImagesOfBasisSubsets) {
  // Subsets of a basis of K are free factors, in any basis of K.
  for (auto const& phi : enumerate_bases(3, 2)) {
    std::vector<Word> const& im = phi.images();
    ASSERT_TRUE(is_free_factor(Subgroup({im[0]}, 3), Subgroup::whole(3)));
    ASSERT_TRUE(is_free_factor(Subgroup({im[0], im[2]}, 3), Subgroup::whole(3)));
    ASSERT_TRUE(
        is_free_factor(Subgroup({multiply(im[0], im[1])}, 3), Subgroup::whole(3)));
    ASSERT_FALSE(is_free_factor(Subgroup({power(im[1], 2)}, 3), Subgroup::whole(3)));
  }
  std::mt19937_64 rng(3);
  RandomSubgroupSpec spec;
  spec.max_vertices = 8;
  spec.min_rank = 2;
  for (int t = 0; t < 30; ++t) {
    Subgroup k = random_subgroup(rng, spec);
    auto b = k.basis();
    ASSERT_TRUE(is_free_factor(Subgroup({b[0]}, 2), k));
    ASSERT_TRUE(is_free_factor(Subgroup({multiply(b[0], b[1])}, 2), k));
    ASSERT_FALSE(is_free_factor(Subgroup({power(b[1], 2)}, 2), k));
  }
}

TEST(FreeFactor, TransitiveAndClosedUnderIntersection) {
  for (auto const& h : corpus()) {
    auto f = fringe(h);
    for (auto const& a : f) {
      for (auto const& b : f) {
        if (!a.is_subgroup_of(b) || !is_free_factor(a, b)) continue;
        for (auto const& c : f) {
          if (!b.is_subgroup_of(c) || !is_free_factor(b, c)) continue;
          ASSERT_TRUE(is_free_factor(a, c))
              << to_string(a) << " " << to_string(b) << " " << to_string(c);
        }
        for (auto const& c : f) {
          if (!c.is_subgroup_of(b) || !is_free_factor(c, b)) continue;
          ASSERT_TRUE(is_free_factor(intersection(a, c), b));
        }
      }
    }
  }
}

TEST(Algebraic, WorkedExamples) {
  auto h = S({"aabb"}, 2);
  auto k = S({"aabb", "ab"}, 2);
  EXPECT_EQ(algebraic_closure(h, k), h);
  EXPECT_TRUE(is_algebraic(h, Subgroup::whole(2)));
  EXPECT_FALSE(is_algebraic(S({"bbabA"}, 2), S({"b", "abA"}, 2)));
  auto l = S({"aa", "bb", "abba"}, 2);
  EXPECT_EQ(algebraic_extensions(l).size(), 7u);
  EXPECT_EQ(algebraic_extensions(S({"ab", "acba"}, 3)).size(), 1u);
}

TEST(Algebraic, CleaningIsIdempotentAndJoinsStayAlgebraic) {
  for (auto const& h : corpus()) {
    auto ae = algebraic_extensions(h);
    ASSERT_TRUE(contains(ae, h));
    for (auto const& m : ae) {
      for (auto const& l : ae) {
        if (l == m || !l.is_subgroup_of(m)) continue;
        ASSERT_FALSE(is_free_factor(l, m)) << to_string(l) << " " << to_string(m);
      }
      for (auto const& n : ae) {
        ASSERT_TRUE(contains(ae, join(m, n))) << to_string(m) << " v " << to_string(n);
      }
      ASSERT_TRUE(is_algebraic(h, m));
    }
  }
}

TEST(Onto, SixthPowersRefutedInOneMove) {
  auto h = S({"aaaaaabbbbbb"}, 2);
  auto k = intersection(S({"aa", "bb"}, 2), S({"aaa", "bbb"}, 2));
  EXPECT_EQ(k, S({"aaaaaa", "bbbbbb"}, 2));
  Verdict v = check_onto(h, k, Budget{2, 1, 1000000, 1});
  ASSERT_EQ(v.outcome, Verdict::Outcome::no);
  ASSERT_TRUE(v.witness);
  EXPECT_FALSE(onto_at(h, k, *v.witness));
  EXPECT_EQ(v.depth, 1u);
  auto x = Endomorphism::parse(std::vector<std::string>{"aBA", "abb"}, 2);
  EXPECT_FALSE(onto_at(h, k, x));
  EXPECT_TRUE(onto_at(h, S({"aa", "bb"}, 2), x));
}

TEST(Onto, AlgebraicExtensionsAreCertified) {
  auto h = S({"aabb"}, 2);
  Verdict v = check_onto(h, Subgroup::whole(2));
  EXPECT_EQ(v.outcome, Verdict::Outcome::yes_certified);
  EXPECT_FALSE(v.witness);
  EXPECT_EQ(check_fully_onto(h, Subgroup::whole(2)).outcome,
            Verdict::Outcome::yes_certified);
}

TEST(FullyOnto, SquareProductRefutedWithOneExtraLetter) {
  auto h = S({"aabb"}, 2);
  auto k = S({"aabb", "ab"}, 2);
  Verdict v = check_fully_onto(h, k, Budget{2, 1, 1000000, 1});
  ASSERT_EQ(v.outcome, Verdict::Outcome::no);
  EXPECT_EQ(v.extra_letters, 1u);
  ASSERT_TRUE(v.witness);
  EXPECT_EQ(v.witness->arity_out(), 3u);
  EXPECT_FALSE(onto_at(h.widened(1), k.widened(1), *v.witness));
  // Onto within F_2 up to the same depth.
  EXPECT_EQ(check_onto(h, k, Budget{2, 0, 1000000, 1}).outcome,
            Verdict::Outcome::unknown);
}

TEST(Closures, SquareProduct) {
  auto h = S({"aabb"}, 2);
  auto k = S({"aabb", "ab"}, 2);
  Budget b{2, 1, 1000000, 1};
  EXPECT_EQ(closure(h, k, ClosureKind::algebraic, b).closure, h);
  auto f = fully_onto_closure(h, k, b);
  EXPECT_EQ(f.closure, h);
  EXPECT_EQ(f.status, Verdict::Outcome::yes_certified);
  auto o = onto_closure(h, k, b);
  EXPECT_EQ(o.closure, k);
  EXPECT_EQ(o.status, Verdict::Outcome::unknown);
}

TEST(Closures, WholeGroupClosuresCoincide) {
  for (auto const& h : {S({"aabb"}, 2), S({"aa", "bb"}, 2), S({"abAB"}, 2)}) {
    Budget b{1, 1, 1000000, 1};
    auto w = Subgroup::whole(2);
    auto cl = algebraic_closure(h, w);
    EXPECT_EQ(onto_closure(h, w, b).closure, cl) << to_string(h);
    EXPECT_EQ(fully_onto_closure(h, w, b).closure, cl) << to_string(h);
  }
}

// Chain AE(H) within fully-onto-unrefuted within onto-unrefuted within the
// fringe. The first inclusion is checked with certificates switched off.
TEST(Chain, InclusionsHoldAtEveryDepth) {
  for (auto const& h : corpus()) {
    if (h.graph().vertex_count() > 7) continue;
    auto f = fringe(h);
    auto ae = algebraic_extensions(h);
    for (std::size_t depth = 0; depth <= (h.ambient_rank() == 2 ? 2u : 1u); ++depth) {
      Budget b{depth, 1, 1000000, 1};
      std::vector<Subgroup> fonto, onto;
      for (auto const& m : f) {
        if (!check_fully_onto(h, m, b).refuted()) fonto.push_back(m);
        if (!check_onto(h, m, b).refuted()) onto.push_back(m);
      }
      for (auto const& m : ae) {
        ASSERT_TRUE(contains(fonto, m)) << to_string(m);
        for (std::size_t e = 0; e <= 1; ++e) {
          auto o = search_orbit(h.widened(e).graph(), m.widened(e).graph(),
                                SearchProperty::onto, e == 0 ? depth : std::min<std::size_t>(depth, 1));
          ASSERT_FALSE(o.psi) << to_string(h) << " <= " << to_string(m);
        }
      }
      for (auto const& m : fonto) ASSERT_TRUE(contains(onto, m)) << to_string(m);
      for (auto const& m : onto) ASSERT_TRUE(contains(f, m)) << to_string(m);
    }
  }
}

// For H <= M <= K: theta_{H,K} = theta_{H,M} theta_{M,K} in every basis.
TEST(Onto, CompositionAndFactoringBasisByBasis) {
  auto const bases = enumerate_bases(2, 2);
  for (auto const& h : corpus()) {
    if (h.ambient_rank() != 2) continue;
    auto f = fringe(h);
    for (auto const& m : f) {
      for (auto const& k : f) {
        if (!m.is_subgroup_of(k)) continue;
        for (auto const& phi : bases) {
          bool hk = onto_at(h, k, phi);
          bool hm = onto_at(h, m, phi);
          bool mk = onto_at(m, k, phi);
          if (!hk) {
            ASSERT_TRUE(!hm || !mk);
          }
          if (hk) {
            ASSERT_TRUE(mk);
          }
          if (hm && mk) {
            ASSERT_TRUE(hk);
          }
        }
      }
    }
  }
}

TEST(Into, ProperExtensionsAreRefuted) {
  std::mt19937_64 rng(2024);
  RandomSubgroupSpec spec;
  spec.max_vertices = 6;
  spec.max_word_length = 6;
  int refuted = 0, total = 0;
  while (total < 50) {
    Subgroup h = random_subgroup(rng, spec);
    if (h.graph().vertex_count() < 2) continue;
    Subgroup k = random_proper_extension(rng, h);
    ++total;
    Verdict v = check_into(h, k, Budget{5, 0, 1000000, 1});
    if (v.refuted()) {
      ++refuted;
      ASSERT_FALSE(injective_at(h, k, *v.witness));
    }
  }
  EXPECT_GE(refuted, 45);
  auto h = S({"aabb"}, 2);
  EXPECT_EQ(check_into(h, h).outcome, Verdict::Outcome::yes_certified);
}

TEST(InBasis, ChangesTheFringe) {
  auto phi = Endomorphism::parse(std::vector<std::string>{"a", "ab", "acba"}, 3);
  auto h = S({"ab", "acba"}, 3);
  auto g = in_basis(h, phi);
  EXPECT_EQ(g.vertex_count(), 1u);
  EXPECT_EQ(Subgroup::from_automaton(g), S({"b", "c"}, 3));
  EXPECT_THROW(in_basis(h, Endomorphism::parse(std::vector<std::string>{"a", "b"}, 2)),
               ArityMismatch);
  EXPECT_THROW(in_basis(h, Endomorphism::parse(std::vector<std::string>{"aa", "b", "c"}, 3)),
               NotAutomorphism);
}

}  // namespace
}  // namespace stallings
