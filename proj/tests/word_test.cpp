#include <gtest/gtest.h>

#include <random>
#include <set>
#include <string>
#include <vector>

#include "stallings/automorphism.hpp"
#include "stallings/endomorphism.hpp"
#include "stallings/whitehead.hpp"
#include "stallings/word.hpp"
#include "test_support.hpp"

namespace stallings {
namespace {

using testing_support::random_raw;
using testing_support::W;

// Naive reduction: repeatedly delete the first cancelling pair.
std::vector<Letter> naive_reduce(std::vector<Letter> v) {
  bool changed = true;
  while (changed) {
    changed = false;
    for (std::size_t i = 0; i + 1 < v.size(); ++i) {
      if (v[i + 1] == v[i].inverse()) {
        v.erase(v.begin() + static_cast<long>(i), v.begin() + static_cast<long>(i) + 2);
        changed = true;
        break;
      }
    }
  }
  return v;
}

Endomorphism E(std::size_t r, std::vector<std::string> const& images) {
  return Endomorphism::parse(images, r);
}

TEST(Word, ReducesCancellingPairs) {
  EXPECT_EQ(to_string(W("aA", 1)), "1");
  EXPECT_EQ(to_string(W("abBa", 2)), "aa");
  EXPECT_TRUE(W("1", 3).is_identity());
}

TEST(Word, ReduceMatchesNaiveOracle) {
  std::mt19937_64 rng(11);
  for (int t = 0; t < 500; ++t) {
    auto raw = random_raw(rng, 3, 20);
    Word w = reduce(raw);
    auto expect = naive_reduce(raw);
    ASSERT_EQ(std::vector<Letter>(w.begin(), w.end()), expect);
    ASSERT_EQ(reduce(w.letters()), w);
    ASSERT_LE(w.size(), raw.size());
  }
}

TEST(Word, MultiplyAndInvert) {
  EXPECT_EQ(multiply(W("ab", 3), W("Bc", 3)), W("ac", 3));
  EXPECT_EQ(invert(W("aabb", 2)), W("BBAA", 2));
  EXPECT_EQ(multiply(W("abc", 3), Word{}), W("abc", 3));
  std::mt19937_64 rng(5);
  for (int t = 0; t < 200; ++t) {
    Word u = reduce(random_raw(rng, 3, 12));
    Word v = reduce(random_raw(rng, 3, 12));
    ASSERT_TRUE(multiply(u, invert(u)).is_identity());
    ASSERT_LE(multiply(u, v).size(), u.size() + v.size());
    ASSERT_EQ(invert(multiply(u, v)), multiply(invert(v), invert(u)));
  }
}

TEST(Word, CyclicReductionAndPowers) {
  EXPECT_EQ(cyclic_reduction(W("baB", 2)), W("a", 2));
  EXPECT_EQ(cyclic_reduction(W("bbaB", 2)), W("ba", 2));
  EXPECT_EQ(power(W("ab", 2), 3), W("ababab", 2));
  EXPECT_EQ(power(W("ab", 2), -1), W("BA", 2));
  EXPECT_EQ(conjugate(W("b", 2), W("A", 2)), W("abA", 2));
}

TEST(Word, ShortlexOrder) {
  EXPECT_LT(W("b", 2), W("aa", 2));
  EXPECT_LT(W("a", 2), W("A", 2));
  EXPECT_LT(W("A", 2), W("b", 2));
}

TEST(WordSyntax, RoundTrip) {
  for (std::string s : {"1", "a", "aBcA", "zZ"}) {
    Word w = parse_word(s, 26);
    EXPECT_EQ(parse_word(to_string(w), 26), w);
  }
}

TEST(WordSyntax, ErrorsCarryPosition) {
  try {
    parse_word("ab?", 2, 4);
    FAIL();
  } catch (ParseError const& e) {
    EXPECT_EQ(e.line(), 4u);
    EXPECT_EQ(e.column(), 3u);
  }
  EXPECT_THROW(parse_word("abc", 2), ParseError);
  EXPECT_THROW(parse_word("", 2), ParseError);
  EXPECT_THROW(parse_word("a1", 2), ParseError);
}

TEST(Endomorphism, ApplySubstitutesAndReduces) {
  // x -> a, y -> cB, z -> cbC
  auto phi = E(3, {"a", "cB", "cbC"});
  EXPECT_EQ(phi.apply(W("aaBccb", 3)), W("aabb", 3));
  auto psi = E(3, {"a", "ab", "acba"});
  EXPECT_EQ(psi.apply(W("b", 3)), W("ab", 3));
  EXPECT_EQ(Endomorphism::identity(3).apply(W("abCA", 3)), W("abCA", 3));
  EXPECT_THROW(E(2, {"a", "b"}).apply(W("c", 3)), ArityMismatch);
}

TEST(Endomorphism, ComposeActsOnTheRight) {
  std::mt19937_64 rng(3);
  for (int t = 0; t < 100; ++t) {
    std::vector<Word> a, b;
    for (int i = 0; i < 3; ++i) a.push_back(reduce(random_raw(rng, 3, 5)));
    for (int i = 0; i < 3; ++i) b.push_back(reduce(random_raw(rng, 3, 5)));
    Endomorphism phi(3, a), psi(3, b);
    Word w = reduce(random_raw(rng, 3, 8));
    ASSERT_EQ(compose(phi, psi).apply(w), psi.apply(phi.apply(w)));
  }
  auto phi = E(3, {"a", "ab", "acba"});
  EXPECT_EQ(compose(phi, Endomorphism::identity(3)), phi);
  EXPECT_THROW(compose(E(2, {"a", "b"}), Endomorphism::identity(3)), ArityMismatch);
}

TEST(Automorphism, InverseOfBasisChange) {
  auto phi = E(3, {"a", "ab", "acba"});
  auto psi = invert_automorphism(phi);
  EXPECT_TRUE(compose(phi, psi).is_identity());
  EXPECT_TRUE(compose(psi, phi).is_identity());
  EXPECT_EQ(psi, E(3, {"a", "Ab", "AcABa"}));
}

TEST(Automorphism, InverseFromTwoLetterBasis) {
  // x = aBA, y = abb; then a = xxy and b = YXy.
  auto phi = E(2, {"aBA", "abb"});
  EXPECT_EQ(invert_automorphism(phi), E(2, {"aab", "BAb"}));
}

TEST(Automorphism, RejectsNonBases) {
  EXPECT_THROW(invert_automorphism(E(2, {"aa", "b"})), NotAutomorphism);
  EXPECT_THROW(invert_automorphism(E(2, {"ab", "ba"})), NotAutomorphism);
  EXPECT_THROW(invert_automorphism(E(2, {"a", "a"})), NotAutomorphism);
  EXPECT_THROW(invert_automorphism(E(2, {"a", "1"})), NotAutomorphism);
  EXPECT_THROW(invert_automorphism(E(3, {"a", "b"})), NotAutomorphism);
  EXPECT_FALSE(is_automorphism(E(2, {"abAB", "b"})));
}

TEST(Whitehead, GeneratorCounts) {
  EXPECT_EQ(letter_permutations(1).size(), 2u);
  EXPECT_EQ(letter_permutations(2).size(), 8u);
  EXPECT_EQ(letter_permutations(3).size(), 48u);
  EXPECT_EQ(multiplier_automorphisms(1).size(), 0u);
  EXPECT_EQ(multiplier_automorphisms(2).size(), 12u);
  EXPECT_EQ(multiplier_automorphisms(3).size(), 90u);
  std::set<Endomorphism> r1;
  for (auto const& g : whitehead_generators(1)) r1.insert(g.endomorphism());
  EXPECT_EQ(r1, (std::set<Endomorphism>{E(1, {"a"}), E(1, {"A"})}));
}

TEST(Whitehead, MultiplierAction) {
  // m = b, S = {b, a, C}: a -> ab, c -> Bc.
  auto w = WhiteheadAutomorphism::multiplier(
      3, Letter::positive(1), {Letter::positive(0), Letter::negative(2)});
  EXPECT_EQ(w.endomorphism(), E(3, {"ab", "b", "Bc"}));
  // Both a and A in S: conjugation.
  auto c = WhiteheadAutomorphism::multiplier(
      2, Letter::positive(1), {Letter::positive(0), Letter::negative(0)});
  EXPECT_EQ(c.endomorphism(), E(2, {"Bab", "b"}));
}

TEST(Whitehead, EveryGeneratorIsInvertible) {
  for (std::size_t r = 1; r <= 3; ++r) {
    for (auto const& g : whitehead_generators(r)) {
      auto phi = g.endomorphism();
      auto psi = invert_automorphism(phi);
      ASSERT_EQ(psi, g.inverse().endomorphism()) << to_string(phi);
    }
  }
}

TEST(Whitehead, NestedCutSetsCompose) {
  auto g1 = WhiteheadAutomorphism::multiplier(3, Letter::positive(0),
                                              {Letter::positive(1)});
  auto g2 = WhiteheadAutomorphism::multiplier(
      3, Letter::positive(0), {Letter::positive(1), Letter::negative(2)});
  auto both = compose(g1.endomorphism(), g2.endomorphism());
  for (std::size_t i = 0; i < 3; ++i) {
    Word x = Word::generator(i);
    EXPECT_EQ(both.apply(x), g2.endomorphism().apply(g1.endomorphism().apply(x)));
  }
  EXPECT_EQ(both, E(3, {"a", "baa", "Ac"}));
}

TEST(EnumerateBases, DepthZeroAndOne) {
  auto d0 = enumerate_bases(3, 0);
  ASSERT_EQ(d0.size(), 1u);
  EXPECT_TRUE(d0[0].is_identity());
  auto d1 = enumerate_bases(2, 1);
  std::set<Endomorphism> expect{Endomorphism::identity(2)};
  for (auto const& g : whitehead_generators(2)) expect.insert(g.endomorphism());
  EXPECT_EQ(std::set<Endomorphism>(d1.begin(), d1.end()), expect);
  EXPECT_EQ(d1.size(), expect.size());
}

TEST(EnumerateBases, NestedDistinctAndInvertible) {
  auto d1 = enumerate_bases(2, 1);
  auto d2 = enumerate_bases(2, 2);
  std::set<Endomorphism> s2(d2.begin(), d2.end());
  EXPECT_EQ(s2.size(), d2.size());
  for (auto const& phi : d1) EXPECT_TRUE(s2.count(phi));
  EXPECT_TRUE(std::equal(d1.begin(), d1.end(), d2.begin()));
  for (auto const& phi : d2) {
    ASSERT_TRUE(compose(phi, invert_automorphism(phi)).is_identity());
  }
}

TEST(EnumerateBases, ThreeLetterWitnessAppearsEarly) {
  auto target = E(3, {"a", "cB", "cbC"});
  BasisEnumerator e(3, 4);
  std::size_t found = 99;
  while (auto phi = e.next()) {
    if (*phi == target) {
      found = e.current_depth();
      break;
    }
  }
  EXPECT_EQ(found, 3u);
}

}  // namespace
}  // namespace stallings
