#pragma once

// Whitehead automorphisms of F_r and bounded enumeration of ambient bases.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <numeric>
#include <unordered_set>
#include <vector>

#include "stallings/endomorphism.hpp"
#include "stallings/hash.hpp"
#include "stallings/word.hpp"

namespace stallings {

// Either a permutation of the signed letters commuting with inversion, or a
// multiplier m with a cut set S (m in S, m^-1 not in S) acting by
//   m -> m,   x -> m^{-[x^-1 in S]} x m^{[x in S]}   for x != m^{+-1}.
class WhiteheadAutomorphism {
 public:
  enum class Kind { permutation, multiplier };

  static WhiteheadAutomorphism permutation(std::vector<Letter> images) {
    WhiteheadAutomorphism w;
    w.kind_ = Kind::permutation;
    w.rank_ = images.size();
    w.images_ = std::move(images);
    return w;
  }

  // `cut_set` holds the signed letters of S (the multiplier is added).
  static WhiteheadAutomorphism multiplier(std::size_t rank, Letter m,
                                          std::vector<Letter> const& cut_set) {
    WhiteheadAutomorphism w;
    w.kind_ = Kind::multiplier;
    w.rank_ = rank;
    w.multiplier_ = m;
    w.cut_.assign(code_count(rank), false);
    for (Letter l : cut_set) w.cut_[l.code()] = true;
    w.cut_[m.code()] = true;
    w.cut_[m.inverse().code()] = false;
    return w;
  }

  Kind kind() const noexcept { return kind_; }
  std::size_t rank() const noexcept { return rank_; }
  Letter multiplier_letter() const noexcept { return multiplier_; }
  bool in_cut_set(Letter l) const { return cut_[l.code()]; }

  Endomorphism endomorphism() const {
    std::vector<Word> images;
    images.reserve(rank_);
    for (std::size_t i = 0; i < rank_; ++i) {
      Letter x = Letter::positive(i);
      if (kind_ == Kind::permutation) {
        images.push_back(Word{images_[i]});
        continue;
      }
      if (x.index() == multiplier_.index()) {
        images.push_back(Word{x});
        continue;
      }
      Word img;
      if (cut_[x.inverse().code()]) img.push(multiplier_.inverse());
      img.push(x);
      if (cut_[x.code()]) img.push(multiplier_);
      images.push_back(std::move(img));
    }
    return Endomorphism(rank_, std::move(images));
  }

  // (m, S) has inverse (m^-1, S - m + m^-1).
  WhiteheadAutomorphism inverse() const {
    if (kind_ == Kind::permutation) {
      std::vector<Letter> inv(rank_);
      for (std::size_t i = 0; i < rank_; ++i) {
        Letter img = images_[i];
        inv[img.index()] = Letter(i, img.sign());
      }
      return permutation(std::move(inv));
    }
    WhiteheadAutomorphism w = *this;
    w.multiplier_ = multiplier_.inverse();
    w.cut_[multiplier_.code()] = false;
    w.cut_[multiplier_.inverse().code()] = true;
    return w;
  }

  bool is_identity() const { return endomorphism().is_identity(); }

 private:
  Kind kind_ = Kind::permutation;
  std::size_t rank_ = 0;
  std::vector<Letter> images_;
  Letter multiplier_;
  std::vector<bool> cut_;
};

// All 2^r r! signed letter permutations (identity first).
inline std::vector<WhiteheadAutomorphism> letter_permutations(std::size_t rank) {
  std::vector<WhiteheadAutomorphism> out;
  std::vector<std::size_t> perm(rank);
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  do {
    for (std::uint64_t signs = 0; signs < (std::uint64_t{1} << rank); ++signs) {
      std::vector<Letter> images(rank);
      for (std::size_t i = 0; i < rank; ++i) {
        images[i] = Letter(perm[i], (signs >> i) & 1 ? -1 : +1);
      }
      out.push_back(WhiteheadAutomorphism::permutation(std::move(images)));
    }
  } while (std::next_permutation(perm.begin(), perm.end()));
  return out;
}

// All non-identity multiplier automorphisms: for each multiplier m, every
// non-empty subset of the letters other than m^{+-1}. 2r (4^{r-1} - 1) maps.
inline std::vector<WhiteheadAutomorphism> multiplier_automorphisms(
    std::size_t rank) {
  std::vector<WhiteheadAutomorphism> out;
  std::size_t const codes = code_count(rank);
  for (std::size_t mc = 0; mc < codes; ++mc) {
    Letter m = Letter::from_code(mc);
    std::vector<Letter> others;
    for (std::size_t c = 0; c < codes; ++c) {
      if (c / 2 != m.index()) others.push_back(Letter::from_code(c));
    }
    for (std::uint64_t mask = 1; mask < (std::uint64_t{1} << others.size());
         ++mask) {
      std::vector<Letter> cut;
      for (std::size_t k = 0; k < others.size(); ++k) {
        if ((mask >> k) & 1) cut.push_back(others[k]);
      }
      out.push_back(WhiteheadAutomorphism::multiplier(rank, m, cut));
    }
  }
  return out;
}

inline std::vector<WhiteheadAutomorphism> whitehead_generators(std::size_t rank) {
  auto out = letter_permutations(rank);
  auto mult = multiplier_automorphisms(rank);
  out.insert(out.end(), mult.begin(), mult.end());
  return out;
}

// Breadth-first enumeration of the automorphisms that are products of at
// most `depth` Whitehead generators, each reported once (keyed by its tuple
// of letter images). Depth d output extends depth d-1 output.
class BasisEnumerator {
 public:
  BasisEnumerator(std::size_t rank, std::size_t depth)
      : rank_(rank), depth_(depth) {
    for (auto const& g : whitehead_generators(rank)) {
      generators_.push_back(g.endomorphism());
    }
    Endomorphism id = Endomorphism::identity(rank);
    seen_.insert(id.images());
    current_.push_back(std::move(id));
  }

  // Depth of the element returned by the last call to next().
  std::size_t current_depth() const noexcept { return level_; }

  std::optional<Endomorphism> next() {
    while (true) {
      if (pos_ < current_.size()) return current_[pos_++];
      if (level_ == depth_ || current_.empty()) return std::nullopt;
      std::vector<Endomorphism> next_level;
      for (Endomorphism const& phi : current_) {
        for (Endomorphism const& g : generators_) {
          Endomorphism psi = compose(phi, g);
          if (seen_.insert(psi.images()).second) {
            next_level.push_back(std::move(psi));
          }
        }
      }
      current_ = std::move(next_level);
      pos_ = 0;
      ++level_;
    }
  }

 private:
  std::size_t rank_;
  std::size_t depth_;
  std::size_t level_ = 0;
  std::size_t pos_ = 0;
  std::vector<Endomorphism> generators_;
  std::vector<Endomorphism> current_;
  std::unordered_set<std::vector<Word>, WordsHash> seen_;
};

inline std::vector<Endomorphism> enumerate_bases(std::size_t rank,
                                                 std::size_t depth) {
  BasisEnumerator e(rank, depth);
  std::vector<Endomorphism> out;
  while (auto phi = e.next()) out.push_back(std::move(*phi));
  return out;
}

}  // namespace stallings
