#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "stallings/error.hpp"
#include "stallings/word.hpp"

namespace stallings {

// A homomorphism F_{arity_in} -> F_{arity_out}, given by the images of the
// generators. Maps act on the right: w.apply(phi).apply(psi) is w(phi psi),
// so compose(phi, psi) applies phi first.
class Endomorphism {
 public:
  Endomorphism() = default;
  Endomorphism(std::size_t arity_out, std::vector<Word> images)
      : arity_out_(arity_out), images_(std::move(images)) {
    for (Word const& w : images_) {
      if (w.min_rank() > arity_out_) {
        throw ArityMismatch("image uses a letter outside the target alphabet");
      }
    }
  }

  static Endomorphism identity(std::size_t rank) {
    std::vector<Word> images;
    images.reserve(rank);
    for (std::size_t i = 0; i < rank; ++i) images.push_back(Word::generator(i));
    return Endomorphism(rank, std::move(images));
  }

  // Parses one word per generator image.
  static Endomorphism parse(std::span<std::string const> images,
                            std::size_t arity_out) {
    return Endomorphism(arity_out, parse_words(images, arity_out));
  }

  std::size_t arity_in() const noexcept { return images_.size(); }
  std::size_t arity_out() const noexcept { return arity_out_; }
  std::vector<Word> const& images() const noexcept { return images_; }
  Word const& image(std::size_t i) const { return images_.at(i); }

  bool is_identity() const {
    if (arity_in() != arity_out()) return false;
    for (std::size_t i = 0; i < images_.size(); ++i) {
      if (images_[i].size() != 1 || images_[i][0] != Letter::positive(i)) {
        return false;
      }
    }
    return true;
  }

  Word apply(Word const& w) const {
    if (w.min_rank() > arity_in()) {
      throw ArityMismatch("word uses a letter outside the domain alphabet");
    }
    Word out;
    for (Letter l : w) {
      Word const& img = images_[l.index()];
      if (l.is_positive()) {
        out.append(img);
      } else {
        for (auto it = img.letters().rbegin(); it != img.letters().rend();
             ++it) {
          out.push(it->inverse());
        }
      }
    }
    return out;
  }

  std::vector<Word> apply(std::span<Word const> ws) const {
    std::vector<Word> out;
    out.reserve(ws.size());
    for (Word const& w : ws) out.push_back(apply(w));
    return out;
  }

  // Same images, viewed in a larger target alphabet (F_s <= F_{s+e}), and
  // extended by the identity on the new letters of the domain.
  Endomorphism extended(std::size_t extra) const {
    std::vector<Word> images = images_;
    for (std::size_t i = 0; i < extra; ++i) {
      images.push_back(Word::generator(arity_out_ + i));
    }
    return Endomorphism(arity_out_ + extra, std::move(images));
  }

  std::vector<std::string> to_strings() const {
    std::vector<std::string> out;
    out.reserve(images_.size());
    for (Word const& w : images_) out.push_back(to_string(w));
    return out;
  }

  friend bool operator==(Endomorphism const&, Endomorphism const&) = default;
  friend auto operator<=>(Endomorphism const& a, Endomorphism const& b) {
    return a.images_ <=> b.images_;
  }

 private:
  std::size_t arity_out_ = 0;
  std::vector<Word> images_;
};

// phi then psi.
inline Endomorphism compose(Endomorphism const& phi, Endomorphism const& psi) {
  if (phi.arity_out() != psi.arity_in()) {
    throw ArityMismatch("compose: arity_out(phi) != arity_in(psi)");
  }
  return Endomorphism(psi.arity_out(), psi.apply(phi.images()));
}

inline std::string to_string(Endomorphism const& phi) {
  std::string s = "(";
  for (std::size_t i = 0; i < phi.arity_in(); ++i) {
    if (i) s += ", ";
    s += to_string(phi.image(i));
  }
  return s + ")";
}

}  // namespace stallings
