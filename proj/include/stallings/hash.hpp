#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "stallings/word.hpp"

namespace stallings {

namespace detail {

inline std::uint64_t mix(std::uint64_t h, std::uint64_t x) {
  h ^= x + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
  return h;
}

}  // namespace detail

struct WordHash {
  std::size_t operator()(Word const& w) const noexcept {
    std::uint64_t h = w.size();
    for (Letter l : w) h = detail::mix(h, l.code());
    return static_cast<std::size_t>(h);
  }
};

struct WordsHash {
  std::size_t operator()(std::vector<Word> const& ws) const noexcept {
    std::uint64_t h = ws.size();
    for (Word const& w : ws) h = detail::mix(h, WordHash{}(w));
    return static_cast<std::size_t>(h);
  }
};

}  // namespace stallings
