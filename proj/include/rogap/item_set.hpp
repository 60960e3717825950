#pragma once

#include <bit>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

namespace rogap {

/// Subset of item indices [0, n) stored as a bitset. Used as the key for
/// memoizing per-subset offline solutions.
class ItemSet {
 public:
  ItemSet() = default;
  explicit ItemSet(std::size_t universe) : universe_(universe), words_((universe + 63) / 64, 0) {}

  static ItemSet full(std::size_t universe) {
    ItemSet s(universe);
    for (std::size_t j = 0; j < universe; ++j) s.insert(j);
    return s;
  }

  static ItemSet of(std::size_t universe, std::span<const std::size_t> items) {
    ItemSet s(universe);
    for (std::size_t j : items) s.insert(j);
    return s;
  }

  std::size_t universe() const noexcept { return universe_; }

  void insert(std::size_t j) { words_[j / 64] |= (std::uint64_t{1} << (j % 64)); }
  void erase(std::size_t j) { words_[j / 64] &= ~(std::uint64_t{1} << (j % 64)); }
  bool contains(std::size_t j) const {
    return j < universe_ && (words_[j / 64] >> (j % 64)) & 1U;
  }

  std::size_t size() const {
    std::size_t c = 0;
    for (auto w : words_) c += static_cast<std::size_t>(std::popcount(w));
    return c;
  }
  bool empty() const { return size() == 0; }

  /// Members in increasing order.
  std::vector<std::size_t> members() const {
    std::vector<std::size_t> out;
    for (std::size_t j = 0; j < universe_; ++j) {
      if (contains(j)) out.push_back(j);
    }
    return out;
  }

  std::size_t hash() const noexcept {
    std::uint64_t h = 1469598103934665603ULL ^ universe_;
    for (auto w : words_) {
      h ^= w;
      h *= 1099511628211ULL;
      h ^= h >> 29;
    }
    return static_cast<std::size_t>(h);
  }

  friend bool operator==(const ItemSet& a, const ItemSet& b) {
    return a.universe_ == b.universe_ && a.words_ == b.words_;
  }

 private:
  std::size_t universe_ = 0;
  std::vector<std::uint64_t> words_;
};

struct ItemSetHash {
  std::size_t operator()(const ItemSet& s) const noexcept { return s.hash(); }
};

}  // namespace rogap
