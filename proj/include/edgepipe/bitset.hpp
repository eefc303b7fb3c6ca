#pragma once

#include <cstdint>
#include <vector>

namespace edgepipe {

// Fixed-universe dynamic bitset over node indices. Communication graphs are
// small (tens of nodes), so this is usually a single machine word.
class NodeSet {
 public:
  NodeSet() : n_(0) {}
  explicit NodeSet(int n) : n_(n), w_((n + 63) / 64, 0) {}

  int universe() const { return n_; }

  void set(int i) { w_[i >> 6] |= 1ULL << (i & 63); }
  void reset(int i) { w_[i >> 6] &= ~(1ULL << (i & 63)); }
  bool test(int i) const { return (w_[i >> 6] >> (i & 63)) & 1; }

  bool any() const {
    for (std::uint64_t w : w_)
      if (w) return true;
    return false;
  }

  int count() const {
    int c = 0;
    for (std::uint64_t w : w_) c += __builtin_popcountll(w);
    return c;
  }

  void clear() {
    for (auto& w : w_) w = 0;
  }

  NodeSet& operator|=(const NodeSet& o) {
    for (std::size_t i = 0; i < w_.size(); ++i) w_[i] |= o.w_[i];
    return *this;
  }
  NodeSet& operator&=(const NodeSet& o) {
    for (std::size_t i = 0; i < w_.size(); ++i) w_[i] &= o.w_[i];
    return *this;
  }
  NodeSet& subtract(const NodeSet& o) {
    for (std::size_t i = 0; i < w_.size(); ++i) w_[i] &= ~o.w_[i];
    return *this;
  }

  friend NodeSet operator&(NodeSet a, const NodeSet& b) { return a &= b; }
  friend NodeSet operator|(NodeSet a, const NodeSet& b) { return a |= b; }

  // Lowest set index, or -1.
  int first() const {
    for (std::size_t i = 0; i < w_.size(); ++i)
      if (w_[i]) return static_cast<int>(i * 64 + __builtin_ctzll(w_[i]));
    return -1;
  }

  template <typename Fn>
  void for_each(Fn fn) const {
    for (std::size_t i = 0; i < w_.size(); ++i) {
      std::uint64_t w = w_[i];
      while (w) {
        int b = __builtin_ctzll(w);
        fn(static_cast<int>(i * 64 + b));
        w &= w - 1;
      }
    }
  }

 private:
  int n_;
  std::vector<std::uint64_t> w_;
};

}  // namespace edgepipe
