#pragma once

// Dyadic points of the Cantor set 2^omega and the clopen sets generated by
// finite cylinders. An Index is a finite bit string read as the point whose
// remaining coordinates are all zero.

#include <algorithm>
#include <compare>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace weaknet {

namespace detail {
inline void require_bits(std::string_view bits) {
  for (char c : bits)
    if (c != '0' && c != '1') throw std::invalid_argument("not a bit string: " + std::string(bits));
}
}  // namespace detail

class Index {
 public:
  Index() = default;
  explicit Index(std::string_view bits) : bits_(canonical(bits)) {}

  /// Trailing zeros stripped; the empty string is the all-zeros point.
  static std::string canonical(std::string_view bits) {
    detail::require_bits(bits);
    auto last = bits.find_last_of('1');
    if (last == std::string_view::npos) return {};
    return std::string(bits.substr(0, last + 1));
  }

  const std::string& bits() const noexcept { return bits_; }

  /// Coordinate `pos` of the represented point.
  char bit(std::size_t pos) const noexcept { return pos < bits_.size() ? bits_[pos] : '0'; }

  /// First `len` coordinates, zero padded.
  std::string prefix(std::size_t len) const {
    std::string out = bits_.substr(0, std::min(len, bits_.size()));
    out.resize(len, '0');
    return out;
  }

  friend bool operator==(const Index&, const Index&) = default;
  friend auto operator<=>(const Index& a, const Index& b) { return a.bits_ <=> b.bits_; }

 private:
  std::string bits_;
};

class Cylinder {
 public:
  Cylinder() = default;
  explicit Cylinder(std::string prefix) : prefix_(std::move(prefix)) { detail::require_bits(prefix_); }

  const std::string& prefix() const noexcept { return prefix_; }
  std::size_t depth() const noexcept { return prefix_.size(); }

  bool contains(const Index& t) const { return t.prefix(prefix_.size()) == prefix_; }

  /// True when the two cylinders share a point (one prefix extends the other).
  bool overlaps(const Cylinder& other) const {
    const auto& a = prefix_;
    const auto& b = other.prefix_;
    return a.size() <= b.size() ? b.compare(0, a.size(), a) == 0 : a.compare(0, b.size(), b) == 0;
  }

  /// Some dyadic point of the cylinder that is not in `avoid`.
  template <class Set>
  Index point_avoiding(const Set& avoid) const {
    for (std::size_t extra = 0;; ++extra) {
      std::string bits = prefix_;
      bits.append(extra, '0');
      bits.push_back('1');
      Index candidate(bits);
      if (!avoid.contains(candidate)) return candidate;
    }
  }

  friend bool operator==(const Cylinder&, const Cylinder&) = default;
  friend auto operator<=>(const Cylinder&, const Cylinder&) = default;

 private:
  std::string prefix_;
};

/// Finite union of pairwise disjoint cylinders.
class ClopenSet {
 public:
  ClopenSet() = default;
  explicit ClopenSet(std::vector<Cylinder> cylinders) : cylinders_(std::move(cylinders)) {
    std::sort(cylinders_.begin(), cylinders_.end());
    for (std::size_t i = 0; i < cylinders_.size(); ++i)
      for (std::size_t j = i + 1; j < cylinders_.size(); ++j)
        if (cylinders_[i].overlaps(cylinders_[j]))
          throw std::invalid_argument("clopen set cylinders overlap: " + cylinders_[i].prefix() +
                                      " / " + cylinders_[j].prefix());
  }

  const std::vector<Cylinder>& cylinders() const noexcept { return cylinders_; }
  bool empty() const noexcept { return cylinders_.empty(); }

  bool contains(const Index& t) const {
    return std::any_of(cylinders_.begin(), cylinders_.end(),
                       [&](const Cylinder& c) { return c.contains(t); });
  }

  std::size_t max_depth() const {
    std::size_t d = 0;
    for (const auto& c : cylinders_) d = std::max(d, c.depth());
    return d;
  }

  friend bool operator==(const ClopenSet&, const ClopenSet&) = default;

 private:
  std::vector<Cylinder> cylinders_;
};

/// Finite partition of 2^omega into clopen cells.
class ClopenPartition {
 public:
  ClopenPartition() : cells_{ClopenSet({Cylinder("")})} {}

  /// Validates exhaustiveness and disjointness; throws std::invalid_argument.
  explicit ClopenPartition(std::vector<ClopenSet> cells) : cells_(std::move(cells)) {
    if (cells_.empty()) throw std::invalid_argument("partition needs at least one cell");
    for (const auto& cell : cells_)
      if (cell.empty()) throw std::invalid_argument("partition cell is empty");
    std::vector<Cylinder> all;
    for (const auto& cell : cells_)
      all.insert(all.end(), cell.cylinders().begin(), cell.cylinders().end());
    std::sort(all.begin(), all.end());
    for (std::size_t i = 0; i + 1 < all.size(); ++i)
      for (std::size_t j = i + 1; j < all.size(); ++j)
        if (all[i].overlaps(all[j]))
          throw std::invalid_argument("partition cells overlap at " + all[i].prefix());
    if (!covers(all)) throw std::invalid_argument("partition cells are not exhaustive");
  }

  const std::vector<ClopenSet>& cells() const noexcept { return cells_; }
  std::size_t size() const noexcept { return cells_.size(); }

  std::size_t depth() const {
    std::size_t d = 0;
    for (const auto& c : cells_) d = std::max(d, c.max_depth());
    return d;
  }

  /// Position of the unique cell containing t.
  std::size_t cell_of(const Index& t) const {
    for (std::size_t i = 0; i < cells_.size(); ++i)
      if (cells_[i].contains(t)) return i;
    throw std::logic_error("partition does not cover " + t.bits());
  }

 private:
  // Pairwise disjoint cylinders cover 2^omega iff their measures 2^-depth sum to 1.
  static bool covers(const std::vector<Cylinder>& disjoint) {
    std::size_t depth = 0;
    for (const auto& c : disjoint) depth = std::max(depth, c.depth());
    if (depth >= 63) {
      // Exact measure sum with arbitrary precision would be needed; fall back to a
      // recursive split, which stays linear in the number of cylinders.
      return covers_from("", disjoint);
    }
    unsigned long long total = 0;
    for (const auto& c : disjoint) total += 1ULL << (depth - c.depth());
    return total == (1ULL << depth);
  }

  static bool covers_from(const std::string& prefix, const std::vector<Cylinder>& cyl) {
    bool any_below = false;
    for (const auto& c : cyl) {
      if (c.depth() <= prefix.size() && prefix.compare(0, c.depth(), c.prefix()) == 0) return true;
      if (c.depth() > prefix.size() && c.prefix().compare(0, prefix.size(), prefix) == 0) any_below = true;
    }
    return any_below && covers_from(prefix + "0", cyl) && covers_from(prefix + "1", cyl);
  }

  std::vector<ClopenSet> cells_;
};

}  // namespace weaknet
