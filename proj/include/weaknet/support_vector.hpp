#pragma once

#include "weaknet/cantor.hpp"
#include "weaknet/rational.hpp"

#include <algorithm>
#include <initializer_list>
#include <map>
#include <set>
#include <utility>
#include <vector>

namespace weaknet {

using IndexSet = std::set<Index>;

/// Finite-support element of l1 over dyadic indices. Zero entries are never stored.
class SupportVector {
 public:
  using Entries = std::map<Index, Rational>;

  SupportVector() = default;
  explicit SupportVector(const Entries& entries) {
    for (const auto& [t, v] : entries) set(t, v);
  }
  SupportVector(std::initializer_list<std::pair<const char*, Rational>> entries) {
    for (const auto& [bits, v] : entries) add(Index(bits), v);
  }

  static SupportVector unit(const Index& t, const Rational& scale = Rational(1)) {
    SupportVector v;
    v.set(t, scale);
    return v;
  }

  const Entries& entries() const noexcept { return entries_; }
  std::size_t support_size() const noexcept { return entries_.size(); }
  bool is_zero() const noexcept { return entries_.empty(); }

  Rational at(const Index& t) const {
    auto it = entries_.find(t);
    return it == entries_.end() ? Rational(0) : it->second;
  }

  void set(const Index& t, const Rational& v) {
    if (v == 0)
      entries_.erase(t);
    else
      entries_[t] = v;
  }

  void add(const Index& t, const Rational& v) { set(t, at(t) + v); }

  IndexSet support() const {
    IndexSet s;
    for (const auto& [t, v] : entries_) s.insert(t);
    return s;
  }

  Rational l1_norm() const {
    Rational n(0);
    for (const auto& [t, v] : entries_) n += abs(v);
    return n;
  }

  SupportVector& operator+=(const SupportVector& o) {
    for (const auto& [t, v] : o.entries_) add(t, v);
    return *this;
  }
  SupportVector& operator-=(const SupportVector& o) {
    for (const auto& [t, v] : o.entries_) add(t, -v);
    return *this;
  }
  SupportVector& operator*=(const Rational& s) {
    if (s == 0) {
      entries_.clear();
    } else {
      for (auto& [t, v] : entries_) v *= s;
    }
    return *this;
  }

  friend SupportVector operator+(SupportVector a, const SupportVector& b) { return a += b; }
  friend SupportVector operator-(SupportVector a, const SupportVector& b) { return a -= b; }
  friend SupportVector operator*(const Rational& s, SupportVector a) { return a *= s; }
  friend bool operator==(const SupportVector&, const SupportVector&) = default;

 private:
  Entries entries_;
};

inline Rational l1_distance(const SupportVector& a, const SupportVector& b) {
  return (a - b).l1_norm();
}

/// Restriction of x to the coordinates in F.
inline SupportVector project(const SupportVector& x, const IndexSet& F) {
  SupportVector out;
  for (const auto& [t, v] : x.entries())
    if (F.contains(t)) out.set(t, v);
  return out;
}

/// Restriction of x to the coordinates outside F.
inline SupportVector project_complement(const SupportVector& x, const IndexSet& F) {
  SupportVector out;
  for (const auto& [t, v] : x.entries())
    if (!F.contains(t)) out.set(t, v);
  return out;
}

/// Support indices ordered by decreasing |x(t)|, ties by index order.
inline std::vector<Index> by_decreasing_magnitude(const SupportVector& x) {
  std::vector<std::pair<Index, Rational>> items(x.entries().begin(), x.entries().end());
  std::stable_sort(items.begin(), items.end(),
                   [](const auto& a, const auto& b) { return abs(a.second) > abs(b.second); });
  std::vector<Index> out;
  out.reserve(items.size());
  for (auto& [t, v] : items) out.push_back(t);
  return out;
}

}  // namespace weaknet
