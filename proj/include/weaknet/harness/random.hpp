#pragma once

#include "weaknet/cantor.hpp"
#include "weaknet/functional.hpp"
#include "weaknet/rational.hpp"
#include "weaknet/support_vector.hpp"

#include <cstdint>
#include <random>
#include <string>
#include <vector>

namespace weaknet::harness {

/// Seeded source for every generated instance. Draws are taken from the raw
/// 64-bit engine output so sequences do not depend on the standard library's
/// distribution implementations.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }

  /// Uniform integer in [lo, hi].
  std::int64_t uniform(std::int64_t lo, std::int64_t hi) {
    const std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1;
    if (span == 0) return static_cast<std::int64_t>(next());
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % span;
    std::uint64_t v;
    do v = next();
    while (v >= limit);
    return lo + static_cast<std::int64_t>(v % span);
  }

  bool coin() { return (next() >> 63) != 0; }

  /// Rational a/b with 1 <= b <= max_den and |a/b| <= bound.
  Rational rational(std::int64_t max_den, const Rational& bound = Rational(1)) {
    const std::int64_t b = uniform(1, max_den);
    const std::int64_t lim = to_int64(floor_of(bound * Rational(b)));
    return make_rational(uniform(-lim, lim), b);
  }

  /// Rational in the open interval (0, bound] with denominator <= max_den (nonzero).
  Rational positive(std::int64_t max_den, const Rational& bound = Rational(1)) {
    const std::int64_t b = uniform(1, max_den);
    std::int64_t lim = to_int64(floor_of(bound * Rational(b)));
    if (lim < 1) return bound;
    return make_rational(uniform(1, lim), b);
  }

  Index index(std::size_t max_len) {
    const auto len = static_cast<std::size_t>(uniform(0, static_cast<std::int64_t>(max_len)));
    std::string bits;
    for (std::size_t i = 0; i < len; ++i) bits.push_back(coin() ? '1' : '0');
    return Index(bits);
  }

  /// `count` distinct indices of bit length <= max_len.
  std::vector<Index> distinct_indices(std::size_t count, std::size_t max_len) {
    IndexSet seen;
    std::vector<Index> out;
    while (out.size() < count) {
      Index t = index(max_len);
      if (seen.insert(t).second) out.push_back(t);
    }
    return out;
  }

  SupportVector vector_on(const std::vector<Index>& coords, std::int64_t max_den, const Rational& bound) {
    SupportVector v;
    for (const auto& t : coords) v.set(t, rational(max_den, bound));
    return v;
  }

  /// Random partition by splitting cylinders of a random trie up to max_depth.
  ClopenPartition partition(std::size_t max_depth, std::size_t max_cells = 8) {
    std::vector<std::string> leaves{""};
    const auto splits = static_cast<std::size_t>(uniform(0, static_cast<std::int64_t>(max_cells) - 1));
    for (std::size_t s = 0; s < splits; ++s) {
      std::vector<std::size_t> splittable;
      for (std::size_t i = 0; i < leaves.size(); ++i)
        if (leaves[i].size() < max_depth) splittable.push_back(i);
      if (splittable.empty()) break;
      auto pick = splittable[static_cast<std::size_t>(uniform(0, static_cast<std::int64_t>(splittable.size()) - 1))];
      std::string p = leaves[pick];
      leaves[pick] = p + "0";
      leaves.push_back(p + "1");
    }
    // Group leaves into cells at random.
    const auto ncells = static_cast<std::size_t>(uniform(1, static_cast<std::int64_t>(leaves.size())));
    std::vector<std::vector<Cylinder>> groups(ncells);
    for (std::size_t i = 0; i < leaves.size(); ++i) {
      auto g = i < ncells ? i : static_cast<std::size_t>(uniform(0, static_cast<std::int64_t>(ncells) - 1));
      groups[g].emplace_back(leaves[i]);
    }
    std::vector<ClopenSet> cells;
    for (auto& g : groups) cells.emplace_back(std::move(g));
    return ClopenPartition(std::move(cells));
  }

  StepFunctional step_functional(std::size_t max_depth, std::int64_t max_den, const Rational& bound = Rational(1)) {
    ClopenPartition p = partition(max_depth);
    std::vector<Rational> values;
    for (std::size_t i = 0; i < p.size(); ++i) values.push_back(rational(max_den, bound));
    return StepFunctional(std::move(p), std::move(values));
  }

  /// Step functional with values in [-1, 1] attaining +-1 on some cell.
  StepFunctional sphere_step_functional(std::size_t max_depth, std::int64_t max_den) {
    ClopenPartition p = partition(max_depth);
    std::vector<Rational> values;
    for (std::size_t i = 0; i < p.size(); ++i) values.push_back(rational(max_den, Rational(1)));
    values[static_cast<std::size_t>(uniform(0, static_cast<std::int64_t>(values.size()) - 1))] = coin() ? 1 : -1;
    return StepFunctional(std::move(p), std::move(values));
  }

  TableFunctional table_functional(const std::vector<Index>& coords, std::int64_t max_den,
                                   const Rational& bound = Rational(1)) {
    std::map<Index, Rational> table;
    for (const auto& t : coords)
      if (coin()) table[t] = rational(max_den, bound);
    return TableFunctional(rational(max_den, bound), std::move(table));
  }

  Functional functional(const std::vector<Index>& coords, std::size_t max_depth, std::int64_t max_den,
                        const Rational& bound = Rational(1)) {
    if (coin()) return step_functional(max_depth, max_den, bound);
    return table_functional(coords, max_den, bound);
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace weaknet::harness
