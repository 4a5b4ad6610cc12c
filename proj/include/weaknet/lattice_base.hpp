#pragma once

// A sigma-uniformly-discrete base for the l1 norm topology over a finite
// coordinate set, built from colored lattices of open balls.
//
// Tier t has ball radius r_t and lattice spacing s_t. Each tier splits into M^d
// layers, one per residue class of the integer lattice coordinates mod M. Two
// distinct centers in one class differ by at least M s_t in some coordinate, so
// the balls are at distance >= M s_t - 2 r_t > 1/k_t from each other.

#include "weaknet/rational.hpp"
#include "weaknet/support_vector.hpp"

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

namespace weaknet {

struct LatticeConfig {
  std::vector<Rational> radii{Rational(1, 2), Rational(1, 4), Rational(1, 8)};
  Rational bound{2};              ///< working radius R
  std::size_t max_dim = 4;
  Rational gap_ratio{1};          ///< required layer gap as a multiple of the tier radius
};

struct BaseLayer {
  std::size_t id = 0;             ///< n, 1-based
  std::size_t tier = 0;
  Rational radius;
  Rational spacing;
  std::int64_t modulus = 0;
  std::vector<std::int64_t> color;
  BigInt k;                       ///< 1/k < gap()

  Rational gap() const { return Rational(modulus) * spacing - 2 * radius; }
};

struct BaseBallId {
  std::size_t layer = 0;
  std::vector<std::int64_t> lattice;  ///< center = spacing * lattice, one entry per coordinate
  friend bool operator==(const BaseBallId&, const BaseBallId&) = default;
  friend auto operator<=>(const BaseBallId&, const BaseBallId&) = default;
};

struct GapViolation {
  std::vector<std::int64_t> a;
  std::vector<std::int64_t> b;
  Rational set_distance;
};

struct GapReport {
  std::size_t pairs = 0;
  std::size_t skipped_identical = 0;
  Rational min_gap{-1};   ///< smallest observed center distance - 2r (-1 when no pair)
  std::vector<GapViolation> violations;
  bool passed() const { return violations.empty(); }
};

class LatticeBase {
 public:
  LatticeBase(std::vector<Index> coords, LatticeConfig config)
      : coords_(std::move(coords)), config_(std::move(config)) {
    if (coords_.size() > config_.max_dim)
      throw std::invalid_argument("lattice base: dimension " + std::to_string(coords_.size()) +
                                  " exceeds bound " + std::to_string(config_.max_dim));
    if (config_.radii.empty()) throw std::invalid_argument("lattice base: empty radius schedule");
    for (std::size_t i = 0; i < config_.radii.size(); ++i) {
      if (config_.radii[i] <= 0) throw std::invalid_argument("lattice base: radii must be positive");
      if (i > 0 && !(config_.radii[i] < config_.radii[i - 1]))
        throw std::invalid_argument("lattice base: radius schedule must be decreasing");
    }
    if (config_.gap_ratio <= 0) throw std::invalid_argument("lattice base: gap ratio must be positive");
    spacing_ratio_ = dim() <= 3 ? Rational(1, 2) : Rational(1) / Rational(static_cast<std::int64_t>(dim()));
    // smallest M with M * spacing_ratio - 2 > gap_ratio
    modulus_ = to_int64(floor_of((config_.gap_ratio + 2) / spacing_ratio_)) + 1;
    colors_ = 1;
    for (std::size_t i = 0; i < dim(); ++i) colors_ *= static_cast<std::size_t>(modulus_);
  }

  std::size_t dim() const noexcept { return coords_.size(); }
  const std::vector<Index>& coords() const noexcept { return coords_; }
  const LatticeConfig& config() const noexcept { return config_; }
  std::int64_t modulus() const noexcept { return modulus_; }
  std::size_t layers_per_tier() const noexcept { return colors_; }

  /// Radius of tier t; past the configured schedule the last radius keeps halving.
  Rational tier_radius(std::size_t t) const {
    if (t < config_.radii.size()) return config_.radii[t];
    Rational r = config_.radii.back();
    for (std::size_t i = config_.radii.size(); i <= t; ++i) r /= 2;
    return r;
  }

  Rational tier_spacing(std::size_t t) const { return tier_radius(t) * spacing_ratio_; }

  BigInt tier_k(std::size_t t) const {
    Rational gap = Rational(modulus_) * tier_spacing(t) - 2 * tier_radius(t);
    return floor_of(Rational(1) / gap) + 1;
  }

  BaseLayer layer(std::size_t id) const {
    if (id == 0) throw std::invalid_argument("layer ids are 1-based");
    const std::size_t tier = (id - 1) / colors_;
    std::size_t rank = (id - 1) % colors_;
    std::vector<std::int64_t> color(dim());
    for (std::size_t i = 0; i < dim(); ++i) {
      color[i] = static_cast<std::int64_t>(rank % static_cast<std::size_t>(modulus_));
      rank /= static_cast<std::size_t>(modulus_);
    }
    return {id, tier, tier_radius(tier), tier_spacing(tier), modulus_, std::move(color), tier_k(tier)};
  }

  std::size_t layer_id(std::size_t tier, const std::vector<std::int64_t>& color) const {
    std::size_t rank = 0;
    for (std::size_t i = dim(); i-- > 0;) rank = rank * static_cast<std::size_t>(modulus_) + static_cast<std::size_t>(color[i]);
    return tier * colors_ + rank + 1;
  }

  /// Every layer of the configured schedule.
  std::vector<BaseLayer> layers() const {
    std::vector<BaseLayer> out;
    for (std::size_t id = 1; id <= config_.radii.size() * colors_; ++id) out.push_back(layer(id));
    return out;
  }

  SupportVector center(const BaseBallId& ball) const {
    const Rational s = tier_spacing((ball.layer - 1) / colors_);
    SupportVector c;
    for (std::size_t i = 0; i < dim(); ++i) c.set(coords_[i], s * Rational(ball.lattice[i]));
    return c;
  }

  Rational radius(const BaseBallId& ball) const { return tier_radius((ball.layer - 1) / colors_); }

  bool contains(const BaseBallId& ball, const SupportVector& x) const {
    return l1_distance(x, center(ball)) < radius(ball);
  }

  /// Ball of the lattice containing x with diameter 2r <= target.
  BaseBallId lookup(const SupportVector& x, const Rational& target) const {
    if (target <= 0) throw std::invalid_argument("base lookup: target radius must be positive");
    for (const auto& [t, v] : x.entries())
      if (std::find(coords_.begin(), coords_.end(), t) == coords_.end())
        throw std::invalid_argument("base lookup: support outside the working index set");
    std::size_t tier = 0;
    while (2 * tier_radius(tier) > target) ++tier;
    const Rational s = tier_spacing(tier);
    BaseBallId ball;
    std::vector<std::int64_t> color(dim());
    for (std::size_t i = 0; i < dim(); ++i) {
      std::int64_t z = to_int64(floor_of(x.at(coords_[i]) / s + Rational(1, 2)));
      ball.lattice.push_back(z);
      color[i] = ((z % modulus_) + modulus_) % modulus_;
    }
    ball.layer = layer_id(tier, color);
    return ball;
  }

  /// Lattice points of the layer's color class with |center|_1 < within.
  std::vector<BaseBallId> balls_within(const BaseLayer& layer, const Rational& within) const {
    std::vector<BaseBallId> out;
    const Rational s = layer.spacing;
    // |z|_1 * s < within  <=>  |z|_1 < within / s
    const Rational budget = within / s;
    std::vector<std::int64_t> z(dim());
    std::function<void(std::size_t, const Rational&)> rec = [&](std::size_t i, const Rational& used) {
      if (i == dim()) {
        out.push_back({layer.id, z});
        return;
      }
      const std::int64_t lim = to_int64(floor_of(budget - used));
      const std::int64_t M = layer.modulus;
      // smallest v >= -lim with v = color mod M
      std::int64_t start = -lim + ((layer.color[i] - (-lim)) % M + M) % M;
      for (std::int64_t v = start; v <= lim; v += M) {
        Rational next = used + Rational(v < 0 ? -v : v);
        if (!(next < budget)) continue;
        z[i] = v;
        rec(i + 1, next);
      }
    };
    rec(0, Rational(0));
    return out;
  }

 private:
  std::vector<Index> coords_;
  LatticeConfig config_;
  Rational spacing_ratio_;
  std::int64_t modulus_ = 0;
  std::size_t colors_ = 1;
};

inline LatticeBase build_lattice_base(const IndexSet& gamma, LatticeConfig config) {
  return LatticeBase(std::vector<Index>(gamma.begin(), gamma.end()), std::move(config));
}

/// Checks center distance - 2r > 1/k on every distinct pair.
inline GapReport gap_check(const LatticeBase& base, const BaseLayer& layer,
                           const std::vector<std::pair<BaseBallId, BaseBallId>>& pairs) {
  GapReport report;
  const Rational threshold = Rational(1) / Rational(layer.k);
  for (const auto& [a, b] : pairs) {
    if (a == b) {
      ++report.skipped_identical;
      continue;
    }
    ++report.pairs;
    Rational d = l1_distance(base.center(a), base.center(b)) - 2 * layer.radius;
    if (report.min_gap < 0 || d < report.min_gap) report.min_gap = d;
    if (!(d > threshold)) report.violations.push_back({a.lattice, b.lattice, d});
  }
  return report;
}

/// All distinct center pairs of the layer inside the working bound.
inline GapReport exhaustive_gap_check(const LatticeBase& base, const BaseLayer& layer) {
  auto balls = base.balls_within(layer, base.config().bound + layer.radius);
  std::vector<std::pair<BaseBallId, BaseBallId>> pairs;
  for (std::size_t i = 0; i < balls.size(); ++i)
    for (std::size_t j = i + 1; j < balls.size(); ++j) pairs.emplace_back(balls[i], balls[j]);
  return gap_check(base, layer, pairs);
}

}  // namespace weaknet
