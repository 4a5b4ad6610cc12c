#include "weaknet/harness/random.hpp"
#include "weaknet/lattice_base.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <cstdlib>
#include <vector>

using namespace weaknet;
using weaknet::harness::Rng;

namespace {
Rational q(std::int64_t a, std::int64_t b = 1) { return make_rational(a, b); }

LatticeBase base_on(std::size_t dim, LatticeConfig cfg = {}) {
  std::vector<Index> coords;
  const char* names[] = {"1", "01", "11", "001", "101"};
  for (std::size_t i = 0; i < dim; ++i) coords.emplace_back(names[i]);
  return LatticeBase(coords, cfg);
}

std::vector<SupportVector> grid_in_ball(const LatticeBase& base, std::int64_t den, const Rational& R) {
  std::vector<SupportVector> out;
  const std::int64_t span = to_int64(floor_of(R * den));
  std::vector<std::int64_t> k(base.dim(), -span);
  while (true) {
    SupportVector v;
    for (std::size_t i = 0; i < base.dim(); ++i) v.set(base.coords()[i], q(k[i], den));
    if (v.l1_norm() <= R) out.push_back(v);
    std::size_t i = 0;
    while (i < k.size() && k[i] == span) k[i++] = -span;
    if (i == k.size()) break;
    ++k[i];
  }
  return out;
}
}  // namespace

TEST(LatticeBase, SevenColorClassesForUnitRadiusRatio) {
  LatticeConfig cfg;
  cfg.radii = {q(1, 2)};
  auto base = base_on(1, cfg);
  EXPECT_EQ(base.tier_spacing(0), q(1, 4));
  std::int64_t M = 1;
  while (!(Rational(M) * q(1, 4) - 1 > q(1, 2))) ++M;
  EXPECT_EQ(M, 7);
  EXPECT_EQ(base.modulus(), M);
  EXPECT_EQ(base.layers().size(), 7u);
}

TEST(LatticeBase, ModulusAndKAreMinimal) {
  for (std::size_t dim = 1; dim <= 4; ++dim) {
    auto base = base_on(dim);
    EXPECT_EQ(base.layers_per_tier(), static_cast<std::size_t>(std::pow(base.modulus(), dim)));
    for (std::size_t t = 0; t < 5; ++t) {
      const Rational r = base.tier_radius(t), s = base.tier_spacing(t);
      const Rational M(base.modulus());
      EXPECT_GT(M * s - 2 * r, r);
      EXPECT_LE((M - 1) * s - 2 * r, r);
      const BigInt k = base.tier_k(t);
      EXPECT_LT(Rational(1) / Rational(k), M * s - 2 * r);
      if (k > 1) {
        EXPECT_GE(Rational(1) / Rational(k - 1), M * s - 2 * r);
      }
    }
  }
}

TEST(LatticeBase, ScheduleExtendsByHalving) {
  auto base = base_on(2);
  EXPECT_EQ(base.tier_radius(2), q(1, 8));
  EXPECT_EQ(base.tier_radius(3), q(1, 16));
  EXPECT_EQ(base.tier_radius(5), q(1, 64));
}

TEST(LatticeBase, LayerIdsRoundTrip) {
  auto base = base_on(3);
  for (std::size_t id = 1; id <= 3 * base.layers_per_tier(); id += 7) {
    auto L = base.layer(id);
    EXPECT_EQ(base.layer_id(L.tier, L.color), id);
    for (auto c : L.color) {
      EXPECT_GE(c, 0);
      EXPECT_LT(c, base.modulus());
    }
  }
  EXPECT_THROW(base.layer(0), std::invalid_argument);
}

TEST(LatticeBase, RejectsDimensionOverBound) {
  EXPECT_THROW(base_on(5), std::invalid_argument);
  LatticeConfig cfg;
  cfg.max_dim = 2;
  EXPECT_THROW(base_on(3, cfg), std::invalid_argument);
  cfg = {};
  cfg.radii = {q(1, 4), q(1, 2)};
  EXPECT_THROW(base_on(1, cfg), std::invalid_argument);
}

TEST(GapCheck, AdjacentSameClassCentersInDimOne) {
  auto base = base_on(1);
  auto L = base.layer(3);
  const std::int64_t c = L.color[0];
  BaseBallId a{L.id, {c}}, b{L.id, {c + base.modulus()}};
  auto report = gap_check(base, L, {{a, b}});
  EXPECT_EQ(report.pairs, 1u);
  EXPECT_EQ(report.min_gap, Rational(base.modulus()) * L.spacing - 2 * L.radius);
  EXPECT_TRUE(report.passed());
}

TEST(GapCheck, IdenticalPairIsSkipped) {
  auto base = base_on(2);
  auto L = base.layer(1);
  BaseBallId a{L.id, {0, 0}};
  auto report = gap_check(base, L, {{a, a}});
  EXPECT_EQ(report.pairs, 0u);
  EXPECT_EQ(report.skipped_identical, 1u);
  EXPECT_TRUE(report.passed());
}

TEST(GapCheck, ExhaustiveWithinWorkingBound) {
  for (std::size_t dim = 1; dim <= 2; ++dim) {
    auto base = base_on(dim);
    std::size_t pairs = 0;
    for (const auto& L : base.layers()) {
      auto report = exhaustive_gap_check(base, L);
      EXPECT_TRUE(report.passed()) << "layer " << L.id;
      pairs += report.pairs;
    }
    EXPECT_GT(pairs, 0u);
  }
}

TEST(GapCheck, BallsWithinMatchesBruteForce) {
  auto base = base_on(2);
  auto L = base.layer(base.layers_per_tier() + 12);
  const Rational within = q(3, 2);
  auto balls = base.balls_within(L, within);
  std::size_t expect = 0;
  for (std::int64_t a = -40; a <= 40; ++a)
    for (std::int64_t b = -40; b <= 40; ++b) {
      if (((a % 7) + 7) % 7 != L.color[0] || ((b % 7) + 7) % 7 != L.color[1]) continue;
      if (Rational(std::abs(a) + std::abs(b)) * L.spacing < within) ++expect;
    }
  EXPECT_EQ(balls.size(), expect);
}

TEST(BaseLookup, OriginWithTargetOneEighth) {
  auto base = base_on(2);
  auto ball = base.lookup(SupportVector{}, q(1, 8));
  EXPECT_LE(base.radius(ball), q(1, 16));
  EXPECT_TRUE(base.contains(ball, SupportVector{}));
  EXPECT_LE(l1_distance(base.center(ball), SupportVector{}), base.tier_spacing(4) * 2);
}

TEST(BaseLookup, LatticeCenterReturnsItsOwnBall) {
  auto base = base_on(3);
  BaseBallId want{0, {2, -3, 5}};
  const std::size_t tier = 1;
  std::vector<std::int64_t> color;
  for (auto z : want.lattice) color.push_back(((z % base.modulus()) + base.modulus()) % base.modulus());
  want.layer = base.layer_id(tier, color);
  auto got = base.lookup(base.center(want), 2 * base.tier_radius(tier));
  EXPECT_EQ(got, want);
}

TEST(BaseLookup, RejectsForeignSupport) {
  auto base = base_on(1);
  EXPECT_THROW(base.lookup(SupportVector{{"0001", q(1)}}, q(1)), std::invalid_argument);
}

TEST(BaseLookup, RandomQueriesAreRefined) {
  Rng rng(11);
  for (int trial = 0; trial < 3000; ++trial) {
    const auto dim = static_cast<std::size_t>(rng.uniform(1, 4));
    auto base = base_on(dim);
    SupportVector x = rng.vector_on(base.coords(), 64, q(1, 2));
    const Rational target = rng.positive(64, q(1));
    auto ball = base.lookup(x, target);
    EXPECT_TRUE(l1_distance(x, base.center(ball)) < base.radius(ball));
    EXPECT_LE(2 * base.radius(ball), target);
    auto L = base.layer(ball.layer);
    for (std::size_t i = 0; i < dim; ++i)
      EXPECT_EQ(((ball.lattice[i] % L.modulus) + L.modulus) % L.modulus, L.color[i]);
  }
}

// Every grid point of the R-ball is inside some ball of each tier, found by
// scanning lattice neighbours rather than through lookup.
TEST(BaseCoverage, GridPointsCoveredInEveryTier) {
  for (std::size_t dim = 1; dim <= 2; ++dim) {
    auto base = base_on(dim);
    auto pts = grid_in_ball(base, dim == 1 ? 64 : 32, base.config().bound);
    for (std::size_t t = 0; t < 3; ++t) {
      const Rational s = base.tier_spacing(t), r = base.tier_radius(t);
      for (const auto& x : pts) {
        bool covered = false;
        std::vector<std::int64_t> near(dim);
        for (std::size_t i = 0; i < dim; ++i) near[i] = to_int64(floor_of(x.at(base.coords()[i]) / s));
        for (int mask = 0; mask < (1 << dim) && !covered; ++mask) {
          Rational d(0);
          for (std::size_t i = 0; i < dim; ++i) d += abs(x.at(base.coords()[i]) - s * Rational(near[i] + ((mask >> i) & 1)));
          covered = d < r;
        }
        EXPECT_TRUE(covered);
      }
    }
  }
}
