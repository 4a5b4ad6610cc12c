#include "weaknet/harness/random.hpp"
#include "weaknet/slices.hpp"

#include <gtest/gtest.h>

#include <vector>

using namespace weaknet;
using weaknet::harness::Rng;

namespace {
Rational q(std::int64_t a, std::int64_t b = 1) { return make_rational(a, b); }

// All vectors on `coords` with entries k/den, |k| <= span.
std::vector<SupportVector> grid(const std::vector<Index>& coords, std::int64_t den, std::int64_t span) {
  std::vector<SupportVector> out;
  std::vector<std::int64_t> k(coords.size(), -span);
  while (true) {
    SupportVector v;
    for (std::size_t i = 0; i < coords.size(); ++i) v.set(coords[i], q(k[i], den));
    out.push_back(v);
    std::size_t i = 0;
    while (i < k.size() && k[i] == span) k[i++] = -span;
    if (i == k.size()) break;
    ++k[i];
  }
  return out;
}
}  // namespace

TEST(RegionMembership, AnnulusLFromLayerConstant) {
  AnnulusL L{BigInt(1), BigInt(1)};
  EXPECT_TRUE(region_membership(L, SupportVector{{"1", q(1, 5)}}));
  EXPECT_FALSE(region_membership(L, SupportVector{{"1", q(1, 10)}}));
  EXPECT_TRUE(region_membership(L, SupportVector{{"1", q(3, 10)}}));
}

TEST(RegionMembership, HalfOpenAnnulusBoundaries) {
  const Rational r = q(3, 4), eps = q(1, 4);
  EXPECT_TRUE(region_membership(HalfOpenAnnulus{r, eps}, SupportVector{{"1", r}}));
  EXPECT_FALSE(region_membership(HalfOpenAnnulus{r, eps}, SupportVector{{"1", r - eps}}));
  EXPECT_TRUE(region_membership(OpenBall{q(1, 1000)}, SupportVector{}));
}

TEST(RegionMembership, AnnulusLIsAnInstanceOfM) {
  Rng rng(1);
  for (int trial = 0; trial < 2000; ++trial) {
    AnnulusL L{BigInt(rng.uniform(1, 6)), BigInt(rng.uniform(1, 4))};
    auto x = rng.vector_on(rng.distinct_indices(2, 3), 40, q(1));
    EXPECT_EQ(region_membership(L, x), region_membership(L.as_annulus(), x));
  }
}

TEST(LocalSlice, SingleCoordinateMass) {
  const Rational r = q(2), eps = q(1, 3);
  auto V = local_slice_nbhd(SupportVector::unit(Index("01"), r), r, eps);
  EXPECT_EQ(V.F, IndexSet{Index("01")});
  EXPECT_EQ(V.radius, eps);
}

TEST(LocalSlice, GreedyPrefixAndRadius) {
  for (auto r : {q(1), q(3, 2), q(12)}) {
    SupportVector x{{"1", q(3, 8) * r}, {"01", q(3, 8) * r}, {"11", q(1, 4) * r}};
    auto V = local_slice_nbhd(x, r, r / 3);
    EXPECT_EQ(V.F, (IndexSet{Index("1"), Index("01")}));
    // rho = min(r/3, 3r/4 - 2r/3) = r/12, re-derived by hand.
    EXPECT_EQ(V.radius, r / 12);
    EXPECT_TRUE(V.contains(x));
  }
}

TEST(LocalSlice, RejectsBadParameters) {
  SupportVector x{{"1", q(1)}};
  EXPECT_THROW(local_slice_nbhd(x, q(1), q(1)), std::invalid_argument);
  EXPECT_THROW(local_slice_nbhd(x, q(1), q(0)), std::invalid_argument);
  EXPECT_THROW(local_slice_nbhd(x, q(2), q(1, 2)), std::invalid_argument);
}

TEST(SliceCheck, VacuousAndSingleton) {
  SupportVector x{{"1", q(1)}};
  auto V = local_slice_nbhd(x, q(1), q(1, 4));
  auto far = slice_diameter_check(V, q(1), q(1, 4), {SupportVector{{"1", q(-1)}}});
  EXPECT_EQ(far.members, 0u);
  EXPECT_TRUE(far.passed());
  auto self = slice_diameter_check(V, q(1), q(1, 4), {x});
  EXPECT_EQ(self.members, 1u);
  EXPECT_TRUE(self.passed());
}

// Exhaustive pairwise distances over grid vectors (dims <= 3, denominators <= 32).
TEST(SliceCheck, GridSamplesHaveDiameterAtMostFourEps) {
  Rng rng(7);
  std::size_t total_pairs = 0;
  for (int trial = 0; trial < 12; ++trial) {
    const auto dim = static_cast<std::size_t>(rng.uniform(1, 3));
    auto coords = rng.distinct_indices(dim, 3);
    const std::int64_t den = dim == 3 ? 8 : (dim == 2 ? 16 : 32);
    auto samples = grid(coords, den, den);
    SupportVector x;
    do x = rng.vector_on(coords, den, q(1));
    while (x.is_zero());
    const Rational r = x.l1_norm() + rng.positive(den, q(1, 4));
    const Rational eps = r - x.l1_norm() + (x.l1_norm()) * rng.positive(4, q(1, 2));
    if (!(eps < r)) continue;
    auto V = local_slice_nbhd(x, r, eps);
    auto report = slice_diameter_check(V, r, eps, samples);
    EXPECT_TRUE(report.passed());
    EXPECT_LE(report.max_distance, 4 * eps);
    // independent recomputation of the members and the maximum distance
    std::vector<SupportVector> members;
    for (const auto& s : samples) {
      Rational n = s.l1_norm();
      if (r - eps < n && n <= r && (project(s, V.F) - V.center).l1_norm() < V.radius) members.push_back(s);
    }
    EXPECT_EQ(members.size(), report.members);
    Rational worst(0);
    for (std::size_t a = 0; a < members.size(); ++a)
      for (std::size_t b = a + 1; b < members.size(); ++b) worst = max_of(worst, l1_distance(members[a], members[b]));
    EXPECT_EQ(worst, report.max_distance);
    total_pairs += report.pairs;
  }
  EXPECT_GT(total_pairs, 100u);
}
