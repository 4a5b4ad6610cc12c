#include "weaknet/harness/ccx_gen.hpp"
#include "weaknet/sequences.hpp"

#include <gtest/gtest.h>

using namespace weaknet;
using namespace weaknet::seq;
using weaknet::harness::Rng;

namespace {
Rational q(std::int64_t a, std::int64_t b = 1) { return make_rational(a, b); }

IntRule P(std::vector<Rational> c) { return IntRule::poly(std::move(c)); }

// n is the least column with |x_{k,n} - x| < 1/k; distances fall strictly in n,
// so checking n and n - 1 settles it.
bool least_column(const MetricArray& arr, std::uint64_t k, const BigInt& n) {
  auto close = [&](const BigInt& c) { return arr.distance(BigInt(k), c) * Rational(k) < 1; };
  return n >= 1 && close(n) && (n == 1 || !close(n - 1));
}

MetricArray random_metric_array(Rng& rng) {
  MetricArray arr;
  arr.limit = rng.rational(8, q(3));
  arr.a = rng.rational(6, q(4));
  arr.p = static_cast<unsigned>(rng.uniform(0, 3));
  arr.b = rng.uniform(0, 3);
  arr.c = rng.uniform(0, 5);
  return arr;
}
}  // namespace

TEST(IntRule, StrictMonotonicityMatchesScan) {
  EXPECT_TRUE(strictly_increasing(P({q(0), q(1)})));
  EXPECT_TRUE(strictly_increasing(P({q(0), q(3, 2), q(1, 2)})));
  EXPECT_FALSE(strictly_increasing(P({q(0), q(1, 2)})));
  EXPECT_FALSE(strictly_increasing(IntRule::constant(4)));
  // k^2 - 6k stays at the floor 1 for k <= 6
  EXPECT_FALSE(strictly_increasing(P({q(0), q(-6), q(1)})));
  IntRule r = P({q(0), q(2)});
  r.overrides[3] = 4;
  EXPECT_FALSE(strictly_increasing(r));
  r.overrides[3] = 8;
  EXPECT_FALSE(strictly_increasing(r));
  r.overrides[3] = 5;
  EXPECT_TRUE(strictly_increasing(r));

  Rng rng(11);
  for (int trial = 0; trial < 300; ++trial) {
    std::vector<Rational> c;
    const auto deg = rng.uniform(0, 3);
    for (std::int64_t i = 0; i <= deg; ++i) c.push_back(rng.rational(3, q(3)));
    IntRule rule = P(c);
    bool scan = true;
    for (std::uint64_t k = 1; k < 400; ++k) scan = scan && rule.at(k) < rule.at(k + 1);
    // the scan can only see a failure; the decision must agree whenever it sees one
    if (!scan) {
      EXPECT_FALSE(strictly_increasing(rule));
    }
    if (strictly_increasing(rule)) {
      EXPECT_TRUE(scan);
    }
  }
}

TEST(Alpha4, ConstantArrayTakesColumnOne) {
  MetricArray arr{q(2, 3), q(0), 0, 0, 0};
  auto res = alpha4_check(arr, 1, 200);
  ASSERT_EQ(res.verdict, Alpha4Verdict::Certified);
  for (std::uint64_t k = 1; k <= 50; ++k) {
    EXPECT_EQ(res.diagonal->m.at(k), BigInt(k));
    EXPECT_EQ(res.diagonal->n.at(k), 1);
  }
}

TEST(Alpha4, ReciprocalSumDiagonal) {
  MetricArray arr{q(0), q(1), 0, 1, 0};  // 1/(m+n)
  DiagonalCandidate d{P({q(0), q(1)}), P({q(0), q(1)})};
  auto lim = metric_limit(arr, d);
  EXPECT_TRUE(lim.converges);
  for (std::uint64_t k = 1; k <= 100; ++k) EXPECT_EQ(arr.point(BigInt(k), BigInt(k)), q(1, static_cast<std::int64_t>(2 * k)));
  auto cert = certify_metric(arr, d, 100);
  EXPECT_TRUE(cert.ok());
  EXPECT_EQ(cert.max_scaled, q(1, 2));
}

TEST(Alpha4, GreedyMatchesScanAndCertifies) {
  Rng rng(12);
  for (int trial = 0; trial < 1000; ++trial) {
    auto arr = random_metric_array(rng);
    auto g = greedy_diagonal(arr);
    for (std::uint64_t k = 1; k <= 60; ++k) EXPECT_TRUE(least_column(arr, k, g.n.at(k))) << k;
    auto res = alpha4_check(arr, 10, 60);
    ASSERT_EQ(res.verdict, Alpha4Verdict::Certified);
    EXPECT_EQ(res.attempted, 1u);
    EXPECT_TRUE(res.certificate->ok());
  }
}

TEST(Alpha4, OracleAndWitnessAgree) {
  Rng rng(13);
  auto family = candidate_family(200);
  for (int trial = 0; trial < 200; ++trial) {
    auto arr = random_metric_array(rng);
    if (arr.a == 0) continue;
    const auto& cand = family[static_cast<std::size_t>(rng.uniform(0, static_cast<std::int64_t>(family.size()) - 1))];
    auto lim = metric_limit(arr, cand);
    auto r = metric_separating_radius(arr, cand);
    EXPECT_EQ(lim.converges, !r.has_value());
    // the late part of the window agrees with the decision
    const std::uint64_t K = 4000;
    const Rational dK = arr.distance(cand.m.at(K), cand.n.at(K));
    if (lim.converges) {
      EXPECT_LT(dK, arr.distance(cand.m.at(K / 40), cand.n.at(K / 40)) + Rational(1, 1000));
    } else {
      EXPECT_GE(dK, *r);
      EXPECT_GE(arr.distance(cand.m.at(K / 2), cand.n.at(K / 2)), *r);
    }
  }
}

TEST(Alpha4, EmptyBudgetIsExhausted) {
  MetricArray arr{q(0), q(1), 0, 1, 0};
  auto res = alpha4_check(arr, 0, 10);
  EXPECT_EQ(res.verdict, Alpha4Verdict::Exhausted);
  EXPECT_EQ(res.attempted, 0u);
}

TEST(Fan, FirstPointCuts) {
  DiagonalCandidate d{P({q(0), q(1)}), IntRule::constant(1)};
  auto nb = fan_separating_nbhd(d);
  EXPECT_TRUE(nb.exceptions.empty());
  for (std::int64_t k = 1; k <= 100; ++k) {
    EXPECT_EQ(nb.cut(BigInt(k)), 2);
    EXPECT_FALSE(nb.contains(fan_canonical(BigInt(k), BigInt(1))));
    EXPECT_TRUE(nb.contains(fan_canonical(BigInt(k), BigInt(2))));
  }
  EXPECT_TRUE(nb.contains(FanPoint::top()));
}

TEST(Fan, DiagonalIndexCuts) {
  DiagonalCandidate d{P({q(0), q(2)}), P({q(0), q(1)})};  // m_k = 2k, n_k = k
  auto nb = fan_separating_nbhd(d);
  for (std::int64_t k = 1; k <= 100; ++k) {
    EXPECT_EQ(nb.cut(BigInt(2 * k)), k + 1);
    EXPECT_EQ(nb.cut(BigInt(2 * k - 1)), 1);  // untouched spokes stay whole
  }
}

TEST(Fan, PatchedRowsBecomeExceptions) {
  DiagonalCandidate d{P({q(0), q(1)}), P({q(0), q(1)})};
  d.n.overrides = {{2, BigInt(40)}, {5, BigInt(1)}, {9, BigInt(3)}};
  auto nb = fan_separating_nbhd(d);
  EXPECT_EQ(nb.exceptions.size(), 3u);
  EXPECT_EQ(nb.cut(BigInt(2)), 41);
  EXPECT_EQ(nb.cut(BigInt(5)), 2);
  EXPECT_EQ(nb.cut(BigInt(9)), 4);
  EXPECT_EQ(nb.cut(BigInt(7)), 8);
  EXPECT_TRUE(verify_refutation(d, nb, 300).ok());
}

TEST(Fan, PatchedRowsLandingOnBaseRows) {
  DiagonalCandidate d{P({q(0), q(3)}), P({q(0), q(0), q(1)})};  // m_k = 3k, n_k = k^2
  d.m.overrides = {{1, BigInt(2)}};  // row 1 moves to spoke 2, row 2 stays at 6
  d.n.overrides = {{1, BigInt(50)}};
  auto nb = fan_separating_nbhd(d);
  EXPECT_TRUE(verify_refutation(d, nb, 500).ok());
  EXPECT_EQ(nb.cut(BigInt(2)), 51);
}

TEST(Fan, EveryFamilyCandidateIsRefuted) {
  auto family = candidate_family(1000);
  ASSERT_GE(family.size(), 100u);
  for (const auto& c : family) EXPECT_NO_THROW(c.validate());
  auto res = alpha4_check_fan(family, 400);
  EXPECT_EQ(res.verdict, Alpha4Verdict::Refuted);
  EXPECT_EQ(res.refutations.size(), family.size());
  for (const auto& r : res.refutations) {
    EXPECT_TRUE(r.ok());
    // independent recheck of exclusion with the cut computed from scratch
    for (std::uint64_t k = 1; k <= 100; ++k) {
      const BigInt m = r.candidate.m.at(k), n = r.candidate.n.at(k);
      EXPECT_LT(n, r.nbhd.cut(m));
    }
  }
}

TEST(Fan, RandomPatchedCandidatesAreRefuted) {
  Rng rng(14);
  auto family = candidate_family(144);
  for (int trial = 0; trial < 300; ++trial) {
    auto d = family[static_cast<std::size_t>(rng.uniform(0, 143))];
    for (int i = 0; i < 3; ++i) d.n.overrides[static_cast<std::uint64_t>(rng.uniform(1, 30))] = rng.uniform(1, 60);
    auto r = verify_refutation(d, fan_separating_nbhd(d), 200);
    EXPECT_TRUE(r.ok());
  }
}

TEST(Fan, RowsMustBeDistinct) {
  DiagonalCandidate d{IntRule::constant(3), P({q(0), q(1)})};
  EXPECT_THROW(fan_separating_nbhd(d), std::invalid_argument);
}

TEST(Fan, CompactSetsLieInFinitelyManySpokes) {
  Rng rng(15);
  for (int trial = 0; trial < 200; ++trial) {
    FanSubset S;
    S.apex = true;
    const auto pieces = rng.uniform(1, 6);
    for (std::int64_t i = 0; i < pieces; ++i) {
      BigInt m = rng.uniform(1, 40);
      if (rng.coin()) S.tails[m] = rng.uniform(1, 10);
      else S.points[m].insert(BigInt(rng.uniform(1, 30)));
    }
    auto c = fan_compact_cover(S);
    ASSERT_TRUE(c.compact);
    EXPECT_LE(c.spokes.size(), static_cast<std::size_t>(pieces));
    for (std::int64_t m = 1; m <= 45; ++m)
      for (std::int64_t n = 1; n <= 40; ++n)
        if (S.contains(fan_canonical(BigInt(m), BigInt(n)))) {
          EXPECT_TRUE(c.spokes.count(BigInt(m)));
        }
  }
}

TEST(Fan, InfinitelyManySpokesAreRejected) {
  FanSubset S;
  S.apex = true;
  S.tail_spokes = P({q(0), q(1)});
  auto c = fan_compact_cover(S);
  EXPECT_FALSE(c.compact);
  ASSERT_TRUE(c.witness);
  EXPECT_TRUE(c.witness->contains(FanPoint::top()));
  for (std::int64_t m = 1; m <= 50; ++m) {
    EXPECT_TRUE(S.contains(fan_canonical(BigInt(m), BigInt(1))));
    EXPECT_FALSE(c.witness->contains(fan_canonical(BigInt(m), BigInt(1))));
  }

  FanSubset R;
  R.apex = true;
  R.rows = DiagonalCandidate{P({q(0), q(1)}), P({q(0), q(1)})};
  auto d = fan_compact_cover(R);
  EXPECT_FALSE(d.compact);
  for (std::int64_t k = 1; k <= 50; ++k) EXPECT_FALSE(d.witness->contains(fan_canonical(BigInt(k), BigInt(k))));

  FanSubset open_tail;
  open_tail.tails[BigInt(3)] = 1;
  EXPECT_FALSE(fan_compact_cover(open_tail).compact);
}

TEST(CsStar, FiniteSubsetsWindow) {
  const std::uint64_t W = 7;
  auto net = finite_subsets_network(W);
  for (std::uint64_t x : {0u, 3u, 6u}) {
    auto T = csstar_at_point(net, x, W + 2);
    // oracle: enumerate every subset of the window
    std::vector<std::size_t> expected(W + 2, 0);
    for (std::uint64_t mask = 0; mask < (1u << W); ++mask)
      if (mask >> x & 1u) ++expected[static_cast<std::size_t>(__builtin_popcountll(mask)) - 1];
    for (std::size_t n = 0; n < T.layers.size(); ++n) {
      EXPECT_EQ(T.layers[n].size(), expected[n]) << "layer " << n + 1;
      std::set<std::set<std::uint64_t>> distinct(T.layers[n].begin(), T.layers[n].end());
      EXPECT_EQ(distinct.size(), T.layers[n].size());
    }
    EXPECT_EQ(T.size(), 1u << (W - 1));
  }
  EXPECT_EQ(csstar_at_point(net, W, 5).size(), 0u);
}

TEST(CsStar, MissingWitnessIsRejected) {
  LayeredNetwork<std::uint64_t, std::set<std::uint64_t>> net;
  net.layer = [](std::uint64_t n) {
    NetworkLayer<std::uint64_t, std::set<std::uint64_t>> L;
    if (n < 3) L.members_containing = [](std::uint64_t x) { return std::vector<std::set<std::uint64_t>>{{x}}; };
    return L;
  };
  EXPECT_NO_THROW(csstar_at_point(net, 1u, 2));
  EXPECT_THROW(csstar_at_point(net, 1u, 3), std::invalid_argument);
}

TEST(CsStar, EmptyFamilyFailsCapture) {
  ccx::SpaceX X({q(1)}, 1);
  LayeredNetwork<ccx::PointId, ccx::DSet> net;
  net.layer = [](std::uint64_t) {
    NetworkLayer<ccx::PointId, ccx::DSet> L;
    L.members_containing = [](const ccx::PointId&) { return std::vector<ccx::DSet>{}; };
    return L;
  };
  auto T = csstar_at_point(net, ccx::PointId::limit(0), 10);
  EXPECT_EQ(T.size(), 0u);
  SequenceX seq;
  seq.streams.push_back({false, {}, 0, P({q(0), q(1)})});
  EXPECT_FALSE(capture_check(T, seq, ccx::DSet::tail(0, 1)).captured);
}

TEST(CsStar, SpaceXTailsCaptureConvergentSequences) {
  Rng rng(16);
  const std::uint64_t depth = 40;
  for (int trial = 0; trial < 300; ++trial) {
    auto X = harness::random_space(rng);
    auto net = spacex_tails_network(X);
    // a limit point, a spoke point or an isolated point
    ccx::PointId x;
    const auto kind = rng.uniform(0, 2);
    if (kind == 2 && X.isolated() > 0) x = ccx::PointId::isolated(static_cast<std::size_t>(rng.uniform(0, static_cast<std::int64_t>(X.isolated()) - 1)));
    else if (kind == 1) x = harness::random_point(rng, X, 20);
    else x = ccx::PointId::limit(static_cast<std::size_t>(rng.uniform(0, static_cast<std::int64_t>(X.spokes()) - 1)));
    auto T = csstar_at_point(net, x, depth);
    for (const auto& layer : T.layers) EXPECT_LE(layer.size(), 3 * X.spokes() + X.isolated());

    SequenceX seq;
    for (int i = 0; i < 4; ++i) seq.prefix.push_back(harness::random_point(rng, X, 30));
    if (x.kind == ccx::PointId::Kind::Limit) {
      // oracle: every tail of the spoke is in T(x)
      for (std::uint64_t n = 1; n <= depth; ++n) {
        bool found = false;
        for (const auto& D : T.layers[n - 1]) found = found || D == ccx::DSet::tail(x.s, n);
        EXPECT_TRUE(found);
      }
      const auto streams = rng.uniform(1, 3);
      for (std::int64_t i = 0; i < streams; ++i) {
        if (rng.uniform(0, 3) == 0) seq.streams.push_back({true, x, 0, {}});
        else seq.streams.push_back({false, {}, x.s, P({q(rng.uniform(0, 9)), q(rng.uniform(1, 4), rng.uniform(1, 3))})});
      }
    } else {
      seq.streams.push_back({true, x, 0, {}});
    }
    ASSERT_TRUE(converges_to(seq, x));
    // neighborhood: x, a tail when x is a limit, and stray points
    ccx::DSet U = ccx::DSet::points({x, harness::random_point(rng, X, 30)});
    if (x.kind == ccx::PointId::Kind::Limit) U = U.unite(ccx::DSet::tail(x.s, static_cast<std::uint64_t>(rng.uniform(1, 35))));
    ASSERT_TRUE(is_neighborhood(U, x));
    auto cap = capture_check(T, seq, U);
    ASSERT_TRUE(cap.captured) << ccx::to_string(x);
    EXPECT_TRUE(cap.member->subset_of(U));
    EXPECT_TRUE(cap.member->contains(x));
    // infinitely many terms: scan a long stretch of the sequence
    std::size_t hits = 0;
    for (std::uint64_t k = 1000; k < 1400; ++k) hits += cap.member->contains(seq.term(k)) ? 1 : 0;
    EXPECT_GT(hits, 0u);
  }
}

TEST(CsStar, NonConvergentSequencesAreRecognized) {
  SequenceX seq;
  seq.streams.push_back({false, {}, 0, P({q(0), q(1)})});
  seq.streams.push_back({false, {}, 1, P({q(0), q(1)})});
  EXPECT_FALSE(converges_to(seq, ccx::PointId::limit(0)));
  SequenceX bounded;
  bounded.streams.push_back({false, {}, 0, IntRule::constant(4)});
  EXPECT_FALSE(converges_to(bounded, ccx::PointId::limit(0)));
}
