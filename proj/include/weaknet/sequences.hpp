#pragma once

// Sequential properties: the alpha_4 diagonal search on metric arrays and on
// the Frechet-Urysohn fan, cs*-networks at a point extracted from a layered
// network with local-finiteness witnesses, and compactness in the fan.

#include "weaknet/ccx.hpp"
#include "weaknet/rational.hpp"

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <type_traits>
#include <vector>

namespace weaknet::seq {

/// k -> max(floor_min, floor(sum coeffs[i] k^i)), k >= 1, with finitely many overrides.
struct IntRule {
  std::vector<Rational> coeffs;
  BigInt floor_min = 1;
  std::map<std::uint64_t, BigInt> overrides;

  static IntRule constant(std::int64_t c) { return {{Rational(c)}, 1, {}}; }
  static IntRule poly(std::vector<Rational> c) { return {std::move(c), 1, {}}; }

  Rational polynomial(const BigInt& k) const {
    Rational v(0), kp(1);
    for (const auto& c : coeffs) {
      v += c * kp;
      kp *= Rational(k);
    }
    return v;
  }
  BigInt base_at(const BigInt& k) const {
    BigInt v = floor_of(polynomial(k));
    return v < floor_min ? floor_min : v;
  }
  BigInt at(std::uint64_t k) const {
    auto it = overrides.find(k);
    return it != overrides.end() ? it->second : base_at(BigInt(k));
  }
  IntRule base() const { return {coeffs, floor_min, {}}; }

  /// Degree after trimming zero leading coefficients; -1 for the zero polynomial.
  int degree() const {
    for (int d = static_cast<int>(coeffs.size()) - 1; d >= 0; --d)
      if (coeffs[static_cast<std::size_t>(d)] != 0) return d;
    return -1;
  }
  Rational lead() const { return degree() < 0 ? Rational(0) : coeffs[static_cast<std::size_t>(degree())]; }
  bool tends_to_infinity() const { return degree() >= 1 && lead() > 0; }
  /// Eventual value of a rule that does not tend to infinity.
  BigInt eventual_constant() const {
    if (degree() >= 1) return floor_min;
    BigInt v = floor_of(degree() < 0 ? Rational(0) : coeffs[0]);
    return v < floor_min ? floor_min : v;
  }
  std::uint64_t last_override() const { return overrides.empty() ? 0 : overrides.rbegin()->first; }
};

namespace detail {

// Some K with q(k) > 0 for every k > K, for q with positive leading coefficient (Cauchy bound).
inline BigInt positivity_bound(const std::vector<Rational>& q) {
  int d = -1;
  for (int i = static_cast<int>(q.size()) - 1; i >= 0; --i)
    if (q[static_cast<std::size_t>(i)] != 0) {
      d = i;
      break;
    }
  if (d < 0 || q[static_cast<std::size_t>(d)] < 0) throw std::invalid_argument("positivity bound needs a positive leading coefficient");
  Rational worst(0);
  for (int i = 0; i < d; ++i) worst = max_of(worst, abs(q[static_cast<std::size_t>(i)] / q[static_cast<std::size_t>(d)]));
  return ceil_of(worst) + 1;
}

// Coefficients of p(k + 1) - p(k) - shift.
inline std::vector<Rational> forward_difference(const std::vector<Rational>& p, const Rational& shift) {
  std::vector<Rational> out(p.size() > 1 ? p.size() - 1 : 1);
  // (k+1)^i - k^i = sum_{j<i} C(i,j) k^j
  for (std::size_t i = 1; i < p.size(); ++i) {
    BigInt binom = 1;
    for (std::size_t j = 0; j < i; ++j) {
      out[j] += p[i] * Rational(binom);
      binom = binom * BigInt(i - j) / BigInt(j + 1);
    }
  }
  out[0] -= shift;
  return out;
}

}  // namespace detail

/// Whether the rule is strictly increasing in k >= 1; decided exactly.
inline bool strictly_increasing(const IntRule& r) {
  if (!r.tends_to_infinity()) return false;
  // past K the polynomial steps by >= 1 and exceeds floor_min, so its floors increase strictly
  auto d = detail::forward_difference(r.coeffs, Rational(1));
  while (d.size() > 1 && d.back() == 0) d.pop_back();
  BigInt K = r.last_override() + 1;
  if (d.size() == 1) {
    if (d[0] < 0) return false;
  } else {
    if (d.back() < 0) return false;
    K = std::max(K, detail::positivity_bound(d));
  }
  std::vector<Rational> above = r.coeffs;
  above[0] -= Rational(r.floor_min) + 1;
  K = std::max(K, detail::positivity_bound(above));
  const auto last = to_int64(K) + 1;
  for (std::int64_t k = 1; k < last; ++k)
    if (!(r.at(static_cast<std::uint64_t>(k)) < r.at(static_cast<std::uint64_t>(k + 1)))) return false;
  return true;
}

/// The k with r.at(k) == v, for a strictly increasing rule.
inline std::optional<std::uint64_t> find_row(const IntRule& r, const BigInt& v) {
  BigInt lo = 1, hi = v;  // r(k) >= k
  while (lo <= hi) {
    BigInt mid = (lo + hi) / 2;
    BigInt at = r.at(mid.convert_to<std::uint64_t>());
    if (at == v) return mid.convert_to<std::uint64_t>();
    if (at < v) lo = mid + 1;
    else hi = mid - 1;
  }
  return std::nullopt;
}

/// A diagonal (m_k, n_k), k >= 1.
struct DiagonalCandidate {
  IntRule m, n;

  /// Rows distinct (strictly increasing, overrides included and excluded), columns >= 1.
  void validate() const {
    if (!strictly_increasing(m) || !strictly_increasing(m.base()))
      throw std::invalid_argument("candidate rows must be strictly increasing");
    if (m.floor_min < 1 || n.floor_min < 1) throw std::invalid_argument("candidate indices start at 1");
    for (const auto& [k, v] : n.overrides)
      if (k == 0 || v < 1) throw std::invalid_argument("candidate column override out of range");
    for (const auto& [k, v] : m.overrides)
      if (k == 0 || v < 1) throw std::invalid_argument("candidate row override out of range");
  }
};

enum class Alpha4Verdict { Certified, Refuted, Exhausted };

inline std::string to_string(Alpha4Verdict v) {
  switch (v) {
    case Alpha4Verdict::Certified: return "certified";
    case Alpha4Verdict::Refuted: return "refuted";
    default: return "exhausted";
  }
}

// ---------------------------------------------------------------------------
// Metric arrays on the rational line.

/// x_{m,n} = limit + a m^p / (n + b m + c); every row tends to `limit`.
struct MetricArray {
  Rational limit, a;
  unsigned p = 0;
  BigInt b = 0, c = 0;

  void validate() const {
    if (b < 0 || c < 0) throw std::invalid_argument("metric array needs b, c >= 0");
  }
  Rational point(const BigInt& m, const BigInt& n) const {
    return limit + a * Rational(boost::multiprecision::pow(m, p)) / Rational(n + b * m + c);
  }
  Rational distance(const BigInt& m, const BigInt& n) const { return abs(point(m, n) - limit); }
};

/// m_k = k, n_k = least n >= 1 with |x_{k,n} - x| < 1/k.
inline DiagonalCandidate greedy_diagonal(const MetricArray& arr) {
  DiagonalCandidate d;
  d.m = IntRule::poly({Rational(0), Rational(1)});
  std::vector<Rational> c(arr.p + 2);
  c[arr.p + 1] = abs(arr.a);
  c[1] -= Rational(arr.b);
  c[0] = Rational(1) - Rational(arr.c);
  d.n = IntRule::poly(std::move(c));
  return d;
}

/// Oracle decision for |x_{m_k,n_k} - x|: tends to 0, to a positive limit, or to infinity.
struct MetricLimit {
  bool converges = false;
  std::optional<Rational> limit_distance;  ///< set when the distances tend to a finite positive limit
};

inline MetricLimit metric_limit(const MetricArray& arr, const DiagonalCandidate& cand) {
  MetricLimit out;
  if (arr.a == 0) {
    out.converges = true;
    return out;
  }
  const int dm = cand.m.degree();
  const Rational lm = cand.m.lead();
  const int num_deg = static_cast<int>(arr.p) * dm;
  const Rational num_lead = abs(arr.a) * power(lm, arr.p);
  int dn = 0;
  Rational ln(cand.n.eventual_constant());
  if (cand.n.tends_to_infinity()) {
    dn = cand.n.degree();
    ln = cand.n.lead();
  }
  int den_deg = std::max(dn, arr.b > 0 ? dm : 0);
  Rational den_lead(0);
  if (dn == den_deg) den_lead += ln;
  if (arr.b > 0 && dm == den_deg) den_lead += Rational(arr.b) * lm;
  if (den_deg == 0) den_lead += Rational(arr.c);
  if (num_deg < den_deg) {
    out.converges = true;
  } else if (num_deg == den_deg) {
    out.limit_distance = num_lead / den_lead;
  }
  return out;
}

struct MetricCertificate {
  bool oracle_converges = false;
  std::uint64_t window = 0;
  Rational max_scaled;  ///< max over k <= window of k |x_{m_k,n_k} - x|
  bool greedy_bound = false;  ///< max_scaled < 1
  bool ok() const { return oracle_converges && greedy_bound; }
};

inline MetricCertificate certify_metric(const MetricArray& arr, const DiagonalCandidate& cand, std::uint64_t window) {
  MetricCertificate cert;
  cert.oracle_converges = metric_limit(arr, cand).converges;
  cert.window = window;
  for (std::uint64_t k = 1; k <= window; ++k)
    cert.max_scaled = max_of(cert.max_scaled, Rational(k) * arr.distance(cand.m.at(k), cand.n.at(k)));
  cert.greedy_bound = cert.max_scaled < 1;
  return cert;
}

/// Ball around the limit missing all but finitely many diagonal terms; none when the diagonal converges.
inline std::optional<Rational> metric_separating_radius(const MetricArray& arr, const DiagonalCandidate& cand) {
  auto lim = metric_limit(arr, cand);
  if (lim.converges) return std::nullopt;
  return lim.limit_distance ? *lim.limit_distance / 2 : Rational(1);
}

// ---------------------------------------------------------------------------
// The fan: spokes m >= 1 carrying points 1/n, n >= 1, glued at the apex.

struct FanPoint {
  bool apex = true;
  BigInt spoke = 0, index = 0;
  static FanPoint top() { return {}; }
  static FanPoint at(BigInt m, BigInt n) { return {false, std::move(m), std::move(n)}; }
};

/// Canonical array: x_{m,n} is the n-th point of spoke m.
inline FanPoint fan_canonical(const BigInt& m, const BigInt& n) { return FanPoint::at(m, n); }

/// Apex neighborhood keeping the points 1/n with n >= cut(m) on spoke m.
/// The default follows a candidate: cut(m_k) = n_k + 1 on its base rows, 1 elsewhere.
struct CutRule {
  std::map<BigInt, BigInt> exceptions;
  std::optional<DiagonalCandidate> follow;

  BigInt cut(const BigInt& m) const {
    if (auto it = exceptions.find(m); it != exceptions.end()) return it->second;
    if (!follow) return 1;
    if (auto k = find_row(follow->m, m)) return follow->n.at(*k) + 1;
    return 1;
  }
  bool contains(const FanPoint& x) const { return x.apex || x.index >= cut(x.spoke); }
};

/// Cuts spoke m_k strictly below x_{m_k,n_k} for every k.
inline CutRule fan_separating_nbhd(const DiagonalCandidate& cand) {
  cand.validate();
  CutRule rule;
  rule.follow = DiagonalCandidate{cand.m.base(), cand.n.base()};
  std::set<std::uint64_t> patched;
  for (const auto& [k, v] : cand.m.overrides) patched.insert(k);
  for (const auto& [k, v] : cand.n.overrides) patched.insert(k);
  for (auto k : patched) {
    const BigInt M = cand.m.at(k);
    BigInt need = cand.n.at(k) + 1;
    // an unpatched row landing on the same spoke keeps its own demand
    if (auto j = find_row(rule.follow->m, M); j && !patched.count(*j)) need = std::max(need, cand.n.at(*j) + 1);
    auto [it, fresh] = rule.exceptions.emplace(M, need);
    if (!fresh) it->second = std::max(it->second, need);
  }
  return rule;
}

struct FanRefutation {
  DiagonalCandidate candidate;
  CutRule nbhd;
  std::uint64_t window = 0;
  bool apex_inside = false;
  bool all_excluded = false;
  bool ok() const { return apex_inside && all_excluded; }
};

/// Exact membership scan of x_{m_k,n_k}, k <= window, against the neighborhood.
inline FanRefutation verify_refutation(const DiagonalCandidate& cand, const CutRule& nbhd, std::uint64_t window) {
  FanRefutation r{cand, nbhd, window, nbhd.contains(FanPoint::top()), true};
  for (std::uint64_t k = 1; k <= window && r.all_excluded; ++k)
    r.all_excluded = !nbhd.contains(fan_canonical(cand.m.at(k), cand.n.at(k)));
  return r;
}

/// A deterministic family of diagonal candidates: row rules x column rules, each with
/// and without three patched columns.
inline std::vector<DiagonalCandidate> candidate_family(std::size_t count) {
  auto P = [](std::vector<Rational> c) { return IntRule::poly(std::move(c)); };
  const Rational z(0), one(1);
  const std::vector<IntRule> rows{
      P({z, one}),           P({one, one}),          P({Rational(3), one}), P({z, Rational(2)}),
      P({Rational(2), Rational(3)}), P({z, z, one}), P({z, one, one}),      P({z, Rational(3, 2), Rational(1, 2)})};
  const std::vector<IntRule> cols{
      IntRule::constant(1), IntRule::constant(5), P({z, one}),        P({one, one}),
      P({z, Rational(2)}),  P({z, z, one}),       P({one, Rational(1, 2)}), P({one, z, z, Rational(1, 4)}),
      P({one, Rational(2, 3)})};
  std::vector<DiagonalCandidate> out;
  for (int patched = 0; patched < 2 && out.size() < count; ++patched)
    for (const auto& r : rows)
      for (const auto& c : cols) {
        if (out.size() >= count) return out;
        DiagonalCandidate d{r, c};
        if (patched) d.n.overrides = {{1, BigInt(7)}, {2, BigInt(9)}, {3, BigInt(11)}};
        out.push_back(std::move(d));
      }
  return out;
}

struct Alpha4Result {
  Alpha4Verdict verdict = Alpha4Verdict::Exhausted;
  std::optional<DiagonalCandidate> diagonal;
  std::optional<MetricCertificate> certificate;
  std::vector<FanRefutation> refutations;
  std::size_t attempted = 0;
};

/// Greedy diagonal first, then the candidate family, until one certifies or the budget runs out.
inline Alpha4Result alpha4_check(const MetricArray& arr, std::size_t budget, std::uint64_t window) {
  arr.validate();
  Alpha4Result res;
  std::vector<DiagonalCandidate> order;
  if (budget > 0) order.push_back(greedy_diagonal(arr));
  for (auto& c : candidate_family(budget > 0 ? budget - 1 : 0)) order.push_back(std::move(c));
  for (const auto& cand : order) {
    ++res.attempted;
    auto cert = certify_metric(arr, cand, window);
    if (cert.ok()) {
      res.verdict = Alpha4Verdict::Certified;
      res.diagonal = cand;
      res.certificate = cert;
      return res;
    }
  }
  return res;
}

/// Every candidate is met by its separating neighborhood; Refuted when all refutations verify.
inline Alpha4Result alpha4_check_fan(const std::vector<DiagonalCandidate>& candidates, std::uint64_t window) {
  Alpha4Result res;
  bool all = true;
  for (const auto& cand : candidates) {
    ++res.attempted;
    auto r = verify_refutation(cand, fan_separating_nbhd(cand), window);
    all = all && r.ok();
    res.refutations.push_back(std::move(r));
  }
  res.verdict = all ? Alpha4Verdict::Refuted : Alpha4Verdict::Exhausted;
  return res;
}

/// A subset of the fan: finitely many points and tails, and optionally infinitely
/// many rows (one point (m_k, n_k) per k) or infinitely many tails (spokes m_k from index 1).
struct FanSubset {
  bool apex = false;
  std::map<BigInt, std::set<BigInt>> points;
  std::map<BigInt, BigInt> tails;  ///< spoke -> first index kept
  std::optional<DiagonalCandidate> rows;
  std::optional<IntRule> tail_spokes;

  bool contains(const FanPoint& x) const {
    if (x.apex) return apex;
    if (auto it = points.find(x.spoke); it != points.end() && it->second.count(x.index)) return true;
    if (auto it = tails.find(x.spoke); it != tails.end() && x.index >= it->second) return true;
    if (rows)
      if (auto k = find_row(rows->m, x.spoke); k && rows->n.at(*k) == x.index) return true;
    return tail_spokes && find_row(*tail_spokes, x.spoke).has_value();
  }
};

struct FanCompactness {
  bool compact = false;
  std::set<BigInt> spokes;  ///< finite union of spokes containing the set
  std::string reason;
  std::optional<CutRule> witness;  ///< open apex neighborhood missing infinitely many pieces
};

inline FanCompactness fan_compact_cover(const FanSubset& S) {
  FanCompactness out;
  if (S.rows || S.tail_spokes) {
    DiagonalCandidate d = S.rows ? *S.rows : DiagonalCandidate{*S.tail_spokes, IntRule::constant(1)};
    out.reason = "meets infinitely many spokes";
    out.witness = fan_separating_nbhd(d);
    return out;
  }
  if (!S.tails.empty() && !S.apex) {
    out.reason = "tail without the apex is not closed";
    return out;
  }
  out.compact = true;
  for (const auto& [m, pts] : S.points)
    if (!pts.empty()) out.spokes.insert(m);
  for (const auto& [m, t] : S.tails) out.spokes.insert(m);
  return out;
}

// ---------------------------------------------------------------------------
// cs*-networks at a point.

/// Layer n of a network, given only through its local-finiteness witness:
/// the (finitely many) members containing a given point.
template <class Point, class Member>
struct NetworkLayer {
  std::function<std::vector<Member>(const Point&)> members_containing;
};

template <class Point, class Member>
struct LayeredNetwork {
  std::function<NetworkLayer<Point, Member>(std::uint64_t)> layer;  ///< n >= 1
  std::function<bool(const Member&, const Point&)> contains;
};

template <class Member>
struct CsStarFamily {
  std::vector<std::vector<Member>> layers;  ///< layers[n-1] = T_n(x)
  std::size_t size() const {
    std::size_t s = 0;
    for (const auto& l : layers) s += l.size();
    return s;
  }
};

/// T(x) = union over n <= depth of T_n(x) = {D in layer n : x in D}.
template <class Point, class Member>
CsStarFamily<Member> csstar_at_point(const LayeredNetwork<Point, Member>& net, const std::type_identity_t<Point>& x,
                                     std::uint64_t depth) {
  CsStarFamily<Member> T;
  for (std::uint64_t n = 1; n <= depth; ++n) {
    auto L = net.layer(n);
    if (!L.members_containing) throw std::invalid_argument("layer " + std::to_string(n) + " has no local-finiteness witness");
    auto members = L.members_containing(x);
    if (net.contains)
      for (const auto& D : members)
        if (!net.contains(D, x)) throw std::logic_error("witness returned a member missing the point");
    T.layers.push_back(std::move(members));
  }
  return T;
}

// Finite subsets of a countable discrete space, layer n = n-element subsets of {0, ..., window-1}.
inline LayeredNetwork<std::uint64_t, std::set<std::uint64_t>> finite_subsets_network(std::uint64_t window) {
  LayeredNetwork<std::uint64_t, std::set<std::uint64_t>> net;
  net.contains = [](const std::set<std::uint64_t>& D, std::uint64_t x) { return D.count(x) > 0; };
  net.layer = [window](std::uint64_t n) {
    NetworkLayer<std::uint64_t, std::set<std::uint64_t>> L;
    L.members_containing = [window, n](std::uint64_t x) {
      std::vector<std::set<std::uint64_t>> out;
      if (x >= window || n == 0 || n > window) return out;
      // choose n-1 companions from the window minus x
      std::vector<std::uint64_t> rest;
      for (std::uint64_t y = 0; y < window; ++y)
        if (y != x) rest.push_back(y);
      std::vector<std::size_t> idx(n - 1);
      for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
      while (true) {
        std::set<std::uint64_t> D{x};
        for (auto i : idx) D.insert(rest[i]);
        out.push_back(std::move(D));
        std::size_t i = idx.size();
        while (i > 0 && idx[i - 1] == rest.size() - idx.size() + i - 1) --i;
        if (i == 0) break;
        ++idx[i - 1];
        for (std::size_t j = i; j < idx.size(); ++j) idx[j] = idx[j - 1] + 1;
      }
      return out;
    };
    return L;
  };
  return net;
}

/// Layer n of the SpaceX network: tails T(s, n), singletons {(s, n)}, pairs
/// {limit_s, (s, n)}, and in layer 1 the singletons of limits and isolated points.
inline LayeredNetwork<ccx::PointId, ccx::DSet> spacex_tails_network(const ccx::SpaceX& X) {
  LayeredNetwork<ccx::PointId, ccx::DSet> net;
  net.contains = [](const ccx::DSet& D, const ccx::PointId& x) { return D.contains(x); };
  net.layer = [X](std::uint64_t n) {
    NetworkLayer<ccx::PointId, ccx::DSet> L;
    L.members_containing = [X, n](const ccx::PointId& x) {
      std::vector<ccx::DSet> all;
      for (std::size_t s = 0; s < X.spokes(); ++s) {
        all.push_back(ccx::DSet::tail(s, n));
        all.push_back(ccx::DSet::points({ccx::PointId::spoke(s, n)}));
        all.push_back(ccx::DSet::points({ccx::PointId::limit(s), ccx::PointId::spoke(s, n)}));
        if (n == 1) all.push_back(ccx::DSet::points({ccx::PointId::limit(s)}));
      }
      if (n == 1)
        for (std::size_t t = 0; t < X.isolated(); ++t) all.push_back(ccx::DSet::points({ccx::PointId::isolated(t)}));
      std::vector<ccx::DSet> out;
      for (auto& D : all)
        if (D.contains(x)) out.push_back(std::move(D));
      return out;
    };
    return L;
  };
  return net;
}

/// A sequence in X: a finite prefix, then the streams interleaved round-robin.
/// A stream is either constant or runs along spoke s at positions j(k).
struct SequenceX {
  struct Stream {
    bool constant = true;
    ccx::PointId point;
    std::size_t s = 0;
    IntRule j;
  };
  std::vector<ccx::PointId> prefix;
  std::vector<Stream> streams;

  ccx::PointId term(std::uint64_t k) const {  // k >= 1
    if (k <= prefix.size()) return prefix[k - 1];
    const std::uint64_t i = k - prefix.size() - 1;
    const auto& st = streams[i % streams.size()];
    if (st.constant) return st.point;
    return ccx::PointId::spoke(st.s, st.j.at(i / streams.size() + 1).convert_to<std::uint64_t>());
  }
};

/// Convergence to x, decided from the eventual pattern.
inline bool converges_to(const SequenceX& seq, const ccx::PointId& x) {
  if (seq.streams.empty()) return false;
  for (const auto& st : seq.streams) {
    if (st.constant) {
      if (!(st.point == x)) return false;
    } else if (!(x.kind == ccx::PointId::Kind::Limit && x.s == st.s && st.j.tends_to_infinity())) {
      return false;
    }
  }
  return true;
}

/// Whether infinitely many terms of a convergent sequence lie in D.
inline bool captures_infinitely_many(const SequenceX& seq, const ccx::DSet& D) {
  for (const auto& st : seq.streams) {
    if (st.constant ? D.contains(st.point) : D.tails().count(st.s) > 0) return true;
  }
  return false;
}

struct CaptureResult {
  bool captured = false;
  std::optional<ccx::DSet> member;
  std::uint64_t layer = 0;
};

/// Some member of T(x) inside U capturing infinitely many terms.
inline CaptureResult capture_check(const CsStarFamily<ccx::DSet>& T, const SequenceX& seq, const ccx::DSet& U) {
  CaptureResult r;
  for (std::size_t n = 0; n < T.layers.size(); ++n)
    for (const auto& D : T.layers[n])
      if (D.subset_of(U) && captures_infinitely_many(seq, D)) {
        r.captured = true;
        r.member = D;
        r.layer = n + 1;
        return r;
      }
  return r;
}

/// Open sets of X: every limit in U has a tail of its spoke in U.
inline bool is_neighborhood(const ccx::DSet& U, const ccx::PointId& x) {
  if (!U.contains(x)) return false;
  for (const auto& p : U.finite())
    if (p.kind == ccx::PointId::Kind::Limit && !U.tails().count(p.s)) return false;
  return true;
}

}  // namespace weaknet::seq
