#pragma once

// C_c(X) for countable metric spaces of scattered height <= 1: finitely many
// convergent sequences ("spokes") plus isolated points. Continuous functions
// are eventually constant along each spoke, measures are atoms plus geometric
// tails, and the sets A(F, U, D, m) are decided exactly.

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
#include <tuple>
#include <vector>

namespace weaknet::ccx {

struct PointId {
  enum class Kind : std::uint8_t { Limit, Spoke, Isolated };
  Kind kind = Kind::Isolated;
  std::size_t s = 0;   ///< spoke number, or isolated point number
  std::uint64_t j = 0; ///< position along the spoke (>= 1), 0 otherwise

  static PointId limit(std::size_t s) { return {Kind::Limit, s, 0}; }
  static PointId spoke(std::size_t s, std::uint64_t j) { return {Kind::Spoke, s, j}; }
  static PointId isolated(std::size_t t) { return {Kind::Isolated, t, 0}; }

  friend bool operator==(const PointId&, const PointId&) = default;
  friend bool operator<(const PointId& a, const PointId& b) {
    return std::tie(a.kind, a.s, a.j) < std::tie(b.kind, b.s, b.j);
  }
};

inline std::string to_string(const PointId& p) {
  switch (p.kind) {
    case PointId::Kind::Limit: return "L" + std::to_string(p.s);
    case PointId::Kind::Spoke: return "S" + std::to_string(p.s) + "." + std::to_string(p.j);
    default: return "I" + std::to_string(p.s);
  }
}

/// Spoke s is the sequence (s, j), j >= 1, at distance scale_s / j from its limit.
/// Spokes hang off a common hub at distance 1; isolated points sit at distance 1 from it.
class SpaceX {
 public:
  SpaceX() = default;
  SpaceX(std::vector<Rational> scales, std::size_t isolated) : scales_(std::move(scales)), isolated_(isolated) {
    for (const auto& c : scales_)
      if (c <= 0) throw std::invalid_argument("spoke scale must be positive");
  }

  std::size_t spokes() const noexcept { return scales_.size(); }
  std::size_t isolated() const noexcept { return isolated_; }
  const std::vector<Rational>& scales() const noexcept { return scales_; }

  bool valid(const PointId& p) const {
    switch (p.kind) {
      case PointId::Kind::Limit: return p.s < spokes() && p.j == 0;
      case PointId::Kind::Spoke: return p.s < spokes() && p.j >= 1;
      default: return p.s < isolated_ && p.j == 0;
    }
  }

  /// Distance to the point's own limit (0 for limits and isolated points).
  Rational radial(const PointId& p) const {
    return p.kind == PointId::Kind::Spoke ? scales_[p.s] / Rational(static_cast<std::int64_t>(p.j)) : Rational(0);
  }

  Rational distance(const PointId& a, const PointId& b) const {
    if (a == b) return Rational(0);
    const bool a_iso = a.kind == PointId::Kind::Isolated, b_iso = b.kind == PointId::Kind::Isolated;
    if (!a_iso && !b_iso && a.s == b.s) return abs(radial(a) - radial(b));
    return radial(a) + radial(b) + 1;
  }

 private:
  std::vector<Rational> scales_;
  std::size_t isolated_ = 0;
};

/// Member of the closed k-network: a finite set together with spoke tails
/// T(s, k) = {limit_s} u {(s, j) : j >= k}. Kept normalized: tails extended
/// downwards through listed points, listed points outside tails only.
class DSet {
 public:
  DSet() = default;
  DSet(std::set<PointId> finite, std::map<std::size_t, std::uint64_t> tails)
      : finite_(std::move(finite)), tails_(std::move(tails)) {
    normalize();
  }

  static DSet tail(std::size_t s, std::uint64_t k) { return DSet({}, {{s, std::max<std::uint64_t>(k, 1)}}); }
  static DSet points(std::set<PointId> pts) { return DSet(std::move(pts), {}); }

  const std::set<PointId>& finite() const noexcept { return finite_; }
  const std::map<std::size_t, std::uint64_t>& tails() const noexcept { return tails_; }

  /// Generators needed to write the set as a union (one finite set plus one per tail).
  std::size_t arity() const noexcept { return tails_.size() + (finite_.empty() ? 0 : 1); }

  bool contains(const PointId& p) const {
    if (finite_.count(p)) return true;
    if (p.kind == PointId::Kind::Isolated) return false;
    auto it = tails_.find(p.s);
    if (it == tails_.end()) return false;
    return p.kind == PointId::Kind::Limit || p.j >= it->second;
  }

  DSet unite(const DSet& o) const {
    auto f = finite_;
    f.insert(o.finite_.begin(), o.finite_.end());
    auto t = tails_;
    for (const auto& [s, k] : o.tails_) {
      auto [it, fresh] = t.emplace(s, k);
      if (!fresh) it->second = std::min(it->second, k);
    }
    return DSet(std::move(f), std::move(t));
  }

  DSet intersect(const DSet& o) const {
    std::set<PointId> f;
    for (const auto& p : finite_)
      if (o.contains(p)) f.insert(p);
    for (const auto& p : o.finite_)
      if (contains(p)) f.insert(p);
    std::map<std::size_t, std::uint64_t> t;
    for (const auto& [s, k] : tails_) {
      auto it = o.tails_.find(s);
      if (it != o.tails_.end()) t[s] = std::max(k, it->second);
    }
    return DSet(std::move(f), std::move(t));
  }

  bool subset_of(const DSet& o) const {
    for (const auto& p : finite_)
      if (!o.contains(p)) return false;
    for (const auto& [s, k] : tails_) {
      auto it = o.tails_.find(s);
      if (it == o.tails_.end() || it->second > k) return false;
    }
    return true;
  }

  friend bool operator==(const DSet&, const DSet&) = default;

 private:
  void normalize() {
    for (auto& [s, k] : tails_) {
      if (k < 1) k = 1;
      while (k > 1 && finite_.count(PointId::spoke(s, k - 1))) --k;
    }
    for (auto it = finite_.begin(); it != finite_.end();) {
      bool covered = false;
      if (it->kind != PointId::Kind::Isolated) {
        auto t = tails_.find(it->s);
        covered = t != tails_.end() && (it->kind == PointId::Kind::Limit || it->j >= t->second);
      }
      it = covered ? finite_.erase(it) : std::next(it);
    }
  }

  std::set<PointId> finite_;
  std::map<std::size_t, std::uint64_t> tails_;
};

/// Continuous function: table of exceptional values, otherwise the spoke's
/// limit value along a spoke and 0 at isolated points.
struct FunctionRep {
  std::map<PointId, Rational> table;
  std::vector<Rational> limits;

  Rational operator()(const PointId& p) const {
    auto it = table.find(p);
    if (it != table.end()) return it->second;
    return p.kind == PointId::Kind::Isolated ? Rational(0) : limits.at(p.s);
  }

  void validate(const SpaceX& X) const {
    if (limits.size() != X.spokes()) throw std::invalid_argument("function needs one limit value per spoke");
    for (const auto& [p, v] : table) {
      if (!X.valid(p)) throw std::invalid_argument("function table names a point outside X: " + to_string(p));
      if (p.kind == PointId::Kind::Limit) throw std::invalid_argument("limit values live in the limit list");
    }
  }

  /// a * f + b * g.
  static FunctionRep combine(const Rational& a, const FunctionRep& f, const Rational& b, const FunctionRep& g) {
    FunctionRep out;
    out.limits.resize(f.limits.size());
    for (std::size_t s = 0; s < f.limits.size(); ++s) out.limits[s] = a * f.limits[s] + b * g.limits.at(s);
    std::set<PointId> keys;
    for (const auto& [p, v] : f.table) keys.insert(p);
    for (const auto& [p, v] : g.table) keys.insert(p);
    for (const auto& p : keys) {
      Rational v = a * f(p) + b * g(p);
      const Rational base = p.kind == PointId::Kind::Isolated ? Rational(0) : out.limits[p.s];
      if (v != base) out.table[p] = v;
    }
    return out;
  }

  friend bool operator==(const FunctionRep&, const FunctionRep&) = default;
};

/// Point of D where |f| is largest, with that value.
inline std::pair<PointId, Rational> sup_abs_point(const FunctionRep& f, const DSet& D) {
  std::optional<std::pair<PointId, Rational>> best;
  auto offer = [&](const PointId& p) {
    Rational v = abs(f(p));
    if (!best || v > best->second) best = {p, v};
  };
  for (const auto& p : D.finite()) offer(p);
  for (const auto& [s, k] : D.tails()) {
    offer(PointId::limit(s));
    for (auto it = f.table.lower_bound(PointId::spoke(s, k));
         it != f.table.end() && it->first.kind == PointId::Kind::Spoke && it->first.s == s; ++it)
      offer(it->first);
  }
  if (!best) return {PointId{}, Rational(0)};
  return *best;
}

inline Rational sup_abs(const FunctionRep& f, const DSet& D) { return sup_abs_point(f, D).second; }

/// a * q^(j - j0) at point (s, j) for j >= j0.
struct GeometricTail {
  std::size_t s = 0;
  std::uint64_t j0 = 1;
  Rational a;
  Rational q;

  Rational mass_at(std::uint64_t j) const {
    if (j < j0) return Rational(0);
    return a * power(q, static_cast<unsigned>(j - j0));
  }
  /// |mu| of the points j >= J (J >= j0).
  Rational variation_from(std::uint64_t J) const {
    const Rational aq = abs(q);
    return abs(a) * power(aq, static_cast<unsigned>(std::max(J, j0) - j0)) / (1 - aq);
  }
};

struct MeasureRep {
  std::map<PointId, Rational> atoms;
  std::vector<GeometricTail> tails;

  void validate(const SpaceX& X) const {
    std::set<std::size_t> seen;
    for (const auto& t : tails) {
      if (t.s >= X.spokes()) throw std::invalid_argument("measure tail on a missing spoke");
      if (!seen.insert(t.s).second) throw std::invalid_argument("at most one tail per spoke");
      if (t.j0 < 1) throw std::invalid_argument("tail must start at index >= 1");
      if (t.a == 0) throw std::invalid_argument("tail head must be nonzero");
      if (!(t.q != 0 && abs(t.q) < 1)) throw std::invalid_argument("tail ratio must satisfy 0 < |q| < 1");
    }
    for (const auto& [p, w] : atoms) {
      if (!X.valid(p)) throw std::invalid_argument("atom outside X: " + to_string(p));
      if (w == 0) throw std::invalid_argument("zero atom");
      for (const auto& t : tails)
        if (p.kind == PointId::Kind::Spoke && p.s == t.s && p.j >= t.j0)
          throw std::invalid_argument("atom overlaps a geometric tail: " + to_string(p));
    }
  }

  Rational mass_at(const PointId& p) const {
    auto it = atoms.find(p);
    if (it != atoms.end()) return it->second;
    if (p.kind == PointId::Kind::Spoke)
      for (const auto& t : tails)
        if (t.s == p.s) return t.mass_at(p.j);
    return Rational(0);
  }

  Rational total_variation() const {
    Rational v(0);
    for (const auto& [p, w] : atoms) v += abs(w);
    for (const auto& t : tails) v += t.variation_from(t.j0);
    return v;
  }

  /// Closed support: atoms, and for each tail its points and the spoke's limit.
  DSet support() const {
    std::set<PointId> f;
    for (const auto& [p, w] : atoms) f.insert(p);
    std::map<std::size_t, std::uint64_t> t;
    for (const auto& g : tails) t[g.s] = g.j0;
    return DSet(std::move(f), std::move(t));
  }
};

/// mu(f), exactly: atoms termwise, each tail as L a / (1 - q) plus the finitely
/// many table corrections on the spoke.
inline Rational measure_apply(const MeasureRep& mu, const FunctionRep& f) {
  Rational total(0);
  for (const auto& [p, w] : mu.atoms) total += f(p) * w;
  for (const auto& t : mu.tails) {
    const Rational L = f.limits.at(t.s);
    total += L * t.a / (1 - t.q);
    for (auto it = f.table.lower_bound(PointId::spoke(t.s, t.j0));
         it != f.table.end() && it->first.kind == PointId::Kind::Spoke && it->first.s == t.s; ++it)
      total += (it->second - L) * t.mass_at(it->first.j);
  }
  return total;
}

/// Open rational interval (lo, hi).
struct Interval {
  Rational lo;
  Rational hi;
  bool contains(const Rational& v) const { return lo < v && v < hi; }
  Rational diameter() const { return hi - lo; }
  friend bool operator==(const Interval&, const Interval&) = default;
};

/// A(F, U, D, m) = { f : f(x) in U_x for x in F, |f| <= m on D }.
struct CsStarElement {
  std::map<PointId, Interval> constraints;
  DSet D;
  std::int64_t m = 1;

  bool contains(const FunctionRep& f) const {
    for (const auto& [p, U] : constraints)
      if (!U.contains(f(p))) return false;
    return sup_abs(f, D) <= Rational(m);
  }
};

/// Decreasing sets D_h converging to the compact K: K together with the tails
/// T(s, h) of every spoke whose limit lies in K.
class DChain {
 public:
  DChain(DSet K, std::size_t union_cap = 16) : K_(std::move(K)), union_cap_(union_cap) {
    for (const auto& p : K_.finite())
      if (p.kind == PointId::Kind::Limit) limits_.insert(p.s);
    for (const auto& [s, k] : K_.tails()) limits_.insert(s);
  }

  const DSet& K() const noexcept { return K_; }

  DSet at(std::uint64_t h) const {
    if (h < 1) throw std::invalid_argument("D-chain is indexed from 1");
    DSet D = K_;
    for (std::size_t s : limits_) D = D.unite(DSet::tail(s, h));
    if (D.arity() > union_cap_)
      throw std::length_error("D-chain member needs " + std::to_string(D.arity()) + " generators, cap is " +
                              std::to_string(union_cap_));
    return D;
  }

 private:
  DSet K_;
  std::set<std::size_t> limits_;
  std::size_t union_cap_;
};

inline DSet compact_of(const std::vector<MeasureRep>& mus) {
  DSet K;
  for (const auto& mu : mus) K = K.unite(mu.support());
  return K;
}

struct BoundViolation {
  std::int64_t m = 0;
  std::size_t i = 0;      ///< 1-based sequence index, 0 for f0
  PointId point;
  Rational value;
};

struct UniformBound {
  bool found = false;
  std::size_t k = 0;
  std::int64_t m = 0;
  std::vector<BoundViolation> evidence;  ///< on failure, one |f_i(x)| >= m with x in D_m per m
};

/// Least m, then least k <= k_max, with |f_i| < m on D_m for every represented
/// i >= k, and |f0| < m on D_m as well.
inline UniformBound find_uniform_bound(const std::vector<FunctionRep>& fs, const FunctionRep& f0, const DChain& chain,
                                       std::int64_t m_max, std::size_t k_max) {
  UniformBound out;
  k_max = std::min(k_max, fs.size());
  for (std::int64_t m = 1; m <= m_max; ++m) {
    const DSet D = chain.at(static_cast<std::uint64_t>(m));
    const Rational M(m);
    auto [p0, v0] = sup_abs_point(f0, D);
    if (v0 >= M) {
      out.evidence.push_back({m, 0, p0, v0});
      continue;
    }
    // i >= k works iff every i >= k is below m: scan from the end for the last offender
    std::size_t last_bad = 0;
    BoundViolation bad;
    for (std::size_t i = fs.size(); i >= 1; --i) {
      auto [p, v] = sup_abs_point(fs[i - 1], D);
      if (v >= M) {
        last_bad = i;
        bad = {m, i, p, v};
        break;
      }
    }
    const std::size_t k = last_bad + 1;
    if (k <= std::max<std::size_t>(k_max, 1) && (fs.empty() || k <= fs.size())) {
      out.found = true;
      out.k = k;
      out.m = m;
      return out;
    }
    out.evidence.push_back(bad);
  }
  return out;
}

struct MeasureBudget {
  std::size_t F_size = 0;
  Rational norm;          ///< |mu_i|
  Rational diameter;      ///< largest interval diameter on F_i
  Rational tail;          ///< |mu_i|(supp \ F_i)
  Rational interval_term; ///< |F_i| * diameter * |mu_i|   (< eps/3)
  Rational tail_term;     ///< 2 m * tail                  (< 2 eps/3)
  bool holds(const Rational& eps) const { return interval_term < eps / 3 && tail_term < 2 * eps / 3; }
};

struct BuiltElement {
  CsStarElement A;
  std::vector<std::vector<PointId>> F;  ///< F_i per measure
  std::vector<MeasureBudget> budget;
};

/// First tail index J >= j0 whose remaining variation is below `bound`.
inline std::uint64_t geometric_cutoff(const GeometricTail& t, const Rational& bound) {
  std::uint64_t J = t.j0;
  Rational var = t.variation_from(J);
  const Rational aq = abs(t.q);
  while (!(var < bound)) {
    var *= aq;
    ++J;
  }
  return J;
}

inline BuiltElement build_A_element(const FunctionRep& f0, const std::vector<MeasureRep>& mus, const Rational& eps,
                                    std::int64_t m, const DSet& Dm) {
  if (!(eps > 0)) throw std::invalid_argument("build_A_element: eps must be positive");
  if (m < 1) throw std::invalid_argument("build_A_element: m must be positive");
  if (!(sup_abs(f0, Dm) < Rational(m))) throw std::invalid_argument("build_A_element: |f0| >= m on D_m");
  BuiltElement out;
  out.A.D = Dm;
  out.A.m = m;
  const Rational tail_bound = eps / Rational(3 * m);
  std::map<PointId, Rational> half_width;
  for (const auto& mu : mus) {
    std::vector<PointId> F;
    for (const auto& [p, w] : mu.atoms) F.push_back(p);
    Rational tail(0);
    for (const auto& t : mu.tails) {
      // split the budget evenly over the measure's tails
      const std::uint64_t J = geometric_cutoff(t, tail_bound / Rational(static_cast<std::int64_t>(mu.tails.size())));
      for (std::uint64_t j = t.j0; j < J; ++j) F.push_back(PointId::spoke(t.s, j));
      tail += t.variation_from(J);
    }
    MeasureBudget b;
    b.F_size = F.size();
    b.norm = mu.total_variation();
    b.tail = tail;
    if (!F.empty() && b.norm > 0) {
      const Rational w = eps / (Rational(3 * static_cast<std::int64_t>(F.size())) * b.norm) / 4;
      for (const auto& p : F) {
        auto [it, fresh] = half_width.emplace(p, w);
        if (!fresh) it->second = min_of(it->second, w);
      }
    }
    out.F.push_back(std::move(F));
    out.budget.push_back(b);
  }
  for (const auto& [p, w] : half_width) {
    const Rational c = f0(p);
    out.A.constraints[p] = {c - w, c + w};
  }
  for (std::size_t i = 0; i < mus.size(); ++i) {
    auto& b = out.budget[i];
    for (const auto& p : out.F[i]) b.diameter = max_of(b.diameter, out.A.constraints.at(p).diameter());
    b.interval_term = Rational(static_cast<std::int64_t>(b.F_size)) * b.diameter * b.norm;
    b.tail_term = 2 * Rational(m) * b.tail;
  }
  return out;
}

/// f in W = { f : |mu_i(f - f0)| < eps for all i }.
inline bool in_standard_nbhd(const std::vector<MeasureRep>& mus, const Rational& eps, const FunctionRep& f0,
                             const FunctionRep& f) {
  for (const auto& mu : mus)
    if (!(abs(measure_apply(mu, f) - measure_apply(mu, f0)) < eps)) return false;
  return true;
}

struct ClaimConfig {
  std::int64_t m_max = 64;
  std::size_t k_max = 1000;
  std::size_t union_cap = 16;
};

struct ClaimResult {
  UniformBound bound;
  std::optional<BuiltElement> element;
  bool f0_in_A = false;
  std::size_t tail_index = 0;  ///< least N with f_n in A for all represented n >= N (size + 1 if none)
  bool budget_holds = false;
};

inline ClaimResult claim_verify(const SpaceX& X, const FunctionRep& f0, const std::vector<FunctionRep>& fs,
                                const std::vector<MeasureRep>& mus, const Rational& eps, const ClaimConfig& cfg = {}) {
  f0.validate(X);
  for (const auto& f : fs) f.validate(X);
  for (const auto& mu : mus) mu.validate(X);
  ClaimResult out;
  DChain chain(compact_of(mus), cfg.union_cap);
  out.bound = find_uniform_bound(fs, f0, chain, cfg.m_max, cfg.k_max);
  if (!out.bound.found) return out;
  out.element = build_A_element(f0, mus, eps, out.bound.m, chain.at(static_cast<std::uint64_t>(out.bound.m)));
  const auto& A = out.element->A;
  out.f0_in_A = A.contains(f0);
  out.budget_holds = true;
  for (const auto& b : out.element->budget) out.budget_holds = out.budget_holds && b.holds(eps);
  std::size_t N = fs.size() + 1;
  while (N > 1 && A.contains(fs[N - 2])) --N;
  out.tail_index = N;
  return out;
}

}  // namespace weaknet::ccx
