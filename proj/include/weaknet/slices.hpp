#pragma once

// Norm regions of l1 and the pointwise-open slice neighborhoods whose trace on a
// thin annulus has small diameter.

#include "weaknet/rational.hpp"
#include "weaknet/support_vector.hpp"

#include <cstddef>
#include <stdexcept>
#include <variant>
#include <vector>

namespace weaknet {

/// O(r) = { |x| < r }.
struct OpenBall {
  Rational r;
};

/// M(r, eps) = { r - eps < |x| <= r }.
struct HalfOpenAnnulus {
  Rational r;
  Rational eps;
};

/// L(i, n) = { i/(10k) < |x| <= (i+2)/(10k) } for the layer constant k = k_n.
struct AnnulusL {
  BigInt i;
  BigInt k;

  Rational lower() const { return Rational(i) / Rational(10 * k); }
  Rational upper() const { return Rational(i + 2) / Rational(10 * k); }
  /// The same set written as M((i+2)/(10k), 1/(5k)).
  HalfOpenAnnulus as_annulus() const { return {upper(), Rational(1) / Rational(5 * k)}; }
};

using NormRegion = std::variant<OpenBall, HalfOpenAnnulus, AnnulusL>;

inline bool region_membership(const NormRegion& region, const SupportVector& x) {
  const Rational n = x.l1_norm();
  struct Visitor {
    const Rational& n;
    bool operator()(const OpenBall& b) const { return n < b.r; }
    bool operator()(const HalfOpenAnnulus& m) const { return m.r - m.eps < n && n <= m.r; }
    bool operator()(const AnnulusL& l) const { return l.lower() < n && n <= l.upper(); }
  };
  return std::visit(Visitor{n}, region);
}

/// V = p_F^{-1}({ u : |u - center| < radius }).
struct SliceNbhd {
  IndexSet F;
  SupportVector center;
  Rational radius;

  bool contains(const SupportVector& v) const { return l1_distance(project(v, F), center) < radius; }
};

/// Slice neighborhood of x in M(r, eps) with diam(V n M(r, eps)) <= 4 eps.
/// F is the greedy prefix of supp(x) (largest entries first) whose mass exceeds
/// r - eps, and the radius is min(eps, |p_F x| - (r - eps)).
inline SliceNbhd local_slice_nbhd(const SupportVector& x, const Rational& r, const Rational& eps) {
  if (!(eps > 0 && eps < r)) throw std::invalid_argument("local_slice_nbhd: need 0 < eps < r");
  if (!region_membership(HalfOpenAnnulus{r, eps}, x))
    throw std::invalid_argument("local_slice_nbhd: x is not in M(r, eps)");
  const Rational floor_mass = r - eps;
  IndexSet F;
  Rational mass(0);
  for (const auto& t : by_decreasing_magnitude(x)) {
    if (mass > floor_mass) break;
    F.insert(t);
    mass += abs(x.at(t));
  }
  SliceNbhd V{F, project(x, F), min_of(eps, mass - floor_mass)};
  return V;
}

struct SliceViolation {
  std::size_t first;
  std::size_t second;  ///< equals `first` for a tail-bound violation
  Rational value;
};

struct SliceReport {
  std::size_t members = 0;
  std::size_t pairs = 0;
  Rational max_distance{0};
  Rational max_tail{0};
  std::vector<SliceViolation> distance_violations;
  std::vector<SliceViolation> tail_violations;

  bool passed() const { return distance_violations.empty() && tail_violations.empty(); }
};

/// Filters samples to V n M(r, eps) and checks every pairwise distance against 4 eps
/// and every tail |p_{not F}(y)| against eps.
inline SliceReport slice_diameter_check(const SliceNbhd& V, const Rational& r, const Rational& eps,
                                        const std::vector<SupportVector>& samples) {
  SliceReport report;
  std::vector<std::size_t> kept;
  for (std::size_t s = 0; s < samples.size(); ++s)
    if (V.contains(samples[s]) && region_membership(HalfOpenAnnulus{r, eps}, samples[s])) kept.push_back(s);
  report.members = kept.size();
  const Rational bound = 4 * eps;
  for (std::size_t a = 0; a < kept.size(); ++a) {
    Rational tail = project_complement(samples[kept[a]], V.F).l1_norm();
    report.max_tail = max_of(report.max_tail, tail);
    if (tail > eps) report.tail_violations.push_back({kept[a], kept[a], tail});
    for (std::size_t b = a + 1; b < kept.size(); ++b) {
      Rational d = l1_distance(samples[kept[a]], samples[kept[b]]);
      ++report.pairs;
      report.max_distance = max_of(report.max_distance, d);
      if (d > bound) report.distance_violations.push_back({kept[a], kept[b], d});
    }
  }
  return report;
}

}  // namespace weaknet
