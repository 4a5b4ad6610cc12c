#pragma once

// The sigma-discrete k-network of l1: members B n F^m_{i/10k} n L(i,n) and
// B n O(1/5k) over a lattice base, exact intersection tests, the per-layer
// discreteness audit and the finite-subcover extractor for compact sets.

#include "weaknet/density.hpp"
#include "weaknet/lattice_base.hpp"
#include "weaknet/simplex.hpp"
#include "weaknet/slices.hpp"
#include "weaknet/weak_nbhd.hpp"

#include <algorithm>
#include <cstddef>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace weaknet {

/// F^m_r = { x : phi(x) >= r + 1/margin }, where phi has number `index` in the
/// dense family and m = pair(index, margin).
struct HalfSpaceId {
  StepFunctional phi;
  BigInt index{1};
  BigInt margin{1};
  Rational level;

  BigInt m() const { return cantor_pair(index, margin); }
  Rational threshold() const { return level + Rational(1) / Rational(margin); }
  bool contains(const SupportVector& x) const { return pair(phi, x) >= threshold(); }
};

inline HalfSpaceId make_half_space(StepFunctional phi, const BigInt& margin, const Rational& level) {
  if (margin < 1) throw std::invalid_argument("half space margin must be positive");
  BigInt index = dense_index(phi);
  return {std::move(phi), std::move(index), margin, level};
}

/// Half-space with number m at the given level; nullopt when m codes no member.
inline std::optional<HalfSpaceId> half_space_from_m(const BigInt& m, const Rational& level) {
  auto [index, margin] = cantor_unpair(m);
  auto code = dense_member(index);
  if (!code) return std::nullopt;
  return HalfSpaceId{decode_dense(*code), index, margin, level};
}

struct CElement {
  HalfSpaceId half_space;
  BigInt i;
  BaseBallId ball;
  std::size_t layer() const { return ball.layer; }
};

struct DElement {
  BaseBallId ball;
  std::size_t layer() const { return ball.layer; }
};

using NetworkElementId = std::variant<CElement, DElement>;

inline std::size_t element_layer(const NetworkElementId& e) {
  return std::visit([](const auto& v) { return v.layer(); }, e);
}

inline const BaseBallId& element_ball(const NetworkElementId& e) {
  return std::visit([](const auto& v) -> const BaseBallId& { return v.ball; }, e);
}

inline bool same_element(const NetworkElementId& a, const NetworkElementId& b) {
  if (a.index() != b.index()) return false;
  if (const auto* c = std::get_if<CElement>(&a)) {
    const auto& d = std::get<CElement>(b);
    return c->ball == d.ball && c->i == d.i && c->half_space.index == d.half_space.index &&
           c->half_space.margin == d.half_space.margin && c->half_space.level == d.half_space.level;
  }
  return std::get<DElement>(a).ball == std::get<DElement>(b).ball;
}

/// The layer's annulus L(i, n).
inline AnnulusL layer_annulus(const LatticeBase& base, std::size_t layer, const BigInt& i) {
  return {i, base.layer(layer).k};
}

inline Rational d_radius(const LatticeBase& base, std::size_t layer) {
  return Rational(1) / Rational(5 * base.layer(layer).k);
}

inline bool element_membership(const LatticeBase& base, const NetworkElementId& e, const SupportVector& x) {
  if (const auto* c = std::get_if<CElement>(&e))
    return base.contains(c->ball, x) && c->half_space.contains(x) &&
           region_membership(layer_annulus(base, c->layer(), c->i), x);
  const auto& d = std::get<DElement>(e);
  return base.contains(d.ball, x) && region_membership(OpenBall{d_radius(base, d.layer())}, x);
}

/// Convex description of an element: ball, optional half-space, norm bounds.
struct ElementShape {
  SupportVector center;
  Rational radius;
  std::optional<StepFunctional> phi;
  Rational threshold;
  std::optional<Rational> lower;  ///< strict: |y| > lower
  Rational upper;
  bool upper_strict = false;
};

inline ElementShape element_shape(const LatticeBase& base, const NetworkElementId& e) {
  ElementShape s;
  s.center = base.center(element_ball(e));
  s.radius = base.radius(element_ball(e));
  if (const auto* c = std::get_if<CElement>(&e)) {
    auto L = layer_annulus(base, c->layer(), c->i);
    s.phi = c->half_space.phi;
    s.threshold = c->half_space.threshold();
    s.lower = L.lower();
    s.upper = L.upper();
  } else {
    s.upper = d_radius(base, element_layer(e));
    s.upper_strict = true;
  }
  return s;
}

inline constexpr std::size_t kMaxFeasibilityCoords = 12;

namespace detail {

struct FeasibilityModel {
  std::vector<Index> coords;
  std::vector<ClopenSet> cells;
  std::vector<Rational> cell_values;
};

// Maximizes the strictness margin tau under all constraints; with `signs`
// the lower norm bound is added using the fixed sign pattern.
inline std::optional<SupportVector> solve_feasibility(const FeasibilityModel& model, const SliceNbhd& V,
                                                     const ElementShape& e, const std::vector<int>* signs) {
  LinearProgram lp;
  const std::size_t n = model.coords.size();
  std::vector<std::size_t> y(n);
  for (std::size_t t = 0; t < n; ++t) y[t] = lp.add_variable(false);
  std::vector<std::size_t> P(model.cells.size()), N(model.cells.size());
  for (std::size_t c = 0; c < model.cells.size(); ++c) {
    P[c] = lp.add_variable();
    N[c] = lp.add_variable();
  }
  const std::size_t tau = lp.add_variable();
  lp.add_constraint({{tau, Rational(1)}}, Relation::LessEq, Rational(1));

  auto off_mass = [&](std::vector<LinearTerm>& terms) {
    for (std::size_t c = 0; c < model.cells.size(); ++c) {
      terms.push_back({P[c], Rational(1)});
      terms.push_back({N[c], Rational(1)});
    }
  };
  // sum_t |y_t - shift_t| over `which` bounded through auxiliaries
  auto abs_sum = [&](const std::vector<std::size_t>& which, const SupportVector& shift) {
    std::vector<LinearTerm> terms;
    for (std::size_t t : which) {
      const std::size_t a = lp.add_variable();
      const Rational c = shift.at(model.coords[t]);
      lp.add_constraint({{a, Rational(1)}, {y[t], Rational(-1)}}, Relation::GreaterEq, -c);
      lp.add_constraint({{a, Rational(1)}, {y[t], Rational(1)}}, Relation::GreaterEq, c);
      terms.push_back({a, Rational(1)});
    }
    return terms;
  };
  std::vector<std::size_t> all(n), in_F;
  for (std::size_t t = 0; t < n; ++t) {
    all[t] = t;
    if (V.F.count(model.coords[t])) in_F.push_back(t);
  }

  auto slice = abs_sum(in_F, V.center);
  slice.push_back({tau, Rational(1)});
  lp.add_constraint(slice, Relation::LessEq, V.radius);

  auto ball = abs_sum(all, e.center);
  off_mass(ball);
  ball.push_back({tau, Rational(1)});
  lp.add_constraint(ball, Relation::LessEq, e.radius);

  auto upper = abs_sum(all, SupportVector{});
  off_mass(upper);
  if (e.upper_strict) upper.push_back({tau, Rational(1)});
  lp.add_constraint(upper, Relation::LessEq, e.upper);

  if (e.phi) {
    std::vector<LinearTerm> half;
    for (std::size_t t = 0; t < n; ++t) half.push_back({y[t], (*e.phi)(model.coords[t])});
    for (std::size_t c = 0; c < model.cells.size(); ++c) {
      half.push_back({P[c], model.cell_values[c]});
      half.push_back({N[c], -model.cell_values[c]});
    }
    lp.add_constraint(half, Relation::GreaterEq, e.threshold);
  }

  if (signs) {
    std::vector<LinearTerm> lower;
    for (std::size_t t = 0; t < n; ++t) {
      const Rational s((*signs)[t]);
      lp.add_constraint({{y[t], s}}, Relation::GreaterEq, Rational(0));
      lower.push_back({y[t], s});
    }
    off_mass(lower);
    lower.push_back({tau, Rational(-1)});
    lp.add_constraint(lower, Relation::GreaterEq, *e.lower);
  }

  auto res = maximize(lp, {{tau, Rational(1)}});
  if (res.status != LpStatus::Optimal || !(res.value > 0)) return std::nullopt;

  SupportVector w;
  IndexSet used(model.coords.begin(), model.coords.end());
  for (std::size_t t = 0; t < n; ++t) w.set(model.coords[t], res.x[y[t]]);
  for (std::size_t c = 0; c < model.cells.size(); ++c) {
    for (int side = 0; side < 2; ++side) {
      const Rational& mass = res.x[side == 0 ? P[c] : N[c]];
      if (mass == 0) continue;
      Index fresh = model.cells[c].cylinders().front().point_avoiding(used);
      used.insert(fresh);
      w.set(fresh, side == 0 ? mass : -mass);
    }
  }
  return w;
}

}  // namespace detail

/// A point of V n e, or nullopt when the intersection is empty. Exact.
inline std::optional<SupportVector> intersection_witness(const SliceNbhd& V, const ElementShape& e) {
  detail::FeasibilityModel model;
  IndexSet S = V.F;
  for (const auto& t : V.center.support()) S.insert(t);
  for (const auto& t : e.center.support()) S.insert(t);
  if (S.size() > kMaxFeasibilityCoords)
    throw std::invalid_argument("intersection_feasible: " + std::to_string(S.size()) +
                                " coordinates exceed the bound " + std::to_string(kMaxFeasibilityCoords));
  model.coords.assign(S.begin(), S.end());
  if (e.phi) {
    model.cells = e.phi->partition().cells();
    model.cell_values = e.phi->values();
  } else {
    model.cells = {ClopenSet({Cylinder("")})};
    model.cell_values = {Rational(0)};
  }

  auto relaxed = detail::solve_feasibility(model, V, e, nullptr);
  if (!relaxed || !e.lower) return relaxed;
  if (relaxed->l1_norm() > *e.lower) return relaxed;
  const std::size_t n = model.coords.size();
  std::vector<int> signs(n);
  for (std::size_t mask = 0; mask < (std::size_t{1} << n); ++mask) {
    for (std::size_t t = 0; t < n; ++t) signs[t] = ((mask >> t) & 1U) ? -1 : 1;
    if (auto w = detail::solve_feasibility(model, V, e, &signs)) return w;
  }
  return std::nullopt;
}

inline bool intersection_feasible(const SliceNbhd& V, const ElementShape& e) {
  return intersection_witness(V, e).has_value();
}

inline bool intersection_feasible(const LatticeBase& base, const SliceNbhd& V, const NetworkElementId& e) {
  return intersection_feasible(V, element_shape(base, e));
}

/// Whether the element has any point at all.
inline bool element_nonempty(const LatticeBase& base, const NetworkElementId& e) {
  // F = {} makes V the whole space
  return intersection_feasible(SliceNbhd{{}, {}, Rational(1)}, element_shape(base, e));
}

// ---------------------------------------------------------------------------
// Discreteness of C(n, m, i).

struct ProbeOutcome {
  std::size_t probe = 0;
  SliceNbhd V;
  std::size_t candidates = 0;          ///< balls surviving the distance prefilter
  std::vector<BaseBallId> meeting;     ///< balls whose element V meets
  std::vector<SupportVector> witnesses;
};

struct DiscretenessReport {
  std::size_t probes = 0;
  std::size_t feasibility_calls = 0;
  std::size_t max_count = 0;
  std::vector<std::size_t> counts;
  std::vector<ProbeOutcome> violations;
  bool passed() const { return violations.empty(); }
};

/// Probe hull F^m_{i/10k} n ((i+2)/10k) closed ball.
inline bool in_probe_hull(const LatticeBase& base, std::size_t layer, const HalfSpaceId& hs, const BigInt& i,
                          const SupportVector& x) {
  return hs.contains(x) && x.l1_norm() <= layer_annulus(base, layer, i).upper();
}

inline ProbeOutcome discreteness_probe(const LatticeBase& base, std::size_t layer, const HalfSpaceId& hs,
                                       const BigInt& i, const SupportVector& x) {
  const auto L = base.layer(layer);
  const AnnulusL ann{i, L.k};
  if (hs.level != ann.lower()) throw std::invalid_argument("discreteness: half-space level is not i/10k");
  if (!in_probe_hull(base, layer, hs, i, x)) throw std::invalid_argument("discreteness: probe outside the hull");
  const Rational eps = Rational(1) / Rational(5 * L.k);
  ProbeOutcome out;
  out.V = local_slice_nbhd(x, ann.upper(), eps);
  for (const auto& ball : base.balls_within(L, ann.upper() + L.radius)) {
    const SupportVector c = base.center(ball);
    if (!(l1_distance(project(c, out.V.F), out.V.center) < out.V.radius + L.radius)) continue;
    ++out.candidates;
    if (auto w = intersection_witness(out.V, element_shape(base, CElement{hs, i, ball}))) {
      out.meeting.push_back(ball);
      out.witnesses.push_back(std::move(*w));
    }
  }
  return out;
}

/// For each probe, counts the layer's C(n, m, i) members met by its slice
/// neighborhood; every count must be at most one.
inline DiscretenessReport discreteness_verify(const LatticeBase& base, std::size_t layer, const HalfSpaceId& hs,
                                              const BigInt& i, const std::vector<SupportVector>& probes) {
  DiscretenessReport report;
  for (std::size_t p = 0; p < probes.size(); ++p) {
    auto out = discreteness_probe(base, layer, hs, i, probes[p]);
    out.probe = p;
    ++report.probes;
    report.feasibility_calls += out.candidates;
    report.counts.push_back(out.meeting.size());
    report.max_count = std::max(report.max_count, out.meeting.size());
    if (out.meeting.size() > 1) report.violations.push_back(std::move(out));
  }
  return report;
}

/// Balls of the layer whose D-element B n O(1/5k) is nonempty: two open l1
/// balls meet exactly when the center distance is below the radius sum.
inline std::vector<BaseBallId> nonempty_d_elements(const LatticeBase& base, std::size_t layer) {
  const auto L = base.layer(layer);
  const Rational reach = L.radius + d_radius(base, layer);
  std::vector<BaseBallId> out;
  for (const auto& ball : base.balls_within(L, reach))
    if (base.center(ball).l1_norm() < reach) out.push_back(ball);
  return out;
}

// ---------------------------------------------------------------------------
// Finite subcovers of compact sets.

class PointOutsideNbhd : public std::invalid_argument {
 public:
  PointOutsideNbhd(std::size_t point, const std::string& what) : std::invalid_argument(what), point_(point) {}
  std::size_t point() const noexcept { return point_; }

 private:
  std::size_t point_;
};

struct CoverCertificate {
  std::size_t point = 0;
  std::size_t element = 0;
  std::optional<Rational> rho;  ///< norm radius of U about the point (nullopt: U is everything)
};

struct CoverResult {
  std::vector<NetworkElementId> elements;
  std::vector<CoverCertificate> certificates;
  std::size_t n0 = 0;
  std::map<std::size_t, BigInt> i0;
  std::map<std::size_t, BigInt> m0;
};

/// Smallest i >= 1 with i/10k < |x| <= (i+2)/10k, for |x| >= 1/5k.
inline BigInt annulus_index(const Rational& norm, const BigInt& k) {
  BigInt i = ceil_of(Rational(10 * k) * norm - 2);
  return i < 1 ? BigInt(1) : i;
}

inline CoverResult knetwork_cover(const LatticeBase& base, const std::vector<SupportVector>& K, const WeakNbhd& U) {
  CoverResult result;
  for (std::size_t p = 0; p < K.size(); ++p) {
    const SupportVector& x = K[p];
    if (!nbhd_contains(U, x))
      throw PointOutsideNbhd(p, "knetwork_cover: point " + std::to_string(p) + " is not in U");
    if (x.l1_norm() > base.config().bound)
      throw std::invalid_argument("knetwork_cover: point " + std::to_string(p) + " exceeds the working bound");
    const auto rho = norm_ball_inside_nbhd(U, x);
    const BaseBallId ball = base.lookup(x, rho ? *rho : 2 * base.tier_radius(0));
    const auto L = base.layer(ball.layer);
    const Rational norm = x.l1_norm();

    NetworkElementId e;
    if (norm < Rational(1) / Rational(5 * L.k)) {
      e = DElement{ball};
    } else {
      const BigInt i = annulus_index(norm, L.k);
      const Rational level = Rational(i) / Rational(10 * L.k);
      auto wit = exterior_witness(x, level);
      CElement c{make_half_space(std::move(wit.phi), wit.n, level), i, ball};
      auto& imax = result.i0[L.id];
      if (imax < i) imax = i;
      auto& mmax = result.m0[L.id];
      const BigInt m = c.half_space.m();
      if (mmax < m) mmax = m;
      e = std::move(c);
    }
    result.n0 = std::max(result.n0, L.id);

    std::size_t idx = 0;
    while (idx < result.elements.size() && !same_element(result.elements[idx], e)) ++idx;
    if (idx == result.elements.size()) result.elements.push_back(std::move(e));
    result.certificates.push_back({p, idx, rho});
  }
  return result;
}

/// True when the open ball B(c, r) lies inside U.
inline bool ball_inside_nbhd(const WeakNbhd& U, const SupportVector& c, const Rational& r) {
  const SupportVector diff = c - U.center();
  for (const auto& s : U.strips()) {
    const Rational slack = s.tolerance - abs(pair(s.functional, diff));
    if (!(slack > 0) || linf_norm(s.functional) * r > slack) return false;
  }
  return true;
}

/// Problems found while re-checking a cover; empty when it is sound.
inline std::vector<std::string> audit_cover(const LatticeBase& base, const std::vector<SupportVector>& K,
                                            const WeakNbhd& U, const CoverResult& cover) {
  std::vector<std::string> problems;
  std::vector<bool> seen(K.size(), false);
  for (const auto& cert : cover.certificates) {
    if (cert.point >= K.size() || cert.element >= cover.elements.size()) {
      problems.push_back("certificate out of range");
      continue;
    }
    seen[cert.point] = true;
    const auto& e = cover.elements[cert.element];
    if (!element_membership(base, e, K[cert.point]))
      problems.push_back("point " + std::to_string(cert.point) + " not in its element");
    const BaseBallId& ball = element_ball(e);
    const SupportVector c = base.center(ball);
    const Rational r = base.radius(ball);
    if (cert.rho && l1_distance(c, K[cert.point]) + r > *cert.rho)
      problems.push_back("point " + std::to_string(cert.point) + ": ball exceeds its norm radius");
    if (!ball_inside_nbhd(U, c, r)) problems.push_back("element " + std::to_string(cert.element) + ": ball not inside U");
  }
  for (std::size_t p = 0; p < K.size(); ++p)
    if (!seen[p]) problems.push_back("point " + std::to_string(p) + " uncovered");
  for (const auto& e : cover.elements) {
    const std::size_t n = element_layer(e);
    if (n > cover.n0) problems.push_back("element above n0");
    if (const auto* c = std::get_if<CElement>(&e)) {
      auto i = cover.i0.find(n);
      auto m = cover.m0.find(n);
      if (i == cover.i0.end() || c->i > i->second) problems.push_back("element above i0(n)");
      if (m == cover.m0.end() || c->half_space.m() > m->second) problems.push_back("element above m0(n)");
    }
  }
  return problems;
}

}  // namespace weaknet
