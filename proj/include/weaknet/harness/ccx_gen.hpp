#pragma once

// Random spaces, functions, measures and weakly convergent sequences for C_c(X).

#include "weaknet/ccx.hpp"
#include "weaknet/harness/random.hpp"

#include <cstdint>
#include <vector>

namespace weaknet::harness {

inline ccx::SpaceX random_space(Rng& rng, std::int64_t max_spokes = 3, std::int64_t max_isolated = 3) {
  std::vector<Rational> scales;
  const auto n = rng.uniform(1, max_spokes);
  for (std::int64_t s = 0; s < n; ++s) scales.push_back(rng.positive(4, Rational(4)));
  return ccx::SpaceX(std::move(scales), static_cast<std::size_t>(rng.uniform(0, max_isolated)));
}

inline ccx::PointId random_point(Rng& rng, const ccx::SpaceX& X, std::uint64_t max_j) {
  const bool iso = X.isolated() > 0 && rng.uniform(0, 3) == 0;
  if (iso) return ccx::PointId::isolated(static_cast<std::size_t>(rng.uniform(0, static_cast<std::int64_t>(X.isolated()) - 1)));
  const auto s = static_cast<std::size_t>(rng.uniform(0, static_cast<std::int64_t>(X.spokes()) - 1));
  return ccx::PointId::spoke(s, static_cast<std::uint64_t>(rng.uniform(1, static_cast<std::int64_t>(max_j))));
}

/// |f| <= bound everywhere, with up to max_table exceptional points.
inline ccx::FunctionRep random_function(Rng& rng, const ccx::SpaceX& X, const Rational& bound,
                                        std::int64_t max_table = 6, std::uint64_t max_j = 20) {
  ccx::FunctionRep f;
  for (std::size_t s = 0; s < X.spokes(); ++s) f.limits.push_back(rng.rational(8, bound));
  const auto n = rng.uniform(0, max_table);
  for (std::int64_t i = 0; i < n; ++i) f.table[random_point(rng, X, max_j)] = rng.rational(8, bound);
  return f;
}

/// Atoms plus geometric tails with |q| <= 3/4 and heads |a| <= 1.
inline ccx::MeasureRep random_measure(Rng& rng, const ccx::SpaceX& X, std::uint64_t max_j = 12) {
  ccx::MeasureRep mu;
  for (std::size_t s = 0; s < X.spokes(); ++s) {
    if (!rng.coin()) continue;
    ccx::GeometricTail t;
    t.s = s;
    t.j0 = static_cast<std::uint64_t>(rng.uniform(1, static_cast<std::int64_t>(max_j)));
    do t.a = rng.rational(4, Rational(1));
    while (t.a == 0);
    do t.q = rng.rational(4, Rational(3, 4));
    while (t.q == 0);
    mu.tails.push_back(t);
  }
  const auto atoms = rng.uniform(mu.tails.empty() ? 1 : 0, 4);
  for (std::int64_t i = 0; i < atoms; ++i) {
    ccx::PointId p = rng.uniform(0, 4) == 0 && X.spokes() > 0
                         ? ccx::PointId::limit(static_cast<std::size_t>(rng.uniform(0, static_cast<std::int64_t>(X.spokes()) - 1)))
                         : random_point(rng, X, max_j);
    bool clash = false;
    for (const auto& t : mu.tails) clash = clash || (p.kind == ccx::PointId::Kind::Spoke && p.s == t.s && p.j >= t.j0);
    if (clash) continue;
    Rational w;
    do w = rng.rational(4, Rational(1));
    while (w == 0);
    mu.atoms[p] = w;
  }
  if (mu.atoms.empty() && mu.tails.empty()) mu.atoms[ccx::PointId::limit(0)] = Rational(1);
  return mu;
}

/// Rational strictly inside (lo, hi).
inline Rational rational_between(Rng& rng, const Rational& lo, const Rational& hi) {
  const std::int64_t den = 64;
  return lo + (hi - lo) * Rational(rng.uniform(1, den - 1)) / Rational(den);
}

/// A random function of A(F, U, D, m): values on F inside U_x, values on D in [-m, m].
inline ccx::FunctionRep sample_member(Rng& rng, const ccx::SpaceX& X, const ccx::CsStarElement& A,
                                      std::uint64_t max_j = 40) {
  const Rational m(A.m);
  ccx::FunctionRep f;
  for (std::size_t s = 0; s < X.spokes(); ++s)
    f.limits.push_back(A.D.contains(ccx::PointId::limit(s)) ? rng.rational(16, m) : rng.rational(16, 3 * m));
  for (int extra = 0; extra < 12; ++extra) {
    auto p = random_point(rng, X, max_j);
    f.table[p] = A.D.contains(p) ? rng.rational(16, m) : rng.rational(16, 3 * m);
  }
  for (const auto& [p, U] : A.constraints) {
    Rational lo = U.lo, hi = U.hi;
    if (A.D.contains(p)) {
      lo = max_of(lo, -m);
      hi = min_of(hi, m);
    }
    f.table[p] = rational_between(rng, lo, hi);
  }
  return f;
}

/// f_n = f0 + h * bump at (s, j_start + n) + 2^-n g, n = 1..length: converges
/// weakly to f0 because every compactly supported measure gives the moving
/// bump vanishing mass and the sequence stays bounded.
inline std::vector<ccx::FunctionRep> weakly_convergent_sequence(Rng& rng, const ccx::SpaceX& X, const ccx::FunctionRep& f0,
                                                                std::size_t length = 60) {
  const auto s = static_cast<std::size_t>(rng.uniform(0, static_cast<std::int64_t>(X.spokes()) - 1));
  const auto j_start = static_cast<std::uint64_t>(rng.uniform(0, 6));
  const Rational h = rng.rational(4, Rational(3));
  const ccx::FunctionRep g = random_function(rng, X, Rational(2), 4);
  std::vector<ccx::FunctionRep> out;
  Rational scale(1, 2);
  for (std::size_t n = 1; n <= length; ++n, scale /= 2) {
    ccx::FunctionRep bump;
    bump.limits.assign(X.spokes(), Rational(0));
    if (h != 0) bump.table[ccx::PointId::spoke(s, j_start + n)] = h;
    auto fn = ccx::FunctionRep::combine(Rational(1), f0, Rational(1), bump);
    out.push_back(ccx::FunctionRep::combine(Rational(1), fn, scale, g));
  }
  return out;
}

}  // namespace weaknet::harness
