#pragma once

#include "weaknet/functional.hpp"
#include "weaknet/support_vector.hpp"

#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

namespace weaknet {

struct Strip {
  Functional functional;
  Rational tolerance;
};

/// Weakly open set in standard form: { x : |phi_j(x - center)| < delta_j for all j }.
class WeakNbhd {
 public:
  WeakNbhd() = default;
  WeakNbhd(SupportVector center, std::vector<Strip> strips)
      : center_(std::move(center)), strips_(std::move(strips)) {
    for (const auto& s : strips_)
      if (s.tolerance <= 0) throw std::invalid_argument("strip tolerance must be positive");
  }

  const SupportVector& center() const noexcept { return center_; }
  const std::vector<Strip>& strips() const noexcept { return strips_; }

 private:
  SupportVector center_;
  std::vector<Strip> strips_;
};

inline bool nbhd_contains(const WeakNbhd& U, const SupportVector& x) {
  const SupportVector diff = x - U.center();
  for (const auto& s : U.strips())
    if (abs(pair(s.functional, diff)) >= s.tolerance) return false;
  return true;
}

/// Radius r such that the open l1-ball of radius r about x lies in U:
///   r = min_j (delta_j - |phi_j(x - center)|) / max(1, |phi_j|_inf).
/// Returns nullopt when U has no strips (U is the whole space).
inline std::optional<Rational> norm_ball_inside_nbhd(const WeakNbhd& U, const SupportVector& x) {
  const SupportVector diff = x - U.center();
  std::optional<Rational> radius;
  for (const auto& s : U.strips()) {
    Rational slack = s.tolerance - abs(pair(s.functional, diff));
    if (slack <= 0) throw std::invalid_argument("norm_ball_inside_nbhd: point is not in the neighborhood");
    Rational r = slack / max_of(Rational(1), linf_norm(s.functional));
    if (!radius || r < *radius) radius = r;
  }
  return radius;
}

}  // namespace weaknet
