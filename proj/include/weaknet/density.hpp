#pragma once

// Weak* density of a countable family of clopen step functions on the sphere of
// l_inf(2^omega), and the half-space witnesses built from it.

#include "weaknet/cantor.hpp"
#include "weaknet/functional.hpp"
#include "weaknet/rational.hpp"
#include "weaknet/support_vector.hpp"

#include <algorithm>
#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace weaknet {

namespace detail {

// Cylinders of depth `depth` not listed in `used` (sorted), as a minimal antichain.
inline void complement_cylinders(const std::string& prefix, std::size_t depth,
                                 const std::vector<std::string>& used, std::vector<Cylinder>& out) {
  auto lo = std::lower_bound(used.begin(), used.end(), prefix);
  bool any = lo != used.end() && lo->compare(0, prefix.size(), prefix) == 0;
  if (!any) {
    out.emplace_back(prefix);
    return;
  }
  if (prefix.size() == depth) return;
  complement_cylinders(prefix + "0", depth, used, out);
  complement_cylinders(prefix + "1", depth, used, out);
}

inline std::size_t common_prefix_length(const Index& a, const Index& b) {
  std::size_t n = std::max(a.bits().size(), b.bits().size());
  for (std::size_t i = 0; i < n; ++i)
    if (a.bit(i) != b.bit(i)) return i;
  return n;
}

}  // namespace detail

/// Depth at which the points of F get pairwise distinct cylinders and at least
/// one cylinder of that depth misses F.
inline std::size_t separating_depth(const IndexSet& F) {
  std::size_t depth = 0;
  std::vector<Index> pts(F.begin(), F.end());
  for (std::size_t i = 0; i + 1 < pts.size(); ++i)
    depth = std::max(depth, detail::common_prefix_length(pts[i], pts[i + 1]) + 1);
  while (depth < 64 && (std::size_t{1} << depth) <= pts.size()) ++depth;
  return depth;
}

/// Partition with one cylinder cell per point of F (in index order) followed by a
/// single F-free remainder cell.
inline ClopenPartition build_partition(const IndexSet& F) {
  if (F.empty()) return ClopenPartition();
  const std::size_t depth = separating_depth(F);
  std::vector<std::string> used;
  std::vector<ClopenSet> cells;
  for (const auto& t : F) {
    used.push_back(t.prefix(depth));
    cells.emplace_back(std::vector<Cylinder>{Cylinder(used.back())});
  }
  std::sort(used.begin(), used.end());
  std::vector<Cylinder> rest;
  detail::complement_cylinders("", depth, used, rest);
  cells.emplace_back(std::move(rest));
  return ClopenPartition(std::move(cells));
}

/// A member w of the dense family together with the parameters that produced it.
struct DenseApproximant {
  StepFunctional w;
  Rational delta;     ///< inner tolerance eps / (3 + max |x_i|)
  IndexSet support;   ///< finite set carrying all but delta of each x_i's mass
};

/// Greedy finite set F with sum_{t not in F} |x(t)| < delta, taking the largest
/// entries first.
inline IndexSet greedy_mass_set(const SupportVector& x, const Rational& delta) {
  IndexSet F;
  Rational tail = x.l1_norm();
  for (const auto& t : by_decreasing_magnitude(x)) {
    if (tail < delta) break;
    F.insert(t);
    tail -= abs(x.at(t));
  }
  return F;
}

/// Finds w in the dense family with |w(x_i) - y(x_i)| < eps for every x_i.
template <class Y>
DenseApproximant dense_approximant(const Y& y, const std::vector<SupportVector>& xs, const Rational& eps) {
  if (eps <= 0) throw std::invalid_argument("dense_approximant: eps must be positive");
  if (y.linf_norm() > 1) throw std::invalid_argument("dense_approximant: |y|_inf exceeds 1");

  Rational max_norm(0);
  for (const auto& x : xs) max_norm = max_of(max_norm, x.l1_norm());
  const Rational delta = eps / (Rational(3) + max_norm);

  IndexSet F;
  for (const auto& x : xs) F.merge(greedy_mass_set(x, delta));

  ClopenPartition partition = build_partition(F);
  const BigInt den = ceil_of(Rational(2) / delta);
  std::vector<Rational> values(partition.size(), Rational(1));
  for (const auto& t : F) {
    Rational q = round_to_denominator(y(t), den);
    values[partition.cell_of(t)] = min_of(Rational(1), max_of(Rational(-1), q));
  }
  return {StepFunctional(std::move(partition), std::move(values)), delta, std::move(F)};
}

inline DenseApproximant dense_approximant(const Functional& y, const std::vector<SupportVector>& xs,
                                          const Rational& eps) {
  return std::visit([&](const auto& f) { return dense_approximant(f, xs, eps); }, y);
}

/// True when w has all values in [-1, 1] and attains 1 in absolute value.
inline bool in_dense_sphere(const StepFunctional& w) {
  for (const auto& v : w.values())
    if (v > 1 || v < -1) return false;
  return w.linf_norm() == 1;
}

/// Member phi of the dense family and n with phi(x) > r + 1/n.
struct ExteriorWitness {
  StepFunctional phi;
  BigInt n;
  Rational r;
};

inline ExteriorWitness exterior_witness(const SupportVector& x, const Rational& r) {
  if (r <= 0) throw std::invalid_argument("exterior_witness: r must be positive");
  const Rational norm = x.l1_norm();
  if (norm <= r) throw std::invalid_argument("exterior_witness: |x| must exceed r");
  const Rational gap = (norm - r) / 2;
  auto approx = dense_approximant(sign_pattern(x), {x}, gap);
  BigInt n = floor_of(Rational(1) / gap) + 1;
  return {std::move(approx.w), std::move(n), r};
}

// ---------------------------------------------------------------------------
// Numbering of the dense family.
//
// A member is coded as (depth L, denominator Q, numerators a_0..a_{2^L-1}) with
// |a_b| <= Q and some |a_b| = Q; cell b is the depth-L cylinder whose prefix
// spells b in binary (first bit most significant). Codes inside a (L, Q) block
// are ranked lexicographically; the block coordinates and the in-block rank are
// combined with Cantor pairing into a single natural number.

struct DenseCode {
  std::size_t depth = 0;
  BigInt denominator{1};
  std::vector<BigInt> numerators{BigInt(1)};
  friend bool operator==(const DenseCode&, const DenseCode&) = default;
};

/// Cantor pairing on positive integers: (1,1)->1, (2,1)->2, (1,2)->3, ...
inline BigInt cantor_pair(const BigInt& a, const BigInt& b) {
  BigInt s = a + b - 2;
  return s * (s + 1) / 2 + b;
}

inline std::pair<BigInt, BigInt> cantor_unpair(const BigInt& m) {
  if (m < 1) throw std::invalid_argument("cantor_unpair: index must be positive");
  BigInt s = (boost::multiprecision::sqrt(8 * (m - 1) + 1) - 1) / 2;
  while (s * (s + 1) / 2 >= m) --s;
  while ((s + 1) * (s + 2) / 2 < m) ++s;
  BigInt b = m - s * (s + 1) / 2;
  BigInt a = s + 2 - b;
  return {a, b};
}

namespace detail {
inline BigInt ipow(const BigInt& base, std::size_t exp) {
  return boost::multiprecision::pow(base, static_cast<unsigned>(exp));
}
// Tuples of length `len` over [-Q, Q] containing at least one +-Q.
inline BigInt tuples_with_extreme(const BigInt& Q, std::size_t len) {
  return ipow(2 * Q + 1, len) - ipow(2 * Q - 1, len);
}
}  // namespace detail

/// Number of codes in block (L, Q).
inline BigInt dense_block_size(std::size_t depth, const BigInt& Q) {
  return detail::tuples_with_extreme(Q, std::size_t{1} << depth);
}

/// Deepest partition the numbering handles (2^12 cells).
inline constexpr std::size_t kMaxDenseDepth = 12;

/// Canonical code of a dense-family member: minimal depth, minimal denominator.
inline DenseCode encode_dense(const StepFunctional& w, std::size_t max_depth = kMaxDenseDepth) {
  if (!in_dense_sphere(w)) throw std::invalid_argument("encode_dense: not a member of the dense family");
  std::size_t depth = w.partition().depth();
  if (depth > max_depth) throw std::invalid_argument("encode_dense: partition too deep");
  std::vector<Rational> vals;
  vals.reserve(std::size_t{1} << depth);
  for (std::size_t b = 0; b < (std::size_t{1} << depth); ++b) {
    std::string bits(depth, '0');
    for (std::size_t i = 0; i < depth; ++i)
      if ((b >> (depth - 1 - i)) & 1U) bits[i] = '1';
    vals.push_back(w(Index(bits)));
  }
  while (depth > 0) {
    bool mergeable = true;
    for (std::size_t b = 0; b < vals.size(); b += 2)
      if (vals[b] != vals[b + 1]) mergeable = false;
    if (!mergeable) break;
    std::vector<Rational> half;
    for (std::size_t b = 0; b < vals.size(); b += 2) half.push_back(vals[b]);
    vals.swap(half);
    --depth;
  }
  BigInt Q(1);
  for (const auto& v : vals) Q = boost::multiprecision::lcm(Q, denominator_of(v));
  DenseCode code{depth, Q, {}};
  for (const auto& v : vals) code.numerators.push_back(numerator_of(v * Rational(Q)));
  return code;
}

inline StepFunctional decode_dense(const DenseCode& code) {
  std::vector<ClopenSet> cells;
  std::vector<Rational> values;
  for (std::size_t b = 0; b < code.numerators.size(); ++b) {
    std::string bits(code.depth, '0');
    for (std::size_t i = 0; i < code.depth; ++i)
      if ((b >> (code.depth - 1 - i)) & 1U) bits[i] = '1';
    cells.emplace_back(std::vector<Cylinder>{Cylinder(bits)});
    values.push_back(make_rational(code.numerators[b], code.denominator));
  }
  return StepFunctional(ClopenPartition(std::move(cells)), std::move(values));
}

namespace detail {
// powers[r] = base^r for r = 0..len-1
inline std::vector<BigInt> power_table(const BigInt& base, std::size_t len) {
  std::vector<BigInt> out(len);
  BigInt p(1);
  for (std::size_t r = 0; r < len; ++r) {
    out[r] = p;
    p *= base;
  }
  return out;
}
}  // namespace detail

/// Zero-based lexicographic rank of the numerator tuple inside its block.
inline BigInt dense_block_rank(const DenseCode& code) {
  const BigInt& Q = code.denominator;
  const std::size_t len = code.numerators.size();
  const auto wide = detail::power_table(2 * Q + 1, len);
  const auto narrow = detail::power_table(2 * Q - 1, len);
  BigInt rank(0);
  bool has_extreme = false;
  for (std::size_t p = 0; p < len; ++p) {
    const std::size_t rest = len - p - 1;
    const BigInt& full = wide[rest];
    const BigInt need = wide[rest] - narrow[rest];
    // Smaller values at position p are -Q (extreme) and -Q+1 .. a_p-1 (not extreme).
    const BigInt smaller = code.numerators[p] + Q;
    if (smaller > 0) rank += full + (smaller - 1) * (has_extreme ? full : need);
    if (code.numerators[p] == Q || code.numerators[p] == -Q) has_extreme = true;
  }
  return rank;
}

inline DenseCode dense_block_unrank(std::size_t depth, const BigInt& Q, BigInt rank) {
  const std::size_t len = std::size_t{1} << depth;
  const auto wide = detail::power_table(2 * Q + 1, len + 1);
  const auto narrow = detail::power_table(2 * Q - 1, len + 1);
  if (rank < 0 || rank >= wide[len] - narrow[len]) throw std::out_of_range("dense_block_unrank: rank out of block");
  DenseCode code{depth, Q, {}};
  bool has_extreme = false;
  for (std::size_t p = 0; p < len; ++p) {
    const std::size_t rest = len - p - 1;
    const BigInt& full = wide[rest];
    const BigInt need = wide[rest] - narrow[rest];
    // value -Q
    if (rank < full) {
      code.numerators.push_back(-Q);
      has_extreme = true;
      continue;
    }
    rank -= full;
    // values -Q+1 .. Q-1 share one completion count
    const BigInt& each = has_extreme ? full : need;
    const BigInt interior = 2 * Q - 1;
    if (each > 0 && rank < interior * each) {
      BigInt step = rank / each;
      code.numerators.push_back(-Q + 1 + step);
      rank -= step * each;
      continue;
    }
    rank -= interior * each;
    code.numerators.push_back(Q);
    has_extreme = true;
  }
  return code;
}

/// Natural-number code of a dense-family member: pair(L + 1, pair(Q, block rank + 1)).
inline BigInt dense_index(const DenseCode& code) {
  return cantor_pair(BigInt(code.depth + 1), cantor_pair(code.denominator, dense_block_rank(code) + 1));
}

inline BigInt dense_index(const StepFunctional& w) { return dense_index(encode_dense(w)); }

/// Inverse of dense_index; nullopt for numbers that code no member.
inline std::optional<DenseCode> dense_member(const BigInt& index, std::size_t max_depth = kMaxDenseDepth) {
  auto [depth1, rest] = cantor_unpair(index);
  auto [Q, rank1] = cantor_unpair(rest);
  if (depth1 - 1 > max_depth) return std::nullopt;
  std::size_t depth = depth1.convert_to<std::size_t>() - 1;
  if (rank1 > dense_block_size(depth, Q)) return std::nullopt;  // gap in the numbering
  return dense_block_unrank(depth, Q, rank1 - 1);
}

}  // namespace weaknet
