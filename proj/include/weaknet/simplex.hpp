#pragma once

// Exact two-phase simplex over the rationals (dense tableau, Bland's rule).
// Sized for the handful of variables the feasibility questions need.

#include "weaknet/rational.hpp"

#include <cstddef>
#include <stdexcept>
#include <utility>
#include <vector>

namespace weaknet {

enum class Relation { LessEq, GreaterEq, Equal };

struct LinearTerm {
  std::size_t var;
  Rational coeff;
};

struct LinearConstraint {
  std::vector<LinearTerm> terms;
  Relation rel = Relation::LessEq;
  Rational rhs;
};

class LinearProgram {
 public:
  std::size_t add_variable(bool nonnegative = true) {
    nonnegative_.push_back(nonnegative);
    return nonnegative_.size() - 1;
  }

  void add_constraint(std::vector<LinearTerm> terms, Relation rel, Rational rhs) {
    for (const auto& t : terms)
      if (t.var >= nonnegative_.size()) throw std::out_of_range("linear program: unknown variable");
    rows_.push_back({std::move(terms), rel, std::move(rhs)});
  }

  std::size_t num_variables() const noexcept { return nonnegative_.size(); }
  bool nonnegative(std::size_t v) const { return nonnegative_.at(v); }
  const std::vector<LinearConstraint>& constraints() const noexcept { return rows_; }

 private:
  std::vector<bool> nonnegative_;
  std::vector<LinearConstraint> rows_;
};

enum class LpStatus { Optimal, Infeasible, Unbounded };

struct LpResult {
  LpStatus status = LpStatus::Infeasible;
  Rational value;
  std::vector<Rational> x;  ///< one entry per program variable (Optimal only)
};

namespace detail {

class Tableau {
 public:
  std::vector<std::vector<Rational>> a;
  std::vector<Rational> b;
  std::vector<std::size_t> basis;
  std::vector<Rational> z;  // reduced costs, entering candidates have z > 0
  Rational value;

  void set_objective(const std::vector<Rational>& c) {
    const std::size_t n = c.size();
    z = c;
    value = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
      const Rational& cb = c[basis[i]];
      if (cb == 0) continue;
      for (std::size_t j = 0; j < n; ++j)
        if (a[i][j] != 0) z[j] -= cb * a[i][j];
      value += cb * b[i];
    }
  }

  void pivot(std::size_t r, std::size_t c) {
    const Rational p = a[r][c];
    for (auto& v : a[r])
      if (v != 0) v /= p;
    b[r] /= p;
    for (std::size_t i = 0; i < a.size(); ++i) {
      if (i == r || a[i][c] == 0) continue;
      const Rational f = a[i][c];
      for (std::size_t j = 0; j < a[i].size(); ++j)
        if (a[r][j] != 0) a[i][j] -= f * a[r][j];
      b[i] -= f * b[r];
    }
    if (z[c] != 0) {
      const Rational f = z[c];
      for (std::size_t j = 0; j < z.size(); ++j)
        if (a[r][j] != 0) z[j] -= f * a[r][j];
      value += f * b[r];
    }
    basis[r] = c;
  }

  // false when unbounded
  bool run(const std::vector<bool>& allowed) {
    while (true) {
      std::size_t enter = z.size();
      for (std::size_t j = 0; j < z.size(); ++j)
        if (allowed[j] && z[j] > 0) {
          enter = j;
          break;
        }
      if (enter == z.size()) return true;
      std::size_t leave = a.size();
      Rational best;
      for (std::size_t i = 0; i < a.size(); ++i) {
        if (!(a[i][enter] > 0)) continue;
        Rational ratio = b[i] / a[i][enter];
        if (leave == a.size() || ratio < best || (ratio == best && basis[i] < basis[leave])) {
          leave = i;
          best = ratio;
        }
      }
      if (leave == a.size()) return false;
      pivot(leave, enter);
    }
  }
};

}  // namespace detail

/// Maximizes objective . x subject to the program's constraints.
inline LpResult maximize(const LinearProgram& lp, const std::vector<LinearTerm>& objective) {
  // Column layout: split free variables into x+ and x-, then slacks, then artificials.
  const std::size_t nv = lp.num_variables();
  std::vector<std::size_t> pos(nv), neg(nv, static_cast<std::size_t>(-1));
  std::size_t cols = 0;
  for (std::size_t v = 0; v < nv; ++v) {
    pos[v] = cols++;
    if (!lp.nonnegative(v)) neg[v] = cols++;
  }
  const auto& rows = lp.constraints();
  const std::size_t m = rows.size();
  std::size_t slack_count = 0, art_count = 0;
  std::vector<Relation> rel(m);
  std::vector<int> flip(m, 1);
  for (std::size_t i = 0; i < m; ++i) {
    rel[i] = rows[i].rel;
    if (rows[i].rhs < 0) {
      flip[i] = -1;
      if (rel[i] == Relation::LessEq) rel[i] = Relation::GreaterEq;
      else if (rel[i] == Relation::GreaterEq) rel[i] = Relation::LessEq;
    }
    if (rel[i] != Relation::Equal) ++slack_count;
    if (rel[i] != Relation::LessEq) ++art_count;
  }
  const std::size_t first_slack = cols, first_art = cols + slack_count, total = first_art + art_count;

  detail::Tableau T;
  T.a.assign(m, std::vector<Rational>(total));
  T.b.resize(m);
  T.basis.resize(m);
  std::size_t s = first_slack, art = first_art;
  for (std::size_t i = 0; i < m; ++i) {
    const Rational sign(flip[i]);
    for (const auto& t : rows[i].terms) {
      T.a[i][pos[t.var]] += sign * t.coeff;
      if (neg[t.var] != static_cast<std::size_t>(-1)) T.a[i][neg[t.var]] -= sign * t.coeff;
    }
    T.b[i] = sign * rows[i].rhs;
    if (rel[i] == Relation::LessEq) {
      T.a[i][s] = 1;
      T.basis[i] = s++;
    } else {
      if (rel[i] == Relation::GreaterEq) T.a[i][s++] = -1;
      T.a[i][art] = 1;
      T.basis[i] = art++;
    }
  }

  LpResult result;
  std::vector<bool> allowed(total, true);
  if (art_count > 0) {
    std::vector<Rational> c1(total);
    for (std::size_t j = first_art; j < total; ++j) c1[j] = -1;
    T.set_objective(c1);
    T.run(allowed);
    if (T.value < 0) return result;
    // drive remaining (zero-valued) artificials out of the basis
    for (std::size_t i = 0; i < T.a.size();) {
      if (T.basis[i] < first_art) {
        ++i;
        continue;
      }
      std::size_t c = first_art;
      for (std::size_t j = 0; j < first_art; ++j)
        if (T.a[i][j] != 0) {
          c = j;
          break;
        }
      if (c < first_art) {
        T.pivot(i, c);
        ++i;
      } else {  // redundant row
        T.a.erase(T.a.begin() + static_cast<std::ptrdiff_t>(i));
        T.b.erase(T.b.begin() + static_cast<std::ptrdiff_t>(i));
        T.basis.erase(T.basis.begin() + static_cast<std::ptrdiff_t>(i));
      }
    }
    for (std::size_t j = first_art; j < total; ++j) allowed[j] = false;
  }

  std::vector<Rational> c2(total);
  for (const auto& t : objective) {
    c2[pos[t.var]] += t.coeff;
    if (neg[t.var] != static_cast<std::size_t>(-1)) c2[neg[t.var]] -= t.coeff;
  }
  T.set_objective(c2);
  if (!T.run(allowed)) {
    result.status = LpStatus::Unbounded;
    return result;
  }
  std::vector<Rational> col(total);
  for (std::size_t i = 0; i < T.basis.size(); ++i) col[T.basis[i]] = T.b[i];
  result.status = LpStatus::Optimal;
  result.value = T.value;
  result.x.resize(nv);
  for (std::size_t v = 0; v < nv; ++v) {
    result.x[v] = col[pos[v]];
    if (neg[v] != static_cast<std::size_t>(-1)) result.x[v] -= col[neg[v]];
  }
  return result;
}

/// Whether the constraints are satisfiable, with a satisfying point when they are.
inline std::pair<bool, std::vector<Rational>> feasible_point(const LinearProgram& lp) {
  auto r = maximize(lp, {});
  return {r.status == LpStatus::Optimal, std::move(r.x)};
}

}  // namespace weaknet
