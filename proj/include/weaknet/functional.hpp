#pragma once

#include "weaknet/cantor.hpp"
#include "weaknet/rational.hpp"
#include "weaknet/support_vector.hpp"

#include <map>
#include <stdexcept>
#include <utility>
#include <variant>
#include <vector>

namespace weaknet {

/// Function on 2^omega constant on the cells of a clopen partition.
class StepFunctional {
 public:
  StepFunctional() : values_{Rational(0)} {}
  StepFunctional(ClopenPartition partition, std::vector<Rational> values)
      : partition_(std::move(partition)), values_(std::move(values)) {
    if (values_.size() != partition_.size())
      throw std::invalid_argument("step functional needs one value per cell");
  }

  static StepFunctional constant(const Rational& c) { return StepFunctional(ClopenPartition(), {c}); }

  const ClopenPartition& partition() const noexcept { return partition_; }
  const std::vector<Rational>& values() const noexcept { return values_; }

  Rational operator()(const Index& t) const { return values_[partition_.cell_of(t)]; }

  Rational linf_norm() const {
    Rational m(0);
    for (const auto& v : values_) m = max_of(m, abs(v));
    return m;
  }

 private:
  ClopenPartition partition_;
  std::vector<Rational> values_;
};

/// Function given by a finite table and a default value elsewhere.
class TableFunctional {
 public:
  TableFunctional() = default;
  explicit TableFunctional(Rational fallback, std::map<Index, Rational> table = {})
      : table_(std::move(table)), default_(std::move(fallback)) {}

  const std::map<Index, Rational>& table() const noexcept { return table_; }
  const Rational& default_value() const noexcept { return default_; }

  Rational operator()(const Index& t) const {
    auto it = table_.find(t);
    return it == table_.end() ? default_ : it->second;
  }

  Rational linf_norm() const {
    Rational m = abs(default_);
    for (const auto& [t, v] : table_) m = max_of(m, abs(v));
    return m;
  }

 private:
  std::map<Index, Rational> table_;
  Rational default_{0};
};

using Functional = std::variant<StepFunctional, TableFunctional>;

inline Rational evaluate(const Functional& phi, const Index& t) {
  return std::visit([&](const auto& f) { return f(t); }, phi);
}

inline Rational linf_norm(const Functional& phi) {
  return std::visit([](const auto& f) { return f.linf_norm(); }, phi);
}

/// Dual pairing <phi, x> = sum over supp(x) of phi(t) x(t).
inline Rational pair(const Functional& phi, const SupportVector& x) {
  Rational s(0);
  for (const auto& [t, v] : x.entries()) s += evaluate(phi, t) * v;
  return s;
}

inline Rational pair(const StepFunctional& phi, const SupportVector& x) {
  Rational s(0);
  for (const auto& [t, v] : x.entries()) s += phi(t) * v;
  return s;
}

/// Extensional equality of two step functionals: equal values wherever a cylinder
/// of one overlaps a cylinder of the other.
inline bool equivalent(const StepFunctional& a, const StepFunctional& b) {
  const auto& ca = a.partition().cells();
  const auto& cb = b.partition().cells();
  for (std::size_t i = 0; i < ca.size(); ++i)
    for (std::size_t j = 0; j < cb.size(); ++j) {
      if (a.values()[i] == b.values()[j]) continue;
      for (const auto& x : ca[i].cylinders())
        for (const auto& y : cb[j].cylinders())
          if (x.overlaps(y)) return false;
    }
  return true;
}

/// Sign pattern of x: sign(x(t)) on supp(x), 1 elsewhere. A norming functional for x.
inline TableFunctional sign_pattern(const SupportVector& x) {
  std::map<Index, Rational> table;
  for (const auto& [t, v] : x.entries()) table.emplace(t, Rational(sign(v)));
  return TableFunctional(Rational(1), std::move(table));
}

}  // namespace weaknet
