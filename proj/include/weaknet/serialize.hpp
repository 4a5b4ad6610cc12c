#pragma once

// JSON encoding of every instance and certificate type. Rationals are "num/den"
// strings, big integers decimal strings, indices raw bit strings.

#include "weaknet/ccx.hpp"
#include "weaknet/functional.hpp"
#include "weaknet/knetwork.hpp"
#include "weaknet/sequences.hpp"
#include "weaknet/support_vector.hpp"
#include "weaknet/weak_nbhd.hpp"

#include <json.hpp>

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace weaknet {

using Json = nlohmann::ordered_json;

class SchemaError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

namespace io {

inline const Json& field(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) throw SchemaError(std::string("missing field '") + key + "'");
  return j.at(key);
}

inline std::string text(const Json& j) {
  if (!j.is_string()) throw SchemaError("expected a string, got " + j.dump());
  return j.get<std::string>();
}

inline std::int64_t integer(const Json& j) {
  if (!j.is_number_integer()) throw SchemaError("expected an integer, got " + j.dump());
  return j.get<std::int64_t>();
}

inline std::uint64_t natural(const Json& j) {
  const auto v = integer(j);
  if (v < 0) throw SchemaError("expected a nonnegative integer, got " + j.dump());
  return static_cast<std::uint64_t>(v);
}

inline Json encode(const Rational& q) { return to_text(q); }
inline Rational decode_rational(const Json& j) {
  try {
    return parse_rational(text(j));
  } catch (const SchemaError&) {
    throw;
  } catch (const std::invalid_argument& e) {
    throw SchemaError(e.what());
  }
}

inline Json encode(const BigInt& v) { return v.str(); }
inline BigInt decode_bigint(const Json& j) {
  const std::string s = text(j);
  const std::size_t start = !s.empty() && s[0] == '-' ? 1 : 0;
  if (s.size() == start || s.find_first_not_of("0123456789", start) != std::string::npos)
    throw SchemaError("malformed integer: " + s);
  return BigInt(s);
}

inline Index decode_index(const Json& j) {
  try {
    return Index(text(j));
  } catch (const std::invalid_argument& e) {
    throw SchemaError(e.what());
  }
}

template <class T, class F>
Json encode_list(const std::vector<T>& xs, F&& f) {
  Json out = Json::array();
  for (const auto& x : xs) out.push_back(f(x));
  return out;
}

template <class F>
auto decode_list(const Json& j, F&& f) {
  if (!j.is_array()) throw SchemaError("expected an array, got " + j.dump());
  std::vector<decltype(f(j))> out;
  for (const auto& e : j) out.push_back(f(e));
  return out;
}

// ---------------------------------------------------------------------------
// l1 / l-infinity model

inline Json encode(const SupportVector& x) {
  Json out = Json::object();
  for (const auto& [t, v] : x.entries()) out[t.bits()] = encode(v);
  return out;
}
inline SupportVector decode_vector(const Json& j) {
  if (!j.is_object()) throw SchemaError("vector must be an object, got " + j.dump());
  SupportVector x;
  for (const auto& [k, v] : j.items()) x.add(decode_index(Json(k)), decode_rational(v));
  return x;
}

inline Json encode(const StepFunctional& f) {
  Json cells = Json::array();
  for (const auto& cell : f.partition().cells()) {
    Json c = Json::array();
    for (const auto& cyl : cell.cylinders()) c.push_back(cyl.prefix());
    cells.push_back(std::move(c));
  }
  return Json{{"type", "step"}, {"cells", std::move(cells)}, {"values", encode_list(f.values(), [](const Rational& q) { return encode(q); })}};
}

inline StepFunctional decode_step(const Json& j) {
  try {
    std::vector<ClopenSet> cells;
    for (const auto& c : field(j, "cells")) {
      std::vector<Cylinder> cyl;
      for (const auto& p : c) cyl.emplace_back(text(p));
      cells.emplace_back(std::move(cyl));
    }
    auto values = decode_list(field(j, "values"), decode_rational);
    return StepFunctional(ClopenPartition(std::move(cells)), std::move(values));
  } catch (const SchemaError&) {
    throw;
  } catch (const std::invalid_argument& e) {
    throw SchemaError(e.what());
  }
}

inline Json encode(const TableFunctional& f) {
  Json table = Json::object();
  for (const auto& [t, v] : f.table()) table[t.bits()] = encode(v);
  return Json{{"type", "table"}, {"default", encode(f.default_value())}, {"table", std::move(table)}};
}

inline TableFunctional decode_table(const Json& j) {
  std::map<Index, Rational> table;
  const Json& t = field(j, "table");
  if (!t.is_object()) throw SchemaError("table must be an object");
  for (const auto& [k, v] : t.items()) table[decode_index(Json(k))] = decode_rational(v);
  return TableFunctional(decode_rational(field(j, "default")), std::move(table));
}

inline Json encode(const Functional& f) {
  return std::visit([](const auto& g) { return encode(g); }, f);
}

inline Functional decode_functional(const Json& j) {
  const std::string type = text(field(j, "type"));
  if (type == "step") return decode_step(j);
  if (type == "table") return decode_table(j);
  throw SchemaError("unknown functional type '" + type + "'");
}

inline Json encode(const WeakNbhd& U) {
  Json strips = Json::array();
  for (const auto& s : U.strips()) strips.push_back(Json{{"functional", encode(s.functional)}, {"tolerance", encode(s.tolerance)}});
  return Json{{"center", encode(U.center())}, {"strips", std::move(strips)}};
}

inline WeakNbhd decode_nbhd(const Json& j) {
  std::vector<Strip> strips;
  for (const auto& s : field(j, "strips")) strips.push_back({decode_functional(field(s, "functional")), decode_rational(field(s, "tolerance"))});
  try {
    return WeakNbhd(decode_vector(field(j, "center")), std::move(strips));
  } catch (const std::invalid_argument& e) {
    throw SchemaError(e.what());
  }
}

inline Json encode(const HalfSpaceId& h) {
  return Json{{"phi", encode(h.phi)}, {"margin", encode(h.margin)}, {"level", encode(h.level)}, {"m", encode(h.m())}};
}

inline HalfSpaceId decode_half_space(const Json& j) {
  try {
    return make_half_space(decode_step(field(j, "phi")), decode_bigint(field(j, "margin")), decode_rational(field(j, "level")));
  } catch (const SchemaError&) {
    throw;
  } catch (const std::invalid_argument& e) {
    throw SchemaError(e.what());
  }
}

inline Json encode(const BaseBallId& b) {
  return Json{{"layer", b.layer}, {"lattice", b.lattice}};
}

inline Json encode(const NetworkElementId& e) {
  if (const auto* c = std::get_if<CElement>(&e))
    return Json{{"type", "C"}, {"ball", encode(c->ball)}, {"i", encode(c->i)}, {"half_space", encode(c->half_space)}};
  return Json{{"type", "D"}, {"ball", encode(std::get<DElement>(e).ball)}};
}

// ---------------------------------------------------------------------------
// C_c(X)

inline Json encode(const ccx::PointId& p) { return ccx::to_string(p); }

inline ccx::PointId decode_point(const Json& j) {
  const std::string s = text(j);
  auto number = [&](std::string_view digits) -> std::uint64_t {
    if (digits.empty() || digits.find_first_not_of("0123456789") != std::string_view::npos || digits.size() > 18)
      throw SchemaError("malformed point '" + s + "'");
    return std::stoull(std::string(digits));
  };
  if (s.size() < 2) throw SchemaError("malformed point '" + s + "'");
  const std::string_view body = std::string_view(s).substr(1);
  switch (s[0]) {
    case 'L': return ccx::PointId::limit(number(body));
    case 'I': return ccx::PointId::isolated(number(body));
    case 'S': {
      const auto dot = body.find('.');
      if (dot == std::string_view::npos) throw SchemaError("malformed point '" + s + "'");
      const auto j0 = number(body.substr(dot + 1));
      if (j0 == 0) throw SchemaError("spoke positions start at 1: '" + s + "'");
      return ccx::PointId::spoke(number(body.substr(0, dot)), j0);
    }
    default: throw SchemaError("malformed point '" + s + "'");
  }
}

inline Json encode(const ccx::SpaceX& X) {
  return Json{{"scales", encode_list(X.scales(), [](const Rational& q) { return encode(q); })}, {"isolated", X.isolated()}};
}

inline ccx::SpaceX decode_space(const Json& j) {
  try {
    return ccx::SpaceX(decode_list(field(j, "scales"), decode_rational), natural(field(j, "isolated")));
  } catch (const SchemaError&) {
    throw;
  } catch (const std::invalid_argument& e) {
    throw SchemaError(e.what());
  }
}

inline Json encode(const ccx::FunctionRep& f) {
  Json table = Json::object();
  for (const auto& [p, v] : f.table) table[ccx::to_string(p)] = encode(v);
  return Json{{"limits", encode_list(f.limits, [](const Rational& q) { return encode(q); })}, {"table", std::move(table)}};
}

inline ccx::FunctionRep decode_function(const Json& j) {
  ccx::FunctionRep f;
  f.limits = decode_list(field(j, "limits"), decode_rational);
  const Json& t = field(j, "table");
  if (!t.is_object()) throw SchemaError("function table must be an object");
  for (const auto& [k, v] : t.items()) f.table[decode_point(Json(k))] = decode_rational(v);
  return f;
}

inline Json encode(const ccx::MeasureRep& mu) {
  Json atoms = Json::object();
  for (const auto& [p, w] : mu.atoms) atoms[ccx::to_string(p)] = encode(w);
  Json tails = Json::array();
  for (const auto& t : mu.tails) tails.push_back(Json{{"s", t.s}, {"j0", t.j0}, {"a", encode(t.a)}, {"q", encode(t.q)}});
  return Json{{"atoms", std::move(atoms)}, {"tails", std::move(tails)}};
}

inline ccx::MeasureRep decode_measure(const Json& j) {
  ccx::MeasureRep mu;
  const Json& a = field(j, "atoms");
  if (!a.is_object()) throw SchemaError("measure atoms must be an object");
  for (const auto& [k, v] : a.items()) mu.atoms[decode_point(Json(k))] = decode_rational(v);
  for (const auto& t : field(j, "tails"))
    mu.tails.push_back({natural(field(t, "s")), natural(field(t, "j0")), decode_rational(field(t, "a")), decode_rational(field(t, "q"))});
  return mu;
}

inline Json encode(const ccx::DSet& D) {
  Json tails = Json::object();
  for (const auto& [s, k] : D.tails()) tails[std::to_string(s)] = k;
  Json finite = Json::array();
  for (const auto& p : D.finite()) finite.push_back(encode(p));
  return Json{{"finite", std::move(finite)}, {"tails", std::move(tails)}};
}

inline ccx::DSet decode_dset(const Json& j) {
  std::set<ccx::PointId> finite;
  for (const auto& p : field(j, "finite")) finite.insert(decode_point(p));
  std::map<std::size_t, std::uint64_t> tails;
  const Json& t = field(j, "tails");
  if (!t.is_object()) throw SchemaError("dset tails must be an object");
  for (const auto& [k, v] : t.items()) {
    if (k.empty() || k.find_first_not_of("0123456789") != std::string::npos) throw SchemaError("malformed spoke key '" + k + "'");
    tails[std::stoull(k)] = natural(v);
  }
  return ccx::DSet(std::move(finite), std::move(tails));
}

inline Json encode(const ccx::CsStarElement& A) {
  Json cons = Json::object();
  for (const auto& [p, U] : A.constraints) cons[ccx::to_string(p)] = Json::array({encode(U.lo), encode(U.hi)});
  return Json{{"constraints", std::move(cons)}, {"D", encode(A.D)}, {"m", A.m}};
}

// ---------------------------------------------------------------------------
// sequences

inline Json encode(const seq::IntRule& r) {
  Json over = Json::object();
  for (const auto& [k, v] : r.overrides) over[std::to_string(k)] = encode(v);
  return Json{{"coeffs", encode_list(r.coeffs, [](const Rational& q) { return encode(q); })},
              {"floor_min", encode(r.floor_min)},
              {"overrides", std::move(over)}};
}

inline seq::IntRule decode_rule(const Json& j) {
  seq::IntRule r;
  r.coeffs = decode_list(field(j, "coeffs"), decode_rational);
  r.floor_min = decode_bigint(field(j, "floor_min"));
  const Json& o = field(j, "overrides");
  if (!o.is_object()) throw SchemaError("overrides must be an object");
  for (const auto& [k, v] : o.items()) {
    if (k.empty() || k.find_first_not_of("0123456789") != std::string::npos) throw SchemaError("malformed override key '" + k + "'");
    r.overrides[std::stoull(k)] = decode_bigint(v);
  }
  return r;
}

inline Json encode(const seq::DiagonalCandidate& d) { return Json{{"m", encode(d.m)}, {"n", encode(d.n)}}; }

inline seq::DiagonalCandidate decode_candidate(const Json& j) {
  return {decode_rule(field(j, "m")), decode_rule(field(j, "n"))};
}

inline Json encode(const seq::MetricArray& a) {
  return Json{{"limit", encode(a.limit)}, {"a", encode(a.a)}, {"p", a.p}, {"b", encode(a.b)}, {"c", encode(a.c)}};
}

inline seq::MetricArray decode_metric_array(const Json& j) {
  seq::MetricArray a;
  a.limit = decode_rational(field(j, "limit"));
  a.a = decode_rational(field(j, "a"));
  const auto p = natural(field(j, "p"));
  if (p > 8) throw SchemaError("metric array exponent above 8");
  a.p = static_cast<unsigned>(p);
  a.b = decode_bigint(field(j, "b"));
  a.c = decode_bigint(field(j, "c"));
  if (a.b < 0 || a.c < 0) throw SchemaError("metric array needs b, c >= 0");
  return a;
}

inline Json encode(const seq::CutRule& c) {
  Json ex = Json::object();
  for (const auto& [m, v] : c.exceptions) ex[m.str()] = encode(v);
  return Json{{"exceptions", std::move(ex)}, {"follow", c.follow ? encode(*c.follow) : Json()}};
}

inline Json encode(const seq::SequenceX& s) {
  Json streams = Json::array();
  for (const auto& st : s.streams) {
    if (st.constant) streams.push_back(Json{{"constant", true}, {"point", encode(st.point)}});
    else streams.push_back(Json{{"constant", false}, {"s", st.s}, {"j", encode(st.j)}});
  }
  return Json{{"prefix", encode_list(s.prefix, [](const ccx::PointId& p) { return encode(p); })}, {"streams", std::move(streams)}};
}

inline seq::SequenceX decode_sequence(const Json& j) {
  seq::SequenceX s;
  s.prefix = decode_list(field(j, "prefix"), decode_point);
  for (const auto& st : field(j, "streams")) {
    const Json& c = field(st, "constant");
    if (!c.is_boolean()) throw SchemaError("stream 'constant' must be a boolean");
    if (c.get<bool>()) s.streams.push_back({true, decode_point(field(st, "point")), 0, {}});
    else s.streams.push_back({false, {}, natural(field(st, "s")), decode_rule(field(st, "j"))});
  }
  return s;
}

}  // namespace io
}  // namespace weaknet
