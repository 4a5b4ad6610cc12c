#pragma once

// Seeded instance generators and per-instance verifiers for every property
// campaign. An instance is one JSON object carrying everything its verifier
// needs, so any record can be replayed from the instance alone.

#include "weaknet/ccx.hpp"
#include "weaknet/density.hpp"
#include "weaknet/harness/ccx_gen.hpp"
#include "weaknet/harness/config.hpp"
#include "weaknet/harness/random.hpp"
#include "weaknet/harness/report.hpp"
#include "weaknet/knetwork.hpp"
#include "weaknet/lattice_base.hpp"
#include "weaknet/sequences.hpp"
#include "weaknet/serialize.hpp"
#include "weaknet/slices.hpp"

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <vector>

namespace weaknet::harness {

namespace detail {

inline std::uint64_t splitmix(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Independent stream per (seed, instance, purpose).
inline Rng instance_rng(std::uint64_t seed, std::uint64_t id, std::uint64_t purpose = 0) {
  return Rng(splitmix(splitmix(seed) ^ splitmix(id * 4 + purpose)));
}

inline std::vector<Index> fixed_coords(std::size_t dim) {
  static const char* names[] = {"1", "01", "11", "001"};
  if (dim < 1 || dim > 4) throw SchemaError("dimension must be in [1, 4]");
  std::vector<Index> out;
  for (std::size_t i = 0; i < dim; ++i) out.emplace_back(names[i]);
  return out;
}

inline LatticeConfig lattice_config(const Config& cfg) {
  LatticeConfig lc;
  lc.radii = cfg.rationals("radii");
  lc.bound = cfg.rational("bound");
  return lc;
}

inline Json header(const std::string& kind, std::size_t id) {
  Json j = Json::object();
  j["kind"] = kind;
  j["id"] = id;
  return j;
}

/// Grid points k/den on coords with |k| <= span.
inline std::vector<SupportVector> grid(const std::vector<Index>& coords, std::int64_t den, std::int64_t span) {
  std::vector<SupportVector> out;
  std::vector<std::int64_t> k(coords.size(), -span);
  while (true) {
    SupportVector v;
    for (std::size_t i = 0; i < coords.size(); ++i) v.set(coords[i], make_rational(k[i], den));
    out.push_back(v);
    std::size_t i = 0;
    while (i < k.size() && k[i] == span) k[i++] = -span;
    if (i == k.size()) break;
    ++k[i];
  }
  return out;
}

/// Grid points c + k/den on coords strictly inside the l1 ball B(c, r).
inline void grid_in_ball(const std::vector<Index>& coords, const SupportVector& c, const Rational& r, std::int64_t den,
                         const std::function<void(const SupportVector&)>& visit) {
  SupportVector y = c;
  std::function<void(std::size_t, const Rational&)> rec = [&](std::size_t i, const Rational& used) {
    if (i == coords.size()) {
      if (used < r) visit(y);
      return;
    }
    const Rational base = c.at(coords[i]);
    const auto reach = to_int64(ceil_of((r - used) * Rational(den)));
    for (std::int64_t k = -reach; k <= reach; ++k) {
      const Rational step = make_rational(k, den);
      const Rational u = used + abs(step);
      if (!(u < r)) continue;
      y.set(coords[i], base + step);
      rec(i + 1, u);
    }
    y.set(coords[i], base);
  };
  rec(0, Rational(0));
}

inline Json q(const Rational& v) { return io::encode(v); }

}  // namespace detail

struct Suite {
  std::string name;
  Schema schema;
  std::function<std::vector<Json>(const Config&)> generate;
  std::function<Check(const Config&, const Json&)> verify;
};

inline Schema common_schema() {
  using T = KeySpec::Type;
  return {{"seed", {T::Int, "1", {}, {}}}, {"threads", {T::Int, "1", 1, 64}}, {"suite", {T::Text, "any", {}, {}}}};
}

// ---------------------------------------------------------------------------
// density: dense_approximant on random (y, x_1..x_k, eps)

inline Suite density_suite() {
  using T = KeySpec::Type;
  Suite s{"density", common_schema(), {}, {}};
  s.schema.insert({{"count", {T::Int, "1000", 0, 10000000}},
                   {"max_dim", {T::Int, "3", 1, 4}},
                   {"den", {T::Int, "32", 1, 1 << 20}},
                   {"vectors", {T::Int, "3", 1, 8}}});
  s.generate = [](const Config& cfg) {
    std::vector<Json> out;
    const auto den = cfg.integer("den");
    for (std::int64_t id = 0; id < cfg.integer("count"); ++id) {
      Rng rng = detail::instance_rng(cfg.seed(), static_cast<std::uint64_t>(id));
      const auto dim = static_cast<std::size_t>(rng.uniform(1, cfg.integer("max_dim")));
      auto coords = rng.distinct_indices(dim, 4);
      Json j = detail::header("density", static_cast<std::size_t>(id));
      Json xs = Json::array();
      for (std::int64_t i = 0, n = rng.uniform(1, cfg.integer("vectors")); i < n; ++i)
        xs.push_back(io::encode(rng.vector_on(coords, den, Rational(2))));
      j["xs"] = std::move(xs);
      j["y"] = io::encode(rng.functional(coords, 3, den));
      j["eps"] = detail::q(rng.positive(den));
      out.push_back(std::move(j));
    }
    return out;
  };
  s.verify = [](const Config&, const Json& inst) {
    Check c;
    const auto xs = io::decode_list(io::field(inst, "xs"), io::decode_vector);
    const Functional y = io::decode_functional(io::field(inst, "y"));
    const Rational eps = io::decode_rational(io::field(inst, "eps"));
    if (eps <= 0 || linf_norm(y) > 1) throw SchemaError("density instance needs eps > 0 and |y| <= 1");
    auto a = dense_approximant(y, xs, eps);
    c.require(in_dense_sphere(a.w), "approximant is off the unit sphere");
    Rational slack = eps;
    for (std::size_t i = 0; i < xs.size(); ++i) {
      const Rational err = abs(pair(a.w, xs[i]) - pair(y, xs[i]));
      c.require(err < eps, "x_" + std::to_string(i) + ": |w(x) - y(x)| = " + to_text(err) + " >= eps");
      slack = min_of(slack, eps - err);
    }
    const auto code = encode_dense(a.w);
    c.require(equivalent(decode_dense(code), a.w), "approximant does not round-trip through the dense numbering");
    c.margins["min_slack"] = detail::q(slack);
    c.margins["delta"] = detail::q(a.delta);
    c.margins["support"] = a.support.size();
    c.certificate["w"] = io::encode(a.w);
    c.certificate["dense_index"] = io::encode(dense_index(code));
    return c;
  };
  return s;
}

// ---------------------------------------------------------------------------
// slices: local_slice_nbhd + slice_diameter_check on sampled members

inline Suite slices_suite() {
  using T = KeySpec::Type;
  Suite s{"slices", common_schema(), {}, {}};
  s.schema.insert({{"count", {T::Int, "1000", 0, 10000000}},
                   {"max_dim", {T::Int, "3", 1, 4}},
                   {"den", {T::Int, "32", 1, 1 << 20}},
                   {"members", {T::Int, "16", 2, 10000}},
                   {"min_pairs", {T::Int, "100", 0, 100000000}}});
  s.generate = [](const Config& cfg) {
    std::vector<Json> out;
    const auto den = cfg.integer("den");
    const auto want = static_cast<std::size_t>(cfg.integer("members"));
    for (std::int64_t id = 0; id < cfg.integer("count"); ++id) {
      Rng rng = detail::instance_rng(cfg.seed(), static_cast<std::uint64_t>(id));
      while (true) {
        const auto dim = static_cast<std::size_t>(rng.uniform(1, cfg.integer("max_dim")));
        auto coords = rng.distinct_indices(dim, 3);
        SupportVector x;
        do x = rng.vector_on(coords, den, Rational(1));
        while (x.is_zero());
        const Rational r = x.l1_norm() + rng.positive(den, Rational(1, 4));
        const Rational eps = r - x.l1_norm() + x.l1_norm() * rng.positive(4, Rational(1, 2));
        if (!(eps < r)) continue;
        const auto V = local_slice_nbhd(x, r, eps);
        const Rational step = V.radius / Rational(static_cast<std::int64_t>(dim) + 2);
        std::vector<Index> moves = coords;
        moves.emplace_back("0001");  // off the support
        std::vector<SupportVector> samples;
        std::size_t members = 0;
        for (int attempt = 0; attempt < 4000 && members < want; ++attempt) {
          SupportVector y = x;
          for (const auto& t : moves) y.add(t, step * rng.rational(64, Rational(1)));
          if (V.contains(y) && region_membership(HalfOpenAnnulus{r, eps}, y)) {
            samples.push_back(std::move(y));
            ++members;
          }
        }
        if (members < want) continue;
        for (int i = 0; i < 4; ++i) samples.push_back(rng.vector_on(coords, den, Rational(1)));
        Json j = detail::header("slices", static_cast<std::size_t>(id));
        j["x"] = io::encode(x);
        j["r"] = detail::q(r);
        j["eps"] = detail::q(eps);
        j["samples"] = io::encode_list(samples, [](const SupportVector& v) { return io::encode(v); });
        out.push_back(std::move(j));
        break;
      }
    }
    return out;
  };
  s.verify = [](const Config& cfg, const Json& inst) {
    Check c;
    const auto x = io::decode_vector(io::field(inst, "x"));
    const Rational r = io::decode_rational(io::field(inst, "r"));
    const Rational eps = io::decode_rational(io::field(inst, "eps"));
    const auto samples = io::decode_list(io::field(inst, "samples"), io::decode_vector);
    const auto V = local_slice_nbhd(x, r, eps);
    const auto rep = slice_diameter_check(V, r, eps, samples);
    c.require(rep.distance_violations.empty(), std::to_string(rep.distance_violations.size()) + " member pairs farther than 4 eps");
    c.require(rep.tail_violations.empty(), std::to_string(rep.tail_violations.size()) + " members with tail above eps");
    c.require(rep.pairs >= static_cast<std::size_t>(cfg.integer("min_pairs")),
              "only " + std::to_string(rep.pairs) + " member pairs");
    c.margins["members"] = rep.members;
    c.margins["pairs"] = rep.pairs;
    c.margins["max_distance"] = detail::q(rep.max_distance);
    c.margins["bound"] = detail::q(4 * eps);
    c.margins["slack"] = detail::q(4 * eps - rep.max_distance);
    c.margins["max_tail"] = detail::q(rep.max_tail);
    c.certificate["F"] = io::encode_list(std::vector<Index>(V.F.begin(), V.F.end()), [](const Index& t) { return Json(t.bits()); });
    c.certificate["center"] = io::encode(V.center);
    c.certificate["radius"] = detail::q(V.radius);
    return c;
  };
  return s;
}

// ---------------------------------------------------------------------------
// base: exhaustive gap check on every layer plus refinement queries

inline Suite base_suite() {
  using T = KeySpec::Type;
  Suite s{"base", common_schema(), {}, {}};
  s.schema.insert({{"count", {T::Int, "2", 0, 1000}},
                   {"max_dim", {T::Int, "2", 1, 4}},
                   {"radii", {T::RationalList, "1/2, 1/4, 1/8", {}, {}}},
                   {"bound", {T::Rational, "2", {}, {}}},
                   {"queries", {T::Int, "500", 0, 1000000}},
                   {"query_den", {T::Int, "64", 1, 1 << 20}}});
  s.generate = [](const Config& cfg) {
    std::vector<Json> out;
    for (std::int64_t id = 0; id < cfg.integer("count"); ++id) {
      Rng rng = detail::instance_rng(cfg.seed(), static_cast<std::uint64_t>(id));
      const auto dim = static_cast<std::size_t>(1 + id % cfg.integer("max_dim"));
      const auto coords = detail::fixed_coords(dim);
      Json j = detail::header("base", static_cast<std::size_t>(id));
      j["dim"] = dim;
      Json qs = Json::array();
      const auto den = cfg.integer("query_den");
      for (std::int64_t i = 0; i < cfg.integer("queries"); ++i)
        qs.push_back(Json{{"x", io::encode(rng.vector_on(coords, den, cfg.rational("bound") / 2))},
                          {"target", detail::q(rng.positive(den, Rational(1)))}});
      j["queries"] = std::move(qs);
      out.push_back(std::move(j));
    }
    return out;
  };
  s.verify = [](const Config& cfg, const Json& inst) {
    Check c;
    const auto dim = io::natural(io::field(inst, "dim"));
    LatticeBase base(detail::fixed_coords(dim), detail::lattice_config(cfg));
    std::size_t pairs = 0;
    std::optional<Rational> slack;
    for (const auto& L : base.layers()) {
      auto rep = exhaustive_gap_check(base, L);
      pairs += rep.pairs;
      c.require(rep.passed(), "layer " + std::to_string(L.id) + ": " + std::to_string(rep.violations.size()) + " gap violations");
      if (rep.pairs > 0) {
        const Rational sl = rep.min_gap - Rational(1) / Rational(L.k);
        if (!slack || sl < *slack) slack = sl;
      }
    }
    std::size_t answered = 0;
    for (const auto& qj : io::field(inst, "queries")) {
      const auto x = io::decode_vector(io::field(qj, "x"));
      const Rational target = io::decode_rational(io::field(qj, "target"));
      auto ball = base.lookup(x, target);
      const bool ok = l1_distance(x, base.center(ball)) < base.radius(ball) && 2 * base.radius(ball) <= target;
      c.require(ok, "query " + std::to_string(answered) + " not refined");
      ++answered;
    }
    c.margins["layers"] = base.layers().size();
    c.margins["pairs"] = pairs;
    c.margins["min_gap_over_inv_k"] = slack ? detail::q(*slack) : Json();
    c.margins["queries"] = answered;
    c.certificate["modulus"] = base.modulus();
    c.certificate["k"] = io::encode_list(base.layers(), [](const BaseLayer& L) { return io::encode(L.k); });
    return c;
  };
  return s;
}

// ---------------------------------------------------------------------------
// discreteness: every (layer, annulus, half-space) triple against grid probes

inline Suite discreteness_suite() {
  using T = KeySpec::Type;
  Suite s{"discreteness", common_schema(), {}, {}};
  s.schema.insert({{"max_dim", {T::Int, "2", 1, 4}},
                   {"radii", {T::RationalList, "1/2, 1/4, 1/8", {}, {}}},
                   {"bound", {T::Rational, "2", {}, {}}},
                   {"annuli", {T::Int, "4", 0, 1000}},
                   {"half_spaces", {T::Int, "2", 0, 1000}},
                   {"grid_den", {T::Int, "16", 1, 256}}});
  s.generate = [](const Config& cfg) {
    std::vector<Json> out;
    std::size_t id = 0;
    for (std::int64_t dim = 1; dim <= cfg.integer("max_dim"); ++dim) {
      LatticeBase base(detail::fixed_coords(static_cast<std::size_t>(dim)), detail::lattice_config(cfg));
      for (const auto& L : base.layers())
        for (std::int64_t i = 1; i <= cfg.integer("annuli"); ++i)
          for (std::int64_t h = 0; h < cfg.integer("half_spaces"); ++h, ++id) {
            Rng rng = detail::instance_rng(cfg.seed(), id);
            const Rational level = Rational(i) / Rational(10 * L.k);
            // phi peaks on a lattice coordinate and 1/margin <= 1/10k, so the hull is a
            // band of width at least 1/10k
            StepFunctional phi = rng.sphere_step_functional(2, 4);
            while (std::none_of(base.coords().begin(), base.coords().end(), [&](const Index& t) {
              SupportVector e;
              e.set(t, Rational(1));
              return abs(pair(phi, e)) == 1;
            }))
              phi = rng.sphere_step_functional(2, 4);
            const auto k = L.k.convert_to<std::int64_t>();
            auto hs = make_half_space(std::move(phi), BigInt(rng.uniform(10 * k, 40 * k)), level);
            Json j = detail::header("discreteness", id);
            j["dim"] = dim;
            j["layer"] = L.id;
            j["i"] = io::encode(BigInt(i));
            j["half_space"] = io::encode(hs);
            out.push_back(std::move(j));
          }
    }
    return out;
  };
  s.verify = [](const Config& cfg, const Json& inst) {
    Check c;
    const auto dim = io::natural(io::field(inst, "dim"));
    LatticeBase base(detail::fixed_coords(dim), detail::lattice_config(cfg));
    const auto layer = io::natural(io::field(inst, "layer"));
    if (layer < 1 || layer > base.layers().size()) throw SchemaError("layer out of range");
    const BigInt i = io::decode_bigint(io::field(inst, "i"));
    const auto hs = io::decode_half_space(io::field(inst, "half_space"));
    const auto L = base.layer(layer);
    // grid spacing 1/(grid_den k) tracks the hull radius (i+2)/10k
    const auto den = cfg.integer("grid_den") * L.k.convert_to<std::int64_t>();
    const auto span = to_int64(ceil_of(layer_annulus(base, layer, i).upper() * Rational(den)));
    std::vector<SupportVector> hull;
    for (const auto& p : detail::grid(base.coords(), den, span))
      if (in_probe_hull(base, layer, hs, i, p)) hull.push_back(p);
    auto rep = discreteness_verify(base, layer, hs, i, hull);
    c.require(rep.max_count <= 1, std::to_string(rep.violations.size()) + " probes meet two or more elements");
    const Rational chain = Rational(4) / Rational(5 * L.k), inv_k = Rational(1) / Rational(L.k);
    c.require(chain < inv_k && inv_k < L.gap(), "chain 4/5k < 1/k < gap fails");
    c.margins["grid_den"] = den;
    c.margins["probes"] = rep.probes;
    c.margins["feasibility_calls"] = rep.feasibility_calls;
    c.margins["max_count"] = rep.max_count;
    c.margins["chain_diam"] = detail::q(chain);
    c.margins["inv_k"] = detail::q(inv_k);
    c.margins["gap"] = detail::q(L.gap());
    c.certificate["counts"] = rep.counts;
    Json viol = Json::array();
    for (const auto& v : rep.violations) {
      Json w = Json::array();
      for (const auto& x : v.witnesses) w.push_back(io::encode(x));
      viol.push_back(Json{{"probe", io::encode(hull[v.probe])}, {"witnesses", std::move(w)}});
    }
    c.certificate["violations"] = std::move(viol);
    return c;
  };
  return s;
}

// ---------------------------------------------------------------------------
// cover: knetwork_cover on compact (K, U) pairs, audited and grid-checked

inline Suite cover_suite() {
  using T = KeySpec::Type;
  Suite s{"cover", common_schema(), {}, {}};
  s.schema.insert({{"count", {T::Int, "200", 0, 10000000}},
                   {"max_dim", {T::Int, "3", 1, 4}},
                   {"max_points", {T::Int, "8", 1, 1000}},
                   {"den", {T::Int, "8", 1, 1 << 20}},
                   {"radii", {T::RationalList, "1/2, 1/4, 1/8", {}, {}}},
                   {"bound", {T::Rational, "2", {}, {}}},
                   {"grid_den", {T::Int, "16", 1, 256}}});
  s.generate = [](const Config& cfg) {
    std::vector<Json> out;
    const auto den = cfg.integer("den");
    for (std::int64_t id = 0; id < cfg.integer("count"); ++id) {
      Rng rng = detail::instance_rng(cfg.seed(), static_cast<std::uint64_t>(id));
      const auto dim = static_cast<std::size_t>(rng.uniform(1, cfg.integer("max_dim")));
      const auto coords = detail::fixed_coords(dim);
      std::vector<SupportVector> K;
      for (std::int64_t p = 0, n = rng.uniform(1, cfg.integer("max_points")); p < n; ++p)
        K.push_back(rng.vector_on(coords, den, Rational(1, 2)));
      SupportVector center = rng.coin() ? SupportVector{} : rng.vector_on(coords, den, Rational(1, 2));
      std::vector<Strip> strips;
      for (std::int64_t k = 0, n = rng.uniform(0, 2); k < n; ++k) {
        Functional f = rng.functional(coords, 2, 4);
        Rational worst(0);
        for (const auto& x : K) worst = max_of(worst, abs(pair(f, x - center)));
        strips.push_back({f, worst + rng.positive(8, Rational(1, 2))});
      }
      WeakNbhd U(center, strips);
      for (const auto& x : K)
        if (!nbhd_contains(U, x)) throw std::logic_error("cover generator: K not inside U");
      Json j = detail::header("cover", static_cast<std::size_t>(id));
      j["dim"] = dim;
      j["K"] = io::encode_list(K, [](const SupportVector& v) { return io::encode(v); });
      j["U"] = io::encode(U);
      out.push_back(std::move(j));
    }
    return out;
  };
  s.verify = [](const Config& cfg, const Json& inst) {
    Check c;
    const auto dim = io::natural(io::field(inst, "dim"));
    LatticeBase base(detail::fixed_coords(dim), detail::lattice_config(cfg));
    const auto K = io::decode_list(io::field(inst, "K"), io::decode_vector);
    const WeakNbhd U = io::decode_nbhd(io::field(inst, "U"));
    CoverResult cover;
    try {
      cover = knetwork_cover(base, K, U);
    } catch (const PointOutsideNbhd& e) {
      c.require(false, e.what());
      return c;
    }
    for (const auto& p : audit_cover(base, K, U, cover)) c.require(false, p);
    std::size_t grid_points = 0, outside = 0;
    const auto den = cfg.integer("grid_den");
    for (const auto& e : cover.elements) {
      const BaseBallId& ball = element_ball(e);
      detail::grid_in_ball(base.coords(), base.center(ball), base.radius(ball), den, [&](const SupportVector& y) {
        if (!element_membership(base, e, y)) return;
        ++grid_points;
        if (!nbhd_contains(U, y)) ++outside;
      });
    }
    c.require(outside == 0, std::to_string(outside) + " grid points of the cover lie outside U");
    BigInt i0 = 0, m0 = 0;
    for (const auto& [n, v] : cover.i0) i0 = std::max(i0, v);
    for (const auto& [n, v] : cover.m0) m0 = std::max(m0, v);
    c.margins["elements"] = cover.elements.size();
    c.margins["n0"] = cover.n0;
    c.margins["i0"] = io::encode(i0);
    c.margins["m0_digits"] = m0.str().size();
    c.margins["grid_points"] = grid_points;
    c.certificate["elements"] = io::encode_list(cover.elements, [](const NetworkElementId& e) { return io::encode(e); });
    Json certs = Json::array();
    for (const auto& ce : cover.certificates)
      certs.push_back(Json{{"point", ce.point}, {"element", ce.element}, {"rho", ce.rho ? detail::q(*ce.rho) : Json()}});
    c.certificate["certificates"] = std::move(certs);
    return c;
  };
  return s;
}

// ---------------------------------------------------------------------------
// ccx-claim: claim_verify on weakly convergent sequences in C_c(X)

inline Suite ccx_suite() {
  using T = KeySpec::Type;
  Suite s{"ccx-claim", common_schema(), {}, {}};
  s.schema.insert({{"count", {T::Int, "200", 0, 10000000}},
                   {"max_spokes", {T::Int, "3", 1, 16}},
                   {"length", {T::Int, "60", 1, 100000}},
                   {"samples", {T::Int, "100", 0, 1000000}},
                   {"union_cap", {T::Int, "16", 1, 1000000}},
                   {"m_max", {T::Int, "64", 1, 1000000}},
                   {"k_max", {T::Int, "1000", 1, 100000000}}});
  s.generate = [](const Config& cfg) {
    std::vector<Json> out;
    for (std::int64_t id = 0; id < cfg.integer("count"); ++id) {
      Rng rng = detail::instance_rng(cfg.seed(), static_cast<std::uint64_t>(id));
      auto X = random_space(rng, cfg.integer("max_spokes"));
      auto f0 = random_function(rng, X, Rational(2));
      std::vector<ccx::MeasureRep> mus;
      for (std::int64_t i = 0, n = rng.uniform(1, 3); i < n; ++i) mus.push_back(random_measure(rng, X));
      auto fs = weakly_convergent_sequence(rng, X, f0, static_cast<std::size_t>(cfg.integer("length")));
      Json j = detail::header("ccx-claim", static_cast<std::size_t>(id));
      j["X"] = io::encode(X);
      j["f0"] = io::encode(f0);
      j["fs"] = io::encode_list(fs, [](const ccx::FunctionRep& f) { return io::encode(f); });
      j["mus"] = io::encode_list(mus, [](const ccx::MeasureRep& m) { return io::encode(m); });
      j["eps"] = detail::q(rng.positive(8, Rational(1)));
      j["sample_seed"] = rng.next() >> 1;
      out.push_back(std::move(j));
    }
    return out;
  };
  s.verify = [](const Config& cfg, const Json& inst) {
    Check c;
    const auto X = io::decode_space(io::field(inst, "X"));
    const auto f0 = io::decode_function(io::field(inst, "f0"));
    const auto fs = io::decode_list(io::field(inst, "fs"), io::decode_function);
    const auto mus = io::decode_list(io::field(inst, "mus"), io::decode_measure);
    const Rational eps = io::decode_rational(io::field(inst, "eps"));
    try {
      f0.validate(X);
      for (const auto& f : fs) f.validate(X);
      for (const auto& mu : mus) mu.validate(X);
    } catch (const std::invalid_argument& e) {
      throw SchemaError(e.what());
    }
    ccx::ClaimConfig cc{cfg.integer("m_max"), static_cast<std::size_t>(cfg.integer("k_max")),
                        static_cast<std::size_t>(cfg.integer("union_cap"))};
    const auto res = ccx::claim_verify(X, f0, fs, mus, eps, cc);
    if (!res.bound.found) {
      Json ev = Json::array();
      for (const auto& v : res.bound.evidence)
        ev.push_back(Json{{"m", v.m}, {"i", v.i}, {"point", io::encode(v.point)}, {"value", detail::q(v.value)}});
      c.certificate["evidence"] = ev;
      c.margins["evidence"] = std::move(ev);
      c.require(false, "no uniform bound: the sequence is not bounded on the compact chain");
      return c;
    }
    const auto& A = res.element->A;
    c.require(res.f0_in_A, "f0 is not in A");
    // budget identity, recomputed from the terms
    Rational worst_interval(0), worst_tail(0);
    for (const auto& b : res.element->budget) {
      c.require(b.interval_term < eps / 3, "interval term reaches eps/3");
      c.require(b.tail_term < 2 * eps / 3, "tail term reaches 2 eps/3");
      c.require(b.interval_term + b.tail_term < eps, "budget exceeds eps");
      worst_interval = max_of(worst_interval, b.interval_term);
      worst_tail = max_of(worst_tail, b.tail_term);
    }
    c.require(res.budget_holds, "budget flag is false");
    // minimal tail index by scan
    const std::size_t N = res.tail_index;
    for (std::size_t n = N; n <= fs.size(); ++n) c.require(A.contains(fs[n - 1]), "f_" + std::to_string(n) + " is past the tail index but not in A");
    if (N > 1) c.require(!A.contains(fs[N - 2]), "tail index is not minimal");
    // sampled members land in W
    Rng rng(io::natural(io::field(inst, "sample_seed")));
    std::size_t in_w = 0;
    const auto samples = cfg.integer("samples");
    for (std::int64_t k = 0; k < samples; ++k) {
      auto f = sample_member(rng, X, A);
      c.require(A.contains(f), "sampled member " + std::to_string(k) + " is not in A");
      if (ccx::in_standard_nbhd(mus, eps, f0, f)) ++in_w;
    }
    c.require(in_w == static_cast<std::size_t>(samples), std::to_string(samples - static_cast<std::int64_t>(in_w)) + " sampled members outside W");
    c.margins["m"] = res.bound.m;
    c.margins["k"] = res.bound.k;
    c.margins["tail_index"] = N;
    c.margins["interval_slack"] = detail::q(eps / 3 - worst_interval);
    c.margins["tail_slack"] = detail::q(2 * eps / 3 - worst_tail);
    c.margins["samples_in_W"] = in_w;
    c.certificate["A"] = io::encode(A);
    Json budgets = Json::array();
    for (const auto& b : res.element->budget)
      budgets.push_back(Json{{"F_size", b.F_size}, {"norm", detail::q(b.norm)}, {"diameter", detail::q(b.diameter)},
                             {"tail", detail::q(b.tail)}, {"interval_term", detail::q(b.interval_term)},
                             {"tail_term", detail::q(b.tail_term)}});
    c.certificate["budget"] = std::move(budgets);
    return c;
  };
  return s;
}

// ---------------------------------------------------------------------------
// alpha4: greedy diagonals on metric arrays, separating cuts on the fan

inline Suite alpha4_suite() {
  using T = KeySpec::Type;
  Suite s{"alpha4", common_schema(), {}, {}};
  s.schema.insert({{"count", {T::Int, "1000", 0, 10000000}},
                   {"fan_candidates", {T::Int, "144", 0, 10000000}},
                   {"window", {T::Int, "200", 1, 1000000}},
                   {"budget", {T::Int, "16", 0, 1000000}}});
  s.generate = [](const Config& cfg) {
    std::vector<Json> out;
    std::size_t id = 0;
    for (std::int64_t i = 0; i < cfg.integer("count"); ++i, ++id) {
      Rng rng = detail::instance_rng(cfg.seed(), id);
      seq::MetricArray arr;
      arr.limit = rng.rational(8, Rational(3));
      arr.a = rng.rational(6, Rational(4));
      arr.p = static_cast<unsigned>(rng.uniform(0, 3));
      arr.b = rng.uniform(0, 3);
      arr.c = rng.uniform(0, 5);
      Json j = detail::header("alpha4", id);
      j["model"] = "metric";
      j["array"] = io::encode(arr);
      out.push_back(std::move(j));
    }
    const auto family = seq::candidate_family(1000);
    for (std::int64_t i = 0; i < cfg.integer("fan_candidates"); ++i, ++id) {
      Rng rng = detail::instance_rng(cfg.seed(), id);
      auto cand = family[static_cast<std::size_t>(i) % family.size()];
      if (static_cast<std::size_t>(i) >= family.size())
        for (int k = 0; k < 3; ++k) cand.n.overrides[static_cast<std::uint64_t>(rng.uniform(1, 30))] = rng.uniform(1, 60);
      Json j = detail::header("alpha4", id);
      j["model"] = "fan";
      j["candidate"] = io::encode(cand);
      out.push_back(std::move(j));
    }
    return out;
  };
  s.verify = [](const Config& cfg, const Json& inst) {
    Check c;
    const auto window = static_cast<std::uint64_t>(cfg.integer("window"));
    const std::string model = io::text(io::field(inst, "model"));
    if (model == "metric") {
      const auto arr = io::decode_metric_array(io::field(inst, "array"));
      auto res = seq::alpha4_check(arr, static_cast<std::size_t>(cfg.integer("budget")), window);
      c.require(res.verdict == seq::Alpha4Verdict::Certified, "no certified diagonal: " + seq::to_string(res.verdict));
      c.margins["verdict"] = seq::to_string(res.verdict);
      c.margins["attempted"] = res.attempted;
      if (res.certificate) c.margins["max_scaled"] = detail::q(res.certificate->max_scaled);
      if (res.diagonal) c.certificate["diagonal"] = io::encode(*res.diagonal);
    } else if (model == "fan") {
      const auto cand = io::decode_candidate(io::field(inst, "candidate"));
      try {
        cand.validate();
      } catch (const std::invalid_argument& e) {
        throw SchemaError(e.what());
      }
      auto res = seq::alpha4_check_fan({cand}, window);
      const auto& r = res.refutations.front();
      c.require(r.apex_inside, "apex not in the separating neighborhood");
      c.require(r.all_excluded, "a candidate point lies in the separating neighborhood");
      c.margins["verdict"] = seq::to_string(res.verdict);
      c.margins["exceptions"] = r.nbhd.exceptions.size();
      c.margins["window"] = window;
      c.certificate["nbhd"] = io::encode(r.nbhd);
    } else {
      throw SchemaError("alpha4 model must be 'metric' or 'fan'");
    }
    return c;
  };
  return s;
}

// ---------------------------------------------------------------------------
// csstar-point: T(x) from the SpaceX tails network against convergent sequences

inline Suite csstar_suite() {
  using T = KeySpec::Type;
  Suite s{"csstar-point", common_schema(), {}, {}};
  s.schema.insert({{"count", {T::Int, "300", 0, 10000000}}, {"depth", {T::Int, "40", 1, 100000}}});
  s.generate = [](const Config& cfg) {
    std::vector<Json> out;
    const auto depth = cfg.integer("depth");
    for (std::int64_t id = 0; id < cfg.integer("count"); ++id) {
      Rng rng = detail::instance_rng(cfg.seed(), static_cast<std::uint64_t>(id));
      auto X = random_space(rng);
      ccx::PointId x;
      const auto kind = rng.uniform(0, 2);
      if (kind == 2 && X.isolated() > 0)
        x = ccx::PointId::isolated(static_cast<std::size_t>(rng.uniform(0, static_cast<std::int64_t>(X.isolated()) - 1)));
      else if (kind == 1)
        x = random_point(rng, X, 20);
      else
        x = ccx::PointId::limit(static_cast<std::size_t>(rng.uniform(0, static_cast<std::int64_t>(X.spokes()) - 1)));
      seq::SequenceX sq;
      for (int i = 0; i < 4; ++i) sq.prefix.push_back(random_point(rng, X, 30));
      if (x.kind == ccx::PointId::Kind::Limit) {
        for (std::int64_t i = 0, n = rng.uniform(1, 3); i < n; ++i) {
          if (rng.uniform(0, 3) == 0) sq.streams.push_back({true, x, 0, {}});
          else
            sq.streams.push_back({false, {}, x.s,
                                  seq::IntRule::poly({Rational(rng.uniform(0, 9)), make_rational(rng.uniform(1, 4), rng.uniform(1, 3))})});
        }
      } else {
        sq.streams.push_back({true, x, 0, {}});
      }
      ccx::DSet U = ccx::DSet::points({x, random_point(rng, X, 30)});
      if (x.kind == ccx::PointId::Kind::Limit) U = U.unite(ccx::DSet::tail(x.s, static_cast<std::uint64_t>(rng.uniform(1, depth))));
      Json j = detail::header("csstar-point", static_cast<std::size_t>(id));
      j["X"] = io::encode(X);
      j["x"] = io::encode(x);
      j["sequence"] = io::encode(sq);
      j["U"] = io::encode(U);
      out.push_back(std::move(j));
    }
    return out;
  };
  s.verify = [](const Config& cfg, const Json& inst) {
    Check c;
    const auto X = io::decode_space(io::field(inst, "X"));
    const auto x = io::decode_point(io::field(inst, "x"));
    const auto sq = io::decode_sequence(io::field(inst, "sequence"));
    const auto U = io::decode_dset(io::field(inst, "U"));
    if (!X.valid(x)) throw SchemaError("point is not in the space");
    const auto T = seq::csstar_at_point(seq::spacex_tails_network(X), x, static_cast<std::uint64_t>(cfg.integer("depth")));
    std::size_t widest = 0;
    for (const auto& layer : T.layers) widest = std::max(widest, layer.size());
    c.require(seq::converges_to(sq, x), "sequence does not converge to x");
    c.require(seq::is_neighborhood(U, x), "U is not a neighborhood of x");
    const auto cap = seq::capture_check(T, sq, U);
    c.require(cap.captured, "no member of T(x) inside U captures infinitely many terms");
    c.margins["T_size"] = T.size();
    c.margins["widest_layer"] = widest;
    c.margins["capture_layer"] = cap.layer;
    if (cap.member) c.certificate["member"] = io::encode(*cap.member);
    return c;
  };
  return s;
}

/// Every suite by name; generator kinds also accept the instance-type names.
inline const std::map<std::string, Suite>& suites() {
  static const std::map<std::string, Suite> all = [] {
    std::map<std::string, Suite> m;
    for (auto s : {density_suite(), slices_suite(), base_suite(), discreteness_suite(), cover_suite(), ccx_suite(),
                   alpha4_suite(), csstar_suite()})
      m.emplace(s.name, std::move(s));
    return m;
  }();
  return all;
}

inline const Suite& find_suite(const std::string& name) {
  static const std::map<std::string, std::string> aliases{{"compact-in-nbhd", "cover"},
                                                          {"weakly-convergent-sequence", "ccx-claim"},
                                                          {"metric-array", "alpha4"}};
  auto a = aliases.find(name);
  const std::string key = a == aliases.end() ? name : a->second;
  auto it = suites().find(key);
  if (it == suites().end()) throw ConfigError("unknown suite or kind '" + name + "'");
  return it->second;
}

inline Config load_config(const Suite& suite, const std::string& text) {
  Config cfg = Config::parse(text, suite.schema);
  const auto& named = cfg.text("suite");
  if (named != "any" && named != suite.name) throw ConfigError("config is for suite '" + named + "', not '" + suite.name + "'");
  return cfg;
}

/// Verifies one instance; library errors on a schema-valid instance become failures.
inline Record verify_instance(const Suite& suite, const Config& cfg, const Json& inst) {
  if (!inst.is_object() || io::text(io::field(inst, "kind")) != suite.name)
    throw SchemaError("instance kind does not match suite '" + suite.name + "'");
  io::natural(io::field(inst, "id"));
  Check c;
  const double secs = timed([&] {
    try {
      c = suite.verify(cfg, inst);
    } catch (const SchemaError&) {
      throw;
    } catch (const std::exception& e) {
      c = Check{};
      c.require(false, std::string("error: ") + e.what());
    }
  });
  Record r = make_record(suite.name, inst, c);
  r.seconds = secs;
  return r;
}

inline std::vector<Record> run_suite(const Suite& suite, const Config& cfg, const std::vector<Json>& instances) {
  return parallel_map<Record>(instances.size(), static_cast<std::size_t>(cfg.integer("threads")),
                              [&](std::size_t i) { return verify_instance(suite, cfg, instances[i]); });
}

/// Report body: one record per instance in id order, then a summary line
/// echoing the config. Thread count is left out so the bytes depend only on
/// the instances and the config.
inline std::string render_report(const Suite& suite, const Config& cfg, const std::vector<Record>& records) {
  std::string body;
  std::size_t failed = 0;
  for (const auto& r : records) {
    body += r.body.dump() + "\n";
    if (!r.pass) ++failed;
  }
  Json summary = Json::object();
  summary["suite"] = suite.name;
  summary["summary"] = true;
  summary["instances"] = records.size();
  summary["passed"] = records.size() - failed;
  summary["failed"] = failed;
  Json echo = Json::object();
  for (const auto& [k, v] : cfg.values())
    if (k != "threads") echo[k] = v;
  summary["config"] = std::move(echo);
  return body + summary.dump() + "\n";
}

}  // namespace weaknet::harness
