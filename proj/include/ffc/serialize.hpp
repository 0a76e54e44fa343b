#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "ci_ring.hpp"
#include "dg_module.hpp"
#include "exterior.hpp"
#include "field.hpp"
#include "free_complex.hpp"
#include "laurent.hpp"
#include "resolution.hpp"
#include "sparse.hpp"

// Versioned JSON for every on-disk artifact.  Coefficients are always decimal
// strings (rationals as "num/den") so files are independent of the word size;
// keys are emitted in sorted order, so dump() output is canonical and
// round-trips are bit-exact.

namespace ffc {

inline constexpr int kSchemaVersion = 1;

using json = nlohmann::json;

namespace detail {

inline void check_version(const json& j, const char* what)
{
    if (!j.is_object() || j.value("v", -1) != kSchemaVersion)
        throw std::invalid_argument(std::string(what) + ": unsupported schema");
}

template <class F>
void check_char(const F& f, const json& j, const char* what)
{
    if (j.value("char", std::uint64_t(1)) != f.info().characteristic)
        throw std::invalid_argument(std::string(what) + ": characteristic mismatch");
}

} // namespace detail

// {v, rows, cols, char, triplets: [[r, c, "coeff"], ...]}
template <class F>
json matrix_to_json(const F& f, const SparseMatrix<F>& a)
{
    json trip = json::array();
    for (const auto& t : a.entries) trip.push_back(json::array({t.r, t.c, f.to_string(t.v)}));
    return json{{"v", kSchemaVersion},
                {"rows", a.rows},
                {"cols", a.cols},
                {"char", f.info().characteristic},
                {"triplets", std::move(trip)}};
}

template <class F>
SparseMatrix<F> matrix_from_json(const F& f, const json& j)
{
    detail::check_version(j, "matrix_from_json");
    detail::check_char(f, j, "matrix_from_json");
    SparseMatrix<F> a{j.at("rows").get<int>(), j.at("cols").get<int>(), {}};
    for (const auto& t : j.at("triplets"))
        a.entries.push_back(
            {t.at(0).get<int>(), t.at(1).get<int>(), f.from_string(t.at(2).get<std::string>())});
    return a;
}

// {"exp": "coeff", ...} with the packed exponent word as a decimal key
template <class R>
json poly_to_json(const R& ring, const typename R::Elem& x)
{
    json j = json::object();
    for (const auto& [m, c] : x.terms) j[std::to_string(m)] = ring.field().to_string(c);
    return j;
}

template <class R>
typename R::Elem poly_from_json(const R& ring, const json& j)
{
    typename R::Elem x;
    if (!j.is_object()) throw std::invalid_argument("poly_from_json: expected an object");
    for (const auto& [k, v] : j.items())
        x = ring.add(x, ring.monomial(std::stoull(k), ring.field().from_string(v)));
    return x;
}

// {v, d, char, coeffs: {"mask": "coeff"}}
template <class F>
json exterior_to_json(const ExteriorAlgebra<F>& a, const ExteriorElement<F>& x)
{
    json c = json::object();
    for (const auto& [m, v] : x.terms) c[std::to_string(m)] = a.field().to_string(v);
    return json{{"v", kSchemaVersion},
                {"d", a.generators()},
                {"char", a.field().info().characteristic},
                {"coeffs", std::move(c)}};
}

template <class F>
ExteriorElement<F> exterior_from_json(const ExteriorAlgebra<F>& a, const json& j)
{
    detail::check_version(j, "exterior_from_json");
    detail::check_char(a.field(), j, "exterior_from_json");
    if (j.at("d").get<int>() != a.generators())
        throw std::invalid_argument("exterior_from_json: generator count mismatch");
    ExteriorElement<F> x;
    for (const auto& [k, v] : j.at("coeffs").items()) {
        auto c = a.field().from_string(v);
        if (!a.field().is_zero(c)) x.terms[static_cast<Mask>(std::stoul(k))] = c;
    }
    return x;
}

// {v, char, exponents: [...]} / {v, char, d, gdeg}
template <class F>
json ring_to_json(const MonomialCIRing<F>& r)
{
    return json{{"v", kSchemaVersion},
                {"char", r.field().info().characteristic},
                {"exponents", r.exponents()}};
}

template <class F>
json ring_to_json(const GradedPolyRing<F>& r)
{
    return json{{"v", kSchemaVersion},
                {"char", r.field().info().characteristic},
                {"d", r.vars()},
                {"gdeg", r.generator_degree()}};
}

template <class F>
MonomialCIRing<F> ci_ring_from_json(const F& f, const json& j)
{
    detail::check_version(j, "ci_ring_from_json");
    detail::check_char(f, j, "ci_ring_from_json");
    return MonomialCIRing<F>(f, j.at("exponents").get<std::vector<int>>());
}

template <class F>
GradedPolyRing<F> poly_ring_from_json(const F& f, const json& j)
{
    detail::check_version(j, "poly_ring_from_json");
    detail::check_char(f, j, "poly_ring_from_json");
    return GradedPolyRing<F>(f, j.at("d").get<int>(), j.at("gdeg").get<int>());
}

// {v, ring, range: [lo, hi], ranks, gdegs?, diffs: [[[r, c, {poly}], ...], ...]}
template <class R>
json complex_to_json(const FreeComplex<R>& x)
{
    const R& ring = x.ring();
    json ranks = json::array(), gdegs = json::array(), diffs = json::array();
    for (int i = x.lo(); i <= x.hi(); ++i) {
        ranks.push_back(x.rank_at(i));
        if (x.graded()) gdegs.push_back(x.gdegs_at(i));
        if (i > x.lo()) {
            json d = json::array();
            for (const auto& e : x.diff_at(i).entries)
                d.push_back(json::array({e.r, e.c, poly_to_json(ring, e.v)}));
            diffs.push_back(std::move(d));
        }
    }
    json j{{"v", kSchemaVersion},
           {"ring", ring_to_json(ring)},
           {"range", json::array({x.lo(), x.hi()})},
           {"ranks", std::move(ranks)},
           {"diffs", std::move(diffs)}};
    if (x.graded()) j["gdegs"] = std::move(gdegs);
    return j;
}

template <class R>
FreeComplex<R> complex_from_json(const R& ring, const json& j)
{
    detail::check_version(j, "complex_from_json");
    if (j.at("ring") != ring_to_json(ring))
        throw std::invalid_argument("complex_from_json: ring descriptor mismatch");
    auto ranks = j.at("ranks").get<std::vector<long>>();
    int lo = j.at("range").at(0).get<int>();
    std::vector<RMat<R>> diffs;
    for (std::size_t k = 0; k + 1 < ranks.size(); ++k) {
        std::vector<typename RMat<R>::Entry> es;
        for (const auto& e : j.at("diffs").at(k))
            es.push_back(
                {e.at(0).get<long>(), e.at(1).get<long>(), poly_from_json(ring, e.at(2))});
        diffs.push_back(rmat_make(ring, ranks[k], ranks[k + 1], std::move(es)));
    }
    std::vector<std::vector<int>> gdegs;
    if (j.contains("gdegs")) gdegs = j.at("gdegs").get<std::vector<std::vector<int>>>();
    return make_free_complex(ring, lo, std::move(ranks), std::move(diffs), std::move(gdegs));
}

// {v, values, truncation, trusted_upto}
inline json betti_to_json(const BettiTable& b)
{
    return json{{"v", kSchemaVersion},
                {"values", b.values},
                {"truncation", b.truncation},
                {"trusted_upto", b.trusted_upto}};
}

inline BettiTable betti_from_json(const json& j)
{
    detail::check_version(j, "betti_from_json");
    return {j.at("values").get<std::vector<long>>(), j.at("truncation").get<int>(),
            j.at("trusted_upto").get<int>()};
}

// {v, numerator: {"exp": "coeff"}, complexity, betti_deg: "num/den"}
inline json poincare_to_json(const PoincareData& p)
{
    json num = json::object();
    for (const auto& [e, c] : p.numerator.coeffs()) num[std::to_string(e)] = c.get_str();
    return json{{"v", kSchemaVersion},
                {"numerator", std::move(num)},
                {"complexity", p.complexity},
                {"betti_deg", p.betti_deg.get_str()}};
}

inline PoincareData poincare_from_json(const json& j)
{
    detail::check_version(j, "poincare_from_json");
    PoincareData p;
    for (const auto& [k, v] : j.at("numerator").items())
        p.numerator.set(std::stoi(k), mpz_class(v.get<std::string>()));
    p.complexity = j.at("complexity").get<int>();
    p.betti_deg = mpq_class(j.at("betti_deg").get<std::string>());
    p.betti_deg.canonicalize();
    return p;
}

// {v, generators: [[index, stratum], ...], complex} — the bigraded generator
// table alongside the sparse differential
template <class F>
json dg_to_json(const DGModule<F>& g)
{
    json gens = json::array();
    for (int n = g.cx.lo(); n <= g.cx.hi(); ++n)
        for (int s : g.cx.gdegs_at(n)) gens.push_back(json::array({n, s}));
    return json{
        {"v", kSchemaVersion}, {"generators", std::move(gens)}, {"complex", complex_to_json(g.cx)}};
}

template <class F>
DGModule<F> dg_from_json(const GradedPolyRing<F>& ring, const json& j)
{
    detail::check_version(j, "dg_from_json");
    DGModule<F> g{complex_from_json(ring, j.at("complex"))};
    if (!g.cx.graded()) throw std::invalid_argument("dg_from_json: generator strata required");
    return g;
}

} // namespace ffc
