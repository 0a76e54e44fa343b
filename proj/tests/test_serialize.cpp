#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "ffc/dg_module.hpp"
#include "ffc/koszul.hpp"
#include "ffc/resolution.hpp"
#include "ffc/serialize.hpp"

using namespace ffc;

TEST_CASE("matrix round-trip is bit-exact over GF(p) and the rationals")
{
    GF f(101);
    std::mt19937 rng(7);
    SparseMatrix<GF> a{9, 13, {}};
    for (int k = 0; k < 40; ++k) // positions distinct: lcm(9, 13) > 40
        a.entries.push_back({k % 9, (5 * k) % 13, f.from_int(static_cast<long long>(rng() % 1000))});
    auto j = matrix_to_json(f, a);
    auto b = matrix_from_json(f, j);
    CHECK(j.dump() == matrix_to_json(f, b).dump());
    CHECK(rank(f, a) == rank(f, b));

    QQ q;
    SparseMatrix<QQ> c{2, 2, {{0, 0, mpq_class(22, 7)}, {1, 1, mpq_class(-3, 5)}}};
    auto jq = matrix_to_json(q, c);
    CHECK(jq["triplets"][0][2] == "22/7");
    CHECK(jq.dump() == matrix_to_json(q, matrix_from_json(q, jq)).dump());

    CHECK_THROWS(matrix_from_json(GF(7), j)); // characteristic mismatch
    auto bad = j;
    bad["v"] = 99;
    CHECK_THROWS(matrix_from_json(f, bad));
}

TEST_CASE("polynomial and ring descriptor round-trips")
{
    GF f(5);
    MonomialCIRing<GF> r(f, {2, 3});
    auto x = r.add(r.variable(0), r.mul(r.variable(1), r.variable(1)));
    auto j = poly_to_json(r, x);
    CHECK(poly_from_json(r, j) == x);
    CHECK(poly_to_json(r, poly_from_json(r, j)).dump() == j.dump());

    auto jr = ring_to_json(r);
    CHECK(jr["exponents"] == std::vector<int>{2, 3});
    auto r2 = ci_ring_from_json(f, jr);
    CHECK(ring_to_json(r2).dump() == jr.dump());

    GradedPolyRing<GF> p(f, 3, 2);
    auto jp = ring_to_json(p);
    auto p2 = poly_ring_from_json(f, jp);
    CHECK(ring_to_json(p2).dump() == jp.dump());
    CHECK_THROWS(ci_ring_from_json(f, jp));     // wrong shape
    CHECK_THROWS(poly_ring_from_json(GF(7), jp)); // wrong characteristic
}

TEST_CASE("exterior element round-trip")
{
    GF f(7);
    ExteriorAlgebra<GF> a(f, 4);
    auto w = standard_w(a, 2);
    auto j = exterior_to_json(a, w);
    auto w2 = exterior_from_json(a, j);
    CHECK(w2.terms == w.terms);
    CHECK(exterior_to_json(a, w2).dump() == j.dump());
    ExteriorAlgebra<GF> a5(f, 5);
    CHECK_THROWS(exterior_from_json(a5, j)); // generator count mismatch
}

TEST_CASE("complex round-trip: artinian and graded")
{
    GF f(3);
    MonomialCIRing<GF> r(f, {2, 3, 2});
    auto x = koszul(r).cx;
    auto j = complex_to_json(x);
    auto y = complex_from_json(r, j);
    CHECK(complex_to_json(y).dump() == j.dump());
    CHECK(homology(x).total == homology(y).total);

    GradedPolyRing<GF> p(f, 3, 2);
    auto g = trc_complex(p);
    auto jg = complex_to_json(g.cx);
    auto g2 = complex_from_json(p, jg);
    CHECK(complex_to_json(g2).dump() == jg.dump());
    CHECK(g2.graded());
    CHECK(g2.gdegs_at(1) == g.cx.gdegs_at(1));

    MonomialCIRing<GF> other(f, {2, 2, 2});
    CHECK_THROWS(complex_from_json(other, j)); // descriptor mismatch
}

TEST_CASE("Betti table and Poincare data round-trips")
{
    BettiTable b{{1, 8, 35, 112}, 3, 2};
    auto j = betti_to_json(b);
    auto b2 = betti_from_json(j);
    CHECK(b2.values == b.values);
    CHECK(betti_to_json(b2).dump() == j.dump());

    auto p = predicted_poincare(8);
    auto jp = poincare_to_json(p);
    auto p2 = poincare_from_json(jp);
    CHECK(p2.numerator.coeffs() == p.numerator.coeffs());
    CHECK(p2.complexity == 8);
    CHECK(p2.betti_deg == p.betti_deg);
    CHECK(poincare_to_json(p2).dump() == jp.dump());
    CHECK(jp["betti_deg"] == "126");
}

TEST_CASE("DG module round-trip with generator table")
{
    GF f(3);
    GradedPolyRing<GF> p(f, 2, 2);
    auto g = trc_complex(p);
    auto j = dg_to_json(g);
    CHECK(j["generators"].size() == 8);
    auto g2 = dg_from_json(p, j);
    CHECK(dg_to_json(g2).dump() == j.dump());
    CHECK(fiber_rank(g2) == fiber_rank(g));
}
