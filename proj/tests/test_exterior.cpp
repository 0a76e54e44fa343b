#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "ffc/exterior.hpp"
#include "oracles.hpp"

using namespace ffc;

TEST_CASE("wedge basics and sign conventions")
{
    QQ q;
    ExteriorAlgebra<QQ> a(q, 4);
    auto x1 = ext_generator(a, 0);
    auto y1 = ext_generator(a, 1);
    CHECK(wedge(a, x1, x1).is_zero());

    auto xy = wedge(a, x1, y1);
    REQUIRE(xy.terms.size() == 1);
    CHECK(xy.terms.begin()->first == 0b11u);
    CHECK(xy.terms.begin()->second == 1);

    auto yx = wedge(a, y1, x1);
    CHECK(yx.terms.begin()->second == -1);

    // even-degree elements commute
    auto x2y2 = wedge(a, ext_generator(a, 2), ext_generator(a, 3));
    CHECK(wedge(a, xy, x2y2).terms == wedge(a, x2y2, xy).terms);
}

TEST_CASE("wedge associativity on a randomized suite")
{
    QQ q;
    ExteriorAlgebra<QQ> a(q, 6);
    ffc::testing::Rng rng(8);
    for (int trial = 0; trial < 25; ++trial) {
        ExteriorElement<QQ> u, v, w;
        for (int k = 0; k < 4; ++k) {
            auto pick = [&](ExteriorElement<QQ>& e) {
                Mask m = static_cast<Mask>(rng.below(64));
                long c = static_cast<long>(rng.below(11)) - 5;
                if (c != 0) e = ext_add(q, e, ExteriorElement<QQ>{{{m, mpq_class(c)}}});
            };
            pick(u);
            pick(v);
            pick(w);
        }
        auto lhs = wedge(a, wedge(a, u, v), w);
        auto rhs = wedge(a, u, wedge(a, v, w));
        CHECK(lhs.terms == rhs.terms);
    }
}

TEST_CASE("standard_w shapes")
{
    QQ q;
    ExteriorAlgebra<QQ> a2(q, 2);
    CHECK(standard_w(a2, 1).terms.size() == 1);

    ExteriorAlgebra<QQ> a8(q, 8);
    auto w = standard_w(a8, 4);
    CHECK(w.terms.size() == 4);
    CHECK(w.homogeneous_degree() == 2);

    ExteriorAlgebra<QQ> a10(q, 10);
    CHECK(standard_w(a10, 4).terms.size() == 4);
    CHECK_THROWS(standard_w(a2, 2));
}

TEST_CASE("lefschetz matrix composition equals multiplication by w^w")
{
    GF f7(7);
    ExteriorAlgebra<GF> a(f7, 6);
    auto w = standard_w(a, 3);
    auto mats = lefschetz_matrices(a, w);
    auto ww = wedge(a, w, w);
    auto mats2 = multiplication_matrices(a, ww, 4);
    for (int i = 0; i + 4 <= 6; ++i) {
        auto comp = multiply(f7, mats[static_cast<std::size_t>(i + 2)], mats[static_cast<std::size_t>(i)]);
        CHECK(mat_sub(f7, comp, mats2[static_cast<std::size_t>(i)]).entries.empty());
    }
}

TEST_CASE("lefschetz profile: d=2 and w=0")
{
    QQ q;
    ExteriorAlgebra<QQ> a(q, 2);
    auto mats = lefschetz_matrices(a, standard_w(a, 1));
    REQUIRE(mats.size() == 1);
    CHECK(mats[0].rows == 1);
    CHECK(mats[0].cols == 1);
    CHECK(mats[0].entries.size() == 1);

    auto p = lefschetz_profile(a, standard_w(a, 1));
    CHECK(p.total == 6); // C(4,2)

    ExteriorElement<QQ> zero;
    ExteriorAlgebra<QQ> a3(q, 3);
    auto pz = lefschetz_profile(a3, zero);
    CHECK(pz.total == 2 * 8);
}

TEST_CASE("Prop 2.1 at d=8: injectivity and surjectivity at i = n-1")
{
    QQ q;
    ExteriorAlgebra<QQ> a(q, 8);
    auto mats = lefschetz_matrices(a, standard_w(a, 4));
    // (lambda_w)_3 : Lambda_3 -> Lambda_5, both of dimension 56
    auto& m3 = mats[3];
    CHECK(m3.rows == 56);
    CHECK(m3.cols == 56);
    CHECK(rank(q, m3) == 56);
}

TEST_CASE("profile totals: d=2n, standard_w, central binomial")
{
    QQ q;
    for (int m = 1; m <= 5; ++m) {
        ExteriorAlgebra<QQ> a(q, 2 * m);
        auto p = lefschetz_profile(a, standard_w(a, m));
        CHECK(p.total == binomial(2 * m + 2, m + 1));
    }
    GF f5(5);
    ExteriorAlgebra<GF> a(f5, 8);
    auto p = lefschetz_profile(a, standard_w(a, 4));
    CHECK(p.total == 252);
}

TEST_CASE("d=8 Hilbert series of coker and ker")
{
    GF f3(3);
    ExteriorAlgebra<GF> a(f3, 8);
    auto p = lefschetz_profile(a, standard_w(a, 4));
    CHECK(p.total == 252);
    auto h = h_poly(4);
    // coker series = h(t)/t^2, ker series = t^8 h(1/t)
    CHECK(p.coker_series == h.shifted(-2));
    CHECK(p.ker_series == h.reversed().shifted(8));
}

TEST_CASE("rank-nullity per degree for random degree-2 w")
{
    GF f5(5);
    ExteriorAlgebra<GF> a(f5, 6);
    ffc::testing::Rng rng(21);
    for (int trial = 0; trial < 10; ++trial) {
        ExteriorElement<GF> w;
        for (const auto m : a.basis(2))
            if (rng.below(3) == 0) {
                auto v = f5.from_int(static_cast<long long>(rng.below(4)) + 1);
                w.terms[m] = v;
            }
        auto p = lefschetz_profile(a, w);
        for (int i = 0; i + 2 <= 6; ++i) {
            long lhs = p.coker_ranks[static_cast<std::size_t>(i + 2)] - p.ker_ranks[static_cast<std::size_t>(i)];
            CHECK(lhs == a.dim(i + 2) - a.dim(i));
        }
    }
}

TEST_CASE("tensor factorization: total doubles per extra generator")
{
    GF f3(3);
    for (int d = 8; d <= 10; ++d) {
        ExteriorAlgebra<GF> a(f3, d);
        CHECK(lefschetz_total_for_dim(a) == (1L << d) - (1L << (d - 6)));
    }
    QQ q;
    ExteriorAlgebra<QQ> a10(q, 10);
    CHECK(lefschetz_total_for_dim(a10) == 1008);
}

TEST_CASE("characteristic guards")
{
    GF f2(2);
    ExteriorAlgebra<GF> a(f2, 8);
    CHECK_THROWS(lefschetz_total_for_dim(a));
    GF f3(3);
    ExteriorAlgebra<GF> a7(f3, 7);
    CHECK_THROWS(lefschetz_total_for_dim(a7));
    // p = 3, n = 5 violates p > (n+1)/2
    CHECK_THROWS(require_lefschetz_char(FieldInfo{3}, 5));
    CHECK_NOTHROW(require_lefschetz_char(FieldInfo{5}, 5));
    CHECK_NOTHROW(require_lefschetz_char(FieldInfo{0}, 12));
}

TEST_CASE("char 2 floor: exhaustive at d=4")
{
    GF f2(2);
    ExteriorAlgebra<GF> a(f2, 4);
    const auto& deg2 = a.basis(2);
    REQUIRE(deg2.size() == 6);
    for (Mask sel = 0; sel < 64; ++sel) {
        ExteriorElement<GF> w;
        for (int b = 0; b < 6; ++b)
            if (sel & (Mask(1) << b)) w.terms[deg2[static_cast<std::size_t>(b)]] = 1;
        CHECK(char2_floor(a, w) >= 16);
    }

    ExteriorElement<GF> zero;
    CHECK(char2_floor(a, zero) == 32);

    ExteriorAlgebra<GF> a6(f2, 6);
    CHECK(char2_floor(a6, standard_w(a6, 3)) >= 64);
}

TEST_CASE("sl2 identities for n = 1, 2, 3")
{
    QQ q;
    for (int n = 1; n <= 3; ++n) {
        ExteriorAlgebra<QQ> a(q, 2 * n);
        CHECK(sl2_check(a, n));
    }
    GF f5(5);
    ExteriorAlgebra<GF> a(f5, 2);
    CHECK_THROWS(sl2_check(a, 1));
}
