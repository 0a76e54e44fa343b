#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "ffc/free_complex.hpp"
#include "oracles.hpp"

using namespace ffc;

namespace {

using CIR = MonomialCIRing<GF>;
using PR = GradedPolyRing<GF>;

template <class R>
RMat<R> mat1(const R& ring, typename R::Elem v)
{
    return rmat_make(ring, 1, 1, {{0, 0, std::move(v)}});
}

template <class R>
bool same_complex(const R& ring, const FreeComplex<R>& a, const FreeComplex<R>& b)
{
    if (a.lo() != b.lo() || a.hi() != b.hi()) return false;
    for (int i = a.lo(); i <= a.hi(); ++i) {
        if (a.rank_at(i) != b.rank_at(i)) return false;
        auto da = a.diff_at(i), db = b.diff_at(i);
        if (da.entries.size() != db.entries.size()) return false;
        for (std::size_t k = 0; k < da.entries.size(); ++k) {
            const auto &x = da.entries[k], &y = db.entries[k];
            if (x.r != y.r || x.c != y.c || !ring.sub(x.v, y.v).is_zero()) return false;
        }
    }
    return true;
}

// Koszul complex on t1, t2 over GF(p)[t1,t2] with deg-1 generators.
FreeComplex<PR> poly_koszul2(const PR& r)
{
    auto t1 = r.variable(0), t2 = r.variable(1);
    auto d1 = rmat_make(r, 1, 2, {{0, 0, t1}, {0, 1, t2}});
    auto d2 = rmat_make(r, 2, 1, {{0, 0, r.neg(t2)}, {1, 0, t1}});
    return make_free_complex(r, 0, {1, 2, 1}, {d1, d2}, {{0}, {1, 1}, {2}});
}

} // namespace

TEST_CASE("two-term complex over k[t]/(t^3) and its homology")
{
    GF f(3);
    CIR r(f, {3});
    auto x = make_free_complex(r, 0, {1, 1}, {mat1(r, r.variable(0))});
    auto h = homology(x);
    CHECK(h.lo == 0);
    CHECK(h.lengths == std::vector<long>{1, 1});
    CHECK(h.total == 2);
}

TEST_CASE("three-term complex t, t^2 over k[t]/(t^3)")
{
    GF f(5);
    CIR r(f, {3});
    auto t = r.variable(0);
    auto t2 = r.mul(t, t);
    auto x = make_free_complex(r, 0, {1, 1, 1}, {mat1(r, t), mat1(r, t2)});
    auto h = homology(x);
    // H_0 = R/(t), H_1 = (t^2)/(t^2) = 0, H_2 = ker(t^2) = (t)
    CHECK(h.lengths == std::vector<long>{1, 0, 2});
    // swapping the differentials still gives d^2 = 0 but different homology
    auto y = make_free_complex(r, 0, {1, 1, 1}, {mat1(r, t2), mat1(r, t)});
    CHECK(homology(y).lengths == std::vector<long>{2, 0, 1});
}

TEST_CASE("construction guards")
{
    GF f(3);
    CIR r(f, {2, 2});
    auto t1 = r.variable(0), t2 = r.variable(1);
    // d o d = t1 * t2 != 0
    CHECK_THROWS(make_free_complex(r, 0, {1, 1, 1}, {mat1(r, t1), mat1(r, t2)}));
    // shape mismatch
    CHECK_THROWS(make_free_complex(r, 0, {1, 2}, {mat1(r, t1)}));
    // inhomogeneous entry over a graded ring
    GF f3(3);
    PR pr(f3, 2, 1);
    auto bad = rmat_make(pr, 1, 1, {{0, 0, pr.add(pr.one(), pr.variable(0))}});
    CHECK_THROWS(make_free_complex(pr, 0, {1, 1}, {bad}, {{0}, {1}}));
}

TEST_CASE("shift conventions")
{
    GF f(3);
    CIR r(f, {3});
    auto x = make_free_complex(r, 0, {1, 1}, {mat1(r, r.variable(0))});
    CHECK(same_complex(r, shift(x, 0), x));
    auto s1 = shift(x, 1);
    CHECK(s1.lo() == 1);
    CHECK(r.add(s1.diff_at(2).get(r, 0, 0), r.variable(0)).is_zero()); // negated
    CHECK(same_complex(r, shift(s1, 1), shift(x, 2)));
    CHECK(shift(x, 2).diff_at(3).get(r, 0, 0).terms == x.diff_at(1).get(r, 0, 0).terms);
    auto h = homology(shift(x, 5));
    CHECK(h.lo == 5);
    CHECK(h.lengths == homology(x).lengths);
}

TEST_CASE("cone of the identity is exact and minimizes to zero")
{
    GF f(3);
    CIR r(f, {2, 2});
    auto x = make_free_complex(r, 0, {1}, {});
    auto id = make_chain_map(x, x, {rmat_identity(r, 1)});
    auto c = cone(id);
    CHECK(c.lo() == 0);
    CHECK(c.hi() == 1);
    CHECK(r.sub(c.diff_at(1).get(r, 0, 0), r.one()).is_zero());
    CHECK(homology(c).total == 0);
    CHECK(minimize(c).is_zero());
}

TEST_CASE("cone of the zero map is the degreewise direct sum")
{
    GF f(3);
    CIR r(f, {3});
    auto t = r.variable(0);
    auto x = make_free_complex(r, 0, {1, 1}, {mat1(r, t)});
    auto y = make_free_complex(r, 0, {1, 1}, {mat1(r, r.mul(t, t))});
    auto z = make_chain_map(x, y, {RMat<CIR>::zero(1, 1), RMat<CIR>::zero(1, 1)});
    auto c = cone(z);
    CHECK(c.lo() == 0);
    CHECK(c.hi() == 2);
    CHECK(c.rank_at(0) == 1);
    CHECK(c.rank_at(1) == 2);
    CHECK(c.rank_at(2) == 1);
    auto hc = homology(c);
    auto hx = homology(x);
    auto hy = homology(y);
    for (int i = 0; i <= 2; ++i)
        CHECK(hc.length_at(i) == hx.length_at(i - 1) + hy.length_at(i));
}

TEST_CASE("chain map validation rejects non-commuting squares")
{
    GF f(3);
    CIR r(f, {3});
    auto t = r.variable(0);
    auto x = make_free_complex(r, 0, {1, 1}, {mat1(r, t)});
    auto y = make_free_complex(r, 0, {1, 1}, {mat1(r, r.mul(t, t))});
    // f = (1, 1) does not commute: t^2 * 1 != 1 * t
    CHECK_THROWS(make_chain_map(x, y, {rmat_identity(r, 1), rmat_identity(r, 1)}));
    // f = (t, 1) does: t^2 * t = 0 = t * t^2? both are t^3 = 0... use (0, 0)
    auto ok = make_chain_map(x, y, {RMat<CIR>::zero(1, 1), RMat<CIR>::zero(1, 1)});
    CHECK(ok.block_at(0).entries.empty());
}

TEST_CASE("minimize strips contractible summands and preserves homology")
{
    GF f(3);
    CIR r(f, {3, 2});
    auto t1 = r.variable(0), t2 = r.variable(1);
    // X = (R --t1--> R) (+) cone(id) in degrees 1,2, assembled by hand
    auto d1 = rmat_make(r, 1, 2, {{0, 0, t1}});
    auto d2 = rmat_make(r, 2, 1, {{1, 0, r.one()}});
    auto x = make_free_complex(r, 0, {1, 2, 1}, {d1, d2});
    auto m = minimize(x);
    CHECK(m.lo() == 0);
    CHECK(m.hi() == 1);
    CHECK(m.rank_at(0) == 1);
    CHECK(m.rank_at(1) == 1);
    auto hm = homology(m);
    auto hx = homology(x);
    CHECK(hm.total == hx.total);
    for (int i = x.lo(); i <= x.hi(); ++i) CHECK(hm.length_at(i) == hx.length_at(i));
    // idempotent
    CHECK(same_complex(r, minimize(m), m));
    // entries of the result lie in the maximal ideal
    for (int i = m.lo() + 1; i <= m.hi(); ++i)
        for (const auto& e : m.diff_at(i).entries) CHECK(!r.is_unit(e.v));
}

TEST_CASE("minimized ranks are independent of generator order")
{
    GF f(5);
    CIR r(f, {2, 2, 2});
    testing::Rng rng(1234);
    auto t0 = r.variable(0), t1 = r.variable(1);
    // Koszul complex on t0, t1 plus an identity cone in degrees 1, 2
    std::vector<typename RMat<CIR>::Entry> e1 = {{0, 0, t0}, {0, 1, t1}};
    std::vector<typename RMat<CIR>::Entry> e2 = {
        {0, 0, r.neg(t1)}, {1, 0, t0}, {2, 1, r.scale(r.one(), f.from_int(2))}};
    auto x = make_free_complex(
        r, 0, {1, 3, 2},
        {rmat_make(r, 1, 3, e1), rmat_make(r, 3, 2, e2)});
    auto base = minimize(x);
    for (int trial = 0; trial < 4; ++trial) {
        // permute the degree-1 generators
        std::vector<long> perm = {0, 1, 2};
        for (int i = 2; i > 0; --i) std::swap(perm[static_cast<std::size_t>(i)],
                                              perm[rng.next() % static_cast<unsigned>(i + 1)]);
        std::vector<typename RMat<CIR>::Entry> p1, p2;
        for (auto e : e1) p1.push_back({e.r, perm[static_cast<std::size_t>(e.c)], e.v});
        for (auto e : e2) p2.push_back({perm[static_cast<std::size_t>(e.r)], e.c, e.v});
        auto y = make_free_complex(r, 0, {1, 3, 2},
                                   {rmat_make(r, 1, 3, p1), rmat_make(r, 3, 2, p2)});
        auto m = minimize(y);
        CHECK(m.lo() == base.lo());
        CHECK(m.hi() == base.hi());
        for (int i = m.lo(); i <= m.hi(); ++i) CHECK(m.rank_at(i) == base.rank_at(i));
        CHECK(homology(m).lengths == homology(base).lengths);
    }
}

TEST_CASE("compress: differential module with free flag")
{
    GF f(3);
    CIR r(f, {3});
    auto single = make_free_complex(r, 2, {2}, {});
    auto dm0 = compress(single);
    CHECK(dm0.rank == 2);
    CHECK(rmat_is_zero(dm0.D));
    CHECK(dm_homology(dm0) == 2 * r.dim());

    auto t = r.variable(0);
    auto x = make_free_complex(r, 0, {1, 1, 1}, {mat1(r, t), mat1(r, r.mul(t, t))});
    auto dm = compress(x);
    CHECK(dm.rank == 3);
    CHECK(rmat_is_zero(rmat_mul(r, dm.D, dm.D)));
    CHECK(flag_valid(dm));
    CHECK(dm.flag == std::vector<long>{1, 2, 3});
    CHECK(dm_homology(dm) == homology(x).total);
}

TEST_CASE("graded complex homology per stratum: Koszul on two variables")
{
    GF f(3);
    PR r(f, 2, 1);
    auto k2 = poly_koszul2(r);
    auto h = homology(k2, 10);
    CHECK(h.cutoff == 10);
    CHECK(h.trusted_cutoff == 8);
    CHECK(h.lengths == std::vector<long>{1, 0, 0});
    CHECK(h.total == 1);
}

TEST_CASE("graded cone of contraction and its minimization")
{
    GF f(3);
    PR r(f, 2, 1);
    auto k2 = poly_koszul2(r);
    // zeta = iota_1 iota_2: Sigma^{-2}K -> K, the only component K_2 -> K_0
    auto xsrc = twist(shift(k2, -2), -2);
    std::vector<RMat<PR>> blocks;
    for (int i = xsrc.lo(); i <= xsrc.hi(); ++i) {
        if (i == 0)
            blocks.push_back(rmat_identity(r, 1));
        else
            blocks.push_back(RMat<PR>::zero(k2.rank_at(i), xsrc.rank_at(i)));
    }
    auto zeta = make_chain_map(xsrc, k2, std::move(blocks));
    auto F = shift(cone(zeta), 1);
    CHECK(F.lo() == 0);
    CHECK(F.hi() == 3);
    CHECK(F.total_rank() == 8);
    auto hF = homology(F, 10);
    CHECK(hF.length_at(0) == 1);
    CHECK(hF.length_at(1) == 1);
    CHECK(hF.total == 2);
    auto G = minimize(F);
    CHECK(G.rank_at(0) == 1);
    CHECK(G.rank_at(1) == 2);
    CHECK(G.rank_at(2) == 2);
    CHECK(G.rank_at(3) == 1);
    auto hG = homology(G, 10);
    CHECK(hG.lengths == std::vector<long>{1, 1, 0, 0});
    // differential module compression of the minimized complex
    auto dm = compress(G);
    CHECK(dm.rank == 6);
    CHECK(flag_valid(dm));
    CHECK(dm_homology(dm, 10) == 2);
}

TEST_CASE("expansion dimensions agree with rank-nullity on random ring matrices")
{
    GF f(7);
    CIR r(f, {2, 3});
    testing::Rng rng(7);
    for (int trial = 0; trial < 10; ++trial) {
        std::vector<typename RMat<CIR>::Entry> es;
        for (long i = 0; i < 3; ++i)
            for (long j = 0; j < 4; ++j)
                if (rng.next() % 2) {
                    Mono m = r.basis()[rng.next() % static_cast<unsigned>(r.dim())];
                    auto c = f.from_int(static_cast<long>(1 + rng.next() % 6));
                    es.push_back({i, j, r.monomial(m, c)});
                }
        auto a = rmat_make(r, 3, 4, std::move(es));
        auto ka = expand_matrix(r, a);
        CHECK(ka.rows == 3 * r.dim());
        CHECK(ka.cols == 4 * r.dim());
        auto kb = kernel_basis(f, ka);
        CHECK(rank(f, ka) + kb.cols == ka.cols);
    }
}
