#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <stdexcept>
#include <unordered_map>
#include <utility>
#include <vector>

#include <gmpxx.h>

#include "ci_ring.hpp"
#include "exterior.hpp"
#include "free_complex.hpp"
#include "laurent.hpp"
#include "series_checks.hpp"
#include "sparse.hpp"

namespace ffc {

// Truncated Betti sequence.  Values at indices above trusted_upto may be
// contaminated by the truncation edge.
struct BettiTable {
    std::vector<long> values; // values[i] = beta_i, i = 0..truncation
    int truncation = 0;
    int trusted_upto = 0;
};

struct PoincareData {
    IntLaurentPoly numerator;
    int complexity = 0;
    mpq_class betti_deg;
};

template <class R>
struct MinimalResolution {
    FreeComplex<R> complex;
    BettiTable betti;
};

// Cokernel presentation: columns of rel are the relations among `rel.rows`
// generators.
template <class F>
struct PresentedModule {
    const MonomialCIRing<F>* ring = nullptr;
    RMat<MonomialCIRing<F>> rel;
};

// ---------------------------------------------------------------------------
// Tensor-product resolution of k.
//
// Each variable t_i contributes the two-periodic complex ... -> R -> R -> R
// with differentials alternating t_i (odd steps) and t_i^{a_i - 1} (even
// steps).  The basis of the tensor product in homological degree n is the set
// of e-tuples (j_1, ..., j_e) with sum n, packed four bits per slot like ring
// monomials.

template <class F>
struct TensorResolution {
    const MonomialCIRing<F>* ring = nullptr;
    FreeComplex<MonomialCIRing<F>> cx;
    std::vector<std::vector<Mono>> tuples; // per homological degree, ascending
    std::vector<std::unordered_map<Mono, long>> pos;

    long index(int n, Mono t) const
    {
        const auto& m = pos[static_cast<std::size_t>(n)];
        auto it = m.find(t);
        if (it == m.end()) throw std::invalid_argument("TensorResolution: unknown basis tuple");
        return it->second;
    }
};

template <class F>
TensorResolution<F> tensor_resolution_of_k(const MonomialCIRing<F>& ring, int n_trunc)
{
    using Ring = MonomialCIRing<F>;
    int e = ring.vars();
    if (n_trunc < 0 || n_trunc > 15)
        throw std::invalid_argument("tensor_resolution_of_k: need 0 <= N <= 15");

    TensorResolution<F> x;
    x.ring = &ring;
    x.tuples.resize(static_cast<std::size_t>(n_trunc) + 1);
    x.pos.resize(static_cast<std::size_t>(n_trunc) + 1);
    for (int n = 0; n <= n_trunc; ++n) {
        auto& lst = x.tuples[static_cast<std::size_t>(n)];
        std::vector<int> j(static_cast<std::size_t>(e), 0);
        // enumerate compositions of n into e parts
        auto rec = [&](auto&& self, int slot, int rest) -> void {
            if (slot == e - 1) {
                j[static_cast<std::size_t>(slot)] = rest;
                Mono t = 0;
                for (int i = 0; i < e; ++i) t |= static_cast<Mono>(j[static_cast<std::size_t>(i)]) << (4 * i);
                lst.push_back(t);
                return;
            }
            for (int v = 0; v <= rest; ++v) {
                j[static_cast<std::size_t>(slot)] = v;
                self(self, slot + 1, rest - v);
            }
        };
        rec(rec, 0, n);
        std::sort(lst.begin(), lst.end());
        for (std::size_t i = 0; i < lst.size(); ++i)
            x.pos[static_cast<std::size_t>(n)].emplace(lst[i], static_cast<long>(i));
    }

    std::vector<long> ranks;
    for (int n = 0; n <= n_trunc; ++n) ranks.push_back(static_cast<long>(x.tuples[static_cast<std::size_t>(n)].size()));

    std::vector<RMat<Ring>> diffs;
    const F& f = ring.field();
    for (int n = 1; n <= n_trunc; ++n) {
        std::vector<typename RMat<Ring>::Entry> entries;
        const auto& src = x.tuples[static_cast<std::size_t>(n)];
        for (std::size_t c = 0; c < src.size(); ++c) {
            Mono t = src[c];
            int below = 0; // parity of j_1 + ... + j_{i-1}
            for (int i = 0; i < e; ++i) {
                int ji = static_cast<int>((t >> (4 * i)) & 0xf);
                if (ji >= 1) {
                    Mono tgt = t - (Mono(1) << (4 * i));
                    int exp = (ji % 2 == 1) ? 1 : ring.exponents()[static_cast<std::size_t>(i)] - 1;
                    auto coef = (below % 2 == 0) ? f.one() : f.neg(f.one());
                    entries.push_back({x.index(n - 1, tgt), static_cast<long>(c),
                                       ring.monomial(static_cast<Mono>(exp) << (4 * i), coef)});
                }
                below += ji;
            }
        }
        diffs.push_back(rmat_make(ring, ranks[static_cast<std::size_t>(n - 1)], ranks[static_cast<std::size_t>(n)],
                                  std::move(entries)));
    }
    x.cx = make_free_complex(ring, 0, std::move(ranks), std::move(diffs));
    return x;
}

// ---------------------------------------------------------------------------
// Conversions between ring-entry matrices and their columnwise k-expansions.

namespace detail {

// Column c of m becomes column c of the result; row g of m occupies the
// row band [g*dim, (g+1)*dim).
template <class F>
SparseMatrix<F> rmat_kvecs(const MonomialCIRing<F>& ring, const RMat<MonomialCIRing<F>>& m)
{
    long dim = ring.dim();
    SparseMatrix<F> out{static_cast<int>(m.rows * dim), static_cast<int>(m.cols), {}};
    for (const auto& e : m.entries)
        for (const auto& [mono, c] : e.v.terms)
            out.entries.push_back({static_cast<int>(e.r * dim + ring.index_of(mono)), static_cast<int>(e.c), c});
    std::sort(out.entries.begin(), out.entries.end(),
              [](const auto& a, const auto& b) { return a.r != b.r ? a.r < b.r : a.c < b.c; });
    return out;
}

template <class F>
RMat<MonomialCIRing<F>> kvecs_rmat(const MonomialCIRing<F>& ring, const SparseMatrix<F>& v, long rows,
                                   long cols)
{
    using Ring = MonomialCIRing<F>;
    long dim = ring.dim();
    if (v.rows != rows * dim || v.cols != cols) throw std::invalid_argument("kvecs_rmat: shape mismatch");
    std::map<std::pair<long, long>, std::vector<std::pair<Mono, typename F::elem>>> acc;
    for (const auto& t : v.entries)
        acc[{t.r / dim, t.c}].push_back({ring.basis()[static_cast<std::size_t>(t.r % dim)], t.v});
    std::vector<typename RMat<Ring>::Entry> entries;
    for (auto& [rc, terms] : acc) {
        std::sort(terms.begin(), terms.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
        entries.push_back({rc.first, rc.second, RingElem<F>{std::move(terms)}});
    }
    return rmat_make(ring, rows, cols, std::move(entries));
}

// Indices of candidate columns that enlarge the rank of [base | kept] one at
// a time, scanned in order.
template <class F>
std::vector<long> greedy_independent(const F& f, const SparseMatrix<F>& base, const SparseMatrix<F>& cands,
                                     EliminationOptions opt = {})
{
    long target = rank(f, hstack(f, base, cands), opt);
    SparseMatrix<F> cur = base;
    long r = rank(f, cur, opt);
    std::vector<long> kept;
    for (int j = 0; j < cands.cols && r < target; ++j) {
        SparseMatrix<F> ext = cur;
        ext.cols += 1;
        for (const auto& t : cands.entries)
            if (t.c == j) ext.entries.push_back({t.r, ext.cols - 1, t.v});
        long r2 = rank(f, ext, opt);
        if (r2 > r) {
            cur = std::move(ext);
            r = r2;
            kept.push_back(j);
        }
    }
    return kept;
}

} // namespace detail

// ---------------------------------------------------------------------------
// Minimal resolutions.

// Minimal model of a bounded complex of free modules: unit elimination.
template <class R>
MinimalResolution<R> minimal_resolve(const FreeComplex<R>& x)
{
    if (x.lo() < 0) throw std::invalid_argument("minimal_resolve: complex must live in degrees >= 0");
    MinimalResolution<R> out{minimize(x), {}};
    out.betti.truncation = x.hi();
    out.betti.trusted_upto = x.hi() - 2;
    for (int i = 0; i <= x.hi(); ++i) out.betti.values.push_back(out.complex.rank_at(i));
    return out;
}

// Syzygy-by-syzygy minimal resolution of a presented module: at each stage
// the kernel of the k-expanded differential is computed exactly and a minimal
// generating set (a basis mod m * kernel) is selected.
template <class F>
MinimalResolution<MonomialCIRing<F>> minimal_resolve(const PresentedModule<F>& pm, int n_trunc,
                                                     EliminationOptions opt = {})
{
    using Ring = MonomialCIRing<F>;
    const Ring& ring = *pm.ring;
    const F& f = ring.field();
    long dim = ring.dim();
    if (n_trunc < 1) throw std::invalid_argument("minimal_resolve: need N >= 1");

    // Minimal generators of the module: strip unit entries of the presentation.
    auto pres = minimize(make_free_complex(ring, 0, {pm.rel.rows, pm.rel.cols}, {pm.rel}));
    RMat<Ring> d1 = pres.diff_at(1);

    // Minimal generators of the relation submodule: the image of the expanded
    // presentation is spanned by all columns (col_j * monomial); those with a
    // non-constant monomial span m * image, and degree-0 columns are selected
    // greedily against them.
    auto full = expand_matrix(ring, d1);
    SparseMatrix<F> mim = full;
    std::erase_if(mim.entries, [&](const auto& t) { return t.c % dim == 0; });
    auto cands = detail::rmat_kvecs(ring, d1);
    auto kept = detail::greedy_independent(f, mim, cands, opt);
    {
        std::vector<typename RMat<Ring>::Entry> entries;
        for (const auto& e : d1.entries)
            for (std::size_t j = 0; j < kept.size(); ++j)
                if (e.c == kept[j]) entries.push_back({e.r, static_cast<long>(j), e.v});
        d1 = rmat_make(ring, d1.rows, static_cast<long>(kept.size()), std::move(entries));
    }

    std::vector<long> ranks{pres.rank_at(0), d1.cols};
    std::vector<RMat<Ring>> diffs{d1};

    // Scalar multiplication operators t_l on R^b, assembled per stage.
    for (int stage = 1; stage < n_trunc; ++stage) {
        const RMat<Ring>& d = diffs.back();
        long b = d.cols;
        auto ker = kernel_basis(f, expand_matrix(ring, d), opt);
        SparseMatrix<F> mker{static_cast<int>(b * dim), 0, {}};
        for (int l = 0; l < ring.vars(); ++l) {
            std::vector<typename RMat<Ring>::Entry> diag;
            for (long g = 0; g < b; ++g) diag.push_back({g, g, ring.variable(l)});
            auto mul = expand_matrix(ring, rmat_make(ring, b, b, std::move(diag)));
            mker = hstack(f, mker, multiply(f, mul, ker));
        }
        auto sel = detail::greedy_independent(f, mker, ker, opt);
        SparseMatrix<F> gen{ker.rows, static_cast<int>(sel.size()), {}};
        for (const auto& t : ker.entries)
            for (std::size_t j = 0; j < sel.size(); ++j)
                if (t.c == sel[j]) gen.entries.push_back({t.r, static_cast<int>(j), t.v});
        auto dnext = detail::kvecs_rmat(ring, gen, b, static_cast<long>(sel.size()));
        for (const auto& e : dnext.entries)
            if (!f.is_zero(e.v.coeff(0, f)))
                throw std::logic_error("minimal_resolve: selected syzygy has a unit component");
        ranks.push_back(dnext.cols);
        diffs.push_back(std::move(dnext));
    }

    MinimalResolution<Ring> out{make_free_complex(ring, 0, ranks, diffs), {}};
    out.betti.truncation = n_trunc;
    out.betti.trusted_upto = n_trunc - 2;
    out.betti.values = ranks;
    return out;
}

// ---------------------------------------------------------------------------
// Lifting the quadratic Ext class to a chain map zeta: Sigma^{-2} X -> X.

template <class F>
struct ExtLift {
    std::unique_ptr<FreeComplex<MonomialCIRing<F>>> source; // Sigma^{-2} X, owned
    ChainMap<MonomialCIRing<F>> zeta;                       // *source -> X.cx
};

template <class F>
ExtLift<F> lift_ext_class(const TensorResolution<F>& x, int m_pairs, EliminationOptions opt = {})
{
    using Ring = MonomialCIRing<F>;
    const Ring& ring = *x.ring;
    const F& f = ring.field();
    int n_trunc = x.cx.hi();
    if (n_trunc < 2) throw std::invalid_argument("lift_ext_class: need N >= 2");
    if (m_pairs < 1 || 2 * m_pairs > ring.vars())
        throw std::invalid_argument("lift_ext_class: need 1 <= 2*m <= e");
    require_lefschetz_char(f.info(), m_pairs);

    ExtLift<F> out;
    out.source = std::make_unique<FreeComplex<Ring>>(shift(x.cx, -2));

    std::vector<RMat<Ring>> blocks;
    blocks.push_back(RMat<Ring>::zero(0, x.cx.rank_at(0))); // degree -2
    blocks.push_back(RMat<Ring>::zero(0, x.cx.rank_at(1))); // degree -1

    // zeta_0: dual-basis coefficient extraction of the cocycle
    // sum_j e_{2j-1} e_{2j} on the degree-2 basis tuples.
    {
        std::vector<typename RMat<Ring>::Entry> entries;
        for (int l = 0; l < m_pairs; ++l) {
            Mono t = (Mono(1) << (4 * (2 * l))) | (Mono(1) << (4 * (2 * l + 1)));
            entries.push_back({0, x.index(2, t), ring.one()});
        }
        blocks.push_back(rmat_make(ring, 1, x.cx.rank_at(2), std::move(entries)));
    }

    // zeta_j solves d_j zeta_j = zeta_{j-1} d_{j+2}, canonical solution.
    for (int j = 1; j <= n_trunc - 2; ++j) {
        auto c = rmat_mul(ring, blocks.back(), x.cx.diff_at(j + 2));
        auto sol = solve(f, expand_matrix(ring, x.cx.diff_at(j)), detail::rmat_kvecs(ring, c), opt);
        if (!sol) throw std::runtime_error("lift_ext_class: lifting system unsolvable");
        blocks.push_back(detail::kvecs_rmat(ring, *sol, x.cx.rank_at(j), x.cx.rank_at(j + 2)));
    }
    out.zeta = make_chain_map(*out.source, x.cx, std::move(blocks));
    return out;
}

// F = Sigma cone(zeta), degrees 0..N; H_0 = H_1 = k, zero between up to the
// trusted edge.
template <class F>
FreeComplex<MonomialCIRing<F>> avramov_complex(const MonomialCIRing<F>& ring, int n_trunc,
                                               EliminationOptions opt = {})
{
    if (!ring.order_at_least_three())
        throw std::invalid_argument("avramov_complex: all exponents must be >= 3");
    if (ring.vars() < 2) throw std::invalid_argument("avramov_complex: need e >= 2");
    int m = std::min(4, ring.vars() / 2);
    auto x = tensor_resolution_of_k(ring, n_trunc);
    auto lift = lift_ext_class(x, m, opt);
    auto full = shift(cone(lift.zeta), 1); // degrees 0..N+1; drop the edge term
    std::vector<long> ranks;
    std::vector<RMat<MonomialCIRing<F>>> diffs;
    for (int i = 0; i <= n_trunc; ++i) {
        ranks.push_back(full.rank_at(i));
        if (i >= 1) diffs.push_back(full.diff_at(i));
    }
    return make_free_complex(ring, 0, std::move(ranks), std::move(diffs));
}

template <class F>
PresentedModule<F> module_M(const FreeComplex<MonomialCIRing<F>>& g)
{
    if (g.lo() > 0 || g.hi() < 2) throw std::invalid_argument("module_M: need degrees 1 and 2");
    return {&g.ring(), g.diff_at(2)};
}

// ---------------------------------------------------------------------------
// Series-level predictions.

inline PoincareData predicted_poincare(int e)
{
    if (e < 8) throw std::invalid_argument("predicted_poincare: need e >= 8");
    IntLaurentPoly p;
    const long base[] = {1, 8, 27, 48, 42, 42, 48, 27, 8, 1};
    for (int i = 0; i < 10; ++i) p.set(i, base[i]);
    IntLaurentPoly onept;
    onept.set(0, 1);
    onept.set(1, 1);
    for (int i = 8; i < e; ++i) p = p * onept;
    return {p, e, betti_degree(p)};
}

// Ranks of the syzygies Omega^d, d = 0..2n, by alternating partial sums of
// the palindromic Betti sequence h(t) + t^{2n+1} h(1/t).
inline std::vector<mpz_class> syzygy_rank_table(int n)
{
    if (n < 1) throw std::invalid_argument("syzygy_rank_table: need n >= 1");
    IntLaurentPoly h = h_poly(n);
    std::vector<mpz_class> b;
    for (int i = 0; i <= 2 * n + 1; ++i) b.push_back(h.coeff(i) + h.coeff(2 * n + 1 - i));
    std::vector<mpz_class> out;
    mpz_class acc = 0;
    for (int d = 0; d <= 2 * n; ++d) {
        acc = b[static_cast<std::size_t>(d)] - acc;
        out.push_back(acc);
    }
    mpz_class mid = binomial(2 * n, n) - binomial(2 * n, n - 1);
    if (out[static_cast<std::size_t>(n)] != mid || mid > binomial(2 * n - 1, n - 1))
        throw std::logic_error("syzygy_rank_table: middle-rank identity failed");
    return out;
}

} // namespace ffc
