#pragma once

#include <bit>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <vector>

#include "ffc/laurent.hpp"
#include "ffc/series_checks.hpp"
#include "ffc/sparse.hpp"

namespace ffc {

using Mask = std::uint32_t;

inline int popcount(Mask m) { return std::popcount(m); }

// Sign of e_S ^ e_T for disjoint S, T: parity of pairs (s, t), s in S, t in T,
// s > t.  Counted with popcount prefixes, one word op per bit of T.
inline int wedge_sign(Mask s, Mask t)
{
    int inv = 0;
    Mask tt = t;
    while (tt) {
        int b = std::countr_zero(tt);
        tt &= tt - 1;
        inv += std::popcount(s & ~((Mask(2) << b) - 1));
    }
    return (inv & 1) ? -1 : 1;
}

// Exterior algebra on d degree-one generators; basis of Lambda_i is the set
// of d-bit masks of popcount i, in increasing integer order.
template <class F>
class ExteriorAlgebra {
public:
    static constexpr int kMaxGenerators = 24;

    ExteriorAlgebra(const F& f, int d) : f_(f), d_(d)
    {
        if (d < 0 || d > kMaxGenerators)
            throw std::invalid_argument("ExteriorAlgebra: need 0 <= d <= 24");
        basis_.assign(static_cast<std::size_t>(d) + 1, {});
        index_.assign(std::size_t(1) << d, -1);
        for (Mask m = 0; m < (Mask(1) << d); ++m) {
            auto& lvl = basis_[static_cast<std::size_t>(popcount(m))];
            index_[m] = static_cast<int>(lvl.size());
            lvl.push_back(m);
        }
    }

    const F& field() const { return f_; }
    int generators() const { return d_; }
    const std::vector<Mask>& basis(int degree) const
    {
        return basis_.at(static_cast<std::size_t>(degree));
    }
    int dim(int degree) const
    {
        if (degree < 0 || degree > d_) return 0;
        return static_cast<int>(basis_[static_cast<std::size_t>(degree)].size());
    }
    int index_of(Mask m) const { return index_[m]; }

private:
    const F& f_;
    int d_;
    std::vector<std::vector<Mask>> basis_;
    std::vector<int> index_;
};

template <class F>
struct ExteriorElement {
    using elem = typename F::elem;
    std::map<Mask, elem> terms; // no zero values

    bool is_zero() const { return terms.empty(); }

    // -1 for 0 or inhomogeneous elements
    int homogeneous_degree() const
    {
        int deg = -1;
        for (const auto& [m, v] : terms) {
            int p = popcount(m);
            if (deg == -1)
                deg = p;
            else if (p != deg)
                return -1;
        }
        return deg;
    }
};

template <class F>
ExteriorElement<F> ext_generator(const ExteriorAlgebra<F>& a, int i)
{
    if (i < 0 || i >= a.generators()) throw std::out_of_range("ext_generator");
    ExteriorElement<F> e;
    e.terms[Mask(1) << i] = a.field().one();
    return e;
}

template <class F>
ExteriorElement<F> wedge(const ExteriorAlgebra<F>& a, const ExteriorElement<F>& x,
                         const ExteriorElement<F>& y)
{
    const F& f = a.field();
    ExteriorElement<F> out;
    for (const auto& [ms, vs] : x.terms)
        for (const auto& [mt, vt] : y.terms) {
            if (ms & mt) continue;
            Mask m = ms | mt;
            auto v = f.mul(vs, vt);
            if (wedge_sign(ms, mt) < 0) v = f.neg(v);
            auto it = out.terms.find(m);
            if (it == out.terms.end()) {
                if (!f.is_zero(v)) out.terms[m] = v;
            } else {
                it->second = f.add(it->second, v);
                if (f.is_zero(it->second)) out.terms.erase(it);
            }
        }
    return out;
}

template <class F>
ExteriorElement<F> ext_add(const F& f, const ExteriorElement<F>& x, const ExteriorElement<F>& y)
{
    ExteriorElement<F> out = x;
    for (const auto& [m, v] : y.terms) {
        auto it = out.terms.find(m);
        if (it == out.terms.end()) {
            out.terms[m] = v;
        } else {
            it->second = f.add(it->second, v);
            if (f.is_zero(it->second)) out.terms.erase(it);
        }
    }
    return out;
}

// w = sum_{j=1}^{m} g_{2j-1} ^ g_{2j} on the first 2m generators.
template <class F>
ExteriorElement<F> standard_w(const ExteriorAlgebra<F>& a, int pairs)
{
    if (2 * pairs > a.generators()) throw std::invalid_argument("standard_w: 2m > d");
    ExteriorElement<F> w;
    for (int j = 0; j < pairs; ++j) {
        Mask m = (Mask(1) << (2 * j)) | (Mask(1) << (2 * j + 1));
        w.terms[m] = a.field().one(); // x_j ^ y_j has sign +1: adjacent ascending bits
    }
    return w;
}

// Characteristic guard for Lefschetz constructions: char 0 or p > (n+1)/2,
// and never characteristic 2.
inline void require_lefschetz_char(const FieldInfo& info, int pairs)
{
    if (info.characteristic == 2)
        throw std::invalid_argument("Lefschetz element requires char k != 2");
    if (info.characteristic != 0 && 2 * info.characteristic <= static_cast<std::uint64_t>(pairs) + 1)
        throw std::invalid_argument("Lefschetz element requires char k = 0 or char k > (n+1)/2");
}

// Matrices of left multiplication by a homogeneous degree-g element, from
// Lambda_i to Lambda_{i+g} for i = 0..d-g, in the canonical bitmask bases.
template <class F>
std::vector<SparseMatrix<F>> multiplication_matrices(const ExteriorAlgebra<F>& a,
                                                     const ExteriorElement<F>& w, int g)
{
    if (!w.is_zero() && w.homogeneous_degree() != g)
        throw std::invalid_argument("multiplication_matrices: element not homogeneous of the stated degree");
    const F& f = a.field();
    int d = a.generators();
    std::vector<SparseMatrix<F>> mats;
    for (int i = 0; i + g <= d; ++i) {
        SparseMatrix<F> m{a.dim(i + g), a.dim(i), {}};
        const auto& src = a.basis(i);
        for (int col = 0; col < static_cast<int>(src.size()); ++col) {
            Mask b = src[static_cast<std::size_t>(col)];
            for (const auto& [mw, vw] : w.terms) {
                if (b & mw) continue;
                auto v = vw;
                if (wedge_sign(mw, b) < 0) v = f.neg(v); // w ^ b
                m.entries.push_back({a.index_of(mw | b), col, v});
            }
        }
        std::sort(m.entries.begin(), m.entries.end(), [](const auto& x, const auto& y) {
            return x.r != y.r ? x.r < y.r : x.c < y.c;
        });
        // merge duplicates (distinct terms of w can land on the same basis mask)
        SparseMatrix<F> merged{m.rows, m.cols, {}};
        for (const auto& e : m.entries) {
            if (!merged.entries.empty() && merged.entries.back().r == e.r &&
                merged.entries.back().c == e.c) {
                merged.entries.back().v = f.add(merged.entries.back().v, e.v);
            } else {
                merged.entries.push_back(e);
            }
        }
        std::erase_if(merged.entries, [&](const auto& e) { return f.is_zero(e.v); });
        mats.push_back(std::move(merged));
    }
    return mats;
}

template <class F>
std::vector<SparseMatrix<F>> lefschetz_matrices(const ExteriorAlgebra<F>& a,
                                                const ExteriorElement<F>& w)
{
    return multiplication_matrices(a, w, 2);
}

struct LefschetzProfile {
    std::vector<long> ranks;       // rank of (lambda_w)_i, i = 0..d-2
    std::vector<long> ker_ranks;   // per degree i = 0..d
    std::vector<long> coker_ranks; // per degree i = 0..d (coker lives in degrees >= 2)
    IntLaurentPoly ker_series;
    IntLaurentPoly coker_series;   // in lower indexing; the upper-indexed form
                                   // is the substitution t -> 1/t
    long total = 0;                // rank coker + rank ker
};

template <class F>
LefschetzProfile lefschetz_profile(const ExteriorAlgebra<F>& a, const ExteriorElement<F>& w)
{
    int d = a.generators();
    auto mats = lefschetz_matrices(a, w);
    LefschetzProfile p;
    p.ranks.assign(static_cast<std::size_t>(std::max(0, d - 1)), 0);
    p.ker_ranks.assign(static_cast<std::size_t>(d) + 1, 0);
    p.coker_ranks.assign(static_cast<std::size_t>(d) + 1, 0);
    for (int i = 0; i <= d; ++i) {
        long r_from = (i <= d - 2) ? rank(a.field(), mats[static_cast<std::size_t>(i)]) : 0;
        if (i <= d - 2) p.ranks[static_cast<std::size_t>(i)] = r_from;
        p.ker_ranks[static_cast<std::size_t>(i)] = a.dim(i) - r_from;
        long r_into = (i >= 2) ? p.ranks[static_cast<std::size_t>(i - 2)] : 0;
        p.coker_ranks[static_cast<std::size_t>(i)] = a.dim(i) - r_into;
    }
    for (int i = 0; i <= d; ++i) {
        p.ker_series.set(i, p.ker_ranks[static_cast<std::size_t>(i)]);
        // Coker (lambda_w)_i sits in degree i + 2 of Sigma^{-2} Lambda, i.e.
        // the cokernel in internal degree i contributes t^{i-2}.
        p.coker_series.set(i - 2, p.coker_ranks[static_cast<std::size_t>(i)]);
        p.total += p.ker_ranks[static_cast<std::size_t>(i)] + p.coker_ranks[static_cast<std::size_t>(i)];
    }
    return p;
}

// For d >= 8: the tensor-factorization prediction 2^d - 2^{d-6} checked
// against the direct rank computation with w = standard_w on 4 pairs.
template <class F>
long lefschetz_total_for_dim(const ExteriorAlgebra<F>& a)
{
    int d = a.generators();
    if (d < 8) throw std::invalid_argument("lefschetz_total_for_dim: d must be >= 8");
    require_lefschetz_char(a.field().info(), 4);
    auto profile = lefschetz_profile(a, standard_w(a, 4));
    mpz_class predicted = (mpz_class(1) << d) - (mpz_class(1) << (d - 6));
    if (predicted != profile.total)
        throw std::runtime_error("lefschetz_total_for_dim: computed total disagrees with 2^d - 2^{d-6}");
    return profile.total;
}

// Profile total over GF(2); the caller asserts total >= 2^d.
template <class F>
long char2_floor(const ExteriorAlgebra<F>& a, const ExteriorElement<F>& w)
{
    if (a.field().info().characteristic != 2)
        throw std::invalid_argument("char2_floor: field must be GF(2)");
    if (!w.is_zero() && w.homogeneous_degree() != 2)
        throw std::invalid_argument("char2_floor: w must be homogeneous of degree 2");
    return lefschetz_profile(a, w).total;
}

namespace detail {

// Contraction by the dual generator i: interior product, a degree -1 derivation.
template <class F>
SparseMatrix<F> contraction_matrix(const ExteriorAlgebra<F>& a, int gen, int degree)
{
    const F& f = a.field();
    SparseMatrix<F> m{a.dim(degree - 1), a.dim(degree), {}};
    const auto& src = a.basis(degree);
    Mask g = Mask(1) << gen;
    for (int col = 0; col < static_cast<int>(src.size()); ++col) {
        Mask b = src[static_cast<std::size_t>(col)];
        if (!(b & g)) continue;
        int below = std::popcount(b & (g - 1));
        auto v = (below & 1) ? f.neg(f.one()) : f.one();
        m.entries.push_back({a.index_of(b & ~g), col, v});
    }
    std::sort(m.entries.begin(), m.entries.end(),
              [](const auto& x, const auto& y) { return x.r != y.r ? x.r < y.r : x.c < y.c; });
    return m;
}

template <class F>
bool mat_is_scalar(const F& f, const SparseMatrix<F>& m, const typename F::elem& s)
{
    if (m.rows != m.cols) return false;
    long diag = 0;
    for (const auto& e : m.entries) {
        if (e.r != e.c || !f.eq(e.v, s)) return false;
        ++diag;
    }
    if (f.is_zero(s)) return m.entries.empty();
    return diag == m.rows;
}

} // namespace detail

// Operator identities of the sl2 triple (lambda_w, c, h) with
// c = sum_i iota_{y_i} iota_{x_i} and h = [c, lambda_w]:
//   h|Lambda_j = (n - j) id,  [c,h] = -2c,  [lambda_w,h] = 2 lambda_w,
// and lambda_w^j : Lambda_{n-j} -> Lambda_{n+j} is an isomorphism.
template <class F>
bool sl2_check(const ExteriorAlgebra<F>& a, int n)
{
    const F& f = a.field();
    if (f.info().characteristic != 0)
        throw std::invalid_argument("sl2_check: requires characteristic 0");
    if (a.generators() != 2 * n) throw std::invalid_argument("sl2_check: d must equal 2n");
    int d = 2 * n;
    auto w = standard_w(a, n);
    auto lw = lefschetz_matrices(a, w); // lw[i] : Lambda_i -> Lambda_{i+2}

    // c_j : Lambda_j -> Lambda_{j-2}
    std::vector<SparseMatrix<F>> cm(static_cast<std::size_t>(d) + 1);
    for (int j = 2; j <= d; ++j) {
        SparseMatrix<F> acc = SparseMatrix<F>::zero(a.dim(j - 2), a.dim(j));
        for (int i = 0; i < n; ++i) {
            auto ix = detail::contraction_matrix(a, 2 * i, j);        // x_i^*
            auto iy = detail::contraction_matrix(a, 2 * i + 1, j - 1); // y_i^*
            auto term = multiply(f, iy, ix);
            for (auto& e : term.entries) e.v = f.neg(e.v);
            acc = mat_sub(f, acc, term); // acc += iy ix
        }
        cm[static_cast<std::size_t>(j)] = acc;
    }

    // h_j = c_{j+2} lw_j - lw_{j-2} c_j : Lambda_j -> Lambda_j
    std::vector<SparseMatrix<F>> hm(static_cast<std::size_t>(d) + 1);
    for (int j = 0; j <= d; ++j) {
        SparseMatrix<F> t1 = SparseMatrix<F>::zero(a.dim(j), a.dim(j));
        if (j <= d - 2) t1 = multiply(f, cm[static_cast<std::size_t>(j + 2)], lw[static_cast<std::size_t>(j)]);
        SparseMatrix<F> t2 = SparseMatrix<F>::zero(a.dim(j), a.dim(j));
        if (j >= 2) t2 = multiply(f, lw[static_cast<std::size_t>(j - 2)], cm[static_cast<std::size_t>(j)]);
        hm[static_cast<std::size_t>(j)] = mat_sub(f, t1, t2);
        if (!detail::mat_is_scalar(f, hm[static_cast<std::size_t>(j)], f.from_int(n - j))) return false;
    }

    // [c, h] = -2c on each degree: c_{j} h_{j} - h_{j-2} c_{j} = -2 c_{j}
    for (int j = 2; j <= d; ++j) {
        auto lhs = mat_sub(f, multiply(f, cm[static_cast<std::size_t>(j)], hm[static_cast<std::size_t>(j)]),
                                   multiply(f, hm[static_cast<std::size_t>(j - 2)], cm[static_cast<std::size_t>(j)]));
        SparseMatrix<F> rhs = cm[static_cast<std::size_t>(j)];
        for (auto& e : rhs.entries) e.v = f.mul(f.from_int(-2), e.v);
        if (!(mat_sub(f, lhs, rhs).entries.empty())) return false;
    }

    // [lambda_w, h] = 2 lambda_w
    for (int j = 0; j <= d - 2; ++j) {
        auto lhs = mat_sub(f, multiply(f, lw[static_cast<std::size_t>(j)], hm[static_cast<std::size_t>(j)]),
                                   multiply(f, hm[static_cast<std::size_t>(j + 2)], lw[static_cast<std::size_t>(j)]));
        SparseMatrix<F> rhs = lw[static_cast<std::size_t>(j)];
        for (auto& e : rhs.entries) e.v = f.mul(f.from_int(2), e.v);
        if (!(mat_sub(f, lhs, rhs).entries.empty())) return false;
    }

    // lambda_w^j : Lambda_{n-j} -> Lambda_{n+j} is an isomorphism
    for (int j = 1; j <= n; ++j) {
        SparseMatrix<F> m = SparseMatrix<F>::identity(f, a.dim(n - j));
        for (int i = n - j; i < n + j; i += 2) m = multiply(f, lw[static_cast<std::size_t>(i)], m);
        if (m.rows != m.cols) return false;
        if (rank(f, m) != m.rows) return false;
    }
    return true;
}

} // namespace ffc
