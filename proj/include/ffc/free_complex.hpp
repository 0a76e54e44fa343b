#pragma once

#include <algorithm>
#include <map>
#include <set>
#include <stdexcept>
#include <vector>

#include "ffc/ci_ring.hpp"
#include "ffc/sparse.hpp"

namespace ffc {

// Sparse matrix with ring-element entries, row-major sorted triplets.
template <class R>
struct RMat {
    using Elem = typename R::Elem;
    struct Entry {
        long r, c;
        Elem v;
    };
    long rows = 0, cols = 0;
    std::vector<Entry> entries;

    static RMat zero(long r, long c) { return {r, c, {}}; }

    Elem get(const R& ring, long r, long c) const
    {
        auto it = std::lower_bound(entries.begin(), entries.end(), std::pair<long, long>{r, c},
                                   [](const Entry& e, const std::pair<long, long>& k) {
                                       return std::pair<long, long>{e.r, e.c} < k;
                                   });
        if (it != entries.end() && it->r == r && it->c == c) return it->v;
        return ring.zero();
    }
};

template <class R>
RMat<R> rmat_make(const R& ring, long rows, long cols, std::vector<typename RMat<R>::Entry> entries)
{
    std::sort(entries.begin(), entries.end(), [](const auto& a, const auto& b) {
        return std::pair<long, long>{a.r, a.c} < std::pair<long, long>{b.r, b.c};
    });
    for (std::size_t i = 0; i < entries.size(); ++i) {
        const auto& e = entries[i];
        if (e.r < 0 || e.r >= rows || e.c < 0 || e.c >= cols)
            throw std::invalid_argument("rmat_make: entry out of range");
        if (e.v.is_zero()) throw std::invalid_argument("rmat_make: explicit zero entry");
        if (i > 0 && entries[i - 1].r == e.r && entries[i - 1].c == e.c)
            throw std::invalid_argument("rmat_make: duplicate entry");
    }
    (void)ring;
    return {rows, cols, std::move(entries)};
}

template <class R>
RMat<R> rmat_identity(const R& ring, long n)
{
    RMat<R> m{n, n, {}};
    for (long i = 0; i < n; ++i) m.entries.push_back({i, i, ring.one()});
    return m;
}

template <class R>
bool rmat_is_zero(const RMat<R>& m)
{
    return m.entries.empty();
}

template <class R>
RMat<R> rmat_neg(const R& ring, RMat<R> m)
{
    for (auto& e : m.entries) e.v = ring.neg(e.v);
    return m;
}

template <class R>
RMat<R> rmat_sub(const R& ring, const RMat<R>& a, const RMat<R>& b)
{
    if (a.rows != b.rows || a.cols != b.cols) throw std::invalid_argument("rmat_sub: shape mismatch");
    RMat<R> out{a.rows, a.cols, {}};
    auto ia = a.entries.begin(), ea = a.entries.end();
    auto ib = b.entries.begin(), eb = b.entries.end();
    auto key = [](const auto& e) { return std::pair<long, long>{e.r, e.c}; };
    while (ia != ea || ib != eb) {
        if (ib == eb || (ia != ea && key(*ia) < key(*ib))) {
            out.entries.push_back(*ia++);
        } else if (ia == ea || key(*ib) < key(*ia)) {
            out.entries.push_back({ib->r, ib->c, ring.neg(ib->v)});
            ++ib;
        } else {
            auto v = ring.sub(ia->v, ib->v);
            if (!v.is_zero()) out.entries.push_back({ia->r, ia->c, v});
            ++ia;
            ++ib;
        }
    }
    return out;
}

template <class R>
RMat<R> rmat_mul(const R& ring, const RMat<R>& a, const RMat<R>& b)
{
    if (a.cols != b.rows) throw std::invalid_argument("rmat_mul: shape mismatch");
    std::vector<std::vector<std::pair<long, typename R::Elem>>> brows(
        static_cast<std::size_t>(b.rows));
    for (const auto& e : b.entries) brows[static_cast<std::size_t>(e.r)].push_back({e.c, e.v});
    std::map<std::pair<long, long>, typename R::Elem> acc;
    for (const auto& e : a.entries)
        for (const auto& [l, v] : brows[static_cast<std::size_t>(e.c)]) {
            auto p = ring.mul(e.v, v);
            if (p.is_zero()) continue;
            auto it = acc.find({e.r, l});
            if (it == acc.end())
                acc[{e.r, l}] = std::move(p);
            else
                it->second = ring.add(it->second, p);
        }
    RMat<R> out{a.rows, b.cols, {}};
    for (auto& [rc, v] : acc)
        if (!v.is_zero()) out.entries.push_back({rc.first, rc.second, std::move(v)});
    return out;
}

// Bounded complex of finite free modules ... -> X_{i} -> X_{i-1} -> ...
// over degrees [lo, hi].  diff_at(i) maps X_i to X_{i-1}; d o d = 0 is
// validated on construction, as is internal-degree homogeneity whenever
// generator degrees are supplied.
template <class R>
class FreeComplex {
public:
    const R& ring() const { return *ring_; }
    int lo() const { return lo_; }
    int hi() const { return lo_ + static_cast<int>(ranks_.size()) - 1; }
    int length() const { return static_cast<int>(ranks_.size()); }
    bool is_zero() const { return ranks_.empty(); }
    bool graded() const { return !gdegs_.empty(); }

    long rank_at(int i) const
    {
        if (i < lo_ || i > hi()) return 0;
        return ranks_[static_cast<std::size_t>(i - lo_)];
    }

    long total_rank() const
    {
        long t = 0;
        for (long r : ranks_) t += r;
        return t;
    }

    std::vector<int> gdegs_at(int i) const
    {
        if (gdegs_.empty() || i < lo_ || i > hi())
            return std::vector<int>(static_cast<std::size_t>(rank_at(i)), 0);
        return gdegs_[static_cast<std::size_t>(i - lo_)];
    }

    RMat<R> diff_at(int i) const
    {
        if (i <= lo_ || i > hi()) return RMat<R>::zero(rank_at(i - 1), rank_at(i));
        return diffs_[static_cast<std::size_t>(i - lo_ - 1)];
    }

    template <class S>
    friend FreeComplex<S> make_free_complex(const S&, int, std::vector<long>,
                                            std::vector<RMat<S>>, std::vector<std::vector<int>>);

private:
    const R* ring_ = nullptr;
    int lo_ = 0;
    std::vector<long> ranks_;
    std::vector<std::vector<int>> gdegs_; // per degree; empty when ungraded
    std::vector<RMat<R>> diffs_;          // diffs_[k]: X_{lo+k+1} -> X_{lo+k}
};

// diffs[k] maps degree lo+k+1 to lo+k; gdegs optional (required homogeneity
// check when present).
template <class R>
FreeComplex<R> make_free_complex(const R& ring, int lo, std::vector<long> ranks,
                                 std::vector<RMat<R>> diffs,
                                 std::vector<std::vector<int>> gdegs = {})
{
    std::size_t n = ranks.size();
    for (long r : ranks)
        if (r < 0) throw std::invalid_argument("make_free_complex: negative rank");
    if (diffs.size() + 1 != n && !(n == 0 && diffs.empty()))
        throw std::invalid_argument("make_free_complex: need one differential per adjacent pair");
    for (std::size_t k = 0; k + 1 < n; ++k)
        if (diffs[k].rows != ranks[k] || diffs[k].cols != ranks[k + 1])
            throw std::invalid_argument("make_free_complex: differential shape mismatch");
    for (std::size_t k = 0; k + 2 < n; ++k)
        if (!rmat_is_zero(rmat_mul(ring, diffs[k], diffs[k + 1])))
            throw std::invalid_argument("make_free_complex: d o d != 0");
    if (!gdegs.empty()) {
        if (gdegs.size() != n) throw std::invalid_argument("make_free_complex: gdegs size mismatch");
        for (std::size_t k = 0; k < n; ++k)
            if (static_cast<long>(gdegs[k].size()) != ranks[k])
                throw std::invalid_argument("make_free_complex: gdegs rank mismatch");
        for (std::size_t k = 0; k + 1 < n; ++k)
            for (const auto& e : diffs[k].entries) {
                int want = gdegs[k + 1][static_cast<std::size_t>(e.c)] -
                           gdegs[k][static_cast<std::size_t>(e.r)];
                for (const auto& [m, c] : e.v.terms)
                    if (ring.degree(m) != want)
                        throw std::invalid_argument("make_free_complex: inhomogeneous entry");
            }
    }
    FreeComplex<R> x;
    x.ring_ = &ring;
    x.lo_ = lo;
    x.ranks_ = std::move(ranks);
    x.gdegs_ = std::move(gdegs);
    x.diffs_ = std::move(diffs);
    return x;
}

// (Sigma^m X)_i = X_{i-m}, differential (-1)^m d.
template <class R>
FreeComplex<R> shift(const FreeComplex<R>& x, int m)
{
    const R& ring = x.ring();
    std::vector<long> ranks;
    std::vector<RMat<R>> diffs;
    std::vector<std::vector<int>> gdegs;
    for (int i = x.lo(); i <= x.hi(); ++i) {
        ranks.push_back(x.rank_at(i));
        if (x.graded()) gdegs.push_back(x.gdegs_at(i));
        if (i > x.lo()) {
            auto d = x.diff_at(i);
            diffs.push_back((m % 2 != 0) ? rmat_neg(ring, d) : d);
        }
    }
    return make_free_complex(ring, x.lo() + m, std::move(ranks), std::move(diffs),
                             std::move(gdegs));
}

// Add a constant to every generator's internal degree.
template <class R>
FreeComplex<R> twist(const FreeComplex<R>& x, int t)
{
    if (!x.graded()) throw std::invalid_argument("twist: ungraded complex");
    std::vector<long> ranks;
    std::vector<RMat<R>> diffs;
    std::vector<std::vector<int>> gdegs;
    for (int i = x.lo(); i <= x.hi(); ++i) {
        ranks.push_back(x.rank_at(i));
        auto g = x.gdegs_at(i);
        for (int& v : g) v += t;
        gdegs.push_back(std::move(g));
        if (i > x.lo()) diffs.push_back(x.diff_at(i));
    }
    return make_free_complex(x.ring(), x.lo(), std::move(ranks), std::move(diffs),
                             std::move(gdegs));
}

// Degree-0 chain map X -> Y; blocks[k] maps X_{X.lo+k} into Y at the same
// homological degree.
template <class R>
struct ChainMap {
    const FreeComplex<R>* from = nullptr;
    const FreeComplex<R>* to = nullptr;
    std::vector<RMat<R>> blocks;

    RMat<R> block_at(int i) const
    {
        if (i < from->lo() || i > from->hi() || to->rank_at(i) == 0)
            return RMat<R>::zero(to->rank_at(i), from->rank_at(i));
        return blocks[static_cast<std::size_t>(i - from->lo())];
    }
};

template <class R>
ChainMap<R> make_chain_map(const FreeComplex<R>& x, const FreeComplex<R>& y,
                           std::vector<RMat<R>> blocks)
{
    if (blocks.size() != static_cast<std::size_t>(x.length()))
        throw std::invalid_argument("make_chain_map: one block per source degree");
    ChainMap<R> f{&x, &y, std::move(blocks)};
    const R& ring = x.ring();
    for (int i = x.lo(); i <= x.hi(); ++i)
        if (f.blocks[static_cast<std::size_t>(i - x.lo())].rows != y.rank_at(i) ||
            f.blocks[static_cast<std::size_t>(i - x.lo())].cols != x.rank_at(i))
            throw std::invalid_argument("make_chain_map: block shape mismatch");
    int lo = std::min(x.lo(), y.lo()), hi = std::max(x.hi(), y.hi());
    for (int i = lo; i <= hi + 1; ++i) {
        auto lhs = rmat_mul(ring, y.diff_at(i), f.block_at(i));
        auto rhs = rmat_mul(ring, f.block_at(i - 1), x.diff_at(i));
        if (!rmat_is_zero(rmat_sub(ring, lhs, rhs)))
            throw std::invalid_argument("make_chain_map: squares do not commute");
    }
    return f;
}

// cone(f)_i = X_{i-1} (+) Y_i, (x,y) |-> (-d_X x, f(x) + d_Y y); fits in
// 0 -> Y -> cone(f) -> Sigma X -> 0.
template <class R>
FreeComplex<R> cone(const ChainMap<R>& f)
{
    const FreeComplex<R>& x = *f.from;
    const FreeComplex<R>& y = *f.to;
    const R& ring = x.ring();
    if (x.is_zero() && y.is_zero()) return make_free_complex(ring, 0, {}, {});
    int lo, hi;
    if (x.is_zero()) {
        lo = y.lo();
        hi = y.hi();
    } else if (y.is_zero()) {
        lo = x.lo() + 1;
        hi = x.hi() + 1;
    } else {
        lo = std::min(x.lo() + 1, y.lo());
        hi = std::max(x.hi() + 1, y.hi());
    }
    bool graded = x.graded() || y.graded();
    std::vector<long> ranks;
    std::vector<std::vector<int>> gdegs;
    std::vector<RMat<R>> diffs;
    for (int i = lo; i <= hi; ++i) {
        ranks.push_back(x.rank_at(i - 1) + y.rank_at(i));
        if (graded) {
            auto g = x.gdegs_at(i - 1);
            auto gy = y.gdegs_at(i);
            g.insert(g.end(), gy.begin(), gy.end());
            gdegs.push_back(std::move(g));
        }
    }
    for (int i = lo + 1; i <= hi; ++i) {
        long xr = x.rank_at(i - 2), yr = y.rank_at(i - 1);
        RMat<R> d{xr + yr, x.rank_at(i - 1) + y.rank_at(i), {}};
        for (const auto& e : x.diff_at(i - 1).entries) d.entries.push_back({e.r, e.c, ring.neg(e.v)});
        for (const auto& e : f.block_at(i - 1).entries) d.entries.push_back({xr + e.r, e.c, e.v});
        for (const auto& e : y.diff_at(i).entries)
            d.entries.push_back({xr + e.r, x.rank_at(i - 1) + e.c, e.v});
        diffs.push_back(rmat_make(ring, d.rows, d.cols, std::move(d.entries)));
    }
    return make_free_complex(ring, lo, std::move(ranks), std::move(diffs),
                             graded ? std::move(gdegs) : std::vector<std::vector<int>>{});
}

struct HomologyTable {
    int lo = 0;
    std::vector<long> lengths;
    long total = 0;
    int cutoff = -1;         // -1: exact (artinian ring)
    int trusted_cutoff = -1; // internal degrees above this are boundary-contaminated

    long length_at(int i) const
    {
        if (i < lo || i >= lo + static_cast<int>(lengths.size())) return 0;
        return lengths[static_cast<std::size_t>(i - lo)];
    }
};

// k-linear expansion of a matrix of ring elements over the full monomial
// basis of an artinian monomial ring (regular representation blocking).
template <class F>
SparseMatrix<F> expand_matrix(const MonomialCIRing<F>& ring, const RMat<MonomialCIRing<F>>& m)
{
    long dim = ring.dim();
    std::vector<typename SparseMatrix<F>::Triplet> trip;
    for (const auto& e : m.entries)
        for (long bi = 0; bi < dim; ++bi) {
            Mono b = ring.basis()[static_cast<std::size_t>(bi)];
            for (const auto& [mm, v] : e.v.terms) {
                Mono prod;
                if (!ring.mono_mul(mm, b, prod)) continue;
                trip.push_back({static_cast<int>(e.r * dim + ring.index_of(prod)),
                                static_cast<int>(e.c * dim + bi), v});
            }
        }
    return make_sparse(ring.field(), m.rows * dim, m.cols * dim, std::move(trip));
}

template <class F>
HomologyTable homology(const FreeComplex<MonomialCIRing<F>>& x, EliminationOptions opt = {})
{
    const auto& ring = x.ring();
    const F& f = ring.field();
    long dim = ring.dim();
    HomologyTable h;
    h.lo = x.lo();
    std::vector<long> dranks(static_cast<std::size_t>(x.length()) + 1, 0);
    for (int i = x.lo() + 1; i <= x.hi(); ++i)
        dranks[static_cast<std::size_t>(i - x.lo())] = rank(f, expand_matrix(ring, x.diff_at(i)), opt);
    for (int i = x.lo(); i <= x.hi(); ++i) {
        long len = x.rank_at(i) * dim - dranks[static_cast<std::size_t>(i - x.lo())] -
                   dranks[static_cast<std::size_t>(i - x.lo() + 1)];
        h.lengths.push_back(len);
        h.total += len;
    }
    return h;
}

// Slice of a graded free module at internal degree t: pairs (generator j,
// monomial of the complementary stratum), generators in order.
template <class F>
struct GradedSlice {
    std::vector<long> offset; // per generator; -1 when the generator misses the slice
    long dim = 0;
};

template <class F>
GradedSlice<F> graded_slice(const GradedPolyRing<F>& ring, const std::vector<int>& gdegs, int t)
{
    GradedSlice<F> s;
    int g = ring.generator_degree();
    for (int gd : gdegs) {
        int rem = t - gd;
        if (rem < 0 || rem % g != 0) {
            s.offset.push_back(-1);
        } else {
            s.offset.push_back(s.dim);
            s.dim += ring.stratum_dim(rem / g);
        }
    }
    return s;
}

template <class F>
SparseMatrix<F> expand_matrix_slice(const GradedPolyRing<F>& ring,
                                    const RMat<GradedPolyRing<F>>& m,
                                    const std::vector<int>& row_gdegs,
                                    const std::vector<int>& col_gdegs, int t)
{
    int g = ring.generator_degree();
    auto rows = graded_slice(ring, row_gdegs, t);
    auto cols = graded_slice(ring, col_gdegs, t);
    std::vector<typename SparseMatrix<F>::Triplet> trip;
    for (const auto& e : m.entries) {
        long co = cols.offset[static_cast<std::size_t>(e.c)];
        long ro = rows.offset[static_cast<std::size_t>(e.r)];
        if (co < 0 || ro < 0) continue;
        int sc = (t - col_gdegs[static_cast<std::size_t>(e.c)]) / g;
        int sr = (t - row_gdegs[static_cast<std::size_t>(e.r)]) / g;
        const auto& cb = ring.stratum(sc);
        for (long bi = 0; bi < static_cast<long>(cb.size()); ++bi)
            for (const auto& [mm, v] : e.v.terms)
                trip.push_back({ro + ring.stratum_index(sr, mm + cb[static_cast<std::size_t>(bi)]),
                                co + bi, v});
    }
    return make_sparse(ring.field(), rows.dim, cols.dim, std::move(trip));
}

// Stratum-by-stratum homology up to an internal-degree cutoff; the top two
// strata sit at the truncation boundary and are reported untrusted.
template <class F>
HomologyTable homology(const FreeComplex<GradedPolyRing<F>>& x, int cutoff,
                       EliminationOptions opt = {})
{
    if (cutoff < 0) throw std::invalid_argument("homology: cutoff required for graded rings");
    const auto& ring = x.ring();
    const F& f = ring.field();
    HomologyTable h;
    h.lo = x.lo();
    h.cutoff = cutoff;
    h.trusted_cutoff = cutoff - 2;
    h.lengths.assign(static_cast<std::size_t>(x.length()), 0);
    int t0 = 0;
    for (int i = x.lo(); i <= x.hi(); ++i)
        for (int g : x.gdegs_at(i)) t0 = std::min(t0, g);
    for (int t = t0; t <= cutoff; ++t) {
        std::vector<long> dims, dranks;
        for (int i = x.lo(); i <= x.hi(); ++i)
            dims.push_back(graded_slice(ring, x.gdegs_at(i), t).dim);
        dranks.push_back(0);
        for (int i = x.lo() + 1; i <= x.hi(); ++i)
            dranks.push_back(rank(
                f, expand_matrix_slice(ring, x.diff_at(i), x.gdegs_at(i - 1), x.gdegs_at(i), t),
                opt));
        dranks.push_back(0);
        for (int i = x.lo(); i <= x.hi(); ++i) {
            std::size_t k = static_cast<std::size_t>(i - x.lo());
            long len = dims[k] - dranks[k] - dranks[k + 1];
            h.lengths[k] += len;
            h.total += len;
        }
    }
    return h;
}

template <class F>
SparseMatrix<F> hstack(const F& f, const SparseMatrix<F>& a, const SparseMatrix<F>& b)
{
    if (a.rows != b.rows) throw std::invalid_argument("hstack: row mismatch");
    std::vector<typename SparseMatrix<F>::Triplet> t = a.entries;
    for (const auto& e : b.entries) t.push_back({e.r, a.cols + e.c, e.v});
    return make_sparse(f, a.rows, a.cols + b.cols, std::move(t));
}

// beta_i as dim H_i(X (x) k): differentials reduced mod m.  Exact for every
// degree whose two neighbouring differentials are inside the truncation.
template <class R>
std::vector<long> fiber_betti(const FreeComplex<R>& x, EliminationOptions opt = {})
{
    const auto& f = x.ring().field();
    std::vector<long> dranks(static_cast<std::size_t>(x.length()) + 1, 0);
    for (int i = x.lo() + 1; i <= x.hi(); ++i) {
        const auto& d = x.diff_at(i);
        SparseMatrix<typename R::Field> m{static_cast<int>(d.rows), static_cast<int>(d.cols), {}};
        for (const auto& e : d.entries) {
            auto c = e.v.coeff(0, f);
            if (!f.is_zero(c)) m.entries.push_back({static_cast<int>(e.r), static_cast<int>(e.c), c});
        }
        dranks[static_cast<std::size_t>(i - x.lo())] = rank(f, m, opt);
    }
    std::vector<long> out;
    for (int i = x.lo(); i <= x.hi(); ++i)
        out.push_back(x.rank_at(i) - dranks[static_cast<std::size_t>(i - x.lo())] -
                      dranks[static_cast<std::size_t>(i - x.lo() + 1)]);
    return out;
}

// Per-degree rank of the map induced on homology by a chain map, computed
// as rank(image of cycles modulo boundaries of the target).
template <class F>
std::vector<long> induced_homology_ranks(const ChainMap<MonomialCIRing<F>>& fmap, int lo, int hi,
                                         EliminationOptions opt = {})
{
    const auto& x = *fmap.from;
    const auto& y = *fmap.to;
    const auto& ring = x.ring();
    const F& f = ring.field();
    std::vector<long> out;
    for (int i = lo; i <= hi; ++i) {
        auto z = kernel_basis(f, expand_matrix(ring, x.diff_at(i)), opt);
        auto fz = multiply(f, expand_matrix(ring, fmap.block_at(i)), z);
        auto by = expand_matrix(ring, y.diff_at(i + 1));
        long rb = rank(f, by, opt);
        out.push_back(rank(f, hstack(f, fz, by), opt) - rb);
    }
    return out;
}

namespace detail {

// Mutable row-indexed form of a differential for unit elimination.
template <class R>
struct WorkMat {
    std::vector<std::map<long, typename R::Elem>> row;
    std::vector<std::set<long>> col; // rows having an entry in each column

    explicit WorkMat(const RMat<R>& m)
        : row(static_cast<std::size_t>(m.rows)), col(static_cast<std::size_t>(m.cols))
    {
        for (const auto& e : m.entries) {
            row[static_cast<std::size_t>(e.r)][e.c] = e.v;
            col[static_cast<std::size_t>(e.c)].insert(e.r);
        }
    }

    void set(const R& ring, long r, long c, typename R::Elem v)
    {
        if (v.is_zero()) {
            row[static_cast<std::size_t>(r)].erase(c);
            col[static_cast<std::size_t>(c)].erase(r);
        } else {
            row[static_cast<std::size_t>(r)][c] = std::move(v);
            col[static_cast<std::size_t>(c)].insert(r);
        }
        (void)ring;
    }

    typename R::Elem get(const R& ring, long r, long c) const
    {
        auto it = row[static_cast<std::size_t>(r)].find(c);
        return it == row[static_cast<std::size_t>(r)].end() ? ring.zero() : it->second;
    }

    // row[dst] += a * row[src]
    void axpy_row(const R& ring, long dst, const typename R::Elem& a, long src)
    {
        for (const auto& [c, v] : row[static_cast<std::size_t>(src)])
            set(ring, dst, c, ring.add(get(ring, dst, c), ring.mul(a, v)));
    }

    // col[dst] += a * col[src]
    void axpy_col(const R& ring, long dst, const typename R::Elem& a, long src)
    {
        auto rows_of_src = col[static_cast<std::size_t>(src)];
        for (long r : rows_of_src)
            set(ring, r, dst, ring.add(get(ring, r, dst), ring.mul(a, get(ring, r, src))));
    }
};

} // namespace detail

// Split off contractible rank-(1,1) summands at unit differential entries
// until the complex is minimal (every entry in the maximal ideal).
template <class R>
FreeComplex<R> minimize(const FreeComplex<R>& x)
{
    const R& ring = x.ring();
    int n = x.length();
    if (n == 0) return x;
    std::vector<detail::WorkMat<R>> d;
    d.reserve(static_cast<std::size_t>(n) - 1);
    for (int k = 0; k + 1 < n; ++k) d.emplace_back(x.diff_at(x.lo() + k + 1));
    std::vector<std::vector<bool>> alive(static_cast<std::size_t>(n));
    for (int k = 0; k < n; ++k)
        alive[static_cast<std::size_t>(k)].assign(static_cast<std::size_t>(x.rank_at(x.lo() + k)),
                                                  true);
    auto find_unit = [&](int k, long& r, long& c) {
        for (std::size_t ri = 0; ri < d[static_cast<std::size_t>(k)].row.size(); ++ri) {
            if (!alive[static_cast<std::size_t>(k)][ri]) continue;
            for (const auto& [cc, v] : d[static_cast<std::size_t>(k)].row[ri])
                if (alive[static_cast<std::size_t>(k + 1)][static_cast<std::size_t>(cc)] &&
                    ring.is_unit(v)) {
                    r = static_cast<long>(ri);
                    c = cc;
                    return true;
                }
        }
        return false;
    };
    bool changed = true;
    while (changed) {
        changed = false;
        for (int k = 0; k + 1 < n; ++k) {
            long r, c;
            while (find_unit(k, r, c)) {
                changed = true;
                auto& dk = d[static_cast<std::size_t>(k)];
                auto u = dk.get(ring, r, c);
                auto uinv = ring.unit_inverse(u);
                // alpha_j = u^{-1} d[r][j]: source basis change e_j -= alpha_j e_c
                std::vector<std::pair<long, typename R::Elem>> alpha, beta;
                for (const auto& [j, v] : dk.row[static_cast<std::size_t>(r)])
                    if (j != c && alive[static_cast<std::size_t>(k + 1)][static_cast<std::size_t>(j)])
                        alpha.push_back({j, ring.mul(uinv, v)});
                for (long i : dk.col[static_cast<std::size_t>(c)])
                    if (i != r && alive[static_cast<std::size_t>(k)][static_cast<std::size_t>(i)])
                        beta.push_back({i, ring.mul(uinv, dk.get(ring, i, c))});
                // propagate the basis changes to the neighbouring differentials
                if (k + 2 < n)
                    for (const auto& [j, a] : alpha)
                        d[static_cast<std::size_t>(k + 1)].axpy_row(ring, c, a, j);
                if (k > 0)
                    for (const auto& [i, b] : beta)
                        d[static_cast<std::size_t>(k - 1)].axpy_col(ring, r, b, i);
                // clear row r and column c of d_k
                for (const auto& [i, b] : beta) {
                    auto nb = ring.neg(b);
                    dk.axpy_row(ring, i, nb, r);
                }
                for (const auto& [j, a] : alpha) dk.set(ring, r, j, ring.zero());
                // retire the split-off pair; d^2 = 0 forces the transported
                // row/column of the neighbours to vanish
                alive[static_cast<std::size_t>(k)][static_cast<std::size_t>(r)] = false;
                alive[static_cast<std::size_t>(k + 1)][static_cast<std::size_t>(c)] = false;
                dk.set(ring, r, c, ring.zero());
                if (k + 2 < n &&
                    !d[static_cast<std::size_t>(k + 1)].row[static_cast<std::size_t>(c)].empty())
                    throw std::logic_error("minimize: split-off row did not vanish");
                if (k > 0 && !d[static_cast<std::size_t>(k - 1)].col[static_cast<std::size_t>(r)].empty())
                    throw std::logic_error("minimize: split-off column did not vanish");
            }
        }
    }
    // compact the surviving generators
    std::vector<long> ranks;
    std::vector<std::vector<long>> newidx(static_cast<std::size_t>(n));
    std::vector<std::vector<int>> gdegs;
    for (int k = 0; k < n; ++k) {
        auto old_gd = x.gdegs_at(x.lo() + k);
        std::vector<int> gd;
        long cnt = 0;
        newidx[static_cast<std::size_t>(k)].assign(alive[static_cast<std::size_t>(k)].size(), -1);
        for (std::size_t i = 0; i < alive[static_cast<std::size_t>(k)].size(); ++i)
            if (alive[static_cast<std::size_t>(k)][i]) {
                newidx[static_cast<std::size_t>(k)][i] = cnt++;
                if (x.graded()) gd.push_back(old_gd[i]);
            }
        ranks.push_back(cnt);
        if (x.graded()) gdegs.push_back(std::move(gd));
    }
    std::vector<RMat<R>> diffs;
    for (int k = 0; k + 1 < n; ++k) {
        std::vector<typename RMat<R>::Entry> entries;
        for (std::size_t ri = 0; ri < d[static_cast<std::size_t>(k)].row.size(); ++ri) {
            if (!alive[static_cast<std::size_t>(k)][ri]) continue;
            for (const auto& [c, v] : d[static_cast<std::size_t>(k)].row[ri]) {
                if (!alive[static_cast<std::size_t>(k + 1)][static_cast<std::size_t>(c)]) continue;
                entries.push_back({newidx[static_cast<std::size_t>(k)][ri],
                                   newidx[static_cast<std::size_t>(k + 1)][static_cast<std::size_t>(c)],
                                   v});
            }
        }
        diffs.push_back(rmat_make(ring, ranks[static_cast<std::size_t>(k)],
                                  ranks[static_cast<std::size_t>(k + 1)], std::move(entries)));
    }
    // trim zero-rank ends
    int lo = x.lo();
    while (!ranks.empty() && ranks.front() == 0) {
        ranks.erase(ranks.begin());
        if (!diffs.empty()) diffs.erase(diffs.begin());
        if (!gdegs.empty()) gdegs.erase(gdegs.begin());
        ++lo;
    }
    while (!ranks.empty() && ranks.back() == 0) {
        ranks.pop_back();
        if (!diffs.empty()) diffs.pop_back();
        if (!gdegs.empty()) gdegs.pop_back();
    }
    if (ranks.empty()) return make_free_complex(ring, x.lo(), {}, {});
    return make_free_complex(ring, lo, std::move(ranks), std::move(diffs), std::move(gdegs));
}

// A module with a square-zero endomorphism, together with the free-flag
// witness coming from a compression.
template <class R>
struct DifferentialModule {
    const R* ring = nullptr;
    long rank = 0;
    RMat<R> D;
    std::vector<long> flag; // cumulative ranks from the bottom degree
    std::vector<int> gdegs; // internal degrees (graded rings)
};

template <class R>
DifferentialModule<R> compress(const FreeComplex<R>& x)
{
    const R& ring = x.ring();
    DifferentialModule<R> dm;
    dm.ring = &ring;
    dm.rank = x.total_rank();
    std::vector<long> offset;
    long acc = 0;
    for (int i = x.lo(); i <= x.hi(); ++i) {
        offset.push_back(acc);
        acc += x.rank_at(i);
        dm.flag.push_back(acc);
        if (x.graded()) {
            auto g = x.gdegs_at(i);
            dm.gdegs.insert(dm.gdegs.end(), g.begin(), g.end());
        }
    }
    std::vector<typename RMat<R>::Entry> entries;
    for (int i = x.lo() + 1; i <= x.hi(); ++i)
        for (const auto& e : x.diff_at(i).entries)
            entries.push_back({offset[static_cast<std::size_t>(i - 1 - x.lo())] + e.r,
                               offset[static_cast<std::size_t>(i - x.lo())] + e.c, e.v});
    dm.D = rmat_make(ring, dm.rank, dm.rank, std::move(entries));
    if (!rmat_is_zero(rmat_mul(ring, dm.D, dm.D))) throw std::logic_error("compress: D^2 != 0");
    return dm;
}

// Free-flag witness: D maps the first flag[i] generators into the first
// flag[i-1].
template <class R>
bool flag_valid(const DifferentialModule<R>& dm)
{
    for (const auto& e : dm.D.entries) {
        std::size_t ci = 0, ri = 0;
        while (e.c >= dm.flag[ci]) ++ci;
        while (e.r >= dm.flag[ri]) ++ri;
        if (ci == 0 || ri + 1 > ci) return false;
    }
    return true;
}

template <class F>
long dm_homology(const DifferentialModule<MonomialCIRing<F>>& dm, EliminationOptions opt = {})
{
    const auto& ring = *dm.ring;
    long r = rank(ring.field(), expand_matrix(ring, dm.D), opt);
    return dm.rank * ring.dim() - 2 * r;
}

template <class F>
long dm_homology(const DifferentialModule<GradedPolyRing<F>>& dm, int cutoff,
                 EliminationOptions opt = {})
{
    if (cutoff < 0) throw std::invalid_argument("dm_homology: cutoff required");
    const auto& ring = *dm.ring;
    long total = 0;
    int t0 = 0;
    for (int g : dm.gdegs) t0 = std::min(t0, g);
    for (int t = t0; t <= cutoff; ++t) {
        long dim = graded_slice(ring, dm.gdegs, t).dim;
        long r = rank(ring.field(), expand_matrix_slice(ring, dm.D, dm.gdegs, dm.gdegs, t), opt);
        total += dim - 2 * r;
    }
    return total;
}

} // namespace ffc
