#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <queue>
#include <stdexcept>
#include <vector>

#include "ffc/field.hpp"

namespace ffc {

template <class F>
struct SparseMatrix {
    using elem = typename F::elem;
    struct Triplet {
        int r;
        int c;
        elem v;
    };

    int rows = 0;
    int cols = 0;
    std::vector<Triplet> entries; // sorted by (r, c), no duplicates, no zeros

    static SparseMatrix zero(int rows, int cols) { return SparseMatrix{rows, cols, {}}; }

    static SparseMatrix identity(const F& f, int n)
    {
        SparseMatrix m{n, n, {}};
        for (int i = 0; i < n; ++i) m.entries.push_back({i, i, f.one()});
        return m;
    }

    SparseMatrix transpose() const
    {
        SparseMatrix t{cols, rows, {}};
        t.entries.reserve(entries.size());
        for (const auto& e : entries) t.entries.push_back({e.c, e.r, e.v});
        std::sort(t.entries.begin(), t.entries.end(),
                  [](const Triplet& a, const Triplet& b) {
                      return a.r != b.r ? a.r < b.r : a.c < b.c;
                  });
        return t;
    }

    std::size_t nnz() const { return entries.size(); }
};

// Validates bounds, duplicate positions and stored zeros; sorts row-major.
template <class F>
SparseMatrix<F> make_sparse(const F& f, int rows, int cols,
                            std::vector<typename SparseMatrix<F>::Triplet> triplets)
{
    if (rows < 0 || cols < 0) throw std::invalid_argument("make_sparse: negative dimension");
    for (const auto& t : triplets) {
        if (t.r < 0 || t.r >= rows || t.c < 0 || t.c >= cols)
            throw std::invalid_argument("make_sparse: entry out of range");
        if (f.is_zero(t.v)) throw std::invalid_argument("make_sparse: stored zero");
    }
    std::sort(triplets.begin(), triplets.end(),
              [](const auto& a, const auto& b) { return a.r != b.r ? a.r < b.r : a.c < b.c; });
    for (std::size_t i = 1; i < triplets.size(); ++i)
        if (triplets[i].r == triplets[i - 1].r && triplets[i].c == triplets[i - 1].c)
            throw std::invalid_argument("make_sparse: duplicate entry");
    return SparseMatrix<F>{rows, cols, std::move(triplets)};
}

struct EliminationOptions {
    // Markowitz-style sparse elimination switches to a dense tail when the
    // remaining block is small or has filled in.
    int dense_cols = 512;
    double dense_fill = 0.20;
    bool allow_dense_tail = true;
};

namespace detail {

// Sparse row-echelon elimination with Markowitz-flavoured pivoting: pick the
// lightest active column, then the shortest row within it.  Used for rank,
// kernel and solving; the dense tail is enabled only on the rank path, which
// does not need the echelon rows afterwards.
template <class F>
class Gauss {
public:
    using elem = typename F::elem;
    using Row = std::vector<std::pair<int, elem>>; // sorted by column

    Gauss(const F& f, const SparseMatrix<F>& a, const SparseMatrix<F>* rhs,
          EliminationOptions opt)
        : f_(f), cols_(a.cols), opt_(opt)
    {
        rows_.assign(a.rows, {});
        for (const auto& t : a.entries) rows_[t.r].push_back({t.c, t.v});
        if (rhs) {
            if (rhs->rows != a.rows) throw std::invalid_argument("solve: row mismatch");
            rhs_cols_ = rhs->cols;
            rhs_rows_.assign(a.rows, {});
            for (const auto& t : rhs->entries) rhs_rows_[t.r].push_back({t.c, t.v});
            opt_.allow_dense_tail = false;
        }
        alive_.assign(a.rows, 1);
        col_count_.assign(cols_, 0);
        col_rows_.assign(cols_, {});
        for (int r = 0; r < a.rows; ++r)
            for (const auto& [c, v] : rows_[r]) {
                ++col_count_[c];
                col_rows_[c].push_back(r);
            }
        nnz_ = a.entries.size();
        active_rows_ = a.rows;
        active_cols_ = 0;
        for (int c = 0; c < cols_; ++c)
            if (col_count_[c] > 0) {
                ++active_cols_;
                heap_.push({col_count_[c], c});
            }
    }

    void run()
    {
        while (!heap_.empty()) {
            auto [cnt, c] = heap_.top();
            heap_.pop();
            if (col_count_[c] != cnt || cnt == 0) continue;
            if (opt_.allow_dense_tail && dense_tail_due()) {
                dense_finish();
                return;
            }
            pivot_on(c);
        }
    }

    long rank() const { return rank_; }

    // Basis of the right null space; one column per non-pivot column of A,
    // ordered by column index, free coordinate set to 1.
    SparseMatrix<F> kernel()
    {
        std::vector<char> is_pivot(cols_, 0);
        for (int c : pivot_col_) is_pivot[c] = 1;
        std::vector<int> free_cols;
        for (int c = 0; c < cols_; ++c)
            if (!is_pivot[c]) free_cols.push_back(c);

        SparseMatrix<F> k{cols_, static_cast<int>(free_cols.size()), {}};
        std::vector<elem> x(cols_, f_.zero());
        for (std::size_t j = 0; j < free_cols.size(); ++j) {
            std::vector<int> touched;
            x[free_cols[j]] = f_.one();
            touched.push_back(free_cols[j]);
            back_substitute(x, touched, nullptr, 0);
            for (int c : touched)
                if (!f_.is_zero(x[c])) k.entries.push_back({c, static_cast<int>(j), x[c]});
            for (int c : touched) x[c] = f_.zero();
        }
        std::sort(k.entries.begin(), k.entries.end(),
                  [](const auto& a, const auto& b) { return a.r != b.r ? a.r < b.r : a.c < b.c; });
        return k;
    }

    // Canonical solution (free variables zero) of A X = B, or nullopt.
    std::optional<SparseMatrix<F>> solution()
    {
        for (std::size_t r = 0; r < rows_.size(); ++r)
            if (alive_[r])
                for (const auto& [c, v] : rhs_rows_[r])
                    if (!f_.is_zero(v)) return std::nullopt;

        SparseMatrix<F> x{cols_, rhs_cols_, {}};
        std::vector<elem> col(cols_, f_.zero());
        for (int j = 0; j < rhs_cols_; ++j) {
            std::vector<int> touched;
            back_substitute(col, touched, &rhs_rows_, j);
            for (int c : touched)
                if (!f_.is_zero(col[c])) x.entries.push_back({c, j, col[c]});
            for (int c : touched) col[c] = f_.zero();
        }
        std::sort(x.entries.begin(), x.entries.end(),
                  [](const auto& a, const auto& b) { return a.r != b.r ? a.r < b.r : a.c < b.c; });
        return x;
    }

private:
    bool dense_tail_due() const
    {
        if (active_cols_ <= opt_.dense_cols) return active_rows_ > 0 && active_cols_ > 0;
        double denom = static_cast<double>(active_rows_) * static_cast<double>(active_cols_);
        return denom > 0 && static_cast<double>(nnz_) / denom > opt_.dense_fill;
    }

    void pivot_on(int c)
    {
        // Compact the lazy column list, keeping only live rows still holding c.
        std::vector<int>& lst = col_rows_[c];
        std::vector<int> live;
        for (int r : lst)
            if (alive_[r] && find_col(rows_[r], c) >= 0) live.push_back(r);
        std::sort(live.begin(), live.end());
        live.erase(std::unique(live.begin(), live.end()), live.end());
        lst = live;
        if (live.empty()) return;

        int rp = live[0];
        for (int r : live)
            if (rows_[r].size() < rows_[rp].size() || (rows_[r].size() == rows_[rp].size() && r < rp))
                rp = r;

        // Retire the pivot row from the active submatrix.
        alive_[rp] = 0;
        --active_rows_;
        for (const auto& [cc, vv] : rows_[rp]) {
            if (--col_count_[cc] == 0) --active_cols_;
            --nnz_;
            heap_.push({col_count_[cc], cc});
        }

        elem pv = rows_[rp][static_cast<std::size_t>(find_col(rows_[rp], c))].second;
        elem pinv = f_.inv(pv);
        for (int r : live) {
            if (r == rp) continue;
            int pos = find_col(rows_[r], c);
            elem factor = f_.mul(rows_[r][static_cast<std::size_t>(pos)].second, pinv);
            axpy_row(r, rp, factor);
            if (rhs_cols_ > 0) axpy_rhs(r, rp, factor);
        }
        pivot_row_.push_back(rp);
        pivot_col_.push_back(c);
        ++rank_;
    }

    // rows_[r] -= factor * rows_[rp], with column bookkeeping.
    void axpy_row(int r, int rp, const elem& factor)
    {
        Row out;
        out.reserve(rows_[r].size() + rows_[rp].size());
        auto ia = rows_[r].begin(), ea = rows_[r].end();
        auto ib = rows_[rp].begin(), eb = rows_[rp].end();
        while (ia != ea || ib != eb) {
            if (ib == eb || (ia != ea && ia->first < ib->first)) {
                out.push_back(*ia++);
            } else if (ia == ea || ib->first < ia->first) {
                elem v = f_.neg(f_.mul(factor, ib->second));
                if (!f_.is_zero(v)) {
                    out.push_back({ib->first, v});
                    note_added(ib->first, r);
                }
                ++ib;
            } else {
                elem v = f_.sub(ia->second, f_.mul(factor, ib->second));
                if (!f_.is_zero(v))
                    out.push_back({ia->first, v});
                else
                    note_removed(ia->first);
                ++ia;
                ++ib;
            }
        }
        rows_[r] = std::move(out);
    }

    void axpy_rhs(int r, int rp, const elem& factor)
    {
        Row out;
        auto ia = rhs_rows_[r].begin(), ea = rhs_rows_[r].end();
        auto ib = rhs_rows_[rp].begin(), eb = rhs_rows_[rp].end();
        while (ia != ea || ib != eb) {
            if (ib == eb || (ia != ea && ia->first < ib->first)) {
                out.push_back(*ia++);
            } else if (ia == ea || ib->first < ia->first) {
                elem v = f_.neg(f_.mul(factor, ib->second));
                if (!f_.is_zero(v)) out.push_back({ib->first, v});
                ++ib;
            } else {
                elem v = f_.sub(ia->second, f_.mul(factor, ib->second));
                if (!f_.is_zero(v)) out.push_back({ia->first, v});
                ++ia;
                ++ib;
            }
        }
        rhs_rows_[r] = std::move(out);
    }

    void note_added(int c, int r)
    {
        if (col_count_[c]++ == 0) ++active_cols_;
        ++nnz_;
        col_rows_[c].push_back(r);
        heap_.push({col_count_[c], c});
    }

    void note_removed(int c)
    {
        if (--col_count_[c] == 0) --active_cols_;
        --nnz_;
        heap_.push({col_count_[c], c});
    }

    static int find_col(const Row& row, int c)
    {
        auto it = std::lower_bound(row.begin(), row.end(), c,
                                   [](const auto& p, int col) { return p.first < col; });
        if (it == row.end() || it->first != c) return -1;
        return static_cast<int>(it - row.begin());
    }

    void dense_finish()
    {
        std::vector<int> cmap(cols_, -1);
        int nc = 0;
        for (int c = 0; c < cols_; ++c)
            if (col_count_[c] > 0) cmap[c] = nc++;
        std::vector<std::vector<elem>> d;
        for (std::size_t r = 0; r < rows_.size(); ++r) {
            if (!alive_[r] || rows_[r].empty()) continue;
            std::vector<elem> row(nc, f_.zero());
            for (const auto& [c, v] : rows_[r]) row[static_cast<std::size_t>(cmap[c])] = v;
            d.push_back(std::move(row));
        }
        std::size_t rr = 0;
        for (int c = 0; c < nc && rr < d.size(); ++c) {
            std::size_t p = rr;
            while (p < d.size() && f_.is_zero(d[p][static_cast<std::size_t>(c)])) ++p;
            if (p == d.size()) continue;
            std::swap(d[rr], d[p]);
            elem pinv = f_.inv(d[rr][static_cast<std::size_t>(c)]);
            for (std::size_t r2 = rr + 1; r2 < d.size(); ++r2) {
                elem& head = d[r2][static_cast<std::size_t>(c)];
                if (f_.is_zero(head)) continue;
                elem factor = f_.mul(head, pinv);
                for (int c2 = c; c2 < nc; ++c2)
                    d[r2][static_cast<std::size_t>(c2)] =
                        f_.sub(d[r2][static_cast<std::size_t>(c2)],
                               f_.mul(factor, d[rr][static_cast<std::size_t>(c2)]));
            }
            ++rr;
            ++rank_;
        }
    }

    // Echelon structure: pivot row i holds its pivot column plus columns that
    // were still uneliminated at that time, so a reverse sweep solves U x = b.
    void back_substitute(std::vector<elem>& x, std::vector<int>& touched,
                         const std::vector<Row>* rhs, int rhs_col)
    {
        for (std::size_t i = pivot_row_.size(); i-- > 0;) {
            int rp = pivot_row_[i];
            int c = pivot_col_[i];
            elem acc = f_.zero();
            if (rhs) {
                for (const auto& [j, v] : (*rhs)[rp])
                    if (j == rhs_col) acc = v;
            }
            elem pv = f_.zero();
            for (const auto& [cc, vv] : rows_[rp]) {
                if (cc == c) {
                    pv = vv;
                    continue;
                }
                if (!f_.is_zero(x[cc])) acc = f_.sub(acc, f_.mul(vv, x[cc]));
            }
            if (!f_.is_zero(acc)) {
                x[c] = f_.mul(acc, f_.inv(pv));
                touched.push_back(c);
            }
        }
    }

    const F& f_;
    int cols_;
    EliminationOptions opt_;
    std::vector<Row> rows_;
    std::vector<Row> rhs_rows_;
    int rhs_cols_ = 0;
    std::vector<char> alive_;
    std::vector<int> col_count_;
    std::vector<std::vector<int>> col_rows_;
    std::priority_queue<std::pair<int, int>, std::vector<std::pair<int, int>>,
                        std::greater<>>
        heap_;
    std::size_t nnz_ = 0;
    int active_rows_ = 0;
    int active_cols_ = 0;
    long rank_ = 0;
    std::vector<int> pivot_row_;
    std::vector<int> pivot_col_;
};

} // namespace detail

template <class F>
long rank(const F& f, const SparseMatrix<F>& a, EliminationOptions opt = {})
{
    detail::Gauss<F> g(f, a, nullptr, opt);
    g.run();
    return g.rank();
}

template <class F>
SparseMatrix<F> kernel_basis(const F& f, const SparseMatrix<F>& a, EliminationOptions opt = {})
{
    opt.allow_dense_tail = false;
    detail::Gauss<F> g(f, a, nullptr, opt);
    g.run();
    return g.kernel();
}

template <class F>
std::optional<SparseMatrix<F>> solve(const F& f, const SparseMatrix<F>& a,
                                     const SparseMatrix<F>& b, EliminationOptions opt = {})
{
    detail::Gauss<F> g(f, a, &b, opt);
    g.run();
    return g.solution();
}

template <class F>
SparseMatrix<F> mat_sub(const F& f, const SparseMatrix<F>& a, const SparseMatrix<F>& b)
{
    if (a.rows != b.rows || a.cols != b.cols) throw std::invalid_argument("mat_sub: shape mismatch");
    SparseMatrix<F> out{a.rows, a.cols, {}};
    auto ia = a.entries.begin();
    auto ib = b.entries.begin();
    auto key = [](const auto& t) { return std::pair<int, int>(t.r, t.c); };
    while (ia != a.entries.end() || ib != b.entries.end()) {
        if (ib == b.entries.end() || (ia != a.entries.end() && key(*ia) < key(*ib))) {
            out.entries.push_back(*ia++);
        } else if (ia == a.entries.end() || key(*ib) < key(*ia)) {
            out.entries.push_back({ib->r, ib->c, f.neg(ib->v)});
            ++ib;
        } else {
            auto v = f.sub(ia->v, ib->v);
            if (!f.is_zero(v)) out.entries.push_back({ia->r, ia->c, v});
            ++ia;
            ++ib;
        }
    }
    return out;
}

// Exact sparse product, used by invariants (A * kernel == 0, residual checks).
template <class F>
SparseMatrix<F> multiply(const F& f, const SparseMatrix<F>& a, const SparseMatrix<F>& b)
{
    if (a.cols != b.rows) throw std::invalid_argument("multiply: shape mismatch");
    std::vector<std::vector<std::pair<int, typename F::elem>>> brows(b.rows);
    for (const auto& t : b.entries) brows[t.r].push_back({t.c, t.v});
    std::vector<typename F::elem> acc(b.cols, f.zero());
    SparseMatrix<F> out{a.rows, b.cols, {}};
    std::size_t i = 0;
    while (i < a.entries.size()) {
        int r = a.entries[i].r;
        std::vector<int> touched;
        for (; i < a.entries.size() && a.entries[i].r == r; ++i) {
            const auto& t = a.entries[i];
            for (const auto& [c, v] : brows[t.c]) {
                if (f.is_zero(acc[c])) touched.push_back(c);
                acc[c] = f.add(acc[c], f.mul(t.v, v));
            }
        }
        std::sort(touched.begin(), touched.end());
        for (int c : touched) {
            if (!f.is_zero(acc[c])) out.entries.push_back({r, c, acc[c]});
            acc[c] = f.zero();
        }
    }
    return out;
}

} // namespace ffc
