#pragma once

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "ffc/field.hpp"
#include "ffc/laurent.hpp"
#include "ffc/sparse.hpp"

namespace ffc {

using Mono = std::uint64_t; // packed exponent vector

// Element of a presented ring: sorted (monomial, nonzero coefficient) pairs.
template <class F>
struct RingElem {
    using elem = typename F::elem;
    std::vector<std::pair<Mono, elem>> terms;

    bool operator==(const RingElem&) const = default;

    bool is_zero() const { return terms.empty(); }

    elem coeff(Mono m, const F& f) const
    {
        auto it = std::lower_bound(terms.begin(), terms.end(), m,
                                   [](const auto& p, Mono mm) { return p.first < mm; });
        return (it != terms.end() && it->first == m) ? it->second : f.zero();
    }
};

namespace detail {

template <class F>
RingElem<F> elem_merge(const F& f, const RingElem<F>& a, const RingElem<F>& b, bool subtract)
{
    RingElem<F> out;
    auto ia = a.terms.begin(), ea = a.terms.end();
    auto ib = b.terms.begin(), eb = b.terms.end();
    while (ia != ea || ib != eb) {
        if (ib == eb || (ia != ea && ia->first < ib->first)) {
            out.terms.push_back(*ia++);
        } else if (ia == ea || ib->first < ia->first) {
            auto v = subtract ? f.neg(ib->second) : ib->second;
            if (!f.is_zero(v)) out.terms.push_back({ib->first, v});
            ++ib;
        } else {
            auto v = subtract ? f.sub(ia->second, ib->second) : f.add(ia->second, ib->second);
            if (!f.is_zero(v)) out.terms.push_back({ia->first, v});
            ++ia;
            ++ib;
        }
    }
    return out;
}

} // namespace detail

// Monomial complete intersection k[t_1..t_e]/(t_1^{a_1},..,t_e^{a_e}):
// an artinian graded algebra with monomial basis {t^alpha : alpha_i < a_i}.
// Exponents are packed 4 bits per variable, e <= 16.
template <class F>
class MonomialCIRing {
public:
    using Field = F;
    using Elem = RingElem<F>;
    static constexpr int kMaxVars = 16;
    static constexpr bool kArtinian = true;

    MonomialCIRing(const F& f, std::vector<int> exponents) : f_(f), a_(std::move(exponents))
    {
        e_ = static_cast<int>(a_.size());
        if (e_ < 1 || e_ > kMaxVars) throw std::invalid_argument("MonomialCIRing: need 1 <= e <= 16");
        long dim = 1;
        for (int x : a_) {
            if (x < 2 || x > 15) throw std::invalid_argument("MonomialCIRing: exponents must be in [2,15]");
            dim *= x;
        }
        strides_.assign(static_cast<std::size_t>(e_), 1);
        for (int i = 1; i < e_; ++i)
            strides_[static_cast<std::size_t>(i)] =
                strides_[static_cast<std::size_t>(i - 1)] * a_[static_cast<std::size_t>(i - 1)];
        basis_.reserve(static_cast<std::size_t>(dim));
        std::vector<int> alpha(static_cast<std::size_t>(e_), 0);
        for (long idx = 0; idx < dim; ++idx) {
            Mono m = 0;
            for (int i = 0; i < e_; ++i) m |= static_cast<Mono>(alpha[static_cast<std::size_t>(i)]) << (4 * i);
            basis_.push_back(m);
            for (int i = 0; i < e_; ++i) {
                if (++alpha[static_cast<std::size_t>(i)] < a_[static_cast<std::size_t>(i)]) break;
                alpha[static_cast<std::size_t>(i)] = 0;
            }
        }
    }

    const F& field() const { return f_; }
    int vars() const { return e_; }
    int codim() const { return e_; }
    const std::vector<int>& exponents() const { return a_; }
    long dim() const { return static_cast<long>(basis_.size()); }
    const std::vector<Mono>& basis() const { return basis_; }
    bool order_at_least_three() const
    {
        for (int x : a_)
            if (x < 3) return false;
        return true;
    }

    int exponent_of(Mono m, int i) const { return static_cast<int>((m >> (4 * i)) & 0xf); }

    int degree(Mono m) const
    {
        int d = 0;
        for (int i = 0; i < e_; ++i) d += exponent_of(m, i);
        return d;
    }

    long index_of(Mono m) const
    {
        long idx = 0;
        for (int i = 0; i < e_; ++i)
            idx += static_cast<long>(exponent_of(m, i)) * strides_[static_cast<std::size_t>(i)];
        return idx;
    }

    // t^a * t^b, or nullopt if some exponent reaches a_i (relation kills it)
    bool mono_mul(Mono x, Mono y, Mono& out) const
    {
        out = 0;
        for (int i = 0; i < e_; ++i) {
            int s = exponent_of(x, i) + exponent_of(y, i);
            if (s >= a_[static_cast<std::size_t>(i)]) return false;
            out |= static_cast<Mono>(s) << (4 * i);
        }
        return true;
    }

    Elem zero() const { return {}; }
    Elem one() const { return Elem{{{0, f_.one()}}}; }
    Elem monomial(Mono m, typename F::elem c) const
    {
        if (f_.is_zero(c)) return {};
        return Elem{{{m, c}}};
    }
    Elem variable(int i) const { return monomial(Mono(1) << (4 * i), f_.one()); }

    Elem add(const Elem& x, const Elem& y) const { return detail::elem_merge(f_, x, y, false); }
    Elem sub(const Elem& x, const Elem& y) const { return detail::elem_merge(f_, x, y, true); }
    Elem neg(const Elem& x) const
    {
        Elem out = x;
        for (auto& [m, v] : out.terms) v = f_.neg(v);
        return out;
    }
    Elem scale(const Elem& x, const typename F::elem& c) const
    {
        if (f_.is_zero(c)) return {};
        Elem out = x;
        for (auto& [m, v] : out.terms) v = f_.mul(v, c);
        return out;
    }

    Elem mul(const Elem& x, const Elem& y) const
    {
        std::map<Mono, typename F::elem> acc;
        for (const auto& [mx, vx] : x.terms)
            for (const auto& [my, vy] : y.terms) {
                Mono m;
                if (!mono_mul(mx, my, m)) continue;
                auto it = acc.find(m);
                if (it == acc.end())
                    acc[m] = f_.mul(vx, vy);
                else
                    it->second = f_.add(it->second, f_.mul(vx, vy));
            }
        Elem out;
        for (const auto& [m, v] : acc)
            if (!f_.is_zero(v)) out.terms.push_back({m, v});
        return out;
    }

    bool is_unit(const Elem& x) const { return !f_.is_zero(x.coeff(0, f_)); }

    Elem unit_inverse(const Elem& u) const
    {
        auto c = u.coeff(0, f_);
        if (f_.is_zero(c)) throw std::domain_error("unit_inverse: not a unit");
        auto cinv = f_.inv(c);
        // u = c (1 - n) with n nilpotent; u^{-1} = c^{-1} sum n^k
        Elem n = sub(one(), scale(u, cinv));
        Elem acc = one();
        Elem term = one();
        while (true) {
            term = mul(term, n);
            if (term.is_zero()) break;
            acc = add(acc, term);
        }
        return scale(acc, cinv);
    }

    // k-dimension of each graded stratum of the ring itself; equals the
    // coefficients of prod (1 + t + .. + t^{a_i - 1}).
    IntLaurentPoly hilbert_series() const
    {
        IntLaurentPoly h(mpz_class(1));
        for (int x : a_) {
            IntLaurentPoly factor;
            for (int i = 0; i < x; ++i) factor.set(i, 1);
            h = h * factor;
        }
        return h;
    }

private:
    const F& f_;
    std::vector<int> a_;
    int e_ = 0;
    std::vector<long> strides_;
    std::vector<Mono> basis_;
};

// k-dimension, which equals length over these artinian local rings.
template <class F>
long length_over_ring(const MonomialCIRing<F>& r, long k_dimension)
{
    (void)r;
    return k_dimension;
}

// Graded polynomial ring k[t_1..t_d] with all generators of internal degree
// 1 or 2.  Monomials packed 8 bits per variable, d <= 8; strata enumerated
// on demand.
template <class F>
class GradedPolyRing {
public:
    using Field = F;
    using Elem = RingElem<F>;
    static constexpr int kMaxVars = 8;
    static constexpr bool kArtinian = false;

    GradedPolyRing(const F& f, int d, int generator_degree) : f_(f), d_(d), gdeg_(generator_degree)
    {
        if (d < 1 || d > kMaxVars) throw std::invalid_argument("GradedPolyRing: need 1 <= d <= 8");
        if (gdeg_ != 1 && gdeg_ != 2) throw std::invalid_argument("GradedPolyRing: generator degree must be 1 or 2");
    }

    const F& field() const { return f_; }
    int vars() const { return d_; }
    int generator_degree() const { return gdeg_; }

    int exponent_of(Mono m, int i) const { return static_cast<int>((m >> (8 * i)) & 0xff); }

    int degree(Mono m) const
    {
        int t = 0;
        for (int i = 0; i < d_; ++i) t += exponent_of(m, i);
        return gdeg_ * t;
    }

    // monomials of total polynomial degree s (internal degree gdeg * s)
    const std::vector<Mono>& stratum(int s) const
    {
        if (s < 0) throw std::invalid_argument("stratum: negative degree");
        while (static_cast<int>(strata_.size()) <= s) {
            int ns = static_cast<int>(strata_.size());
            std::vector<Mono> lvl;
            enumerate(ns, 0, 0, lvl);
            auto& idx = strata_index_.emplace_back();
            for (std::size_t i = 0; i < lvl.size(); ++i) idx[lvl[i]] = static_cast<long>(i);
            strata_.push_back(std::move(lvl));
        }
        return strata_[static_cast<std::size_t>(s)];
    }

    long stratum_index(int s, Mono m) const
    {
        stratum(s);
        return strata_index_[static_cast<std::size_t>(s)].at(m);
    }

    long stratum_dim(int s) const { return static_cast<long>(stratum(s).size()); }

    Elem zero() const { return {}; }
    Elem one() const { return Elem{{{0, f_.one()}}}; }
    Elem monomial(Mono m, typename F::elem c) const
    {
        if (f_.is_zero(c)) return {};
        return Elem{{{m, c}}};
    }
    Elem variable(int i) const { return monomial(Mono(1) << (8 * i), f_.one()); }

    Elem add(const Elem& x, const Elem& y) const { return detail::elem_merge(f_, x, y, false); }
    Elem sub(const Elem& x, const Elem& y) const { return detail::elem_merge(f_, x, y, true); }
    Elem neg(const Elem& x) const
    {
        Elem out = x;
        for (auto& [m, v] : out.terms) v = f_.neg(v);
        return out;
    }
    Elem scale(const Elem& x, const typename F::elem& c) const
    {
        if (f_.is_zero(c)) return {};
        Elem out = x;
        for (auto& [m, v] : out.terms) v = f_.mul(v, c);
        return out;
    }

    Elem mul(const Elem& x, const Elem& y) const
    {
        std::map<Mono, typename F::elem> acc;
        for (const auto& [mx, vx] : x.terms)
            for (const auto& [my, vy] : y.terms) {
                Mono m = mx + my; // 8-bit lanes; degrees stay far below 255
                auto it = acc.find(m);
                if (it == acc.end())
                    acc[m] = f_.mul(vx, vy);
                else
                    it->second = f_.add(it->second, f_.mul(vx, vy));
            }
        Elem out;
        for (const auto& [m, v] : acc)
            if (!f_.is_zero(v)) out.terms.push_back({m, v});
        return out;
    }

    bool is_unit(const Elem& x) const { return x.terms.size() == 1 && x.terms[0].first == 0; }

    Elem unit_inverse(const Elem& u) const
    {
        if (!is_unit(u)) throw std::domain_error("unit_inverse: not a constant");
        return Elem{{{0, f_.inv(u.terms[0].second)}}};
    }

private:
    void enumerate(int remaining, int var, Mono prefix, std::vector<Mono>& out) const
    {
        if (var == d_ - 1) {
            out.push_back(prefix | (static_cast<Mono>(remaining) << (8 * var)));
            return;
        }
        for (int k = remaining; k >= 0; --k)
            enumerate(remaining - k, var + 1, prefix | (static_cast<Mono>(k) << (8 * var)), out);
    }

    const F& f_;
    int d_;
    int gdeg_;
    mutable std::vector<std::vector<Mono>> strata_;
    mutable std::vector<std::unordered_map<Mono, long>> strata_index_;
};

} // namespace ffc
