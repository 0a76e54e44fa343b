#pragma once

#include <bit>
#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <vector>

#include "ffc/exterior.hpp"
#include "ffc/free_complex.hpp"

namespace ffc {

// Koszul complex on the ring generators t_1..t_e: exterior basis e_S over
// bitmasks, differential d(e_S) = sum_{i in S} (-1)^{pos} t_i e_{S\i}, and
// the DG algebra product.  Works over both ring families; over a graded
// polynomial ring e_S records internal degree g|S|.
template <class R>
struct KoszulComplex {
    using Elem = typename R::Elem;
    // element of the complex: mask -> ring coefficient
    using KElem = std::map<std::uint32_t, Elem>;

    const R* ring = nullptr;
    int e = 0;
    FreeComplex<R> cx;
    std::vector<std::vector<std::uint32_t>> masks; // per homological degree, increasing
    std::vector<long> pos;                         // mask -> index within its degree

    long index(std::uint32_t mask) const { return pos[mask]; }
};

template <class R>
KoszulComplex<R> koszul(const R& ring)
{
    KoszulComplex<R> k;
    k.ring = &ring;
    k.e = ring.vars();
    int e = k.e;
    k.masks.assign(static_cast<std::size_t>(e) + 1, {});
    k.pos.assign(std::size_t(1) << e, -1);
    for (std::uint32_t m = 0; m < (std::uint32_t(1) << e); ++m)
        k.masks[static_cast<std::size_t>(std::popcount(m))].push_back(m);
    for (int i = 0; i <= e; ++i)
        for (std::size_t j = 0; j < k.masks[static_cast<std::size_t>(i)].size(); ++j)
            k.pos[k.masks[static_cast<std::size_t>(i)][j]] = static_cast<long>(j);
    std::vector<long> ranks;
    std::vector<std::vector<int>> gdegs;
    for (int i = 0; i <= e; ++i) {
        ranks.push_back(static_cast<long>(k.masks[static_cast<std::size_t>(i)].size()));
        if constexpr (!R::kArtinian) {
            gdegs.push_back(std::vector<int>(k.masks[static_cast<std::size_t>(i)].size(),
                                             i * ring.generator_degree()));
        }
    }
    std::vector<RMat<R>> diffs;
    for (int i = 1; i <= e; ++i) {
        std::vector<typename RMat<R>::Entry> entries;
        for (std::size_t c = 0; c < k.masks[static_cast<std::size_t>(i)].size(); ++c) {
            std::uint32_t s = k.masks[static_cast<std::size_t>(i)][c];
            int below = 0;
            for (int v = 0; v < e; ++v) {
                if (!(s & (std::uint32_t(1) << v))) continue;
                auto coeff = ring.variable(v);
                if (below % 2 != 0) coeff = ring.neg(coeff);
                entries.push_back({k.pos[s & ~(std::uint32_t(1) << v)], static_cast<long>(c),
                                   std::move(coeff)});
                ++below;
            }
        }
        std::sort(entries.begin(), entries.end(), [](const auto& a, const auto& b) {
            return std::pair<long, long>{a.r, a.c} < std::pair<long, long>{b.r, b.c};
        });
        RMat<R> d{ranks[static_cast<std::size_t>(i - 1)], ranks[static_cast<std::size_t>(i)],
                  std::move(entries)};
        diffs.push_back(std::move(d));
    }
    k.cx = make_free_complex(ring, 0, std::move(ranks), std::move(diffs), std::move(gdegs));
    return k;
}

template <class R>
typename KoszulComplex<R>::KElem koszul_product(const KoszulComplex<R>& k,
                                                const typename KoszulComplex<R>::KElem& a,
                                                const typename KoszulComplex<R>::KElem& b)
{
    const R& ring = *k.ring;
    typename KoszulComplex<R>::KElem out;
    for (const auto& [s, ca] : a)
        for (const auto& [t, cb] : b) {
            if (s & t) continue;
            auto c = ring.mul(ca, cb);
            if (c.is_zero()) continue;
            if (wedge_sign(s, t) < 0) c = ring.neg(c);
            auto it = out.find(s | t);
            if (it == out.end())
                out[s | t] = std::move(c);
            else
                it->second = ring.add(it->second, c);
        }
    for (auto it = out.begin(); it != out.end();)
        it = it->second.is_zero() ? out.erase(it) : std::next(it);
    return out;
}

template <class R>
typename KoszulComplex<R>::KElem koszul_d(const KoszulComplex<R>& k,
                                          const typename KoszulComplex<R>::KElem& a)
{
    const R& ring = *k.ring;
    typename KoszulComplex<R>::KElem out;
    for (const auto& [s, c] : a) {
        int below = 0;
        for (int v = 0; v < k.e; ++v) {
            if (!(s & (std::uint32_t(1) << v))) continue;
            auto coeff = ring.mul(c, ring.variable(v));
            if (below % 2 != 0) coeff = ring.neg(coeff);
            ++below;
            if (coeff.is_zero()) continue;
            std::uint32_t m = s & ~(std::uint32_t(1) << v);
            auto it = out.find(m);
            if (it == out.end())
                out[m] = std::move(coeff);
            else
                it->second = ring.add(it->second, coeff);
        }
    }
    for (auto it = out.begin(); it != out.end();)
        it = it->second.is_zero() ? out.erase(it) : std::next(it);
    return out;
}

template <class R>
struct KoszulCycle {
    int degree = 0;
    typename KoszulComplex<R>::KElem elem;
};

// The r cycles z_i = t_i^{a_i - 1} e_i generating H_1.
template <class F>
std::vector<KoszulCycle<MonomialCIRing<F>>> h1_basis(const KoszulComplex<MonomialCIRing<F>>& k)
{
    const auto& ring = *k.ring;
    std::vector<KoszulCycle<MonomialCIRing<F>>> out;
    for (int i = 0; i < k.e; ++i) {
        Mono m = static_cast<Mono>(ring.exponents()[static_cast<std::size_t>(i)] - 1) << (4 * i);
        KoszulCycle<MonomialCIRing<F>> z;
        z.degree = 1;
        z.elem[std::uint32_t(1) << i] = ring.monomial(m, ring.field().one());
        out.push_back(std::move(z));
    }
    return out;
}

// z = sum_j z_{sigma(2j-1)} z_{sigma(2j)}: a degree-2 cycle whose class
// corresponds to the standard Lefschetz element.  Default pairing is
// (1,2),(3,4),...; an explicit pairing (2m distinct generator indices) may
// be supplied.
template <class F>
KoszulCycle<MonomialCIRing<F>> w_cycle(const KoszulComplex<MonomialCIRing<F>>& k, int pairs,
                                       const std::vector<int>& pairing = {})
{
    const auto& ring = *k.ring;
    if (2 * pairs > k.e) throw std::invalid_argument("w_cycle: 2m must be at most e");
    require_lefschetz_char(ring.field().info(), pairs);
    std::vector<int> sigma = pairing;
    if (sigma.empty())
        for (int i = 0; i < 2 * pairs; ++i) sigma.push_back(i);
    if (static_cast<int>(sigma.size()) != 2 * pairs)
        throw std::invalid_argument("w_cycle: pairing must list 2m generators");
    auto zs = h1_basis(k);
    KoszulCycle<MonomialCIRing<F>> z;
    z.degree = 2;
    typename KoszulComplex<MonomialCIRing<F>>::KElem acc;
    for (int j = 0; j < pairs; ++j) {
        auto p = koszul_product(k, zs[static_cast<std::size_t>(sigma[std::size_t(2 * j)])].elem,
                                zs[static_cast<std::size_t>(sigma[std::size_t(2 * j + 1)])].elem);
        for (auto& [m, c] : p) {
            auto it = acc.find(m);
            if (it == acc.end())
                acc[m] = std::move(c);
            else
                it->second = ring.add(it->second, c);
        }
    }
    z.elem = std::move(acc);
    if (!koszul_d(k, z.elem).empty()) throw std::logic_error("w_cycle: not a cycle");
    return z;
}

// lambda_z: K -> Sigma^{-2} K, u |-> u z (right DG multiplication).
template <class R>
ChainMap<R> lambda_z_map(const KoszulComplex<R>& k, const FreeComplex<R>& target,
                         const KoszulCycle<R>& z)
{
    const R& ring = *k.ring;
    std::vector<RMat<R>> blocks;
    for (int i = 0; i <= k.e; ++i) {
        long rows = target.rank_at(i), cols = k.cx.rank_at(i);
        std::vector<typename RMat<R>::Entry> entries;
        if (rows > 0)
            for (long c = 0; c < cols; ++c) {
                std::uint32_t s = k.masks[static_cast<std::size_t>(i)][static_cast<std::size_t>(c)];
                typename KoszulComplex<R>::KElem u{{s, ring.one()}};
                for (auto& [m, v] : koszul_product(k, u, z.elem))
                    entries.push_back({k.index(m), c, std::move(v)});
            }
        std::sort(entries.begin(), entries.end(), [](const auto& a, const auto& b) {
            return std::pair<long, long>{a.r, a.c} < std::pair<long, long>{b.r, b.c};
        });
        blocks.push_back(RMat<R>{rows, cols, std::move(entries)});
    }
    return make_chain_map(k.cx, target, std::move(blocks));
}

// F = cone(lambda_z), the small-rank complex with total homology below 2^e.
template <class F>
FreeComplex<MonomialCIRing<F>> carlsson_complex(const MonomialCIRing<F>& ring, int pairs,
                                                const std::vector<int>& pairing = {})
{
    auto k = koszul(ring);
    auto z = w_cycle(k, pairs, pairing);
    auto target = shift(k.cx, -2);
    auto f = lambda_z_map(k, target, z);
    return cone(f);
}

} // namespace ffc
