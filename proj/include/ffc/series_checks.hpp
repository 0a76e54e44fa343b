#pragma once

#include <vector>

#include "ffc/laurent.hpp"

namespace ffc {

inline mpz_class binomial(long n, long k)
{
    if (k < 0 || n < 0 || k > n) return 0;
    mpz_class r;
    mpz_bin_uiui(r.get_mpz_t(), static_cast<unsigned long>(n), static_cast<unsigned long>(k));
    return r;
}

inline mpz_class catalan(long n)
{
    // C(2n, n) / (n + 1)
    return binomial(2 * n, n) / (n + 1);
}

// h(t) = sum_{i=0}^{n} [ C(2n,i) - C(2n,i-2) ] t^i
inline IntLaurentPoly h_poly(int n)
{
    IntLaurentPoly h;
    for (int i = 0; i <= n; ++i) h.set(i, binomial(2 * n, i) - binomial(2 * n, i - 2));
    return h;
}

// 2 h(1) = C(2n+2, n+1) and C(2n+2, n+1) = (n+2) Catalan(n+1).
inline bool central_binomial_identity(int n)
{
    mpz_class central = binomial(2 * n + 2, n + 1);
    if (2 * h_poly(n).eval_one() != central) return false;
    return central == (n + 2) * catalan(n + 1);
}

struct GrowthReport {
    int n_max = 0;
    // C(2n+2,n+1) < 2^{2n}; fails for n <= 3, holds for n >= 4
    std::vector<int> power_bound_holds;      // indexed by n, 0..n_max
    std::vector<int> stirling_bound_holds;   // C(2n+2,n+1) < 2^{2n} 4/sqrt(pi(n+1))
    int argmin_root = 0;                     // n minimizing C(2n+2,n+1)^{1/2n}, 1 <= n <= n_max
    bool min_root_below_19605 = false;       // min C(2n+2,n+1)^{1/2n} < 1.9605
    bool ok = false;
};

// Exact integer certificates for the asymptotic remarks.  The Stirling-form
// bound is certified with the rational upper bound pi < 355/113; the root
// comparison a < 1.9605 is certified as a^{2n} 10000^{2n} < 19605^{2n}.
inline GrowthReport growth_checks(int n_max)
{
    if (n_max < 5) throw std::invalid_argument("growth_checks: n_max must be >= 5");
    GrowthReport rep;
    rep.n_max = n_max;
    rep.power_bound_holds.assign(static_cast<std::size_t>(n_max) + 1, 0);
    rep.stirling_bound_holds.assign(static_cast<std::size_t>(n_max) + 1, 0);

    for (int n = 0; n <= n_max; ++n) {
        mpz_class central = binomial(2 * n + 2, n + 1);
        mpz_class pw2;
        mpz_ui_pow_ui(pw2.get_mpz_t(), 2, static_cast<unsigned long>(2 * n));
        rep.power_bound_holds[static_cast<std::size_t>(n)] = central < pw2 ? 1 : 0;
        // B^2 pi (n+1) < 16 * 2^{4n}:  enough that 355 B^2 (n+1) < 113 * 16 * 2^{4n}
        mpz_class lhs = 355 * central * central * (n + 1);
        mpz_class rhs = 113 * 16 * pw2 * pw2;
        rep.stirling_bound_holds[static_cast<std::size_t>(n)] = lhs < rhs ? 1 : 0;
    }

    // argmin of C(2n+2,n+1)^{1/2n}: compare B_m^{1/2m} < B_n^{1/2n} as B_m^n < B_n^m.
    int best = 1;
    mpz_class b_best = binomial(4, 2);
    for (int n = 2; n <= n_max; ++n) {
        mpz_class b_n = binomial(2 * n + 2, n + 1);
        mpz_class lhs, rhs;
        mpz_pow_ui(lhs.get_mpz_t(), b_n.get_mpz_t(), static_cast<unsigned long>(best));
        mpz_pow_ui(rhs.get_mpz_t(), b_best.get_mpz_t(), static_cast<unsigned long>(n));
        if (lhs < rhs) {
            best = n;
            b_best = b_n;
        }
    }
    rep.argmin_root = best;
    {
        // B_best < (19605/10000)^{2 best}
        mpz_class lhs, scale, rhs;
        mpz_ui_pow_ui(scale.get_mpz_t(), 10000, static_cast<unsigned long>(2 * best));
        lhs = b_best * scale;
        mpz_ui_pow_ui(rhs.get_mpz_t(), 19605, static_cast<unsigned long>(2 * best));
        rep.min_root_below_19605 = lhs < rhs;
    }

    bool ok = rep.min_root_below_19605;
    for (int n = 0; n <= 3; ++n) ok = ok && !rep.power_bound_holds[static_cast<std::size_t>(n)];
    for (int n = 4; n <= n_max; ++n)
        ok = ok && rep.power_bound_holds[static_cast<std::size_t>(n)] &&
             rep.stirling_bound_holds[static_cast<std::size_t>(n)];
    for (int n = 0; n <= 3; ++n)
        ok = ok && rep.stirling_bound_holds[static_cast<std::size_t>(n)];
    rep.ok = ok;
    return rep;
}

} // namespace ffc
