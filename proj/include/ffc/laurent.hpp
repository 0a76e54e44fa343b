#pragma once

#include <map>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include <gmpxx.h>

namespace ffc {

// Integer Laurent polynomial: exponent -> nonzero coefficient.
class IntLaurentPoly {
public:
    IntLaurentPoly() = default;
    explicit IntLaurentPoly(const mpz_class& c)
    {
        if (c != 0) coeffs_[0] = c;
    }

    static IntLaurentPoly monomial(int exp, const mpz_class& c)
    {
        IntLaurentPoly p;
        if (c != 0) p.coeffs_[exp] = c;
        return p;
    }

    const std::map<int, mpz_class>& coeffs() const { return coeffs_; }
    bool is_zero() const { return coeffs_.empty(); }

    mpz_class coeff(int exp) const
    {
        auto it = coeffs_.find(exp);
        return it == coeffs_.end() ? mpz_class(0) : it->second;
    }

    void set(int exp, const mpz_class& c)
    {
        if (c == 0)
            coeffs_.erase(exp);
        else
            coeffs_[exp] = c;
    }

    int min_exp() const { return coeffs_.empty() ? 0 : coeffs_.begin()->first; }
    int max_exp() const { return coeffs_.empty() ? 0 : coeffs_.rbegin()->first; }

    mpz_class eval_one() const
    {
        mpz_class s = 0;
        for (const auto& [e, c] : coeffs_) s += c;
        return s;
    }

    IntLaurentPoly operator+(const IntLaurentPoly& o) const
    {
        IntLaurentPoly r = *this;
        for (const auto& [e, c] : o.coeffs_) r.set(e, r.coeff(e) + c);
        return r;
    }

    IntLaurentPoly operator-(const IntLaurentPoly& o) const
    {
        IntLaurentPoly r = *this;
        for (const auto& [e, c] : o.coeffs_) r.set(e, r.coeff(e) - c);
        return r;
    }

    IntLaurentPoly operator*(const IntLaurentPoly& o) const
    {
        IntLaurentPoly r;
        for (const auto& [e1, c1] : coeffs_)
            for (const auto& [e2, c2] : o.coeffs_) r.set(e1 + e2, r.coeff(e1 + e2) + c1 * c2);
        return r;
    }

    // t -> 1/t
    IntLaurentPoly reversed() const
    {
        IntLaurentPoly r;
        for (const auto& [e, c] : coeffs_) r.coeffs_[-e] = c;
        return r;
    }

    IntLaurentPoly shifted(int m) const
    {
        IntLaurentPoly r;
        for (const auto& [e, c] : coeffs_) r.coeffs_[e + m] = c;
        return r;
    }

    bool operator==(const IntLaurentPoly& o) const { return coeffs_ == o.coeffs_; }

private:
    std::map<int, mpz_class> coeffs_;
};

// Power series coefficients 0..N (length N+1), exact integers.
struct TruncatedSeries {
    std::vector<mpz_class> coeffs;

    int truncation() const { return static_cast<int>(coeffs.size()) - 1; }
    mpz_class coeff(int i) const
    {
        return (i >= 0 && i < static_cast<int>(coeffs.size())) ? coeffs[static_cast<std::size_t>(i)]
                                                               : mpz_class(0);
    }
    bool operator==(const TruncatedSeries& o) const { return coeffs == o.coeffs; }
};

// Coefficients of numerator / (1 - t^2)^c up to degree N.
inline TruncatedSeries expand_rational(const IntLaurentPoly& numerator, int c, int n)
{
    if (numerator.min_exp() < 0)
        throw std::invalid_argument("expand_rational: negative exponent in numerator");
    TruncatedSeries s;
    s.coeffs.assign(static_cast<std::size_t>(n) + 1, 0);
    for (const auto& [e, coef] : numerator.coeffs())
        if (e <= n) s.coeffs[static_cast<std::size_t>(e)] = coef;
    // multiply c times by the series of 1/(1 - t^2)
    for (int k = 0; k < c; ++k)
        for (int i = 2; i <= n; ++i) s.coeffs[static_cast<std::size_t>(i)] += s.coeffs[static_cast<std::size_t>(i - 2)];
    return s;
}

struct Unstable {
    bool operator==(const Unstable&) const { return true; }
};

// Multiplies the truncated series by (1 - t^2)^c and requires the tail in
// degrees (degree_bound, N-2] to vanish; otherwise the supplied complexity or
// the truncation is insufficient and Unstable is returned.
inline std::variant<IntLaurentPoly, Unstable>
recover_numerator(const TruncatedSeries& series, int c, int degree_bound)
{
    int n = series.truncation();
    if (n < degree_bound + 4) throw std::invalid_argument("recover_numerator: truncation too short");
    std::vector<mpz_class> p(series.coeffs);
    for (int k = 0; k < c; ++k)
        for (int i = n; i >= 2; --i) p[static_cast<std::size_t>(i)] -= p[static_cast<std::size_t>(i - 2)];
    for (int i = degree_bound + 1; i <= n - 2; ++i)
        if (p[static_cast<std::size_t>(i)] != 0) return Unstable{};
    IntLaurentPoly out;
    for (int i = 0; i <= degree_bound; ++i) out.set(i, p[static_cast<std::size_t>(i)]);
    return out;
}

// p(1)/2, as an exact rational.  Errors out when p(1) = 0, which would
// contradict the normalization of the Poincare numerator.
inline mpq_class betti_degree(const IntLaurentPoly& numerator)
{
    mpz_class v = numerator.eval_one();
    if (v == 0) throw std::domain_error("betti_degree: numerator vanishes at t = 1");
    mpq_class q(v, 2);
    q.canonicalize();
    return q;
}

} // namespace ffc
