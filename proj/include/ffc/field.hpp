#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

#include <gmpxx.h>

namespace ffc {

// Runtime descriptor of the coefficient field: characteristic 0 (rationals)
// or an odd prime p fitting in a machine word.  GF(2) is constructible (it
// is needed for the characteristic-2 negative tests) but every Lefschetz
// construction rejects it.
struct FieldInfo {
    std::uint64_t characteristic = 0;

    bool is_rational() const { return characteristic == 0; }
};

inline bool is_prime_u64(std::uint64_t n)
{
    if (n < 2) return false;
    for (std::uint64_t d = 2; d * d <= n; ++d)
        if (n % d == 0) return false;
    return true;
}

// Prime field GF(p), elements stored as machine words in [0, p).
class GF {
public:
    using elem = std::uint64_t;

    explicit GF(std::uint64_t p) : p_(p)
    {
        if (!is_prime_u64(p) || p > (std::uint64_t(1) << 31))
            throw std::invalid_argument("GF: modulus must be a prime <= 2^31");
    }

    std::uint64_t modulus() const { return p_; }
    FieldInfo info() const { return {p_}; }

    elem zero() const { return 0; }
    elem one() const { return 1 % p_; }
    elem from_int(long long n) const
    {
        long long r = n % static_cast<long long>(p_);
        if (r < 0) r += static_cast<long long>(p_);
        return static_cast<elem>(r);
    }

    bool is_zero(elem a) const { return a == 0; }
    bool is_one(elem a) const { return a == one(); }
    bool eq(elem a, elem b) const { return a == b; }

    elem add(elem a, elem b) const
    {
        elem s = a + b;
        return s >= p_ ? s - p_ : s;
    }
    elem sub(elem a, elem b) const { return a >= b ? a - b : a + p_ - b; }
    elem neg(elem a) const { return a == 0 ? 0 : p_ - a; }
    elem mul(elem a, elem b) const { return (a * b) % p_; }

    elem inv(elem a) const
    {
        if (a == 0) throw std::domain_error("GF::inv: zero");
        return pow(a, p_ - 2);
    }
    elem div(elem a, elem b) const { return mul(a, inv(b)); }

    elem pow(elem a, std::uint64_t e) const
    {
        elem r = one(), b = a;
        while (e) {
            if (e & 1) r = mul(r, b);
            b = mul(b, b);
            e >>= 1;
        }
        return r;
    }

    std::string to_string(elem a) const { return std::to_string(a); }
    elem from_string(const std::string& s) const
    {
        mpz_class z(s);
        mpz_class r = z % mpz_class(static_cast<unsigned long>(p_));
        if (r < 0) r += static_cast<unsigned long>(p_);
        return r.get_ui();
    }

private:
    std::uint64_t p_;
};

// The rationals, backed by GMP with eager normalization.
class QQ {
public:
    using elem = mpq_class;

    FieldInfo info() const { return {0}; }

    elem zero() const { return mpq_class(0); }
    elem one() const { return mpq_class(1); }
    elem from_int(long long n) const { return mpq_class(static_cast<long>(n)); }

    bool is_zero(const elem& a) const { return sgn(a) == 0; }
    bool is_one(const elem& a) const { return a == 1; }
    bool eq(const elem& a, const elem& b) const { return a == b; }

    elem add(const elem& a, const elem& b) const { return a + b; }
    elem sub(const elem& a, const elem& b) const { return a - b; }
    elem neg(const elem& a) const { return -a; }
    elem mul(const elem& a, const elem& b) const { return a * b; }
    elem inv(const elem& a) const
    {
        if (sgn(a) == 0) throw std::domain_error("QQ::inv: zero");
        return 1 / a;
    }
    elem div(const elem& a, const elem& b) const { return a / inv_guard(b); }

    std::string to_string(const elem& a) const
    {
        mpq_class c(a);
        c.canonicalize();
        if (c.get_den() == 1) return c.get_num().get_str();
        return c.get_num().get_str() + "/" + c.get_den().get_str();
    }
    elem from_string(const std::string& s) const
    {
        mpq_class q(s);
        q.canonicalize();
        return q;
    }

private:
    const elem& inv_guard(const elem& b) const
    {
        if (sgn(b) == 0) throw std::domain_error("QQ::div: zero divisor");
        return b;
    }
};

} // namespace ffc
