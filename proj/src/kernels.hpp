#pragma once

// Raw polynomial kernels over Z/p^k used by the series and operator code.

#include <cstddef>
#include <cstdint>
#include <vector>

namespace robba::detail
{

using Poly = std::vector<std::int64_t>;
using u128 = unsigned __int128;

inline std::int64_t mm(std::int64_t a, std::int64_t b, std::int64_t m)
{
    return static_cast<std::int64_t>(static_cast<u128>(static_cast<std::uint64_t>(a)) *
                                     static_cast<std::uint64_t>(b) % static_cast<std::uint64_t>(m));
}

inline std::int64_t am(std::int64_t a, std::int64_t b, std::int64_t m)
{
    const std::int64_t s = a + b;
    return s >= m ? s - m : s;
}

inline std::int64_t sm(std::int64_t a, std::int64_t b, std::int64_t m)
{
    const std::int64_t s = a - b;
    return s < 0 ? s + m : s;
}

// Accumulates products of residues < 2^62 and reduces every 8 terms.
class DotAcc
{
public:
    explicit DotAcc(std::int64_t m) : m_(static_cast<std::uint64_t>(m)) {}
    void add(std::int64_t a, std::int64_t b)
    {
        acc_ += static_cast<u128>(static_cast<std::uint64_t>(a)) * static_cast<std::uint64_t>(b);
        if (++n_ == 8) {
            acc_ %= m_;
            n_ = 1;
        }
    }
    std::int64_t value() const { return static_cast<std::int64_t>(acc_ % m_); }

private:
    std::uint64_t m_;
    u128 acc_ = 0;
    int n_ = 0;
};

// First n coefficients of a*b.
Poly mul_trunc(const Poly &a, const Poly &b, std::size_t n, std::int64_t m);
// First n coefficients of 1/a; a[0] must be a unit.
Poly inv_trunc(const Poly &a, std::size_t n, std::int64_t m);
// First n coefficients of (1+T)^e for a nonnegative integer e.
Poly one_plus_T_pow(std::uint64_t e, std::size_t n, std::int64_t m);

} // namespace robba::detail
