#include <robba/operators.hpp>

#include "kernels.hpp"

#include <algorithm>
#include <map>

namespace robba
{

using detail::am;
using detail::DotAcc;
using detail::mm;
using detail::Poly;
using detail::ppow;
using detail::sm;

namespace
{

bool generates_mod_p2(std::int64_t p, std::int64_t c)
{
    if (c % p == 0) {
        return false;
    }
    const std::int64_t m = p * p;
    // order of c mod p must be p-1
    for (std::int64_t d = 1; d < p - 1; ++d) {
        if ((p - 1) % d == 0 && detail::powmod(c, static_cast<std::uint64_t>(d), p) == 1) {
            return false;
        }
    }
    return detail::powmod(c, static_cast<std::uint64_t>(p - 1), m) != 1;
}

} // namespace

GammaGenerator GammaGenerator::standard(std::int64_t p)
{
    if (!detail::is_odd_prime(p)) {
        throw DomainError("p must be an odd prime, got " + std::to_string(p));
    }
    for (std::int64_t c = 2; c < p * p; ++c) {
        if (generates_mod_p2(p, c)) {
            return from_value(p, c);
        }
    }
    throw DomainError("no generator found");
}

GammaGenerator GammaGenerator::from_value(std::int64_t p, std::int64_t c)
{
    if (!detail::is_odd_prime(p)) {
        throw DomainError("p must be an odd prime, got " + std::to_string(p));
    }
    if (!generates_mod_p2(p, detail::mod(c, p * p))) {
        throw DomainError("chi(gamma) = " + std::to_string(c) + " does not generate Z_" + std::to_string(p) + "^x");
    }
    GammaGenerator g;
    g.p = p;
    g.chi_gamma = PadicScalar::from_int(p, c, detail::storage_digits(p));
    return g;
}

PadicScalar GammaGenerator::chi_pow(std::int64_t e) const
{
    if (e >= 0) {
        return chi_gamma.pow(e);
    }
    return (PadicScalar::one(p, chi_gamma.precision()) / chi_gamma).pow(-e);
}

TruncatedLaurent phi(const TruncatedLaurent &f)
{
    const std::int64_t p = f.prime();
    return substitute(f, PadicScalar::from_int(p, p, exact_precision(p)));
}

TruncatedLaurent gamma_act(const TruncatedLaurent &f, const GammaGenerator &g, std::int64_t exponent)
{
    if (g.p != f.prime()) {
        throw DomainError("gamma_act: generator over a different prime");
    }
    return substitute(f, g.chi_pow(exponent));
}

namespace
{

// Pascal triangle binom(n, k) mod m for 0 <= k <= n < size.
struct Pascal
{
    std::int64_t m = 1;
    std::vector<Poly> rows;

    Pascal(std::size_t size, std::int64_t mod) : m(mod), rows(size)
    {
        for (std::size_t n = 0; n < size; ++n) {
            rows[n].assign(n + 1, 1 % m);
            for (std::size_t k = 1; k < n; ++k) {
                rows[n][k] = am(rows[n - 1][k - 1], rows[n - 1][k], m);
            }
        }
    }
    std::int64_t at(std::size_t n, std::size_t k) const { return k > n ? 0 : rows[n][k]; }
};

// psi of the polynomial sum_k a_k T^k (a_k residues mod m).
Poly psi_poly(const Poly &a, std::int64_t p, std::int64_t m)
{
    if (a.empty()) {
        return {};
    }
    const std::size_t n = a.size();
    const Pascal pas(n, m);
    // a = sum_j c_j (1+T)^j, c_j = sum_k a_k binom(k, j) (-1)^(k-j).
    Poly c(n, 0);
    for (std::size_t j = 0; j < n; j += static_cast<std::size_t>(p)) {
        DotAcc pos(m), neg(m);
        for (std::size_t k = j; k < n; ++k) {
            if (a[k] == 0) {
                continue;
            }
            ((k - j) % 2 == 0 ? pos : neg).add(a[k], pas.at(k, j));
        }
        c[j] = sm(pos.value(), neg.value(), m);
    }
    // psi((1+T)^(p i)) = (1+T)^i.
    const std::size_t nout = (n - 1) / static_cast<std::size_t>(p) + 1;
    Poly out(nout, 0);
    for (std::size_t d = 0; d < nout; ++d) {
        DotAcc acc(m);
        for (std::size_t i = d; i < nout; ++i) {
            acc.add(c[i * static_cast<std::size_t>(p)], pas.at(i, d));
        }
        out[d] = acc.value();
    }
    return out;
}

// psi(q^k) for k = 0..K modulo p^W, with q = phi(T)/T.
const std::vector<Poly> &psi_q_powers(std::int64_t p, int K)
{
    thread_local std::map<std::int64_t, std::vector<Poly>> cache;
    auto &v = cache[p];
    if (static_cast<int>(v.size()) > K) {
        return v;
    }
    const std::int64_t m = ppow(p, detail::storage_digits(p));
    Poly q(static_cast<std::size_t>(p), 0);
    std::int64_t b = 1;
    for (std::int64_t i = 1; i <= p; ++i) {
        b = b * (p - i + 1) / i;
        q[static_cast<std::size_t>(i - 1)] = b;
    }
    Poly qk{1};
    v.clear();
    for (int k = 0; k <= K; ++k) {
        if (k > 0) {
            qk = detail::mul_trunc(qk, q, qk.size() + q.size() - 1, m);
        }
        v.push_back(psi_poly(qk, p, m));
    }
    return v;
}

} // namespace

TruncatedLaurent psi(const TruncatedLaurent &f)
{
    const std::int64_t p = f.prime();
    const int e = f.precision() + f.shift();
    if (e <= 0) {
        return TruncatedLaurent::zero(p, f.precision(), std::min(f.lo(), 0), f.closed() ? 0 : f.hi() / p, f.closed());
    }
    if (!f.closed() && f.hi() < -1) {
        throw PrecisionError("psi: window must reach degree -1");
    }
    const std::int64_t m = ppow(p, e);
    const int top = f.closed() ? std::max(f.hi(), 0) : f.hi();
    // Unknown coefficients above hi have valuation >= min_valuation(f) (assumed) and the
    // coefficient of T^d in psi(T^k) has valuation >= floor(k/p) - d.
    int hi_out = top >= 0 ? top / static_cast<int>(p) : -1;
    if (!f.closed()) {
        hi_out = std::min(hi_out, (f.hi() + 1) / static_cast<int>(p) - e);
    }
    const int lo_out = std::min(f.lo(), 0);
    if (!f.closed() && hi_out < lo_out) {
        throw PrecisionError("psi: window too small to determine any coefficient");
    }
    const int hi_store = std::max(hi_out, 0);
    Poly out(static_cast<std::size_t>(hi_store - lo_out + 1), 0);
    auto slot = [&](int d) -> std::int64_t & { return out[static_cast<std::size_t>(d - lo_out)]; };
    // Nonnegative part.
    if (top >= 0) {
        Poly a(static_cast<std::size_t>(top + 1), 0);
        for (int k = std::max(f.lo(), 0); k <= top; ++k) {
            a[static_cast<std::size_t>(k)] = f.residue_at(k);
        }
        const Poly r = psi_poly(a, p, m);
        for (int d = 0; d <= hi_store && d < static_cast<int>(r.size()); ++d) {
            slot(d) = am(slot(d), r[static_cast<std::size_t>(d)], m);
        }
    }
    // psi(T^-k) = T^-k psi(q^k).
    const int K = -std::min(f.lo(), 0);
    if (K > 0) {
        const auto &pq = psi_q_powers(p, K);
        for (int k = 1; k <= K; ++k) {
            const std::int64_t fk = f.residue_at(-k);
            if (fk == 0) {
                continue;
            }
            const Poly &row = pq[static_cast<std::size_t>(k)];
            for (std::size_t j = 0; j < row.size(); ++j) {
                const int d = -k + static_cast<int>(j);
                if (d > hi_store) {
                    break;
                }
                slot(d) = am(slot(d), mm(fk, row[j] % m, m), m);
            }
        }
    }
    if (hi_out < 0 && !f.closed()) {
        out.resize(static_cast<std::size_t>(hi_out - lo_out + 1));
    }
    return TruncatedLaurent::from_residues(p, f.precision(), f.shift(), lo_out, f.closed() ? hi_store : hi_out,
                                           f.closed(), std::move(out));
}

TruncatedLaurent nabla(const TruncatedLaurent &f)
{
    const TruncatedLaurent d = partial(f);
    const int need = d.closed() ? std::max(kDefaultHi, d.hi()) - d.lo() : d.hi() - d.lo() + 1;
    return t_series(f.prime(), std::max(need, 1)) * d;
}

} // namespace robba
