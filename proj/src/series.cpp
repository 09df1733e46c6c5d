#include <robba/series.hpp>

#include "kernels.hpp"

#include <algorithm>
#include <map>
#include <mutex>
#include <sstream>
#include <tuple>

namespace robba
{

using detail::am;
using detail::DotAcc;
using detail::mm;
using detail::Poly;
using detail::ppow;
using detail::sm;

namespace detail
{

Poly mul_trunc(const Poly &a, const Poly &b, std::size_t n, std::int64_t m)
{
    Poly c(n, 0);
    const std::size_t na = std::min(a.size(), n);
    for (std::size_t d = 0; d < n; ++d) {
        DotAcc acc(m);
        const std::size_t i0 = d + 1 > b.size() ? d + 1 - b.size() : 0;
        for (std::size_t i = i0; i <= d && i < na; ++i) {
            acc.add(a[i], b[d - i]);
        }
        c[d] = acc.value();
    }
    return c;
}

Poly inv_trunc(const Poly &a, std::size_t n, std::int64_t m)
{
    Poly b(n, 0);
    if (n == 0) {
        return b;
    }
    const std::int64_t inv0 = invmod(a.at(0), m);
    b[0] = inv0;
    for (std::size_t d = 1; d < n; ++d) {
        DotAcc acc(m);
        for (std::size_t i = 1; i <= d && i < a.size(); ++i) {
            acc.add(a[i], b[d - i]);
        }
        b[d] = mm(sm(0, acc.value(), m), inv0, m);
    }
    return b;
}

Poly one_plus_T_pow(std::uint64_t e, std::size_t n, std::int64_t m)
{
    Poly r(n, 0), base(n, 0);
    if (n == 0) {
        return r;
    }
    r[0] = 1 % m;
    base[0] = 1 % m;
    if (n > 1) {
        base[1] = 1 % m;
    }
    while (e) {
        if (e & 1u) {
            r = mul_trunc(r, base, n, m);
        }
        e >>= 1u;
        if (e) {
            base = mul_trunc(base, base, n, m);
        }
    }
    return r;
}

} // namespace detail

namespace
{

int W(std::int64_t p) { return detail::storage_digits(p); }

void check_same_prime(const TruncatedLaurent &a, const TruncatedLaurent &b)
{
    if (a.prime() != b.prime()) {
        throw DomainError("series over different primes");
    }
}

// Modulus for precision + shift, with nonpositive exponents meaning "everything is zero".
std::int64_t modulus(std::int64_t p, int e) { return e <= 0 ? 1 : ppow(p, e); }

int floor_log(std::int64_t p, std::int64_t k)
{
    int l = 0;
    for (std::int64_t q = p; q <= k; q *= p) {
        ++l;
    }
    return l;
}

} // namespace

int exact_precision(std::int64_t p) { return W(p); }

TruncatedLaurent TruncatedLaurent::from_residues(std::int64_t p, int prec, int shift, int lo, int hi, bool closed,
                                                 std::vector<std::int64_t> residues)
{
    if (!closed && hi < lo) {
        throw PrecisionError("empty output window [" + std::to_string(lo) + ", " + std::to_string(hi) + "]");
    }
    if (hi < lo) {
        hi = lo - 1;
    }
    if (residues.size() != static_cast<std::size_t>(hi - lo + 1)) {
        throw DomainError("from_residues: size does not match window");
    }
    if (prec + shift > W(p)) {
        throw PrecisionError("from_residues: residues exceed storage");
    }
    TruncatedLaurent f;
    f.p_ = p;
    f.prec_ = prec;
    f.lo_ = lo;
    f.hi_ = hi;
    f.closed_ = closed;
    const int e = prec + shift;
    const std::int64_t m = modulus(p, e);
    int vmin = std::max(e, 0);
    for (auto &r : residues) {
        r = detail::mod(r, m);
        if (r != 0) {
            vmin = std::min(vmin, detail::val_int(p, r));
        }
    }
    if (vmin >= e) {
        // Zero at this precision.
        std::fill(residues.begin(), residues.end(), 0);
        f.shift_ = -prec;
        f.data_ = std::move(residues);
        return f;
    }
    if (vmin > 0) {
        const std::int64_t d = ppow(p, vmin);
        for (auto &r : residues) {
            r /= d;
        }
    }
    f.shift_ = shift - vmin;
    // Degrees below the first nonzero coefficient are zero; drop them.
    std::size_t first = 0;
    while (residues[first] == 0) {
        ++first;
    }
    if (first > 0) {
        residues.erase(residues.begin(), residues.begin() + static_cast<std::ptrdiff_t>(first));
        f.lo_ += static_cast<int>(first);
    }
    if (closed) {
        while (!residues.empty() && residues.back() == 0) {
            residues.pop_back();
            --f.hi_;
        }
    }
    f.data_ = std::move(residues);
    return f;
}

TruncatedLaurent TruncatedLaurent::zero(std::int64_t p, int prec, int lo, int hi, bool closed)
{
    if (closed) {
        hi = std::max(hi, lo - 1);
    }
    const int n = std::max(0, hi - lo + 1);
    return from_residues(p, prec, -prec, lo, hi, closed, std::vector<std::int64_t>(n, 0));
}

TruncatedLaurent TruncatedLaurent::monomial(std::int64_t p, int deg, const PadicScalar &c)
{
    return from_coeffs(p, c.precision(), deg, {c}, true);
}

TruncatedLaurent TruncatedLaurent::from_coeffs(std::int64_t p, int prec, int lo, const std::vector<PadicScalar> &coeffs,
                                               bool closed)
{
    int pr = prec;
    for (const auto &c : coeffs) {
        if (c.prime() != p) {
            throw DomainError("coefficient over a different prime");
        }
        pr = std::min(pr, c.precision());
    }
    int vmin = pr;
    for (const auto &c : coeffs) {
        if (!c.is_zero() && c.valuation() < pr) {
            vmin = std::min(vmin, c.valuation());
        }
    }
    const int shift = -vmin;
    pr = std::min(pr, W(p) - shift);
    std::vector<std::int64_t> r(coeffs.size());
    for (std::size_t i = 0; i < coeffs.size(); ++i) {
        const PadicScalar c = coeffs[i].truncated(pr);
        r[i] = c.is_zero() ? 0 : c.scaled_residue(shift);
    }
    const int hi = lo + static_cast<int>(coeffs.size()) - 1;
    return from_residues(p, pr, shift, lo, hi, closed, std::move(r));
}

std::int64_t TruncatedLaurent::residue_at(int k) const
{
    if (k < lo_ || (k > hi_ && closed_)) {
        return 0;
    }
    if (k > hi_) {
        throw PrecisionError("coefficient of T^" + std::to_string(k) + " is outside the window [" +
                             std::to_string(lo_) + ", " + std::to_string(hi_) + "]");
    }
    return data_[static_cast<std::size_t>(k - lo_)];
}

PadicScalar TruncatedLaurent::coeff(int k) const
{
    const std::int64_t r = residue_at(k);
    if (r == 0) {
        return PadicScalar::zero(p_, prec_);
    }
    return PadicScalar::from_parts(p_, -shift_, r, prec_);
}

bool TruncatedLaurent::is_zero() const
{
    return std::all_of(data_.begin(), data_.end(), [](std::int64_t r) { return r == 0; });
}

TruncatedLaurent TruncatedLaurent::truncated_above(int hi) const
{
    if (hi >= hi_ && !closed_) {
        return *this;
    }
    if (hi < lo_) {
        throw PrecisionError("truncation leaves an empty window");
    }
    std::vector<std::int64_t> r(static_cast<std::size_t>(hi - lo_ + 1), 0);
    for (int k = lo_; k <= hi; ++k) {
        r[static_cast<std::size_t>(k - lo_)] = residue_at(k);
    }
    return from_residues(p_, prec_, shift_, lo_, hi, false, std::move(r));
}

TruncatedLaurent TruncatedLaurent::with_precision(int prec) const
{
    if (prec >= prec_) {
        return *this;
    }
    return from_residues(p_, prec, shift_, lo_, hi_, closed_, data_);
}

TruncatedLaurent TruncatedLaurent::padded(int hi) const
{
    if (!closed_ || hi <= hi_) {
        return *this;
    }
    TruncatedLaurent f = *this;
    f.data_.resize(static_cast<std::size_t>(hi - lo_ + 1), 0);
    f.hi_ = hi;
    return f;
}

TruncatedLaurent TruncatedLaurent::operator-() const
{
    const std::int64_t m = modulus(p_, prec_ + shift_);
    std::vector<std::int64_t> r(data_.size());
    for (std::size_t i = 0; i < r.size(); ++i) {
        r[i] = sm(0, data_[i], m);
    }
    return from_residues(p_, prec_, shift_, lo_, hi_, closed_, std::move(r));
}

namespace
{

TruncatedLaurent add_sub(const TruncatedLaurent &a, const TruncatedLaurent &b, bool subtract)
{
    check_same_prime(a, b);
    const std::int64_t p = a.prime();
    const int e = std::max(a.shift(), b.shift());
    int prec = std::min(a.precision(), b.precision());
    prec = std::min(prec, W(p) - e);
    const int lo = std::min(a.lo(), b.lo());
    int hi;
    bool closed = false;
    if (a.closed() && b.closed()) {
        hi = std::max(a.hi(), b.hi());
        closed = true;
    } else if (a.closed()) {
        hi = b.hi();
    } else if (b.closed()) {
        hi = a.hi();
    } else {
        hi = std::min(a.hi(), b.hi());
    }
    if (!closed && hi < lo) {
        throw PrecisionError("empty output window in addition");
    }
    const std::int64_t m = modulus(p, prec + e);
    // A zero operand may carry a shift far below e; its residues are all zero anyway.
    const std::int64_t fa = e - a.shift() >= prec + e ? 0 : modulus(p, e - a.shift());
    const std::int64_t fb = e - b.shift() >= prec + e ? 0 : modulus(p, e - b.shift());
    std::vector<std::int64_t> r(static_cast<std::size_t>(std::max(0, hi - lo + 1)));
    for (int k = lo; k <= hi; ++k) {
        const std::int64_t x = mm(a.residue_at(k) % m, fa % m, m);
        const std::int64_t y = mm(b.residue_at(k) % m, fb % m, m);
        r[static_cast<std::size_t>(k - lo)] = subtract ? sm(x, y, m) : am(x, y, m);
    }
    return TruncatedLaurent::from_residues(p, prec, e, lo, hi, closed, std::move(r));
}

} // namespace

TruncatedLaurent operator+(const TruncatedLaurent &a, const TruncatedLaurent &b) { return add_sub(a, b, false); }

TruncatedLaurent operator-(const TruncatedLaurent &a, const TruncatedLaurent &b) { return add_sub(a, b, true); }

TruncatedLaurent operator*(const TruncatedLaurent &a, const TruncatedLaurent &b)
{
    check_same_prime(a, b);
    const std::int64_t p = a.prime();
    const int e = a.shift() + b.shift();
    const int prec = std::min(a.precision() - b.shift(), b.precision() - a.shift());
    const int lo = a.lo() + b.lo();
    int hi;
    bool closed = false;
    if (a.closed() && b.closed()) {
        hi = a.hi() + b.hi();
        closed = true;
    } else if (a.closed()) {
        hi = a.lo() + b.hi();
    } else if (b.closed()) {
        hi = a.hi() + b.lo();
    } else {
        hi = std::min(a.lo() + b.hi(), b.lo() + a.hi());
    }
    if (closed) {
        hi = std::max(hi, lo - 1);
    }
    if (!closed && hi < lo) {
        throw PrecisionError("empty output window in multiplication");
    }
    const std::int64_t m = modulus(p, prec + e);
    const auto &ra = a.residues();
    const auto &rb = b.residues();
    std::vector<std::int64_t> r(static_cast<std::size_t>(std::max(0, hi - lo + 1)));
    for (int d = lo; d <= hi; ++d) {
        DotAcc acc(m);
        // i ranges over degrees of a with a_i and b_{d-i} both stored.
        const int i0 = std::max(a.lo(), d - b.lo() - static_cast<int>(rb.size()) + 1);
        const int i1 = std::min(a.lo() + static_cast<int>(ra.size()) - 1, d - b.lo());
        for (int i = i0; i <= i1; ++i) {
            acc.add(ra[static_cast<std::size_t>(i - a.lo())], rb[static_cast<std::size_t>(d - i - b.lo())]);
        }
        r[static_cast<std::size_t>(d - lo)] = acc.value();
    }
    return TruncatedLaurent::from_residues(p, prec, e, lo, hi, closed, std::move(r));
}

TruncatedLaurent operator*(const PadicScalar &c, const TruncatedLaurent &a)
{
    if (c.prime() != a.prime()) {
        throw DomainError("scalar over a different prime");
    }
    const std::int64_t p = a.prime();
    const int prec = std::min(a.precision() + c.valuation(), c.precision() - a.shift());
    if (c.is_zero()) {
        return TruncatedLaurent::zero(p, prec, a.lo(), a.hi(), a.closed());
    }
    const int e = a.shift() - c.valuation();
    const std::int64_t m = modulus(p, prec + e);
    const std::int64_t u = c.unit() % m;
    std::vector<std::int64_t> r(a.residues().size());
    for (std::size_t i = 0; i < r.size(); ++i) {
        r[i] = mm(a.residues()[i] % m, u, m);
    }
    return TruncatedLaurent::from_residues(p, prec, e, a.lo(), a.hi(), a.closed(), std::move(r));
}

TruncatedLaurent TruncatedLaurent::inverse(std::optional<int> hi) const
{
    int d = lo_;
    while (d <= hi_ && data_[static_cast<std::size_t>(d - lo_)] == 0) {
        ++d;
    }
    if (d > hi_) {
        throw DomainError("inverse of a series with no known nonzero coefficient");
    }
    // f = T^d (c_0 + c_1 T + ...), 1/f = T^-d (b_0 + b_1 T + ...).
    const int n = closed_ ? (hi.value_or(std::max(kDefaultHi, hi_)) + d + 1) : (hi_ - d + 1);
    if (n <= 0) {
        throw PrecisionError("inverse: requested window is empty");
    }
    std::vector<PadicScalar> c(static_cast<std::size_t>(n));
    for (int k = 0; k < n; ++k) {
        c[static_cast<std::size_t>(k)] = coeff(d + k);
    }
    std::vector<PadicScalar> b(static_cast<std::size_t>(n));
    const PadicScalar inv0 = PadicScalar::one(p_, W(p_)) / c[0];
    b[0] = inv0;
    for (int k = 1; k < n; ++k) {
        PadicScalar s = PadicScalar::zero(p_, W(p_));
        for (int j = 1; j <= k; ++j) {
            s += c[static_cast<std::size_t>(j)] * b[static_cast<std::size_t>(k - j)];
        }
        b[static_cast<std::size_t>(k)] = -(s * inv0);
    }
    TruncatedLaurent g = from_coeffs(p_, W(p_), -d, b, false);
    if (hi && *hi < g.hi()) {
        g = g.truncated_above(*hi);
    }
    return g;
}

TruncatedLaurent TruncatedLaurent::pow(int e) const
{
    if (e < 0) {
        return inverse().pow(-e);
    }
    TruncatedLaurent r = monomial(p_, 0, PadicScalar::one(p_, W(p_)));
    TruncatedLaurent b = *this;
    while (e) {
        if (e & 1) {
            r = r * b;
        }
        e >>= 1;
        if (e) {
            b = b * b;
        }
    }
    return r;
}

std::string TruncatedLaurent::to_literal() const
{
    std::ostringstream os;
    bool first = true;
    for (int k = lo_; k <= hi_; ++k) {
        if (data_[static_cast<std::size_t>(k - lo_)] == 0) {
            continue;
        }
        if (!first) {
            os << ' ';
        }
        first = false;
        os << k << ':' << coeff(k).to_string();
    }
    if (first) {
        os << '0';
    }
    return os.str();
}

TruncatedLaurent series_arith(const TruncatedLaurent &f, const TruncatedLaurent &g, SeriesOp op)
{
    switch (op) {
    case SeriesOp::add:
        return f + g;
    case SeriesOp::sub:
        return f - g;
    case SeriesOp::mul:
        return f * g;
    }
    throw DomainError("unknown series operation");
}

int residual_valuation(const TruncatedLaurent &f, const TruncatedLaurent &g)
{
    check_same_prime(f, g);
    const int lo = std::min(f.lo(), g.lo());
    int hi;
    if (f.closed() && g.closed()) {
        hi = std::max(f.hi(), g.hi());
    } else if (f.closed()) {
        hi = g.hi();
    } else if (g.closed()) {
        hi = f.hi();
    } else {
        hi = std::min(f.hi(), g.hi());
    }
    const int prec = std::min(f.precision(), g.precision());
    int v = prec;
    for (int k = lo; k <= hi; ++k) {
        const PadicScalar d = f.coeff(k) - g.coeff(k);
        if (!d.is_zero()) {
            v = std::min(v, d.valuation());
        }
    }
    return v;
}

bool equals_at_precision(const TruncatedLaurent &f, const TruncatedLaurent &g)
{
    return residual_valuation(f, g) >= std::min(f.precision(), g.precision());
}

// ---------------------------------------------------------------------------
// Substitution T -> (1+T)^a - 1.

namespace
{

// Powers u^k, k in [kmin, kmax], of u = ((1+T)^A - 1)/T modulo p^W, each truncated so that
// T^k u^k is known up to degree kmax.
struct SubstTable
{
    int kmin = 0;
    int kmax = -1;
    std::vector<Poly> rows; // rows[k - kmin] = u^k, length kmax - k + 1
};

SubstTable build_table(std::int64_t p, std::uint64_t A, int kmin, int kmax)
{
    const std::int64_t m = ppow(p, W(p));
    const std::size_t len = static_cast<std::size_t>(kmax - kmin + 1);
    Poly s = detail::one_plus_T_pow(A, len + 1, m);
    Poly u(s.begin() + 1, s.end());
    SubstTable t;
    t.kmin = kmin;
    t.kmax = kmax;
    t.rows.resize(len);
    auto put = [&](int k, const Poly &row) {
        const std::size_t n = static_cast<std::size_t>(kmax - k + 1);
        t.rows[static_cast<std::size_t>(k - kmin)] = Poly(row.begin(), row.begin() + static_cast<std::ptrdiff_t>(n));
    };
    Poly one(len, 0);
    one[0] = 1;
    if (kmin <= 0 && 0 <= kmax) {
        put(0, one);
    }
    Poly cur = one;
    for (int k = 1; k <= kmax; ++k) {
        cur = detail::mul_trunc(cur, u, len, m);
        if (k >= kmin) {
            put(k, cur);
        }
    }
    if (kmin < 0) {
        const Poly v = detail::inv_trunc(u, len, m);
        cur = one;
        for (int k = -1; k >= kmin; --k) {
            cur = detail::mul_trunc(cur, v, len, m);
            if (k <= kmax) {
                put(k, cur);
            }
        }
    }
    return t;
}

const SubstTable &cached_table(std::int64_t p, std::uint64_t A, int kmin, int kmax)
{
    thread_local std::map<std::pair<std::int64_t, std::uint64_t>, SubstTable> cache;
    auto key = std::make_pair(p, A);
    auto it = cache.find(key);
    if (it != cache.end() && it->second.kmin <= kmin && it->second.kmax >= kmax) {
        return it->second;
    }
    if (it != cache.end()) {
        kmin = std::min(kmin, it->second.kmin);
        kmax = std::max(kmax, it->second.kmax);
    }
    if (cache.size() > 64) {
        cache.clear();
    }
    return cache[key] = build_table(p, A, kmin, kmax);
}

TruncatedLaurent substitute_unit(const TruncatedLaurent &f, const PadicScalar &a, std::optional<int> hi_req)
{
    const std::int64_t p = f.prime();
    int hi_out = f.closed() ? hi_req.value_or(std::max(f.hi(), kDefaultHi)) : f.hi();
    if (hi_req) {
        hi_out = std::min(hi_out, *hi_req);
    }
    const int lo = f.lo();
    if (hi_out < lo) {
        throw PrecisionError("substitute: window too small to determine any coefficient");
    }
    const int kmin = std::min(lo, 0);
    const int kmax = std::max(hi_out, 0);
    // Coefficients of (1+T)^a of degree k are known to N_a - floor(log_p k).
    const int loss = floor_log(p, kmax - kmin + 1);
    const int prec = std::min(f.precision(), a.precision() - loss - f.shift());
    const std::uint64_t A = static_cast<std::uint64_t>(a.scaled_residue(0));
    const SubstTable &tab = cached_table(p, A, kmin, kmax);
    const std::int64_t m = modulus(p, prec + f.shift());
    std::vector<std::int64_t> r(static_cast<std::size_t>(hi_out - lo + 1));
    const int ktop = std::min(f.hi(), hi_out);
    for (int d = lo; d <= hi_out; ++d) {
        DotAcc acc(m);
        for (int k = lo; k <= std::min(d, ktop); ++k) {
            const std::int64_t fk = f.residues()[static_cast<std::size_t>(k - lo)];
            if (fk == 0) {
                continue;
            }
            const Poly &row = tab.rows[static_cast<std::size_t>(k - tab.kmin)];
            acc.add(fk, row[static_cast<std::size_t>(d - k)]);
        }
        r[static_cast<std::size_t>(d - lo)] = acc.value();
    }
    return TruncatedLaurent::from_residues(p, prec, f.shift(), lo, hi_out, false, std::move(r));
}

TruncatedLaurent substitute_p(const TruncatedLaurent &f)
{
    const std::int64_t p = f.prime();
    if (!f.closed() && f.hi() < -1) {
        // Unknown negative-degree coefficients would spread over all lower degrees.
        throw PrecisionError("phi: window must reach degree -1");
    }
    const int e = f.precision() + f.shift();
    const std::int64_t m = modulus(p, e);
    if (e <= 0) {
        return TruncatedLaurent::zero(p, f.precision(), f.lo(), f.closed() ? f.lo() - 1 : f.hi(), f.closed());
    }
    const int hi_out = f.closed() ? static_cast<int>(p) * std::max(f.hi(), 0) : f.hi();
    // s = (1+T)^p - 1 as a polynomial of degree p.
    Poly s(static_cast<std::size_t>(p + 1), 0);
    {
        std::int64_t b = 1;
        for (std::int64_t i = 1; i <= p; ++i) {
            b = b * (p - i + 1) / i;
            s[static_cast<std::size_t>(i)] = b % m;
        }
    }
    // Positive part by Horner, truncated at hi_out.
    Poly pos(static_cast<std::size_t>(std::max(hi_out, 0) + 1), 0);
    const int ktop = f.closed() ? f.hi() : std::min(f.hi(), hi_out);
    const int kbot = std::max(f.lo(), 0);
    {
        Poly r(pos.size(), 0);
        for (int k = ktop; k >= kbot; --k) {
            Poly nr(pos.size(), 0);
            for (std::size_t i = 0; i < r.size(); ++i) {
                if (r[i] == 0) {
                    continue;
                }
                for (std::size_t j = 1; j < s.size() && i + j < nr.size(); ++j) {
                    nr[i + j] = am(nr[i + j], mm(r[i], s[j], m), m);
                }
            }
            nr[0] = am(nr[0], f.residue_at(k), m);
            r = std::move(nr);
        }
        // Horner started at kbot, so multiply by s^kbot.
        for (int k = 0; k < kbot; ++k) {
            Poly nr(pos.size(), 0);
            for (std::size_t i = 0; i < r.size(); ++i) {
                for (std::size_t j = 1; j < s.size() && i + j < nr.size(); ++j) {
                    nr[i + j] = am(nr[i + j], mm(r[i], s[j], m), m);
                }
            }
            r = std::move(nr);
        }
        pos = std::move(r);
    }
    // Negative part in y = 1/T: s^-k = y^(pk) (1 + p w(y))^-k with w(y) = sum_j binom(p, p-j)/p y^j.
    // The coefficient of y^j in (1 + p w)^-k has valuation >= ceil(j/(p-1)), so terms with
    // j > (p-1)(e-1) vanish at this precision.
    const int mneg = -std::min(f.lo(), 0);
    const int J = static_cast<int>(p - 1) * (e - 1);
    int lo_out = std::min(f.lo(), 0);
    Poly neg; // neg[i] = coefficient of y^i
    if (mneg > 0) {
        const std::size_t len = static_cast<std::size_t>(J + 1);
        Poly onepw(len, 0);
        onepw[0] = 1 % m;
        for (std::size_t j = 1; j < s.size() - 1 && j < len; ++j) {
            onepw[j] = s[static_cast<std::size_t>(p) - j];
        }
        const Poly z = detail::inv_trunc(onepw, len, m);
        neg.assign(static_cast<std::size_t>(p * mneg + J + 1), 0);
        Poly zk(len, 0);
        zk[0] = 1 % m;
        for (int k = 1; k <= mneg; ++k) {
            zk = detail::mul_trunc(zk, z, len, m);
            const std::int64_t fk = f.residue_at(-k);
            if (fk == 0) {
                continue;
            }
            for (std::size_t j = 0; j < len; ++j) {
                auto &slot = neg[static_cast<std::size_t>(p * k) + j];
                slot = am(slot, mm(fk, zk[j], m), m);
            }
        }
        lo_out = -static_cast<int>(neg.size()) + 1;
    }
    const int lo = std::min(lo_out, 0);
    std::vector<std::int64_t> r(static_cast<std::size_t>(hi_out - lo + 1), 0);
    for (int d = lo; d <= hi_out; ++d) {
        std::int64_t v = 0;
        if (d >= 0 && static_cast<std::size_t>(d) < pos.size()) {
            v = pos[static_cast<std::size_t>(d)];
        }
        if (d < 0 && static_cast<std::size_t>(-d) < neg.size()) {
            v = am(v, neg[static_cast<std::size_t>(-d)], m);
        }
        r[static_cast<std::size_t>(d - lo)] = v;
    }
    return TruncatedLaurent::from_residues(p, f.precision(), f.shift(), lo, hi_out, f.closed(), std::move(r));
}

} // namespace

TruncatedLaurent substitute(const TruncatedLaurent &f, const PadicScalar &a, std::optional<int> hi)
{
    if (a.prime() != f.prime()) {
        throw DomainError("substitute: scalar over a different prime");
    }
    if (a.is_unit()) {
        return substitute_unit(f, a, hi);
    }
    const PadicScalar pp = PadicScalar::from_int(f.prime(), f.prime(), a.precision());
    if (a.valuation() == 1 && a.equals_at_precision(pp) && a.precision() >= 2) {
        TruncatedLaurent g = substitute_p(f);
        if (hi && *hi < g.hi()) {
            g = g.truncated_above(*hi);
        }
        return g;
    }
    throw DomainError("substitute: exponent must be a p-adic unit or p");
}

TruncatedLaurent partial(const TruncatedLaurent &f)
{
    const std::int64_t p = f.prime();
    const int e = f.precision() + f.shift();
    const std::int64_t m = modulus(p, e);
    // (1+T) f' has coefficient (d+1) f_{d+1} + d f_d at degree d.
    const int lo = f.lo() - 1;
    const int hi = f.hi() - (f.closed() ? 0 : 1);
    if (!f.closed() && hi < lo) {
        throw PrecisionError("partial: empty window");
    }
    std::vector<std::int64_t> r(static_cast<std::size_t>(std::max(0, hi - lo + 1)), 0);
    for (int d = lo; d <= hi; ++d) {
        const std::int64_t a = f.residue_at(d + 1);
        const std::int64_t b = f.residue_at(d);
        const std::int64_t v = am(mm(a, detail::mod(d + 1, m), m), mm(b, detail::mod(d, m), m), m);
        r[static_cast<std::size_t>(d - lo)] = v;
    }
    return TruncatedLaurent::from_residues(p, f.precision(), f.shift(), lo, hi, f.closed(), std::move(r));
}

PadicScalar residue(const TruncatedLaurent &f)
{
    if (!f.knows(-1)) {
        throw PrecisionError("residue: degree -1 outside the window");
    }
    return f.coeff(-1);
}

PadicScalar Res(const TruncatedLaurent &f)
{
    if (!f.knows(-1)) {
        throw PrecisionError("Res: degree -1 outside the window");
    }
    // f/(1+T) at degree -1 is sum_{j <= -1} f_j (-1)^(j+1).
    PadicScalar s = PadicScalar::zero(f.prime(), f.precision());
    for (int j = f.lo(); j <= -1; ++j) {
        const PadicScalar c = f.coeff(j);
        s = ((j + 1) % 2 == 0) ? s + c : s - c;
    }
    return s;
}

TruncatedLaurent partial_inverse(const TruncatedLaurent &f)
{
    const std::int64_t p = f.prime();
    const int e = f.precision() + f.shift();
    const std::int64_t m = modulus(p, e);
    if (!f.knows(-1)) {
        throw PrecisionError("partial_inverse: window does not reach degree -1");
    }
    // With h_k = k g_k the relations read h_{k+1} + h_k = f_k.
    const int flo = std::min(f.lo(), 0);
    const int fhi = f.closed() ? std::max(f.hi(), 0) : f.hi();
    const int lo = flo + 1;
    const int hi = fhi + 1;
    auto idx = [&](int k) { return static_cast<std::size_t>(k - lo); };
    std::vector<std::int64_t> h(static_cast<std::size_t>(hi - lo + 1), 0);
    if (flo < 0) {
        std::int64_t cur = 0; // h_0
        for (int k = -1; k >= flo; --k) {
            cur = sm(f.residue_at(k), cur, m); // h_k = f_k - h_{k+1}
            if (k >= lo) {
                h[idx(k)] = cur;
            } else if (cur != 0) {
                throw DomainError("partial_inverse: Res(f) is nonzero at precision");
            }
        }
    }
    {
        std::int64_t cur = 0; // h_0
        for (int k = 0; k + 1 <= hi; ++k) {
            cur = sm(f.residue_at(k), cur, m); // h_{k+1} = f_k - h_k
            h[idx(k + 1)] = cur;
        }
    }
    // g_k = h_k / k; dividing by p^v_p(k) costs that many digits.
    int loss = 0;
    for (int k = lo; k <= hi; ++k) {
        if (k != 0) {
            loss = std::max(loss, detail::val_int(p, k));
        }
    }
    const std::int64_t P = ppow(p, loss);
    std::vector<std::int64_t> g(h.size(), 0);
    for (int k = lo; k <= hi; ++k) {
        if (k == 0 || h[idx(k)] == 0) {
            continue;
        }
        const int v = detail::val_int(p, k);
        const std::int64_t kk = detail::mod(k / ppow(p, v), m);
        // h_k / k = h_k * p^(loss - v) / (k/p^v) / p^loss
        g[idx(k)] = mm(mm(h[idx(k)], P / ppow(p, v) % m, m), detail::invmod(kk, m), m);
    }
    return TruncatedLaurent::from_residues(p, f.precision() - loss, f.shift() + loss, lo, hi, false, std::move(g));
}

TruncatedLaurent t_series(std::int64_t p, int hi)
{
    std::vector<PadicScalar> c;
    for (int k = 1; k <= hi; ++k) {
        c.push_back(PadicScalar::from_rational(p, (k % 2 == 1) ? 1 : -1, k, W(p)));
    }
    return TruncatedLaurent::from_coeffs(p, W(p), 1, c, false);
}

TruncatedLaurent q_series(std::int64_t p)
{
    std::vector<PadicScalar> c;
    std::int64_t b = 1;
    for (std::int64_t k = 1; k <= p; ++k) {
        b = b * (p - k + 1) / k;
        c.push_back(PadicScalar::from_int(p, b, W(p)));
    }
    return TruncatedLaurent::from_coeffs(p, W(p), 0, c, true);
}

TruncatedLaurent one_plus_T_over_T(std::int64_t p)
{
    const PadicScalar one = PadicScalar::one(p, W(p));
    return TruncatedLaurent::from_coeffs(p, W(p), -1, {one, one}, true);
}

SeriesConstants SeriesConstants::make(std::int64_t p, int hi)
{
    return SeriesConstants{robba::t_series(p, hi), robba::q_series(p), robba::one_plus_T_over_T(p)};
}

} // namespace robba
