#include <robba/padic.hpp>

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <string>

namespace robba
{

namespace detail
{

int storage_digits(std::int64_t p)
{
    if (p < 2) {
        throw DomainError("prime must be at least 2");
    }
    const std::int64_t limit = std::int64_t{1} << 62;
    int k = 0;
    std::int64_t acc = 1;
    while (acc <= limit / p) {
        acc *= p;
        ++k;
    }
    return k;
}

std::int64_t ppow(std::int64_t p, int k)
{
    if (k < 0 || k > storage_digits(p)) {
        throw PrecisionError("p^" + std::to_string(k) + " exceeds the 62-bit residue store");
    }
    std::int64_t r = 1;
    for (int i = 0; i < k; ++i) {
        r *= p;
    }
    return r;
}

std::int64_t mod(std::int64_t a, std::int64_t m)
{
    std::int64_t r = a % m;
    return r < 0 ? r + m : r;
}

std::int64_t mulmod(std::int64_t a, std::int64_t b, std::int64_t m)
{
    auto r = static_cast<__int128>(a) * b % m;
    if (r < 0) {
        r += m;
    }
    return static_cast<std::int64_t>(r);
}

std::int64_t powmod(std::int64_t a, std::uint64_t e, std::int64_t m)
{
    std::int64_t r = 1 % m;
    std::int64_t b = mod(a, m);
    while (e) {
        if (e & 1u) {
            r = mulmod(r, b, m);
        }
        b = mulmod(b, b, m);
        e >>= 1u;
    }
    return r;
}

std::int64_t invmod(std::int64_t a, std::int64_t m)
{
    if (m == 1) {
        return 0;
    }
    __int128 old_r = mod(a, m), r = m, old_s = 1, s = 0;
    while (r != 0) {
        __int128 q = old_r / r;
        __int128 tmp = old_r - q * r;
        old_r = r;
        r = tmp;
        tmp = old_s - q * s;
        old_s = s;
        s = tmp;
    }
    if (old_r != 1) {
        throw DomainError("invmod: argument is not a unit");
    }
    __int128 res = old_s % m;
    if (res < 0) {
        res += m;
    }
    return static_cast<std::int64_t>(res);
}

int val_int(std::int64_t p, std::int64_t n)
{
    if (n == 0) {
        throw DomainError("valuation of 0");
    }
    int v = 0;
    while (n % p == 0) {
        n /= p;
        ++v;
    }
    return v;
}

bool is_odd_prime(std::int64_t p)
{
    if (p < 3 || p % 2 == 0) {
        return false;
    }
    for (std::int64_t d = 3; d * d <= p; d += 2) {
        if (p % d == 0) {
            return false;
        }
    }
    return true;
}

} // namespace detail

using detail::ppow;

PadicScalar PadicScalar::normalize(std::int64_t p, int prec, int v, std::int64_t n)
{
    if (n == 0) {
        return zero(p, prec);
    }
    while (n % p == 0) {
        n /= p;
        ++v;
    }
    if (v >= prec) {
        return zero(p, prec);
    }
    const int w = detail::storage_digits(p);
    if (prec - v > w) {
        prec = v + w;
    }
    return PadicScalar(p, prec, v, detail::mod(n, ppow(p, prec - v)), false);
}

PadicScalar PadicScalar::zero(std::int64_t p, int prec)
{
    return PadicScalar(p, prec, 0, 0, true);
}

PadicScalar PadicScalar::one(std::int64_t p, int prec)
{
    return normalize(p, prec, 0, 1);
}

PadicScalar PadicScalar::from_int(std::int64_t p, std::int64_t n, int prec)
{
    return normalize(p, prec, 0, n);
}

PadicScalar PadicScalar::from_rational(std::int64_t p, std::int64_t num, std::int64_t den, int prec)
{
    if (den == 0) {
        throw DomainError("from_rational: zero denominator");
    }
    const int vd = detail::val_int(p, den);
    std::int64_t d = den;
    for (int i = 0; i < vd; ++i) {
        d /= p;
    }
    if (num == 0) {
        return zero(p, prec);
    }
    const PadicScalar n = normalize(p, prec, -vd, num);
    if (n.zero_) {
        return n;
    }
    const int rel = n.prec_ - n.val_;
    const std::int64_t m = ppow(p, rel);
    return PadicScalar(p, n.prec_, n.val_, detail::mulmod(n.unit_, detail::invmod(d, m), m), false);
}

PadicScalar PadicScalar::from_parts(std::int64_t p, int v, std::int64_t u, int prec)
{
    return normalize(p, prec, v, u);
}

std::int64_t PadicScalar::scaled_residue(int shift) const
{
    if (zero_) {
        return 0;
    }
    if (val_ + shift < 0) {
        throw DomainError("scaled_residue: shift too small for this valuation");
    }
    const std::int64_t m = ppow(p_, prec_ + shift);
    if (val_ + shift >= prec_ + shift) {
        return 0;
    }
    return detail::mulmod(unit_, ppow(p_, val_ + shift), m);
}

PadicScalar PadicScalar::truncated(int prec) const
{
    if (prec >= prec_) {
        return *this;
    }
    if (zero_ || val_ >= prec) {
        return zero(p_, prec);
    }
    return PadicScalar(p_, prec, val_, detail::mod(unit_, ppow(p_, prec - val_)), false);
}

PadicScalar PadicScalar::lifted(int prec) const
{
    if (prec <= prec_) {
        return *this;
    }
    if (zero_) {
        return zero(p_, prec);
    }
    return normalize(p_, prec, val_, unit_);
}

PadicScalar PadicScalar::shifted(int k) const
{
    if (zero_) {
        return zero(p_, prec_ + k);
    }
    return PadicScalar(p_, prec_ + k, val_ + k, unit_, false);
}

PadicScalar PadicScalar::operator-() const
{
    if (zero_) {
        return *this;
    }
    return PadicScalar(p_, prec_, val_, detail::mod(-unit_, ppow(p_, prec_ - val_)), false);
}

static void check_same_prime(const PadicScalar &a, const PadicScalar &b)
{
    if (a.prime() != b.prime()) {
        throw DomainError("mismatched primes in p-adic arithmetic");
    }
}

PadicScalar operator+(const PadicScalar &a, const PadicScalar &b)
{
    check_same_prime(a, b);
    const std::int64_t p = a.p_;
    int prec = std::min(a.prec_, b.prec_);
    if (a.zero_) {
        return b.truncated(prec);
    }
    if (b.zero_) {
        return a.truncated(prec);
    }
    const int v = std::min(a.val_, b.val_);
    if (v >= prec) {
        return PadicScalar::zero(p, prec);
    }
    prec = std::min(prec, v + detail::storage_digits(p));
    const int rel = prec - v;
    const std::int64_t m = ppow(p, rel);
    std::int64_t n = 0;
    if (a.val_ - v < rel) {
        n = detail::mulmod(a.unit_, ppow(p, a.val_ - v), m);
    }
    if (b.val_ - v < rel) {
        n = detail::mod(n + detail::mulmod(b.unit_, ppow(p, b.val_ - v), m), m);
    }
    return PadicScalar::normalize(p, prec, v, n);
}

PadicScalar operator-(const PadicScalar &a, const PadicScalar &b)
{
    return a + (-b);
}

PadicScalar operator*(const PadicScalar &a, const PadicScalar &b)
{
    check_same_prime(a, b);
    const std::int64_t p = a.p_;
    const int prec = std::min(a.prec_ + b.valuation(), b.prec_ + a.valuation());
    if (a.zero_ || b.zero_) {
        return PadicScalar::zero(p, prec);
    }
    const int v = a.val_ + b.val_;
    if (v >= prec) {
        return PadicScalar::zero(p, prec);
    }
    const std::int64_t m = ppow(p, prec - v);
    return PadicScalar(p, prec, v, detail::mulmod(a.unit_, b.unit_, m), false);
}

PadicScalar operator/(const PadicScalar &a, const PadicScalar &b)
{
    check_same_prime(a, b);
    if (b.zero_) {
        throw DomainError("division by a scalar that is zero to its precision");
    }
    const std::int64_t p = a.p_;
    if (a.zero_) {
        return PadicScalar::zero(p, a.prec_ - b.val_);
    }
    const int v = a.val_ - b.val_;
    const int rel = std::min(a.prec_ - a.val_, b.prec_ - b.val_);
    const std::int64_t m = ppow(p, rel);
    const std::int64_t u = detail::mulmod(a.unit_, detail::invmod(b.unit_, m), m);
    return PadicScalar(p, v + rel, v, u, false);
}

PadicScalar PadicScalar::pow(std::int64_t e) const
{
    if (e == 0) {
        return one(p_, prec_);
    }
    if (e < 0) {
        return one(p_, prec_) / pow(-e);
    }
    PadicScalar result = *this;
    PadicScalar base = *this;
    bool first = true;
    while (e) {
        if (e & 1) {
            result = first ? base : result * base;
            first = false;
        }
        e >>= 1;
        if (e) {
            base = base * base;
        }
    }
    return result;
}

bool PadicScalar::equals_at_precision(const PadicScalar &o) const
{
    return (*this - o).is_zero();
}

std::string PadicScalar::to_string() const
{
    if (zero_) {
        return "0";
    }
    const std::int64_t m = ppow(p_, prec_ - val_);
    std::int64_t u = unit_;
    if (u > m / 2) {
        u -= m;
    }
    return std::to_string(p_) + "^" + std::to_string(val_) + "*" + std::to_string(u);
}

PadicScalar arith(const PadicScalar &a, const PadicScalar &b, ArithOp op)
{
    switch (op) {
    case ArithOp::add:
        return a + b;
    case ArithOp::sub:
        return a - b;
    case ArithOp::mul:
        return a * b;
    case ArithOp::div:
        return a / b;
    }
    throw DomainError("unknown arithmetic op");
}

PadicScalar teichmuller(std::int64_t p, std::int64_t a, int prec)
{
    if (detail::mod(a, p) == 0) {
        throw DomainError("teichmuller: argument divisible by p");
    }
    const std::int64_t m = ppow(p, prec);
    std::int64_t x = detail::mod(a, m);
    for (int i = 0; i < prec + 1; ++i) {
        const std::int64_t y = detail::powmod(x, static_cast<std::uint64_t>(p), m);
        if (y == x) {
            break;
        }
        x = y;
    }
    return PadicScalar::from_int(p, x, prec);
}

namespace
{

// Sum of sign * x^k / k over k >= 1 (log) or x^k / k! over k >= 0 (exp), computed
// at full storage precision from a lifted argument. Both functions are isometries
// on pZ_p for odd p, so the caller truncates back to the argument's precision.
PadicScalar log_series(const PadicScalar &x)
{
    const std::int64_t p = x.prime();
    const int w = detail::storage_digits(p);
    const PadicScalar xl = x.lifted(w);
    PadicScalar sum = PadicScalar::zero(p, w);
    if (xl.is_zero()) {
        return sum;
    }
    PadicScalar power = xl;
    for (int k = 1;; ++k) {
        const PadicScalar term = power / PadicScalar::from_int(p, k, w);
        if (k % 2 == 1) {
            sum += term;
        } else {
            sum -= term;
        }
        // remaining terms have valuation >= k*v(x) - log_p(k) which eventually exceeds w
        if (static_cast<double>(k + 1) * xl.valuation() - std::log(k + 1.0) / std::log(double(p)) > w + 1) {
            break;
        }
        power = power * xl;
    }
    return sum;
}

} // namespace

PadicScalar plog(const PadicScalar &u)
{
    const std::int64_t p = u.prime();
    if (!u.is_unit() || detail::mod(u.unit(), p) != 1) {
        throw DomainError("plog: argument must be 1 mod p");
    }
    const PadicScalar x = u - PadicScalar::one(p, u.precision());
    return log_series(x).truncated(u.precision());
}

PadicScalar pexp(const PadicScalar &x)
{
    const std::int64_t p = x.prime();
    if (x.valuation() < 1) {
        throw DomainError("pexp: argument must have positive valuation");
    }
    const int w = detail::storage_digits(p);
    const PadicScalar xl = x.lifted(w);
    PadicScalar sum = PadicScalar::one(p, w);
    PadicScalar term = PadicScalar::one(p, w);
    for (int k = 1; k < 8 * w; ++k) {
        term = term * xl / PadicScalar::from_int(p, k, w);
        sum += term;
        if (term.is_zero() && term.precision() >= sum.precision()) {
            break;
        }
    }
    return sum.truncated(x.precision());
}

PadicScalar ppow_unit(const PadicScalar &base, const PadicScalar &s)
{
    if (!s.is_integral()) {
        throw DomainError("ppow_unit: exponent must lie in Z_p");
    }
    return pexp(plog(base) * s);
}

PadicScalar binomial(const PadicScalar &a, int k)
{
    const std::int64_t p = a.prime();
    if (!a.is_integral()) {
        throw DomainError("binomial: argument must be a p-adic integer");
    }
    if (k < 0) {
        throw DomainError("binomial: negative k");
    }
    // binomial(., k) is p^floor(log_p k)-Lipschitz on Z_p.
    int log_k = 0;
    for (std::int64_t q = p; q <= k; q *= p) {
        ++log_k;
    }
    const int w = detail::storage_digits(p);
    const PadicScalar al = a.lifted(w);
    PadicScalar num = PadicScalar::one(p, w);
    PadicScalar den = PadicScalar::one(p, w);
    for (int j = 0; j < k; ++j) {
        num = num * (al - PadicScalar::from_int(p, j, w));
        den = den * PadicScalar::from_int(p, j + 1, w);
    }
    const PadicScalar r = num / den;
    return r.truncated(a.precision() - log_k);
}

namespace
{

std::int64_t parse_int(std::string_view s)
{
    std::int64_t v = 0;
    auto first = s.data();
    if (!s.empty() && s.front() == '+') {
        ++first;
    }
    const auto [ptr, ec] = std::from_chars(first, s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size() || first == s.data() + s.size()) {
        throw ParseError("invalid integer '" + std::string(s) + "'");
    }
    return v;
}

} // namespace

PadicScalar parse_scalar(std::string_view text, std::int64_t p, int prec)
{
    std::string s;
    for (char c : text) {
        if (c != ' ') {
            s.push_back(c);
        }
    }
    if (s.empty()) {
        throw ParseError("empty scalar literal");
    }
    const auto caret = s.find('^');
    if (caret != std::string::npos) {
        const auto star = s.find('*', caret);
        const std::int64_t base = parse_int(std::string_view(s).substr(0, caret));
        if (base != p) {
            throw ParseError("scalar literal base " + std::to_string(base) + " does not match prime " + std::to_string(p));
        }
        const auto vpart = std::string_view(s).substr(caret + 1, star == std::string::npos ? std::string::npos : star - caret - 1);
        const int v = static_cast<int>(parse_int(vpart));
        if (star == std::string::npos) {
            return PadicScalar::from_parts(p, v, 1, prec);
        }
        const auto upart = std::string_view(s).substr(star + 1);
        const auto slash = upart.find('/');
        if (slash == std::string_view::npos) {
            return PadicScalar::from_parts(p, v, parse_int(upart), prec);
        }
        return PadicScalar::from_rational(p, parse_int(upart.substr(0, slash)), parse_int(upart.substr(slash + 1)), prec - v).shifted(v);
    }
    const auto slash = s.find('/');
    if (slash == std::string::npos) {
        return PadicScalar::from_int(p, parse_int(s), prec);
    }
    return PadicScalar::from_rational(p, parse_int(std::string_view(s).substr(0, slash)), parse_int(std::string_view(s).substr(slash + 1)), prec);
}

} // namespace robba
