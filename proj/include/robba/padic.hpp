#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

namespace robba
{

// Base of every error raised by the library.
class Error : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

// Input could not be parsed or a configuration is invalid.
class ParseError : public Error
{
public:
    using Error::Error;
};

// A result cannot be certified at the available p-adic or T-adic precision.
class PrecisionError : public Error
{
public:
    using Error::Error;
};

// A mathematical precondition is violated (division by zero, wrong residue class, ...).
class DomainError : public Error
{
public:
    using Error::Error;
};

namespace detail
{

// Largest k with p^k < 2^62; residues mod p^k then multiply safely through __int128.
int storage_digits(std::int64_t p);

// p^k for 0 <= k <= storage_digits(p).
std::int64_t ppow(std::int64_t p, int k);

std::int64_t mod(std::int64_t a, std::int64_t m);
std::int64_t mulmod(std::int64_t a, std::int64_t b, std::int64_t m);
std::int64_t powmod(std::int64_t a, std::uint64_t e, std::int64_t m);
// Inverse of a unit modulo m.
std::int64_t invmod(std::int64_t a, std::int64_t m);

// p-adic valuation of a nonzero integer.
int val_int(std::int64_t p, std::int64_t n);

bool is_odd_prime(std::int64_t p);

} // namespace detail

// Element of Q_p known modulo p^N (absolute precision N).
//
// The value is p^v * u with u a unit known modulo p^(N - v). A scalar whose
// value lies in p^N Z_p is "zero to precision N"; it keeps N but has no unit part.
// Arithmetic follows the usual absolute-precision rules:
//   add/sub  : N = min(N_a, N_b)
//   mul      : N = min(N_a + v_b, N_b + v_a)
//   div      : N = v_a - v_b + min(N_a - v_a, N_b - v_b)
// where the valuation of a zero operand is taken to be its precision.
// Precision is additionally clamped so that the stored unit fits in 62 bits.
class PadicScalar
{
public:
    PadicScalar() = default;

    static PadicScalar zero(std::int64_t p, int prec);
    static PadicScalar one(std::int64_t p, int prec);
    static PadicScalar from_int(std::int64_t p, std::int64_t n, int prec);
    // num / den with den != 0.
    static PadicScalar from_rational(std::int64_t p, std::int64_t num, std::int64_t den, int prec);
    // p^v * u for an integer u (not necessarily a unit; extra factors of p are absorbed).
    static PadicScalar from_parts(std::int64_t p, int v, std::int64_t u, int prec);

    std::int64_t prime() const { return p_; }
    int precision() const { return prec_; }
    // Valuation; for a zero-to-precision scalar this is its precision.
    int valuation() const { return zero_ ? prec_ : val_; }
    bool is_zero() const { return zero_; }
    // Unit part, reduced modulo p^(N - v). Zero for a zero scalar.
    std::int64_t unit() const { return zero_ ? 0 : unit_; }
    // Representative of the value in [0, p^(N+s)) scaled by p^s, where s = max(0, -v).
    std::int64_t scaled_residue(int shift) const;

    bool is_unit() const { return !zero_ && val_ == 0; }
    bool is_integral() const { return zero_ || val_ >= 0; }

    // Same value, precision lowered to `prec` (no-op if already lower).
    PadicScalar truncated(int prec) const;
    // Same representative, precision raised to `prec`: the missing digits are declared zero.
    // Only used when a function is known to be Lipschitz so the caller can re-truncate.
    PadicScalar lifted(int prec) const;

    // Exact multiplication by p^k.
    PadicScalar shifted(int k) const;

    PadicScalar operator-() const;
    friend PadicScalar operator+(const PadicScalar &a, const PadicScalar &b);
    friend PadicScalar operator-(const PadicScalar &a, const PadicScalar &b);
    friend PadicScalar operator*(const PadicScalar &a, const PadicScalar &b);
    friend PadicScalar operator/(const PadicScalar &a, const PadicScalar &b);
    PadicScalar &operator+=(const PadicScalar &b) { return *this = *this + b; }
    PadicScalar &operator-=(const PadicScalar &b) { return *this = *this - b; }
    PadicScalar &operator*=(const PadicScalar &b) { return *this = *this * b; }
    PadicScalar &operator/=(const PadicScalar &b) { return *this = *this / b; }

    PadicScalar pow(std::int64_t e) const;

    // Equality modulo p^min(N_a, N_b).
    bool equals_at_precision(const PadicScalar &o) const;

    // "p^v*u" with u the balanced unit residue; "0 (mod p^N)" style is "O(p^N)".
    std::string to_string() const;

private:
    PadicScalar(std::int64_t p, int prec, int val, std::int64_t unit, bool zero)
        : p_(p), prec_(prec), val_(val), unit_(unit), zero_(zero)
    {
    }
    // Builds p^v * n mod p^prec for an arbitrary integer n and normalizes.
    static PadicScalar normalize(std::int64_t p, int prec, int v, std::int64_t n);

    std::int64_t p_ = 0;
    int prec_ = 0;
    int val_ = 0;
    std::int64_t unit_ = 0;
    bool zero_ = true;
};

enum class ArithOp { add, sub, mul, div };

PadicScalar arith(const PadicScalar &a, const PadicScalar &b, ArithOp op);

// Teichmuller representative of a (mod p), to precision N.
PadicScalar teichmuller(std::int64_t p, std::int64_t a, int prec);

// p-adic logarithm of u = 1 mod p.
PadicScalar plog(const PadicScalar &u);

// p-adic exponential of x with v(x) >= 1.
PadicScalar pexp(const PadicScalar &x);

// base^s for base = 1 mod p and s in Z_p, as exp(s log base).
PadicScalar ppow_unit(const PadicScalar &base, const PadicScalar &s);

// a(a-1)...(a-k+1)/k! for a in Z_p.
PadicScalar binomial(const PadicScalar &a, int k);

// Parses "p^v*u", "p^v", or a plain integer / fraction "n", "n/m".
PadicScalar parse_scalar(std::string_view text, std::int64_t p, int prec);

} // namespace robba
