#pragma once

#include <robba/operators.hpp>

#include <cstdint>
#include <string>

namespace robba
{

// Continuous character of Q_p^x, recorded by delta(p), the exponent on Teichmuller
// units, and delta(u) for the fixed generator u = 1+p of 1+pZ_p.
struct Character
{
    PadicScalar delta_p;
    std::int64_t teich_exp = 0; // in [0, p-1)
    PadicScalar delta_u;

    std::int64_t prime() const { return delta_p.prime(); }
    int precision() const { return std::min(delta_p.precision(), delta_u.precision()); }

    // delta(a) for a p-adic unit a.
    PadicScalar at_unit(const PadicScalar &a) const;
    PadicScalar at_chi_gamma(const GammaGenerator &g) const { return at_unit(g.chi_gamma); }

    Character inverse() const;
    Character pow(int k) const;
    friend Character operator*(const Character &a, const Character &b);
    // Componentwise equality at precision.
    bool equals_at_precision(const Character &o) const;

    std::string to_string() const;
};

// The generator u = 1+p at the given precision.
PadicScalar unit_generator(std::int64_t p, int prec);

enum class SpecialKind { x, abs_x, omega, x_pow, omega_x_pow, unramified };

struct SpecialSpec
{
    SpecialKind kind = SpecialKind::x;
    int k = 0;     // for x_pow / omega_x_pow
    PadicScalar c; // for unramified
};

Character special_character(std::int64_t p, const SpecialSpec &spec, int prec);
Character char_x(std::int64_t p, int prec);
Character char_abs_x(std::int64_t p, int prec);
Character char_omega(std::int64_t p, int prec);
Character char_x_pow(std::int64_t p, int k, int prec);
Character char_omega_x_pow(std::int64_t p, int k, int prec);
Character char_unramified(const PadicScalar &c);

// Exact rational number with positive denominator.
struct Rational
{
    std::int64_t num = 0;
    std::int64_t den = 1;

    static Rational make(std::int64_t n, std::int64_t d);
    friend Rational operator+(const Rational &a, const Rational &b);
    friend Rational operator-(const Rational &a);
    friend bool operator==(const Rational &a, const Rational &b) = default;
    std::string to_string() const;
};

// A (phi, Gamma)-module recorded only through rank and degree, closed under tensor,
// dual and extension. Enough for slope bookkeeping.
struct FormalModule
{
    int rank = 1;
    std::int64_t degree = 0;

    static FormalModule of(const Character &delta);
    FormalModule tensor(const FormalModule &o) const;
    FormalModule dual() const;
    FormalModule extension(const FormalModule &o) const;
    Rational slope() const;
};

int degree(const Character &delta);
Rational slope(const FormalModule &m);

struct Classification
{
    enum class Kind { XMinusI, OmegaXI, Generic };
    Kind kind = Kind::Generic;
    int i = 0;
    // Set when delta has the shape x^-i or omega x^i with i past the search limit.
    bool beyond_limit = false;

    std::string to_string() const;
    friend bool operator==(const Classification &a, const Classification &b) = default;
};

inline constexpr int kDefaultSearchLimit = 10;

Classification classify(const Character &delta, int search_limit = kDefaultSearchLimit);

struct CohomologyDims
{
    int h0 = 0;
    int h1 = 0;
    int h2 = 0;
    int euler() const { return h0 - h1 + h2; }
};

CohomologyDims cohomology_dims(const Classification &c);
CohomologyDims cohomology_dims(const Character &delta, int search_limit = kDefaultSearchLimit);

// R(delta) in the basis v: phi(f v) = delta(p) phi(f) v, gamma(f v) = delta(chi(gamma)) gamma(f) v.
struct RankOneModule
{
    Character delta;
    GammaGenerator gamma;

    TruncatedLaurent act_phi(const TruncatedLaurent &f) const;
    TruncatedLaurent act_gamma(const TruncatedLaurent &f) const;
};

// t^i, known up to degree hi + i - 1.
TruncatedLaurent h0_generator(std::int64_t p, int i, int hi = kDefaultHi);
// partial^k (1/T).
TruncatedLaurent h2_generator(std::int64_t p, int k);

// partial : R(x^-1 delta) -> R(delta).
TruncatedLaurent partial_transfer(const Character &delta, const TruncatedLaurent &f);

} // namespace robba
