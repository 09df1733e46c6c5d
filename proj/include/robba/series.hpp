#pragma once

#include <robba/padic.hpp>

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace robba
{

// Upper degree used when an operation turns a Laurent polynomial into an
// infinite series and the caller gave no explicit truncation.
inline constexpr int kDefaultHi = 80;

// Laurent series sum_k a_k T^k over Q_p known on a finite window.
//
// Coefficients below lo() are zero. Coefficients above hi() are unknown unless
// the series is closed(), i.e. a Laurent polynomial, in which case they are zero.
// All known coefficients share one absolute precision.
//
// Storage is fixed point: a_k = r_k * p^(-shift) with residues r_k taken modulo
// p^(precision + shift). The shift is kept equal to minus the smallest coefficient
// valuation, so residues never carry a common factor of p.
class TruncatedLaurent
{
public:
    TruncatedLaurent() = default;

    static TruncatedLaurent zero(std::int64_t p, int prec, int lo, int hi, bool closed = false);
    // c * T^deg as a Laurent polynomial.
    static TruncatedLaurent monomial(std::int64_t p, int deg, const PadicScalar &c);
    // Coefficients for degrees lo, lo+1, ...; precision is the minimum over them (capped at prec).
    static TruncatedLaurent from_coeffs(std::int64_t p, int prec, int lo, const std::vector<PadicScalar> &coeffs,
                                        bool closed);
    // Raw constructor used by the kernels. Residues are reduced and the shift renormalized.
    static TruncatedLaurent from_residues(std::int64_t p, int prec, int shift, int lo, int hi, bool closed,
                                          std::vector<std::int64_t> residues);

    std::int64_t prime() const { return p_; }
    int precision() const { return prec_; }
    int lo() const { return lo_; }
    int hi() const { return hi_; }
    bool closed() const { return closed_; }
    int shift() const { return shift_; }
    // Residues modulo p^(precision + shift) for degrees lo..hi.
    const std::vector<std::int64_t> &residues() const { return data_; }
    std::int64_t residue_at(int k) const;

    bool knows(int k) const { return k < lo_ || k <= hi_ || closed_; }
    PadicScalar coeff(int k) const;
    // Smallest valuation among known coefficients (precision if all are zero).
    int min_valuation() const { return -shift_; }
    bool is_zero() const;

    // Forget coefficients above `hi`; the result is open.
    TruncatedLaurent truncated_above(int hi) const;
    // Lower the precision.
    TruncatedLaurent with_precision(int prec) const;
    // Explicitly extend a closed series to the window [lo, hi] with zeros (stays closed).
    TruncatedLaurent padded(int hi) const;

    TruncatedLaurent operator-() const;
    friend TruncatedLaurent operator+(const TruncatedLaurent &a, const TruncatedLaurent &b);
    friend TruncatedLaurent operator-(const TruncatedLaurent &a, const TruncatedLaurent &b);
    friend TruncatedLaurent operator*(const TruncatedLaurent &a, const TruncatedLaurent &b);
    friend TruncatedLaurent operator*(const PadicScalar &c, const TruncatedLaurent &a);
    TruncatedLaurent &operator+=(const TruncatedLaurent &b) { return *this = *this + b; }
    TruncatedLaurent &operator-=(const TruncatedLaurent &b) { return *this = *this - b; }

    // Multiplicative inverse, for a series whose lowest coefficient is nonzero.
    TruncatedLaurent inverse(std::optional<int> hi = std::nullopt) const;
    TruncatedLaurent pow(int e) const;

    // "deg:coeff" pairs for the nonzero known coefficients.
    std::string to_literal() const;

private:
    std::int64_t p_ = 0;
    int prec_ = 0;
    int shift_ = 0;
    int lo_ = 0;
    int hi_ = -1;
    bool closed_ = true;
    std::vector<std::int64_t> data_;
};

enum class SeriesOp { add, sub, mul };

TruncatedLaurent series_arith(const TruncatedLaurent &f, const TruncatedLaurent &g, SeriesOp op);

// True when f and g agree on every degree both know, at the smaller precision.
bool equals_at_precision(const TruncatedLaurent &f, const TruncatedLaurent &g);
// Valuation of the smallest coefficient of f - g on the common window
// (the difference's precision when it vanishes).
int residual_valuation(const TruncatedLaurent &f, const TruncatedLaurent &g);

// f((1+T)^a - 1) for a a p-adic unit or a = p.
TruncatedLaurent substitute(const TruncatedLaurent &f, const PadicScalar &a, std::optional<int> hi = std::nullopt);

// (1+T) df/dT.
TruncatedLaurent partial(const TruncatedLaurent &f);

// Coefficient of T^-1.
PadicScalar residue(const TruncatedLaurent &f);

// res(f dT/(1+T)).
PadicScalar Res(const TruncatedLaurent &f);

// g with partial(g) = f and g_0 = 0; requires Res(f) = 0.
TruncatedLaurent partial_inverse(const TruncatedLaurent &f);

// Named constants.
struct SeriesConstants
{
    TruncatedLaurent t_series;          // log(1+T)
    TruncatedLaurent q_series;          // ((1+T)^p - 1)/T
    TruncatedLaurent one_plus_T_over_T; // (1+T)/T

    static SeriesConstants make(std::int64_t p, int hi = kDefaultHi);
};

TruncatedLaurent t_series(std::int64_t p, int hi = kDefaultHi);
TruncatedLaurent q_series(std::int64_t p);
TruncatedLaurent one_plus_T_over_T(std::int64_t p);

// Storage precision used for exactly known constants.
int exact_precision(std::int64_t p);

} // namespace robba
