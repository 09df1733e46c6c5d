#pragma once

#include <robba/series.hpp>

namespace robba
{

// Topological generator gamma of Gamma = Z_p^x (p odd), recorded through chi(gamma).
struct GammaGenerator
{
    std::int64_t p = 0;
    PadicScalar chi_gamma;

    // Smallest positive primitive root mod p that also generates mod p^2.
    static GammaGenerator standard(std::int64_t p);
    // Validates that c generates Z_p^x topologically.
    static GammaGenerator from_value(std::int64_t p, std::int64_t c);

    // chi(gamma)^e at storage precision.
    PadicScalar chi_pow(std::int64_t e) const;
};

TruncatedLaurent phi(const TruncatedLaurent &f);
TruncatedLaurent gamma_act(const TruncatedLaurent &f, const GammaGenerator &g, std::int64_t exponent = 1);
// Left inverse of phi: the f_0 in f = sum_{i<p} (1+T)^i phi(f_i).
TruncatedLaurent psi(const TruncatedLaurent &f);
// t * partial(f).
TruncatedLaurent nabla(const TruncatedLaurent &f);

} // namespace robba
