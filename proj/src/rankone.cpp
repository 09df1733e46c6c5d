#include <robba/rankone.hpp>

#include <numeric>
#include <sstream>

namespace robba
{

namespace
{

std::int64_t norm_te(std::int64_t te, std::int64_t p) { return detail::mod(te, p - 1); }

} // namespace

PadicScalar unit_generator(std::int64_t p, int prec) { return PadicScalar::from_int(p, 1 + p, prec); }

PadicScalar Character::at_unit(const PadicScalar &a) const
{
    const std::int64_t p = prime();
    if (!a.is_unit()) {
        throw DomainError("character evaluated at a non-unit");
    }
    const int prec = std::min(a.precision(), detail::storage_digits(p));
    const std::int64_t a0 = detail::mod(a.unit(), p);
    const PadicScalar w = teichmuller(p, a0, prec);
    PadicScalar val = w.pow(teich_exp);
    const PadicScalar one = PadicScalar::one(p, detail::storage_digits(p));
    if (delta_u.equals_at_precision(one) && delta_u.precision() >= detail::storage_digits(p)) {
        return val;
    }
    if (!(delta_u - one).is_zero() && (delta_u - one).valuation() < 1) {
        throw DomainError("delta(u) must be 1 mod p for delta to be continuous on 1+pZ_p");
    }
    const PadicScalar angle = a / w;
    const PadicScalar s = plog(angle) / plog(unit_generator(p, prec));
    return val * ppow_unit(delta_u, s);
}

Character Character::inverse() const
{
    const std::int64_t p = prime();
    const int w = detail::storage_digits(p);
    return Character{PadicScalar::one(p, w) / delta_p, norm_te(-teich_exp, p), PadicScalar::one(p, w) / delta_u};
}

Character Character::pow(int k) const
{
    if (k < 0) {
        return inverse().pow(-k);
    }
    const std::int64_t p = prime();
    return Character{delta_p.pow(k), norm_te(teich_exp * k, p), delta_u.pow(k)};
}

Character operator*(const Character &a, const Character &b)
{
    if (a.prime() != b.prime()) {
        throw DomainError("characters over different primes");
    }
    return Character{a.delta_p * b.delta_p, norm_te(a.teich_exp + b.teich_exp, a.prime()), a.delta_u * b.delta_u};
}

bool Character::equals_at_precision(const Character &o) const
{
    return delta_p.equals_at_precision(o.delta_p) && teich_exp == o.teich_exp && delta_u.equals_at_precision(o.delta_u);
}

std::string Character::to_string() const
{
    std::ostringstream os;
    os << "char(dp=" << delta_p.to_string() << ",te=" << teich_exp << ",du=" << delta_u.to_string() << ")";
    return os.str();
}

Character char_x(std::int64_t p, int prec)
{
    return Character{PadicScalar::from_int(p, p, prec), norm_te(1, p), unit_generator(p, prec)};
}

Character char_abs_x(std::int64_t p, int prec)
{
    return Character{PadicScalar::from_parts(p, -1, 1, prec), 0, PadicScalar::one(p, prec)};
}

Character char_omega(std::int64_t p, int prec)
{
    return Character{PadicScalar::one(p, prec), norm_te(1, p), unit_generator(p, prec)};
}

Character char_x_pow(std::int64_t p, int k, int prec) { return char_x(p, prec).pow(k); }

Character char_omega_x_pow(std::int64_t p, int k, int prec) { return char_omega(p, prec) * char_x_pow(p, k, prec); }

Character char_unramified(const PadicScalar &c)
{
    if (c.is_zero()) {
        throw DomainError("unramified character needs a nonzero value at p");
    }
    return Character{c, 0, PadicScalar::one(c.prime(), detail::storage_digits(c.prime()))};
}

Character special_character(std::int64_t p, const SpecialSpec &spec, int prec)
{
    if (!detail::is_odd_prime(p)) {
        throw DomainError("p must be an odd prime");
    }
    switch (spec.kind) {
    case SpecialKind::x:
        return char_x(p, prec);
    case SpecialKind::abs_x:
        return char_abs_x(p, prec);
    case SpecialKind::omega:
        return char_omega(p, prec);
    case SpecialKind::x_pow:
        return char_x_pow(p, spec.k, prec);
    case SpecialKind::omega_x_pow:
        return char_omega_x_pow(p, spec.k, prec);
    case SpecialKind::unramified:
        return char_unramified(spec.c);
    }
    throw DomainError("unknown special character");
}

Rational Rational::make(std::int64_t n, std::int64_t d)
{
    if (d == 0) {
        throw DomainError("rational with zero denominator");
    }
    if (d < 0) {
        n = -n;
        d = -d;
    }
    const std::int64_t g = std::gcd(n, d);
    return Rational{n / g, d / g};
}

Rational operator+(const Rational &a, const Rational &b) { return Rational::make(a.num * b.den + b.num * a.den, a.den * b.den); }

Rational operator-(const Rational &a) { return Rational{-a.num, a.den}; }

std::string Rational::to_string() const
{
    return den == 1 ? std::to_string(num) : std::to_string(num) + "/" + std::to_string(den);
}

int degree(const Character &delta)
{
    if (delta.delta_p.is_zero()) {
        throw DomainError("degree: delta(p) is zero at precision");
    }
    return delta.delta_p.valuation();
}

FormalModule FormalModule::of(const Character &delta) { return FormalModule{1, robba::degree(delta)}; }

FormalModule FormalModule::tensor(const FormalModule &o) const
{
    return FormalModule{rank * o.rank, degree * o.rank + o.degree * rank};
}

FormalModule FormalModule::dual() const { return FormalModule{rank, -degree}; }

FormalModule FormalModule::extension(const FormalModule &o) const { return FormalModule{rank + o.rank, degree + o.degree}; }

Rational FormalModule::slope() const { return Rational::make(degree, rank); }

Rational slope(const FormalModule &m) { return m.slope(); }

std::string Classification::to_string() const
{
    switch (kind) {
    case Kind::XMinusI:
        return "XMinusI(" + std::to_string(i) + ")";
    case Kind::OmegaXI:
        return "OmegaXI(" + std::to_string(i) + ")";
    case Kind::Generic:
        return beyond_limit ? "Generic(beyond search limit)" : "Generic";
    }
    return "Generic";
}

Classification classify(const Character &delta, int search_limit)
{
    const std::int64_t p = delta.prime();
    if (delta.delta_p.is_zero()) {
        throw DomainError("classify: delta(p) is zero at precision");
    }
    const int v = delta.delta_p.valuation();
    const int w = detail::storage_digits(p);
    // Exponents along 1+pZ_p are only visible from p^2 on.
    if (delta.delta_p.precision() - v < 1 || delta.delta_u.precision() < 2) {
        throw PrecisionError("classify: character known to too little precision to decide " + delta.to_string());
    }
    auto matches = [&](int pv, std::int64_t te, int uexp) {
        const Character ref{PadicScalar::from_parts(p, pv, 1, w), norm_te(te, p), unit_generator(p, w).pow(uexp)};
        return delta.equals_at_precision(ref);
    };
    Classification c;
    if (v <= 0 && matches(v, v, v)) {
        c.kind = Classification::Kind::XMinusI;
        c.i = -v;
    } else if (v >= 0 && matches(v, 1 + v, 1 + v)) {
        c.kind = Classification::Kind::OmegaXI;
        c.i = v;
    } else {
        return c;
    }
    if (c.i > search_limit) {
        Classification g;
        g.beyond_limit = true;
        return g;
    }
    return c;
}

CohomologyDims cohomology_dims(const Classification &c)
{
    switch (c.kind) {
    case Classification::Kind::XMinusI:
        return {1, 2, 0};
    case Classification::Kind::OmegaXI:
        return {0, 2, 1};
    case Classification::Kind::Generic:
        return {0, 1, 0};
    }
    return {0, 1, 0};
}

CohomologyDims cohomology_dims(const Character &delta, int search_limit)
{
    return cohomology_dims(classify(delta, search_limit));
}

TruncatedLaurent RankOneModule::act_phi(const TruncatedLaurent &f) const { return delta.delta_p * phi(f); }

TruncatedLaurent RankOneModule::act_gamma(const TruncatedLaurent &f) const
{
    return delta.at_chi_gamma(gamma) * gamma_act(f, gamma, 1);
}

TruncatedLaurent h0_generator(std::int64_t p, int i, int hi)
{
    if (i < 0) {
        throw DomainError("h0_generator: negative exponent");
    }
    if (i == 0) {
        return TruncatedLaurent::monomial(p, 0, PadicScalar::one(p, exact_precision(p)));
    }
    return t_series(p, hi).pow(i);
}

TruncatedLaurent h2_generator(std::int64_t p, int k)
{
    TruncatedLaurent f = TruncatedLaurent::monomial(p, -1, PadicScalar::one(p, exact_precision(p)));
    for (int j = 0; j < k; ++j) {
        f = partial(f);
    }
    return f;
}

TruncatedLaurent partial_transfer(const Character &delta, const TruncatedLaurent &f)
{
    if (delta.prime() != f.prime()) {
        throw DomainError("partial_transfer: prime mismatch");
    }
    return partial(f);
}

} // namespace robba
