#include "oracle.hpp"

#include <robba/herr.hpp>
#include <robba/verify.hpp>

#include <doctest.h>

#include <random>

using namespace robba;
using detail::storage_digits;

namespace
{

PadicScalar num(std::int64_t p, std::int64_t n, int prec = 12) { return PadicScalar::from_int(p, n, prec); }

TruncatedLaurent poly(std::int64_t p, int lo, const std::vector<std::int64_t> &c, int prec = 12)
{
    std::vector<PadicScalar> v;
    for (auto x : c) {
        v.push_back(num(p, x, prec));
    }
    return TruncatedLaurent::from_coeffs(p, prec, lo, v, true);
}

TruncatedLaurent zero_like(const TruncatedLaurent &f)
{
    return TruncatedLaurent::zero(f.prime(), f.precision(), f.lo(), f.hi(), f.closed());
}

bool vanishes(const TruncatedLaurent &f) { return equals_at_precision(f, zero_like(f)); }

Character trivial(std::int64_t p) { return char_x_pow(p, 0, storage_digits(p)); }

} // namespace

TEST_SUITE("herr")
{
    TEST_CASE("t is a degree-0 cocycle of R(x^-1)")
    {
        for (std::int64_t p : {3, 5}) {
            const auto g = GammaGenerator::standard(p);
            const auto m = ModulePresentation::rank_one(char_x_pow(p, -1, storage_digits(p)), g);
            const auto c = d1(m, HerrCochain::deg0(t_series(p, 60).with_precision(12)));
            CHECK(c.degree == 1);
            CHECK(vanishes(c.x[0]));
            CHECK(vanishes(c.y[0]));
            // 1 is not: (phi - 1)(1) = p^-1 - 1 in R(x^-1).
            const auto one = d1(m, HerrCochain::deg0(poly(p, 0, {1})));
            CHECK(one.y[0].coeff(0).equals_at_precision(PadicScalar::from_rational(p, 1 - p, p, 12)));
        }
    }

    TEST_CASE("d2 over the trivial character against the operators")
    {
        std::mt19937_64 rng(71);
        for (std::int64_t p : {3, 5}) {
            const auto g = GammaGenerator::standard(p);
            const auto m = ModulePresentation::rank_one(trivial(p), g);
            for (int i = 0; i < 5; ++i) {
                const auto a = random_series(rng, p, 12, -4, 30);
                const auto b = random_series(rng, p, 12, -4, 30);
                const auto got = d2(m, HerrCochain::deg1(a, b)).x[0];
                const auto want = (phi(a) - a) - (gamma_act(b, g) - b);
                CHECK(residual_valuation(got, want) >= std::min(got.precision(), want.precision()));
            }
            CHECK_THROWS_AS(d2(m, HerrCochain::deg0(poly(p, 0, {1}))), DomainError);
        }
    }

    TEST_CASE("cup examples")
    {
        for (std::int64_t p : {3, 5}) {
            const auto g = GammaGenerator::standard(p);
            const auto m = ModulePresentation::rank_one(trivial(p), g);
            const auto one = poly(p, 0, {1});
            const auto zero = zero_like(one);
            const auto c = cup(m, HerrCochain::deg1(zero, one), m, HerrCochain::deg1(one, zero));
            CHECK(c.degree == 2);
            CHECK(equals_at_precision(c.x[0], one));
            const auto f = poly(p, -1, {1, 2});
            const auto a = poly(p, 0, {3, 0, 1});
            const auto c01 = cup(m, HerrCochain::deg0(a), m, HerrCochain::deg1(f, one));
            CHECK(equals_at_precision(c01.x[0], a * f));
            CHECK(equals_at_precision(c01.y[0], a));
            CHECK(equals_at_precision(cup(m, HerrCochain::deg0(a), m, HerrCochain::deg2(f)).x[0], a * f));
            CHECK(cup(m, HerrCochain::deg0(a), m, HerrCochain::deg0(f)).degree == 0);
            CHECK_THROWS_AS(cup(m, HerrCochain::deg1(f, f), m, HerrCochain::deg2(f)), DomainError);
        }
    }

    TEST_CASE("cup is bilinear")
    {
        std::mt19937_64 rng(73);
        const std::int64_t p = 3;
        const auto g = GammaGenerator::standard(p);
        const auto m = ModulePresentation::rank_one(char_x_pow(p, -1, storage_digits(p)), g);
        const auto n = ModulePresentation::rank_one(char_omega_x_pow(p, 1, storage_digits(p)), g);
        auto rnd = [&] { return random_series(rng, p, 12, -3, 30); };
        for (int i = 0; i < 5; ++i) {
            const auto a = HerrCochain::deg1(rnd(), rnd());
            const auto b = HerrCochain::deg1(rnd(), rnd());
            const auto c = HerrCochain::deg1(rnd(), rnd());
            const auto bc = HerrCochain::deg1(b.x[0] + c.x[0], b.y[0] + c.y[0]);
            const auto lhs = cup(m, a, n, bc).x[0];
            const auto rhs = cup(m, a, n, b).x[0] + cup(m, a, n, c).x[0];
            CHECK(residual_valuation(lhs, rhs) >= std::min(lhs.precision(), rhs.precision()));
            const auto s = num(p, 7);
            const auto sa = HerrCochain::deg1(s * a.x[0], s * a.y[0]);
            const auto l2 = cup(m, sa, n, b).x[0];
            const auto r2 = s * cup(m, a, n, b).x[0];
            CHECK(residual_valuation(l2, r2) >= std::min(l2.precision(), r2.precision()));
        }
    }

    TEST_CASE("Leibniz rule for a degree-0 cochain against a degree-1 cochain")
    {
        // d(a u c) = da u c + a u dc.
        std::mt19937_64 rng(79);
        for (std::int64_t p : {3, 5}) {
            const auto g = GammaGenerator::standard(p);
            const int w = storage_digits(p);
            const auto m = ModulePresentation::rank_one(char_x_pow(p, -1, w), g);
            const auto n = ModulePresentation::rank_one(char_omega_x_pow(p, 1, w), g);
            const auto mn = ModulePresentation::rank_one(char_x_pow(p, -1, w) * char_omega_x_pow(p, 1, w), g);
            for (int i = 0; i < 5; ++i) {
                const auto a = HerrCochain::deg0(poly(p, 0, {static_cast<std::int64_t>(rng() % 50), 1, 2}));
                const auto c = HerrCochain::deg1(random_series(rng, p, 12, -2, 40), random_series(rng, p, 12, -2, 40));
                const auto lhs = d2(mn, cup(m, a, n, c)).x[0];
                const auto rhs = cup(m, d1(m, a), n, c).x[0] + cup(m, a, n, d2(n, c)).x[0];
                CHECK(residual_valuation(lhs, rhs) >= std::min(lhs.precision(), rhs.precision()));
            }
        }
    }

    TEST_CASE("h2_pairing requires characters multiplying to omega")
    {
        const std::int64_t p = 3;
        const auto g = GammaGenerator::standard(p);
        const int w = storage_digits(p);
        const auto f = poly(p, -1, {1});
        CHECK_THROWS_AS(h2_pairing(trivial(p), HerrCochain::deg0(f), trivial(p), HerrCochain::deg2(f), g), DomainError);
        const auto v = h2_pairing(trivial(p), HerrCochain::deg0(poly(p, 0, {1})), char_omega(p, w),
                                  HerrCochain::deg2(f), g);
        CHECK(v.equals_at_precision(num(p, 1)));
        CHECK_THROWS_AS(h2_pairing(trivial(p), HerrCochain::deg0(f), char_omega(p, w), HerrCochain::deg1(f, f), g),
                        DomainError);
    }

    TEST_CASE("h2_reduce")
    {
        for (std::int64_t p : {3, 5}) {
            const auto g = GammaGenerator::standard(p);
            const int w = storage_digits(p);
            const int N = 12;
            // omega(chi(gamma)) gamma(T) - T = 2((1+T)^2 - 1) - T = 3T + 2T^2.
            const auto omega = char_omega(p, w);
            const auto r = h2_reduce(omega, poly(p, 1, {3, 2}), g);
            CHECK(std::holds_alternative<Trivialization>(r));
            const auto rc = h2_reduce(omega, poly(p, -1, {5}), g);
            REQUIRE(std::holds_alternative<CanonicalClass>(rc));
            CHECK(std::get<CanonicalClass>(rc).k == 0);
            CHECK(std::get<CanonicalClass>(rc).c.equals_at_precision(num(p, 5)));

            // Independent re-substitution of the trivialization over |x|.
            std::mt19937_64 rng(83 + static_cast<unsigned>(p));
            const auto ax = char_abs_x(p, w);
            const auto dchi = ax.at_chi_gamma(g);
            const auto dp = ax.delta_p;
            for (int i = 0; i < 3; ++i) {
                const auto f = random_series(rng, p, N, -10, 80);
                const auto red = h2_reduce(ax, f, g);
                REQUIRE(std::holds_alternative<Trivialization>(red));
                const auto &tr = std::get<Trivialization>(red);
                const auto back = (dchi * gamma_act(tr.a, g) - tr.a) - (dp * phi(tr.b) - tr.b);
                CHECK(residual_valuation(back, f) >= N - 3);
                CHECK(tr.residual_valuation >= N - 3);
            }
        }
    }

    TEST_CASE("the psi complex map commutes with the differentials")
    {
        std::mt19937_64 rng(89);
        for (std::int64_t p : {3, 5}) {
            const auto g = GammaGenerator::standard(p);
            const auto m = ModulePresentation::rank_one(char_abs_x(p, storage_digits(p)), g);
            const auto c = HerrCochain::deg1(random_series(rng, p, 12, -5, 60), random_series(rng, p, 12, -5, 60));
            const auto lhs = psi_complex_map(m, d2(m, c)).x[0];
            const auto rhs = d2_psi(m, psi_complex_map(m, c)).x[0];
            CHECK(residual_valuation(lhs, rhs) >= std::min(lhs.precision(), rhs.precision()));
        }
    }

    TEST_CASE("tensor of rank-one presentations")
    {
        const std::int64_t p = 5;
        const auto g = GammaGenerator::standard(p);
        const int w = storage_digits(p);
        const auto m = ModulePresentation::rank_one(char_x(p, w), g);
        const auto n = ModulePresentation::rank_one(char_abs_x(p, w), g);
        const auto mn = m.tensor(n);
        CHECK(mn.rank() == 1);
        CHECK(mn.commutation_residual() >= mn.commutation_precision());
        const auto f = poly(p, -1, {1, 2, 3});
        const auto a = mn.act_phi({f})[0];
        const auto b = ModulePresentation::rank_one(char_x(p, w) * char_abs_x(p, w), g).act_phi({f})[0];
        CHECK(equals_at_precision(a, b));
    }
}
