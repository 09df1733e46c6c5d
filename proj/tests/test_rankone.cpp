#include "oracle.hpp"

#include <robba/rankone.hpp>
#include <robba/verify.hpp>

#include <doctest.h>

#include <random>

using namespace robba;

namespace
{

constexpr int kPrec = 20;

PadicScalar num(std::int64_t p, std::int64_t n, int prec = kPrec) { return PadicScalar::from_int(p, n, prec); }

Character raw(std::int64_t p, const PadicScalar &dp, std::int64_t te, const PadicScalar &du)
{
    return Character{dp, oracle::md(te, p - 1), du};
}

TruncatedLaurent poly(std::int64_t p, int lo, const std::vector<std::int64_t> &c, int prec = 12)
{
    std::vector<PadicScalar> v;
    for (auto x : c) {
        v.push_back(num(p, x, prec));
    }
    return TruncatedLaurent::from_coeffs(p, prec, lo, v, true);
}

bool agree(const TruncatedLaurent &a, const TruncatedLaurent &b)
{
    return residual_valuation(a, b) >= std::min(a.precision(), b.precision());
}

} // namespace

TEST_SUITE("rankone")
{
    TEST_CASE("special characters")
    {
        for (std::int64_t p : {3, 5}) {
            const auto u = num(p, 1 + p);
            const Character x = char_x(p, kPrec);
            const Character ax = char_abs_x(p, kPrec);
            CHECK((x * ax).equals_at_precision(char_omega(p, kPrec)));
            CHECK(ax.delta_p.equals_at_precision(PadicScalar::one(p, kPrec) / num(p, p)));
            const Character x2 = char_x_pow(p, -2, kPrec);
            CHECK(x2.delta_p.equals_at_precision(PadicScalar::one(p, kPrec) / num(p, p * p)));
            CHECK(x2.teich_exp == oracle::md(-2, p - 1));
            CHECK(x2.delta_u.equals_at_precision(PadicScalar::one(p, kPrec) / (u * u)));
            CHECK(char_omega(p, kPrec).delta_p.equals_at_precision(PadicScalar::one(p, kPrec)));
            CHECK(char_omega(p, kPrec).teich_exp == 1);
            CHECK(char_omega(p, kPrec).delta_u.equals_at_precision(u));
            CHECK(char_unramified(num(p, 7)).delta_p.equals_at_precision(num(p, 7)));
            CHECK_THROWS(char_unramified(PadicScalar::zero(p, kPrec)));
        }
    }

    TEST_CASE("values on units")
    {
        // a = teich(b) u^m, so delta(a) = teich(b)^te du^m.
        for (std::int64_t p : {3, 5, 7}) {
            const int n = 14;
            const std::int64_t M = oracle::ipow(p, n);
            const Character d = raw(p, num(p, 3, n), 1, num(p, 1 + 2 * p, n));
            for (std::int64_t b = 1; b < p; ++b) {
                for (int m = 0; m < 4; ++m) {
                    const std::int64_t a =
                        oracle::mulm(oracle::teichmuller(p, b, n), oracle::powm(1 + p, m, M), M);
                    const std::int64_t want =
                        oracle::mulm(oracle::teichmuller(p, b, n), oracle::powm(1 + 2 * p, m, M), M);
                    CHECK(d.at_unit(num(p, a, n)).equals_at_precision(num(p, want, n)));
                    // x^k is a -> a^k.
                    CHECK(char_x_pow(p, 3, n).at_unit(num(p, a, n)).equals_at_precision(num(p, oracle::powm(a, 3, M), n)));
                    CHECK(char_omega(p, n).at_unit(num(p, a, n)).equals_at_precision(num(p, a, n)));
                    CHECK(char_abs_x(p, n).at_unit(num(p, a, n)).equals_at_precision(PadicScalar::one(p, n)));
                }
            }
        }
    }

    TEST_CASE("degree and slope")
    {
        const std::int64_t p = 5;
        CHECK(degree(char_x(p, kPrec)) == 1);
        CHECK(degree(char_abs_x(p, kPrec)) == -1);
        CHECK(degree(char_omega(p, kPrec)) == 0);
        const auto mx = FormalModule::of(char_x(p, kPrec));
        CHECK(mx.tensor(mx).slope() == Rational::make(2, 1));
        CHECK(mx.dual().degree == -1);
        const auto ext = mx.extension(FormalModule::of(char_omega(p, kPrec)));
        CHECK(ext.rank == 2);
        CHECK(ext.slope() == Rational::make(1, 2));
        CHECK(Rational::make(2, -4) == Rational::make(-1, 2));
    }

    TEST_CASE("classification and dimension table")
    {
        for (std::int64_t p : {3, 5}) {
            const auto one = PadicScalar::one(p, kPrec);
            const auto u = num(p, 1 + p);
            CHECK(classify(raw(p, one, 0, one)) == Classification{Classification::Kind::XMinusI, 0});
            CHECK(classify(char_omega(p, kPrec)) == Classification{Classification::Kind::OmegaXI, 0});
            CHECK(classify(char_x(p, kPrec)).kind == Classification::Kind::Generic);
            for (int i = 0; i <= 10; ++i) {
                // x^-i and omega x^i built from raw triples.
                const auto pi = num(p, oracle::ipow(p, i));
                const auto ui = u.pow(i);
                CHECK(classify(raw(p, one / pi, -i, one / ui)) == Classification{Classification::Kind::XMinusI, i});
                CHECK(classify(raw(p, pi, i + 1, ui * u)) == Classification{Classification::Kind::OmegaXI, i});
            }
            const auto beyond = classify(char_x_pow(p, -11, kPrec));
            CHECK(beyond.kind == Classification::Kind::Generic);
            CHECK(beyond.beyond_limit);
            CHECK(classify(char_x_pow(p, -11, kPrec), 12).i == 11);

            const auto d = [&](const Character &c) {
                const auto r = cohomology_dims(c);
                CHECK(r.euler() == -1);
                return std::vector<int>{r.h0, r.h1, r.h2};
            };
            CHECK(d(char_x_pow(p, -2, kPrec)) == std::vector<int>{1, 2, 0});
            CHECK(d(char_omega_x_pow(p, 3, kPrec)) == std::vector<int>{0, 2, 1});
            CHECK(d(char_abs_x(p, kPrec)) == std::vector<int>{0, 1, 0});
        }
    }

    TEST_CASE("H0 and H2 generators")
    {
        for (std::int64_t p : {3, 5}) {
            const auto g = GammaGenerator::standard(p);
            const RankOneModule triv{char_x_pow(p, 0, kPrec), g};
            const auto one = h0_generator(p, 0);
            CHECK(agree(triv.act_phi(one), one));
            CHECK(agree(triv.act_gamma(one), one));
            const RankOneModule xinv{char_x_pow(p, -1, kPrec), g};
            const auto t = h0_generator(p, 1, 60);
            CHECK(agree(xinv.act_phi(t), t));
            CHECK(agree(xinv.act_gamma(t), t));
            CHECK(!agree(triv.act_phi(t), t));
            CHECK(equals_at_precision(h2_generator(p, 1), poly(p, -2, {-1, -1})));
            // d/dT twice, by hand: 2T^-3 + 3T^-2 + T^-1.
            CHECK(equals_at_precision(h2_generator(p, 2), poly(p, -3, {2, 3, 1})));
        }
    }

    TEST_CASE("partial transfer")
    {
        std::mt19937_64 rng(53);
        for (std::int64_t p : {3, 5}) {
            const int W = detail::storage_digits(p);
            auto f = poly(p, -1, {1});
            for (int k = 1; k <= 2; ++k) {
                f = partial_transfer(char_omega_x_pow(p, k, W), f);
                CHECK(equals_at_precision(f, h2_generator(p, k)));
            }
            CHECK(partial_transfer(char_x_pow(p, 0, W), poly(p, 0, {1})).is_zero());
            // d((x^-1 delta)(p) phi f) = delta(p) phi(d f).
            const Character delta = char_unramified(num(p, 7, W)) * char_x(p, W);
            const Character shifted = char_x_pow(p, -1, W) * delta;
            for (int i = 0; i < 10; ++i) {
                const auto h = random_series(rng, p, 12, -6, 40);
                CHECK(agree(partial(shifted.delta_p * phi(h)), delta.delta_p * phi(partial(h))));
                const RankOneModule src{shifted, GammaGenerator::standard(p)};
                const RankOneModule dst{delta, GammaGenerator::standard(p)};
                CHECK(agree(partial_transfer(delta, src.act_phi(h)), dst.act_phi(partial_transfer(delta, h))));
                CHECK(agree(partial_transfer(delta, src.act_gamma(h)), dst.act_gamma(partial_transfer(delta, h))));
            }
        }
    }

    TEST_CASE("twisted actions commute")
    {
        std::mt19937_64 rng(59);
        for (std::int64_t p : {3, 5}) {
            const RankOneModule m{char_unramified(num(p, 4)) * char_x_pow(p, 2, kPrec), GammaGenerator::standard(p)};
            for (int i = 0; i < 5; ++i) {
                const auto f = random_series(rng, p, 12, -5, 40);
                CHECK(agree(m.act_phi(m.act_gamma(f)), m.act_gamma(m.act_phi(f))));
            }
        }
    }
}
