#include "oracle.hpp"

#include <robba/series.hpp>
#include <robba/verify.hpp>

#include <doctest.h>

#include <random>

using namespace robba;

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

// Integral residue of coefficient k modulo p^n.
std::int64_t res_of(const TruncatedLaurent &f, int k, int n)
{
    const auto c = f.coeff(k);
    REQUIRE(c.is_integral());
    return oracle::md(c.scaled_residue(0), oracle::ipow(f.prime(), n));
}

} // namespace

TEST_SUITE("series")
{
    TEST_CASE("ring examples")
    {
        const std::int64_t p = 5;
        const auto T = TruncatedLaurent::monomial(p, 1, PadicScalar::one(p, 12));
        const auto Tinv = TruncatedLaurent::monomial(p, -1, PadicScalar::one(p, 12));
        CHECK(equals_at_precision(T * Tinv, TruncatedLaurent::monomial(p, 0, PadicScalar::one(p, 12))));
        CHECK(equals_at_precision(poly(p, 0, {1, 1}) * Tinv, one_plus_T_over_T(p)));
    }

    TEST_CASE("product against a direct convolution")
    {
        std::mt19937_64 rng(17);
        for (std::int64_t p : {3, 5}) {
            const int n = 10;
            const std::int64_t m = oracle::ipow(p, n);
            for (int trial = 0; trial < 20; ++trial) {
                const auto f = random_series(rng, p, n, -4, 15);
                const auto g = random_series(rng, p, n, -2, 9);
                const auto h = f * g;
                CHECK(h.lo() == -6);
                CHECK(h.hi() == std::min(-4 + 9, -2 + 15));
                for (int k = h.lo(); k <= h.hi(); ++k) {
                    oracle::i128 acc = 0;
                    for (int i = -4; i <= 15; ++i) {
                        const int j = k - i;
                        if (j >= -2 && j <= 9) {
                            acc += static_cast<oracle::i128>(res_of(f, i, n)) * res_of(g, j, n);
                            acc %= m;
                        }
                    }
                    CHECK(res_of(h, k, n) == oracle::md(acc, m));
                }
            }
        }
    }

    TEST_CASE("unknown coefficients stay unknown")
    {
        std::mt19937_64 rng(1);
        const auto f = random_series(rng, 3, 10, 0, 5);
        CHECK(!f.knows(6));
        CHECK((f + poly(3, 0, {1, 2, 3, 4, 5, 6, 7, 8})).hi() == 5);
        CHECK_THROWS(f.coeff(6));
    }

    TEST_CASE("constants")
    {
        for (std::int64_t p : {3, 5}) {
            const auto t = t_series(p, 40);
            CHECK(t.coeff(0).is_zero());
            for (int k = 1; k <= 40; ++k) {
                CHECK(t.coeff(k).equals_at_precision(PadicScalar::from_rational(p, k % 2 == 1 ? 1 : -1, k, 30)));
            }
            const auto q = q_series(p);
            for (int k = 0; k < p; ++k) {
                CHECK(q.coeff(k).equals_at_precision(num(p, oracle::choose(static_cast<int>(p), k + 1), 20)));
            }
            CHECK(q.closed());
            CHECK(q.coeff(static_cast<int>(p)).is_zero());
        }
    }

    TEST_CASE("substitute examples")
    {
        const std::int64_t p = 3;
        const auto f = poly(p, -2, {4, 0, 1, 7, 2});
        CHECK(equals_at_precision(substitute(f, PadicScalar::one(p, 12)), f));
        const auto T = poly(p, 1, {1});
        const auto s = substitute(T, num(p, p));
        for (int k = 0; k <= 4; ++k) {
            CHECK(s.coeff(k).equals_at_precision(num(p, k == 0 ? 0 : oracle::choose(3, k))));
        }
        const auto t = t_series(p, 60);
        CHECK(equals_at_precision(substitute(t, num(p, p, 30)), num(p, p, 30) * t));
    }

    TEST_CASE("substitute against polynomial composition")
    {
        // f((1+T)^a - 1) for integer a, by expanding powers of (1+T)^a - 1 with integer binomials.
        std::mt19937_64 rng(23);
        for (std::int64_t p : {3, 5}) {
            const int n = 10;
            const std::int64_t m = oracle::ipow(p, n);
            std::uniform_int_distribution<std::int64_t> d(0, m - 1);
            for (int a : {2, 4, 7}) {
                if (a % p == 0) {
                    continue;
                }
                std::vector<std::int64_t> c(6);
                for (auto &x : c) {
                    x = d(rng);
                }
                std::vector<std::int64_t> s(static_cast<std::size_t>(a + 1));
                for (int k = 1; k <= a; ++k) {
                    s[static_cast<std::size_t>(k)] = oracle::choose(a, k);
                }
                std::vector<std::int64_t> out(1, 0), pw(1, 1);
                for (std::size_t j = 0; j < c.size(); ++j) {
                    if (out.size() < pw.size()) {
                        out.resize(pw.size(), 0);
                    }
                    for (std::size_t i = 0; i < pw.size(); ++i) {
                        out[i] = oracle::md(out[i] + static_cast<oracle::i128>(c[j]) * pw[i], m);
                    }
                    std::vector<std::int64_t> nx(pw.size() + s.size() - 1, 0);
                    for (std::size_t i = 0; i < pw.size(); ++i) {
                        for (std::size_t k = 0; k < s.size(); ++k) {
                            nx[i + k] = oracle::md(nx[i + k] + static_cast<oracle::i128>(pw[i]) * s[k], m);
                        }
                    }
                    pw = nx;
                }
                const auto got = substitute(poly(p, 0, c, n), num(p, a, n));
                // Uniform precision: the binomials over the whole window bound what is certified.
                const int cert = std::min(n, got.precision());
                CHECK(cert >= 4);
                const std::int64_t mc = oracle::ipow(p, cert);
                for (std::size_t k = 0; k < out.size(); ++k) {
                    CHECK(res_of(got, static_cast<int>(k), cert) == out[k] % mc);
                }
            }
        }
    }

    TEST_CASE("substitution is an action")
    {
        std::mt19937_64 rng(29);
        for (std::int64_t p : {3, 5}) {
            for (int i = 0; i < 10; ++i) {
                const auto f = random_series(rng, p, 12, -3, 40);
                const auto a = num(p, 2, 30), b = num(p, p + 1, 30);
                const auto lhs = substitute(substitute(f, a), b);
                const auto rhs = substitute(f, a * b);
                CHECK(residual_valuation(lhs, rhs) >= std::min(lhs.precision(), rhs.precision()));
            }
        }
    }

    TEST_CASE("partial")
    {
        const std::int64_t p = 5;
        CHECK(equals_at_precision(partial(poly(p, 1, {1})), poly(p, 0, {1, 1})));
        const auto dt = partial(t_series(p, 40));
        CHECK(dt.coeff(0).equals_at_precision(PadicScalar::one(p, 12)));
        for (int k = 1; k < dt.hi(); ++k) {
            CHECK(dt.coeff(k).is_zero());
        }
        CHECK(equals_at_precision(partial(poly(p, -1, {1})), poly(p, -2, {-1, -1})));

        // (1+T) f' coefficientwise: (k+1) c_(k+1) + k c_k.
        std::mt19937_64 rng(31);
        const auto f = random_series(rng, p, 10, -5, 20);
        const auto g = partial(f);
        for (int k = g.lo(); k <= g.hi(); ++k) {
            const auto want = num(p, k + 1, 12) * (f.knows(k + 1) ? f.coeff(k + 1) : num(p, 0)) +
                              num(p, k, 12) * (k >= f.lo() ? f.coeff(k) : num(p, 0));
            CHECK(g.coeff(k).equals_at_precision(want));
        }
    }

    TEST_CASE("residue and Res")
    {
        for (std::int64_t p : {3, 5}) {
            const auto one = PadicScalar::one(p, 12);
            CHECK(residue(poly(p, -1, {1})).equals_at_precision(one));
            CHECK(residue(poly(p, 0, {1})).is_zero());
            CHECK(Res(poly(p, -1, {1})).equals_at_precision(one));
            CHECK(Res(one_plus_T_over_T(p)).equals_at_precision(one));
            const auto prod = t_series(p, 40) * one_plus_T_over_T(p) * poly(p, -1, {1});
            CHECK(prod.coeff(-2).is_zero());
            CHECK(prod.coeff(-1).equals_at_precision(one));
            CHECK(Res(prod).equals_at_precision(one));
            std::mt19937_64 rng(37);
            for (int i = 0; i < 20; ++i) {
                const auto g = random_series(rng, p, 12, -8, 30);
                CHECK(residue(partial(g)).equals_at_precision(-g.coeff(-1)));
                CHECK(Res(partial(g)).valuation() >= 10);
            }
            CHECK(residue(random_series(rng, p, 12, 0, 30)).is_zero());
            CHECK_THROWS_AS(residue(random_series(rng, p, 12, -8, -3)), PrecisionError);
        }
    }

    TEST_CASE("partial_inverse")
    {
        for (std::int64_t p : {3, 5}) {
            CHECK(equals_at_precision(partial_inverse(poly(p, 0, {1, 1})), poly(p, 1, {1})));
            const auto inv = poly(p, -1, {1});
            CHECK(equals_at_precision(partial_inverse(partial(inv)), inv));
            CHECK_THROWS(partial_inverse(inv));
            std::mt19937_64 rng(41);
            for (int i = 0; i < 20; ++i) {
                auto f = random_series(rng, p, 12, -6, 30);
                f = f - Res(f) * one_plus_T_over_T(p);
                const auto g = partial_inverse(f);
                CHECK(g.coeff(0).is_zero());
                const auto back = partial(g);
                CHECK(residual_valuation(back, f) >= std::min(back.precision(), f.precision()));
            }
        }
    }

    TEST_CASE("series literals")
    {
        const auto f = poly(5, -1, {1, 0, 3});
        const auto lit = f.to_literal();
        CHECK(lit.find("-1:") != std::string::npos);
    }
}
