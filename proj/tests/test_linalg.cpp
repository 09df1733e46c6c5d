#include "oracle.hpp"

#include <robba/linalg.hpp>

#include <doctest.h>

#include <random>

using namespace robba;

namespace
{

PadicMatrix random_int(std::mt19937_64 &rng, std::int64_t p, int r, int c, int prec)
{
    std::uniform_int_distribution<std::int64_t> d(0, oracle::ipow(p, prec) - 1);
    PadicMatrix m(p, r, c, prec);
    for (int i = 0; i < r; ++i) {
        for (int j = 0; j < c; ++j) {
            m(i, j) = PadicScalar::from_int(p, d(rng), prec);
        }
    }
    return m;
}

// Rank exactly k over Q_p: [I_k; X] * [I_k | Y].
PadicMatrix known_rank(std::mt19937_64 &rng, std::int64_t p, int rows, int cols, int k, int prec)
{
    PadicMatrix b = random_int(rng, p, rows, k, prec);
    PadicMatrix c = random_int(rng, p, k, cols, prec);
    for (int i = 0; i < k; ++i) {
        for (int j = 0; j < k; ++j) {
            b(i, j) = PadicScalar::from_int(p, i == j ? 1 : 0, prec);
            c(i, j) = PadicScalar::from_int(p, i == j ? 1 : 0, prec);
        }
    }
    return b * c;
}

bool all_zero(const std::vector<PadicScalar> &v)
{
    for (const auto &x : v) {
        if (!x.is_zero()) {
            return false;
        }
    }
    return true;
}

} // namespace

TEST_SUITE("linalg")
{
    TEST_CASE("rank of products with a known inner dimension")
    {
        std::mt19937_64 rng(61);
        for (std::int64_t p : {3, 5}) {
            for (int k = 0; k <= 5; ++k) {
                const auto a = known_rank(rng, p, 6, 7, k, 14);
                CHECK(rank(a, 3).rank == k);
                CHECK(rank(transpose(a), 3).rank == k);
                CHECK(static_cast<int>(kernel_basis(a, 3).size()) == 7 - k);
            }
        }
    }

    TEST_CASE("pivot valuations and the margin")
    {
        const std::int64_t p = 3;
        PadicMatrix d(p, 3, 3, 12);
        d(0, 0) = PadicScalar::one(p, 12);
        d(1, 1) = PadicScalar::from_parts(p, 2, 1, 12);
        const auto r = rank(d, 3);
        CHECK(r.rank == 2);
        CHECK(r.max_pivot_valuation == 2);
        d(2, 2) = PadicScalar::from_parts(p, 10, 1, 12);
        CHECK_THROWS_AS(rank(d, 3), PrecisionError);
        CHECK(rank(d, 1).rank == 3);
    }

    TEST_CASE("solve, inverse, kernel")
    {
        std::mt19937_64 rng(67);
        for (std::int64_t p : {3, 5}) {
            const auto a = random_int(rng, p, 5, 5, 14);
            const auto inv = inverse(a, 0);
            const auto id = a * inv;
            for (int i = 0; i < 5; ++i) {
                for (int j = 0; j < 5; ++j) {
                    CHECK(id(i, j).equals_at_precision(PadicScalar::from_int(p, i == j ? 1 : 0, 14)));
                }
            }
            const auto low = known_rank(rng, p, 5, 6, 3, 14);
            std::vector<PadicScalar> x;
            for (int j = 0; j < 6; ++j) {
                x.push_back(PadicScalar::from_int(p, j * j + 1, 14));
            }
            const auto b = low.apply(x);
            const auto s = solve(low, b, 3);
            CHECK(s.consistent);
            CHECK(s.rank == 3);
            const auto back = low.apply(s.x);
            for (std::size_t i = 0; i < b.size(); ++i) {
                CHECK(back[i].equals_at_precision(b[i]));
            }
            auto bad = b;
            bad[4] += PadicScalar::one(p, 14);
            // The column span is 3-dimensional in a 5-dimensional space, so a generic nudge leaves it.
            const auto s2 = solve(low, bad, 3);
            CHECK(!s2.consistent);
            for (const auto &k : kernel_basis(low, 3)) {
                CHECK(all_zero(low.apply(k)));
            }
            CHECK_THROWS_AS(inverse(known_rank(rng, p, 5, 5, 2, 14), 3), PrecisionError);
        }
    }
}
