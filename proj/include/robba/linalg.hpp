#pragma once

#include <robba/padic.hpp>

#include <vector>

namespace robba
{

// Dense matrix over Q_p with PadicScalar entries.
class PadicMatrix
{
public:
    PadicMatrix() = default;
    // Zero matrix, entries zero to precision prec.
    PadicMatrix(std::int64_t p, int rows, int cols, int prec);

    std::int64_t prime() const { return p_; }
    int rows() const { return rows_; }
    int cols() const { return cols_; }

    const PadicScalar &operator()(int i, int j) const { return a_[static_cast<std::size_t>(i * cols_ + j)]; }
    PadicScalar &operator()(int i, int j) { return a_[static_cast<std::size_t>(i * cols_ + j)]; }

    // Smallest entry precision.
    int precision() const;

    static PadicMatrix identity(std::int64_t p, int n, int prec);
    friend PadicMatrix operator*(const PadicMatrix &a, const PadicMatrix &b);
    friend PadicMatrix operator+(const PadicMatrix &a, const PadicMatrix &b);
    friend PadicMatrix operator-(const PadicMatrix &a, const PadicMatrix &b);
    std::vector<PadicScalar> apply(const std::vector<PadicScalar> &x) const;
    // [A | B]
    PadicMatrix hcat(const PadicMatrix &b) const;

private:
    std::int64_t p_ = 0;
    int rows_ = 0;
    int cols_ = 0;
    std::vector<PadicScalar> a_;
};

struct RankInfo
{
    int rank = 0;
    // Valuation of the last accepted pivot (largest among pivots); precision if rank 0.
    int max_pivot_valuation = 0;
    // Absolute precision at which the elimination ran.
    int precision = 0;
};

// Rank by row reduction, pivoting on the entry of least valuation. A pivot is accepted
// only when its valuation is at least `margin` digits below the working precision;
// nonzero entries inside that band raise PrecisionError.
RankInfo rank(const PadicMatrix &a, int margin);

struct SolveInfo
{
    bool consistent = false;
    std::vector<PadicScalar> x;
    int rank = 0;
    // Smallest valuation of the part of b outside the column span (precision if none).
    int inconsistency_valuation = 0;
    int precision = 0;
};

// One solution of A x = b (free variables set to zero).
SolveInfo solve(const PadicMatrix &a, const std::vector<PadicScalar> &b, int margin);

PadicMatrix transpose(const PadicMatrix &a);

// Inverse of a square matrix; PrecisionError when singular at precision.
PadicMatrix inverse(const PadicMatrix &a, int margin);

// Basis of the right kernel.
std::vector<std::vector<PadicScalar>> kernel_basis(const PadicMatrix &a, int margin);

} // namespace robba
