#include <robba/linalg.hpp>

#include "kernels.hpp"

#include <algorithm>
#include <limits>

namespace robba
{

using detail::mm;
using detail::sm;

PadicMatrix::PadicMatrix(std::int64_t p, int rows, int cols, int prec)
    : p_(p), rows_(rows), cols_(cols), a_(static_cast<std::size_t>(rows * cols), PadicScalar::zero(p, prec))
{
}

int PadicMatrix::precision() const
{
    if (a_.empty()) {
        return 1 << 20;
    }
    int n = std::numeric_limits<int>::max();
    for (const auto &x : a_) {
        n = std::min(n, x.precision());
    }
    return n;
}

PadicMatrix PadicMatrix::identity(std::int64_t p, int n, int prec)
{
    PadicMatrix m(p, n, n, prec);
    for (int i = 0; i < n; ++i) {
        m(i, i) = PadicScalar::one(p, prec);
    }
    return m;
}

PadicMatrix operator*(const PadicMatrix &a, const PadicMatrix &b)
{
    if (a.cols() != b.rows()) {
        throw DomainError("matrix product: shape mismatch");
    }
    PadicMatrix c(a.prime(), a.rows(), b.cols(), std::min(a.precision(), b.precision()) + 64);
    if (a.cols() == 0) {
        return c;
    }
    for (int i = 0; i < a.rows(); ++i) {
        for (int j = 0; j < b.cols(); ++j) {
            PadicScalar s = a(i, 0) * b(0, j);
            for (int k = 1; k < a.cols(); ++k) {
                s += a(i, k) * b(k, j);
            }
            c(i, j) = s;
        }
    }
    return c;
}

PadicMatrix operator+(const PadicMatrix &a, const PadicMatrix &b)
{
    PadicMatrix c = a;
    for (int i = 0; i < a.rows(); ++i) {
        for (int j = 0; j < a.cols(); ++j) {
            c(i, j) = a(i, j) + b(i, j);
        }
    }
    return c;
}

PadicMatrix operator-(const PadicMatrix &a, const PadicMatrix &b)
{
    PadicMatrix c = a;
    for (int i = 0; i < a.rows(); ++i) {
        for (int j = 0; j < a.cols(); ++j) {
            c(i, j) = a(i, j) - b(i, j);
        }
    }
    return c;
}

std::vector<PadicScalar> PadicMatrix::apply(const std::vector<PadicScalar> &x) const
{
    if (static_cast<int>(x.size()) != cols_) {
        throw DomainError("matrix-vector product: shape mismatch");
    }
    std::vector<PadicScalar> y;
    for (int i = 0; i < rows_; ++i) {
        PadicScalar s = (*this)(i, 0) * x[0];
        for (int j = 1; j < cols_; ++j) {
            s += (*this)(i, j) * x[static_cast<std::size_t>(j)];
        }
        y.push_back(s);
    }
    return y;
}

PadicMatrix PadicMatrix::hcat(const PadicMatrix &b) const
{
    if (rows_ != b.rows()) {
        throw DomainError("hcat: row mismatch");
    }
    PadicMatrix c(p_, rows_, cols_ + b.cols(), 0);
    for (int i = 0; i < rows_; ++i) {
        for (int j = 0; j < cols_; ++j) {
            c(i, j) = (*this)(i, j);
        }
        for (int j = 0; j < b.cols(); ++j) {
            c(i, cols_ + j) = b(i, j);
        }
    }
    return c;
}

namespace
{

// Row reduction on fixed-point residues: entry = r * p^-shift, r mod p^(prec + shift).
// With least-valuation full pivoting every remaining entry stays known modulo p^prec.
struct Elimination
{
    std::int64_t p = 0;
    int prec = 0;
    int shift = 0;
    int e = 0;
    std::int64_t m = 1;
    int rows = 0;
    int cols = 0;  // pivotable columns
    int extra = 0; // right-hand sides, never pivoted
    std::vector<std::int64_t> a;
    std::vector<int> colperm;
    int rank = 0;
    int max_pivot_val = 0;

    std::int64_t &at(int i, int j) { return a[static_cast<std::size_t>(i * (cols + extra) + j)]; }

    int val(std::int64_t r) const { return r == 0 ? e : detail::val_int(p, r); }

    PadicScalar scalar(std::int64_t r) const
    {
        return r == 0 ? PadicScalar::zero(p, prec) : PadicScalar::from_parts(p, -shift, r, prec);
    }

    Elimination(const PadicMatrix &A, const std::vector<std::vector<PadicScalar>> &rhs)
    {
        p = A.prime();
        rows = A.rows();
        cols = A.cols();
        extra = static_cast<int>(rhs.size());
        prec = std::numeric_limits<int>::max();
        int vmin = std::numeric_limits<int>::max();
        auto scan = [&](const PadicScalar &x) {
            prec = std::min(prec, x.precision());
        };
        for (int i = 0; i < rows; ++i) {
            for (int j = 0; j < cols; ++j) {
                scan(A(i, j));
            }
        }
        for (const auto &b : rhs) {
            for (const auto &x : b) {
                scan(x);
            }
        }
        if (prec == std::numeric_limits<int>::max()) {
            prec = 0;
        }
        auto vscan = [&](const PadicScalar &x) {
            if (!x.is_zero() && x.valuation() < prec) {
                vmin = std::min(vmin, x.valuation());
            }
        };
        for (int i = 0; i < rows; ++i) {
            for (int j = 0; j < cols; ++j) {
                vscan(A(i, j));
            }
        }
        for (const auto &b : rhs) {
            for (const auto &x : b) {
                vscan(x);
            }
        }
        if (vmin == std::numeric_limits<int>::max()) {
            vmin = prec;
        }
        shift = -vmin;
        prec = std::min(prec, detail::storage_digits(p) - shift);
        e = prec + shift;
        m = e <= 0 ? 1 : detail::ppow(p, e);
        a.assign(static_cast<std::size_t>(rows * (cols + extra)), 0);
        auto conv = [&](const PadicScalar &x) -> std::int64_t {
            const PadicScalar y = x.truncated(prec);
            return y.is_zero() ? 0 : y.scaled_residue(shift);
        };
        for (int i = 0; i < rows; ++i) {
            for (int j = 0; j < cols; ++j) {
                at(i, j) = conv(A(i, j));
            }
            for (int k = 0; k < extra; ++k) {
                at(i, cols + k) = conv(rhs[static_cast<std::size_t>(k)].at(static_cast<std::size_t>(i)));
            }
        }
        colperm.resize(static_cast<std::size_t>(cols));
        for (int j = 0; j < cols; ++j) {
            colperm[static_cast<std::size_t>(j)] = j;
        }
    }

    void run(int margin)
    {
        const int width = cols + extra;
        max_pivot_val = e;
        for (int k = 0; k < std::min(rows, cols); ++k) {
            int bi = -1, bj = -1, bv = e;
            for (int i = k; i < rows && bv > 0; ++i) {
                for (int j = k; j < cols; ++j) {
                    const std::int64_t r = at(i, j);
                    if (r == 0) {
                        continue;
                    }
                    const int v = r % p != 0 ? 0 : val(r);
                    if (v < bv) {
                        bv = v;
                        bi = i;
                        bj = j;
                        if (v == 0) {
                            break;
                        }
                    }
                }
            }
            if (bi < 0) {
                break;
            }
            if (bv >= e - margin) {
                throw PrecisionError("rank ambiguous at precision: pivot of valuation " + std::to_string(bv - shift) +
                                     " within " + std::to_string(margin) + " digits of precision " +
                                     std::to_string(prec));
            }
            if (bi != k) {
                for (int j = 0; j < width; ++j) {
                    std::swap(at(k, j), at(bi, j));
                }
            }
            if (bj != k) {
                for (int i = 0; i < rows; ++i) {
                    std::swap(at(i, k), at(i, bj));
                }
                std::swap(colperm[static_cast<std::size_t>(k)], colperm[static_cast<std::size_t>(bj)]);
            }
            const std::int64_t pv = detail::ppow(p, bv);
            const std::int64_t uinv = detail::invmod(at(k, k) / pv, m);
            for (int i = k + 1; i < rows; ++i) {
                const std::int64_t r = at(i, k);
                if (r == 0) {
                    continue;
                }
                const std::int64_t mu = mm(r / pv, uinv, m);
                at(i, k) = 0;
                for (int j = k + 1; j < width; ++j) {
                    const std::int64_t x = at(k, j);
                    if (x != 0) {
                        at(i, j) = sm(at(i, j), mm(mu, x, m), m);
                    }
                }
            }
            rank = k + 1;
            max_pivot_val = bv;
        }
    }

    // Back substitution for pivot variables given the values of the free ones.
    std::vector<PadicScalar> back_substitute(int rhs_col, const std::vector<PadicScalar> &free_vals)
    {
        std::vector<PadicScalar> y(static_cast<std::size_t>(cols), PadicScalar::zero(p, prec));
        for (int j = rank; j < cols; ++j) {
            y[static_cast<std::size_t>(j)] = free_vals[static_cast<std::size_t>(j - rank)];
        }
        for (int k = rank - 1; k >= 0; --k) {
            PadicScalar s = rhs_col >= 0 ? scalar(at(k, cols + rhs_col)) : PadicScalar::zero(p, prec);
            for (int j = k + 1; j < cols; ++j) {
                const std::int64_t r = at(k, j);
                if (r != 0 && !y[static_cast<std::size_t>(j)].is_zero()) {
                    s -= scalar(r) * y[static_cast<std::size_t>(j)];
                }
            }
            y[static_cast<std::size_t>(k)] = s / scalar(at(k, k));
        }
        std::vector<PadicScalar> x(static_cast<std::size_t>(cols));
        for (int j = 0; j < cols; ++j) {
            x[static_cast<std::size_t>(colperm[static_cast<std::size_t>(j)])] = y[static_cast<std::size_t>(j)];
        }
        return x;
    }
};

} // namespace

RankInfo rank(const PadicMatrix &a, int margin)
{
    Elimination el(a, {});
    el.run(margin);
    return RankInfo{el.rank, el.max_pivot_val - el.shift, el.prec};
}

SolveInfo solve(const PadicMatrix &a, const std::vector<PadicScalar> &b, int margin)
{
    if (static_cast<int>(b.size()) != a.rows()) {
        throw DomainError("solve: right-hand side has the wrong length");
    }
    Elimination el(a, {b});
    el.run(margin);
    SolveInfo info;
    info.rank = el.rank;
    info.precision = el.prec;
    int v = el.e;
    for (int i = el.rank; i < el.rows; ++i) {
        const std::int64_t r = el.at(i, el.cols);
        if (r != 0) {
            v = std::min(v, el.val(r));
        }
    }
    info.inconsistency_valuation = v - el.shift;
    info.consistent = v >= el.e;
    if (info.consistent) {
        info.x = el.back_substitute(0, std::vector<PadicScalar>(static_cast<std::size_t>(el.cols - el.rank),
                                                                PadicScalar::zero(el.p, el.prec)));
    }
    return info;
}

PadicMatrix transpose(const PadicMatrix &a)
{
    PadicMatrix t(a.prime(), a.cols(), a.rows(), a.precision());
    for (int i = 0; i < a.rows(); ++i) {
        for (int j = 0; j < a.cols(); ++j) {
            t(j, i) = a(i, j);
        }
    }
    return t;
}

PadicMatrix inverse(const PadicMatrix &a, int margin)
{
    if (a.rows() != a.cols()) {
        throw DomainError("inverse: matrix is not square");
    }
    const int n = a.rows();
    std::vector<std::vector<PadicScalar>> rhs;
    for (int j = 0; j < n; ++j) {
        std::vector<PadicScalar> e(static_cast<std::size_t>(n), PadicScalar::zero(a.prime(), a.precision()));
        e[static_cast<std::size_t>(j)] = PadicScalar::one(a.prime(), a.precision());
        rhs.push_back(std::move(e));
    }
    Elimination el(a, rhs);
    el.run(margin);
    if (el.rank < n) {
        throw PrecisionError("inverse: matrix is singular at precision");
    }
    PadicMatrix inv(a.prime(), n, n, el.prec);
    for (int j = 0; j < n; ++j) {
        const auto x = el.back_substitute(j, {});
        for (int i = 0; i < n; ++i) {
            inv(i, j) = x[static_cast<std::size_t>(i)];
        }
    }
    return inv;
}

std::vector<std::vector<PadicScalar>> kernel_basis(const PadicMatrix &a, int margin)
{
    Elimination el(a, {});
    el.run(margin);
    std::vector<std::vector<PadicScalar>> out;
    const int nfree = el.cols - el.rank;
    for (int f = 0; f < nfree; ++f) {
        std::vector<PadicScalar> fv(static_cast<std::size_t>(nfree), PadicScalar::zero(el.p, el.prec));
        fv[static_cast<std::size_t>(f)] = PadicScalar::one(el.p, el.prec);
        out.push_back(el.back_substitute(-1, fv));
    }
    return out;
}

} // namespace robba
