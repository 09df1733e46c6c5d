#pragma once

#include <robba/linalg.hpp>
#include <robba/rankone.hpp>

#include <optional>
#include <vector>

namespace robba
{

// Element of K_n = Q_p(eps_n): coefficients of 1, X, ..., X^(deg-1) modulo Phi_{p^n}(X).
using CycElem = std::vector<PadicScalar>;

class CyclotomicLevel
{
public:
    CyclotomicLevel() = default;
    CyclotomicLevel(std::int64_t p, int n, int prec);

    std::int64_t prime() const { return p_; }
    int level() const { return n_; }
    int precision() const { return prec_; }
    // (p-1) p^(n-1)
    int degree() const { return deg_; }
    // p^n
    std::int64_t order() const { return order_; }

    CycElem zero() const;
    CycElem one() const;
    CycElem scalar(const PadicScalar &c) const;
    // eps_n^e
    CycElem root_power(std::int64_t e) const;

    CycElem add(const CycElem &a, const CycElem &b) const;
    CycElem sub(const CycElem &a, const CycElem &b) const;
    CycElem mul(const CycElem &a, const CycElem &b) const;
    CycElem scale(const PadicScalar &c, const CycElem &a) const;
    CycElem inverse(const CycElem &a) const;
    // sigma_a: eps_n -> eps_n^a, for a a p-adic unit.
    CycElem sigma(const PadicScalar &a, const CycElem &x) const;
    // Into K_(n+1) along eps_n = eps_(n+1)^p.
    CycElem embed_next(const CycElem &x) const;
    bool is_zero(const CycElem &a) const;

private:
    // Reduce a polynomial given modulo X^(p^n) - 1.
    CycElem reduce(const std::vector<PadicScalar> &c) const;

    std::int64_t p_ = 0;
    int n_ = 1;
    int prec_ = 0;
    int deg_ = 0;
    std::int64_t order_ = 0;
};

// K_n[t]/t^k; entry i is the coefficient of t^i.
using CycTElem = std::vector<CycElem>;

struct CyclotomicTLevel
{
    CyclotomicLevel K;
    int k = 1;

    CycTElem zero() const;
    CycTElem one() const;
    CycTElem from_base(const CycElem &a) const;
    CycTElem add(const CycTElem &a, const CycTElem &b) const;
    CycTElem sub(const CycTElem &a, const CycTElem &b) const;
    CycTElem mul(const CycTElem &a, const CycTElem &b) const;
    CycTElem inverse(const CycTElem &a) const;
    // sigma_a with t -> a t.
    CycTElem sigma(const PadicScalar &a, const CycTElem &x) const;
    bool is_zero(const CycTElem &a) const;
    // Q_p coordinates, t-degree major.
    std::vector<PadicScalar> flatten(const CycTElem &a) const;
    CycTElem unflatten(const std::vector<PadicScalar> &v) const;
};

// f(eps_n e^(t/p^n) - 1) modulo t^k. For an open f the precision is lowered to cover the
// unknown tail, assuming its coefficients grow no faster than those of log(1+T).
CycTElem localize_at_n(const TruncatedLaurent &f, int n, int k);

// Gauss sum of eta = omega^j (Teichmuller character to the j) embedded in K_n.
CycElem gauss_sum(const CyclotomicLevel &K, int j);

// d copies of K_n[t]/t^k with gamma(sum a_i e_i) = sum sigma_chi(a_i) M_ji e_j.
class TorsionFiber
{
public:
    static TorsionFiber from_matrix(const CyclotomicTLevel &R, int d, std::vector<CycTElem> m,
                                    const PadicScalar &chi_gamma);
    // R(delta)/t^k at level n.
    static TorsionFiber twisted_quotient(std::int64_t p, int n, int k, const Character &delta,
                                         const GammaGenerator &g, int prec);

    const CyclotomicTLevel &ring() const { return R_; }
    int level() const { return R_.K.level(); }
    int t_length() const { return R_.k; }
    int rank() const { return d_; }
    int dimension() const { return d_ * R_.k * R_.K.degree(); }
    const PadicScalar &chi_gamma() const { return chi_; }

    // Matrix of gamma over Q_p.
    const PadicMatrix &gamma_matrix() const { return gamma_; }
    std::vector<PadicScalar> act_gamma(const std::vector<PadicScalar> &x) const;
    // Same data one level up; elements move along eps_n = eps_(n+1)^p.
    TorsionFiber next_level() const;
    std::vector<PadicScalar> connect(const std::vector<PadicScalar> &x) const;

private:
    CyclotomicTLevel R_;
    int d_ = 1;
    std::vector<CycTElem> m_;
    PadicScalar chi_;
    PadicMatrix gamma_;
};

struct FiberDims
{
    int dim_fix = 0;
    int dim_coinv = 0;
};

inline constexpr int kDefaultRankMargin = 3;

FiberDims fiber_cohomology(const TorsionFiber &s, int margin = kDefaultRankMargin);

struct LevelReport
{
    int n = 0;
    int dimension = 0;
    FiberDims dims;
    // Fixed vectors stay independent and fixed at the next level (unset at the top level).
    std::optional<bool> injective_next;
};

struct TorsionReport
{
    std::vector<LevelReport> levels;
    int h0 = 0;
    int h1 = 0;
    bool stabilized = false;
    int stabilized_at = 0;
    int euler() const { return h0 - h1; }
};

// Levels 1..n_max starting from the level-1 fiber.
TorsionReport torsion_cohomology(const TorsionFiber &level1, int n_max, int margin = kDefaultRankMargin);

// y[j] lives at level n0 + j; returns x with x_n = -sum_{i <= n} y_i (moved up to level n).
std::vector<std::vector<PadicScalar>> phi_shift_preimage(const TorsionFiber &first,
                                                         const std::vector<std::vector<PadicScalar>> &y);
// (phi - 1) x in the shift model: (phi x)_n = x_(n-1), (phi x)_(n0) = 0.
std::vector<std::vector<PadicScalar>> phi_shift_apply(const TorsionFiber &first,
                                                      const std::vector<std::vector<PadicScalar>> &x);

} // namespace robba
