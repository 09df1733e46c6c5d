#pragma once

#include <robba/rankone.hpp>

#include <optional>
#include <variant>
#include <vector>

namespace robba
{

using SeriesVector = std::vector<TruncatedLaurent>;

// Square matrix of series, row-major.
struct SeriesMatrix
{
    int n = 0;
    std::vector<TruncatedLaurent> a;

    const TruncatedLaurent &operator()(int i, int j) const { return a[static_cast<std::size_t>(i * n + j)]; }
    TruncatedLaurent &operator()(int i, int j) { return a[static_cast<std::size_t>(i * n + j)]; }

    static SeriesMatrix constant(std::int64_t p, const std::vector<PadicScalar> &entries, int n);
    SeriesVector apply(const SeriesVector &x) const;
    friend SeriesMatrix operator*(const SeriesMatrix &x, const SeriesMatrix &y);
    SeriesMatrix kron(const SeriesMatrix &o) const;
};

// A (phi, Gamma)-module free of rank d over the Robba ring, given by the matrices of
// phi and gamma in a basis: phi(x) = A_phi phi(x), gamma(x) = A_gamma gamma(x) on coordinates.
class ModulePresentation
{
public:
    static ModulePresentation rank_one(const Character &delta, const GammaGenerator &g);
    // a_phi_inverse, when given, makes the twisted psi available.
    static ModulePresentation from_matrices(SeriesMatrix a_phi, SeriesMatrix a_gamma, const GammaGenerator &g,
                                            std::optional<SeriesMatrix> a_phi_inverse = std::nullopt);

    int rank() const { return d_; }
    std::int64_t prime() const { return gamma_.p; }
    const GammaGenerator &gamma() const { return gamma_; }
    const std::optional<Character> &character() const { return delta_; }
    const SeriesMatrix &a_phi() const { return a_phi_; }
    const SeriesMatrix &a_gamma() const { return a_gamma_; }

    SeriesVector act_phi(const SeriesVector &x) const;
    SeriesVector act_gamma(const SeriesVector &x) const;
    // Left inverse of act_phi.
    SeriesVector act_psi(const SeriesVector &x) const;

    // Residual valuation of A_phi phi(A_gamma) - A_gamma gamma(A_phi); at least the
    // precision when the two actions commute.
    int commutation_residual() const;
    int commutation_precision() const;

    ModulePresentation tensor(const ModulePresentation &o) const;

private:
    int d_ = 0;
    SeriesMatrix a_phi_;
    SeriesMatrix a_gamma_;
    std::optional<SeriesMatrix> a_phi_inv_;
    std::optional<Character> delta_;
    PadicScalar dp_, dg_; // rank-one scalars
    GammaGenerator gamma_;
};

// Degree 0 and 2 cochains use x only; degree 1 is the pair (x, y) with x the gamma part
// and y the phi part, so that d1(z) = ((gamma-1)z, (phi-1)z).
struct HerrCochain
{
    int degree = 0;
    SeriesVector x;
    SeriesVector y;

    static HerrCochain deg0(const TruncatedLaurent &f) { return {0, {f}, {}}; }
    static HerrCochain deg1(const TruncatedLaurent &f, const TruncatedLaurent &g) { return {1, {f}, {g}}; }
    static HerrCochain deg2(const TruncatedLaurent &f) { return {2, {f}, {}}; }
};

HerrCochain d1(const ModulePresentation &m, const HerrCochain &c);
HerrCochain d2(const ModulePresentation &m, const HerrCochain &c);

// Cup product C^i(M) x C^j(N) -> C^{i+j}(M (x) N) for i + j <= 2, i <= j.
HerrCochain cup(const ModulePresentation &m, const HerrCochain &c1, const ModulePresentation &n, const HerrCochain &c2);

// Res of the cup product of c1 in R(delta1) and c2 in R(delta2), with delta1 delta2 = omega.
PadicScalar h2_pairing(const Character &delta1, const HerrCochain &c1, const Character &delta2, const HerrCochain &c2,
                       const GammaGenerator &g);

// (id, id + (-psi), -psi) from the (phi, gamma)-complex to the (psi, gamma)-complex.
HerrCochain psi_complex_map(const ModulePresentation &m, const HerrCochain &c);
// Differentials of the (psi, gamma)-complex.
HerrCochain d1_psi(const ModulePresentation &m, const HerrCochain &c);
HerrCochain d2_psi(const ModulePresentation &m, const HerrCochain &c);

// f = (delta(chi(gamma)) gamma - 1) a - (delta(p) phi - 1) b.
struct Trivialization
{
    TruncatedLaurent a;
    TruncatedLaurent b;
    // Residual of the re-substitution: valuation of its smallest coefficient and its precision.
    int residual_valuation = 0;
    int residual_precision = 0;
};

// f = c * partial^k(1/T) + defect, with defect a trivialized coboundary.
struct CanonicalClass
{
    PadicScalar c;
    int k = 0;
    Trivialization defect;
};

using H2Reduction = std::variant<Trivialization, CanonicalClass>;

struct H2ReduceOptions
{
    int hi = kDefaultHi;      // top degree enforced when f is closed
    int search_limit = kDefaultSearchLimit;
    int margin = 0;           // pivot margin for the linear solve
};

// (delta(chi(gamma)) gamma - 1) a - (delta(p) phi - 1) b, truncated at hi.
TruncatedLaurent h2_coboundary(const Character &delta, const GammaGenerator &g, const TruncatedLaurent &a,
                               const TruncatedLaurent &b, int hi);

// Over omega x^k a class whose coefficient vanishes at precision comes back as a Trivialization.
H2Reduction h2_reduce(const Character &delta, const TruncatedLaurent &f, const GammaGenerator &g,
                      const H2ReduceOptions &opt = {});

} // namespace robba
