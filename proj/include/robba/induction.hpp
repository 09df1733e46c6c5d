#pragma once

#include <robba/torsion.hpp>

#include <vector>

namespace robba
{

// Ind from Gamma_L = <gamma_L> to Gamma_K = <gamma_K>, gamma_L = gamma_K^m, on a finite-dimensional
// Q_p-space D with gamma_L given as a matrix. Elements are m-tuples (f(1), f(gamma_K), ...,
// f(gamma_K^(m-1))); gamma_K shifts the tuple and applies gamma_L on the wrap-around slot.
class InducedModule
{
public:
    InducedModule(PadicMatrix gamma_l, int m);

    int index() const { return m_; }
    int base_dimension() const { return gamma_l_.rows(); }
    int dimension() const { return m_ * base_dimension(); }
    const PadicMatrix &gamma_l() const { return gamma_l_; }

    using Element = std::vector<std::vector<PadicScalar>>;

    Element zero() const;
    Element act_gamma_k(const Element &f) const;
    Element act_gamma_k_pow(const Element &f, int e) const;
    std::vector<PadicScalar> act_gamma_l(const std::vector<PadicScalar> &x) const;
    std::vector<PadicScalar> act_gamma_l_inverse(const std::vector<PadicScalar> &x) const;
    // Matrix of gamma_K on the flattened tuple.
    PadicMatrix gamma_k_matrix() const;

    // Q(x) = (x, 0, ..., 0)
    Element q_map(const std::vector<PadicScalar> &x) const;
    // sum_i gamma_K^i Q(x)
    Element q_tilde(const std::vector<PadicScalar> &x) const;
    // sum_{i=1}^m gamma_K^i Q(gamma_L^-1 f_(m-i))
    Element reconstruct(const Element &f) const;

    std::vector<PadicScalar> flatten(const Element &f) const;

private:
    PadicMatrix gamma_l_;
    PadicMatrix gamma_l_inv_;
    int m_ = 1;
};

struct ShapiroReport
{
    int m = 1;
    int base_h0 = 0;
    int base_h1 = 0;
    int induced_h0 = 0;
    int induced_h1 = 0;
    // q_tilde carries a basis of D^{gamma_L} to independent gamma_K-fixed vectors.
    bool q_tilde_iso = false;
    // q_map induces an injection, hence a bijection, on coinvariants.
    bool q_map_iso = false;
    bool dims_agree() const { return base_h0 == induced_h0 && base_h1 == induced_h1; }
    bool ok() const { return dims_agree() && q_tilde_iso && q_map_iso; }
};

ShapiroReport verify_shapiro(const PadicMatrix &gamma_l, int m, int margin = kDefaultRankMargin);
// D a torsion fiber with gamma_L acting as gamma^m.
ShapiroReport verify_shapiro(const TorsionFiber &d, int m, int margin = kDefaultRankMargin);

} // namespace robba
