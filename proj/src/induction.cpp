#include <robba/induction.hpp>

namespace robba
{

namespace
{

std::vector<PadicScalar> zeros(std::int64_t p, int n, int prec)
{
    return std::vector<PadicScalar>(static_cast<std::size_t>(n), PadicScalar::zero(p, prec));
}

PadicMatrix matrix_power(const PadicMatrix &a, int e)
{
    PadicMatrix r = PadicMatrix::identity(a.prime(), a.rows(), a.precision());
    for (int i = 0; i < e; ++i) {
        r = r * a;
    }
    return r;
}

PadicMatrix columns(std::int64_t p, int rows, const std::vector<std::vector<PadicScalar>> &cols, int prec)
{
    PadicMatrix m(p, rows, static_cast<int>(cols.size()), prec);
    for (std::size_t j = 0; j < cols.size(); ++j) {
        for (int i = 0; i < rows; ++i) {
            m(i, static_cast<int>(j)) = cols[j][static_cast<std::size_t>(i)];
        }
    }
    return m;
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

InducedModule::InducedModule(PadicMatrix gamma_l, int m) : gamma_l_(std::move(gamma_l)), m_(m)
{
    if (m < 1) {
        throw DomainError("induced module: index must be at least 1");
    }
    if (gamma_l_.rows() != gamma_l_.cols()) {
        throw DomainError("induced module: gamma_L must be square");
    }
    gamma_l_inv_ = inverse(gamma_l_, 0);
}

InducedModule::Element InducedModule::zero() const
{
    return Element(static_cast<std::size_t>(m_),
                   zeros(gamma_l_.prime(), base_dimension(), gamma_l_.precision()));
}

std::vector<PadicScalar> InducedModule::act_gamma_l(const std::vector<PadicScalar> &x) const
{
    return gamma_l_.apply(x);
}

std::vector<PadicScalar> InducedModule::act_gamma_l_inverse(const std::vector<PadicScalar> &x) const
{
    return gamma_l_inv_.apply(x);
}

InducedModule::Element InducedModule::act_gamma_k(const Element &f) const
{
    // (gamma_K f)(g) = f(g gamma_K), and f(gamma_K^m) = gamma_L f(1).
    Element out(f.begin() + 1, f.end());
    out.push_back(act_gamma_l(f.front()));
    return out;
}

InducedModule::Element InducedModule::act_gamma_k_pow(const Element &f, int e) const
{
    Element g = f;
    for (int i = 0; i < e; ++i) {
        g = act_gamma_k(g);
    }
    return g;
}

PadicMatrix InducedModule::gamma_k_matrix() const
{
    const int d = base_dimension();
    PadicMatrix g(gamma_l_.prime(), dimension(), dimension(), gamma_l_.precision());
    const PadicScalar one = PadicScalar::one(gamma_l_.prime(), gamma_l_.precision());
    for (int s = 0; s + 1 < m_; ++s) {
        for (int i = 0; i < d; ++i) {
            g(s * d + i, (s + 1) * d + i) = one;
        }
    }
    for (int i = 0; i < d; ++i) {
        for (int j = 0; j < d; ++j) {
            g((m_ - 1) * d + i, j) = gamma_l_(i, j);
        }
    }
    return g;
}

InducedModule::Element InducedModule::q_map(const std::vector<PadicScalar> &x) const
{
    Element f = zero();
    f.front() = x;
    return f;
}

InducedModule::Element InducedModule::q_tilde(const std::vector<PadicScalar> &x) const
{
    Element acc = zero();
    Element term = q_map(x);
    for (int i = 0; i < m_; ++i) {
        for (int s = 0; s < m_; ++s) {
            auto &a = acc[static_cast<std::size_t>(s)];
            const auto &b = term[static_cast<std::size_t>(s)];
            for (std::size_t r = 0; r < a.size(); ++r) {
                a[r] += b[r];
            }
        }
        term = act_gamma_k(term);
    }
    return acc;
}

InducedModule::Element InducedModule::reconstruct(const Element &f) const
{
    Element acc = zero();
    for (int i = 1; i <= m_; ++i) {
        const Element term = act_gamma_k_pow(q_map(act_gamma_l_inverse(f[static_cast<std::size_t>(m_ - i)])), i);
        for (int s = 0; s < m_; ++s) {
            auto &a = acc[static_cast<std::size_t>(s)];
            const auto &b = term[static_cast<std::size_t>(s)];
            for (std::size_t r = 0; r < a.size(); ++r) {
                a[r] += b[r];
            }
        }
    }
    return acc;
}

std::vector<PadicScalar> InducedModule::flatten(const Element &f) const
{
    std::vector<PadicScalar> v;
    for (const auto &x : f) {
        v.insert(v.end(), x.begin(), x.end());
    }
    return v;
}

ShapiroReport verify_shapiro(const PadicMatrix &gamma_l, int m, int margin)
{
    const InducedModule ind(gamma_l, m);
    const std::int64_t p = gamma_l.prime();
    const int prec = gamma_l.precision();
    const int d = ind.base_dimension();
    const int D = ind.dimension();
    const PadicMatrix a = gamma_l - PadicMatrix::identity(p, d, prec);
    const PadicMatrix b = ind.gamma_k_matrix() - PadicMatrix::identity(p, D, prec);

    ShapiroReport rep;
    rep.m = m;
    rep.base_h0 = d - rank(a, margin).rank;
    rep.base_h1 = d - rank(transpose(a), margin).rank;
    const int rank_b = rank(b, margin).rank;
    rep.induced_h0 = D - rank_b;
    rep.induced_h1 = D - rank(transpose(b), margin).rank;

    // Fixed points: q_tilde(D^{gamma_L}) lands in Ind^{gamma_K} and stays independent.
    const auto fixed = kernel_basis(a, margin);
    std::vector<std::vector<PadicScalar>> imgs;
    bool fixed_ok = true;
    for (const auto &x : fixed) {
        const auto v = ind.flatten(ind.q_tilde(x));
        fixed_ok = fixed_ok && all_zero(b.apply(v));
        imgs.push_back(v);
    }
    const int img_rank = imgs.empty() ? 0 : rank(columns(p, D, imgs, prec), margin).rank;
    rep.q_tilde_iso = fixed_ok && img_rank == rep.base_h0 && rep.base_h0 == rep.induced_h0;

    // Coinvariants: Q(Im(gamma_L - 1)) lies in Im(gamma_K - 1), and Q(D) adds base_h1 dimensions.
    std::vector<std::vector<PadicScalar>> bcols, qa, qd;
    for (int j = 0; j < D; ++j) {
        std::vector<PadicScalar> c;
        for (int i = 0; i < D; ++i) {
            c.push_back(b(i, j));
        }
        bcols.push_back(std::move(c));
    }
    for (int j = 0; j < d; ++j) {
        std::vector<PadicScalar> col, e = zeros(p, d, prec);
        for (int i = 0; i < d; ++i) {
            col.push_back(a(i, j));
        }
        e[static_cast<std::size_t>(j)] = PadicScalar::one(p, prec);
        qa.push_back(ind.flatten(ind.q_map(col)));
        qd.push_back(ind.flatten(ind.q_map(e)));
    }
    auto joined = [&](const std::vector<std::vector<PadicScalar>> &extra) {
        std::vector<std::vector<PadicScalar>> all = bcols;
        all.insert(all.end(), extra.begin(), extra.end());
        return rank(columns(p, D, all, prec), margin).rank;
    };
    const bool well_defined = joined(qa) == rank_b;
    rep.q_map_iso = well_defined && joined(qd) - rank_b == rep.base_h1 && rep.base_h1 == rep.induced_h1;
    return rep;
}

ShapiroReport verify_shapiro(const TorsionFiber &d, int m, int margin)
{
    return verify_shapiro(matrix_power(d.gamma_matrix(), m), m, margin);
}

} // namespace robba
