#include <robba/herr.hpp>

#include <robba/linalg.hpp>

#include <algorithm>

namespace robba
{

namespace
{

int W(std::int64_t p) { return detail::storage_digits(p); }

TruncatedLaurent constant_series(const PadicScalar &c)
{
    return TruncatedLaurent::monomial(c.prime(), 0, c);
}

SeriesVector kron(const SeriesVector &u, const SeriesVector &v)
{
    SeriesVector out;
    out.reserve(u.size() * v.size());
    for (const auto &a : u) {
        for (const auto &b : v) {
            out.push_back(a * b);
        }
    }
    return out;
}

SeriesVector sub(const SeriesVector &u, const SeriesVector &v)
{
    if (u.size() != v.size()) {
        throw DomainError("cochain components of different rank");
    }
    SeriesVector out;
    for (std::size_t i = 0; i < u.size(); ++i) {
        out.push_back(u[i] - v[i]);
    }
    return out;
}

SeriesVector neg(const SeriesVector &u)
{
    SeriesVector out;
    for (const auto &a : u) {
        out.push_back(-a);
    }
    return out;
}

void check_rank(const ModulePresentation &m, const SeriesVector &x)
{
    if (static_cast<int>(x.size()) != m.rank()) {
        throw DomainError("cochain component has length " + std::to_string(x.size()) + ", module rank is " +
                          std::to_string(m.rank()));
    }
}

} // namespace

SeriesMatrix SeriesMatrix::constant(std::int64_t p, const std::vector<PadicScalar> &entries, int n)
{
    if (static_cast<int>(entries.size()) != n * n) {
        throw DomainError("SeriesMatrix::constant: wrong number of entries");
    }
    SeriesMatrix m;
    m.n = n;
    for (const auto &c : entries) {
        if (c.prime() != p) {
            throw DomainError("SeriesMatrix::constant: prime mismatch");
        }
        m.a.push_back(constant_series(c));
    }
    return m;
}

SeriesVector SeriesMatrix::apply(const SeriesVector &x) const
{
    if (static_cast<int>(x.size()) != n) {
        throw DomainError("SeriesMatrix::apply: shape mismatch");
    }
    SeriesVector y;
    for (int i = 0; i < n; ++i) {
        TruncatedLaurent s = (*this)(i, 0) * x[0];
        for (int j = 1; j < n; ++j) {
            s += (*this)(i, j) * x[static_cast<std::size_t>(j)];
        }
        y.push_back(s);
    }
    return y;
}

SeriesMatrix operator*(const SeriesMatrix &x, const SeriesMatrix &y)
{
    if (x.n != y.n) {
        throw DomainError("SeriesMatrix product: shape mismatch");
    }
    SeriesMatrix z;
    z.n = x.n;
    for (int i = 0; i < x.n; ++i) {
        for (int j = 0; j < x.n; ++j) {
            TruncatedLaurent s = x(i, 0) * y(0, j);
            for (int k = 1; k < x.n; ++k) {
                s += x(i, k) * y(k, j);
            }
            z.a.push_back(s);
        }
    }
    return z;
}

SeriesMatrix SeriesMatrix::kron(const SeriesMatrix &o) const
{
    SeriesMatrix z;
    z.n = n * o.n;
    z.a.resize(static_cast<std::size_t>(z.n * z.n));
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            for (int k = 0; k < o.n; ++k) {
                for (int l = 0; l < o.n; ++l) {
                    z(i * o.n + k, j * o.n + l) = (*this)(i, j) * o(k, l);
                }
            }
        }
    }
    return z;
}

ModulePresentation ModulePresentation::rank_one(const Character &delta, const GammaGenerator &g)
{
    if (delta.prime() != g.p) {
        throw DomainError("rank_one: prime mismatch");
    }
    ModulePresentation m;
    m.d_ = 1;
    m.gamma_ = g;
    m.delta_ = delta;
    m.dp_ = delta.delta_p;
    m.dg_ = delta.at_chi_gamma(g);
    m.a_phi_ = SeriesMatrix::constant(g.p, {m.dp_}, 1);
    m.a_gamma_ = SeriesMatrix::constant(g.p, {m.dg_}, 1);
    m.a_phi_inv_ = SeriesMatrix::constant(g.p, {PadicScalar::one(g.p, W(g.p)) / m.dp_}, 1);
    return m;
}

ModulePresentation ModulePresentation::from_matrices(SeriesMatrix a_phi, SeriesMatrix a_gamma, const GammaGenerator &g,
                                                     std::optional<SeriesMatrix> a_phi_inverse)
{
    if (a_phi.n != a_gamma.n || a_phi.n <= 0) {
        throw DomainError("from_matrices: matrices must be square of the same positive size");
    }
    ModulePresentation m;
    m.d_ = a_phi.n;
    m.gamma_ = g;
    m.a_phi_ = std::move(a_phi);
    m.a_gamma_ = std::move(a_gamma);
    m.a_phi_inv_ = std::move(a_phi_inverse);
    return m;
}

SeriesVector ModulePresentation::act_phi(const SeriesVector &x) const
{
    check_rank(*this, x);
    if (delta_) {
        return {dp_ * phi(x[0])};
    }
    SeriesVector y;
    for (const auto &f : x) {
        y.push_back(phi(f));
    }
    return a_phi_.apply(y);
}

SeriesVector ModulePresentation::act_gamma(const SeriesVector &x) const
{
    check_rank(*this, x);
    if (delta_) {
        return {dg_ * gamma_act(x[0], gamma_, 1)};
    }
    SeriesVector y;
    for (const auto &f : x) {
        y.push_back(gamma_act(f, gamma_, 1));
    }
    return a_gamma_.apply(y);
}

SeriesVector ModulePresentation::act_psi(const SeriesVector &x) const
{
    check_rank(*this, x);
    if (delta_) {
        return {(PadicScalar::one(prime(), W(prime())) / dp_) * psi(x[0])};
    }
    if (!a_phi_inv_) {
        throw DomainError("psi needs the inverse of the Frobenius matrix");
    }
    // phi_D(z) = A phi(z), so psi_D(y) = psi(A^-1 y) componentwise.
    SeriesVector y = a_phi_inv_->apply(x);
    for (auto &f : y) {
        f = psi(f);
    }
    return y;
}

int ModulePresentation::commutation_residual() const
{
    if (delta_) {
        return commutation_precision();
    }
    SeriesMatrix pg = a_gamma_, ga = a_phi_;
    for (auto &f : pg.a) {
        f = phi(f);
    }
    for (auto &f : ga.a) {
        f = gamma_act(f, gamma_, 1);
    }
    const SeriesMatrix lhs = a_phi_ * pg;
    const SeriesMatrix rhs = a_gamma_ * ga;
    int v = commutation_precision();
    for (std::size_t i = 0; i < lhs.a.size(); ++i) {
        v = std::min(v, residual_valuation(lhs.a[i], rhs.a[i]));
    }
    return v;
}

int ModulePresentation::commutation_precision() const
{
    int v = W(prime());
    for (const auto &f : a_phi_.a) {
        v = std::min(v, f.precision());
    }
    for (const auto &f : a_gamma_.a) {
        v = std::min(v, f.precision());
    }
    return v;
}

ModulePresentation ModulePresentation::tensor(const ModulePresentation &o) const
{
    if (prime() != o.prime()) {
        throw DomainError("tensor: prime mismatch");
    }
    if (delta_ && o.delta_) {
        return rank_one(*delta_ * *o.delta_, gamma_);
    }
    std::optional<SeriesMatrix> inv;
    if (a_phi_inv_ && o.a_phi_inv_) {
        inv = a_phi_inv_->kron(*o.a_phi_inv_);
    }
    return from_matrices(a_phi_.kron(o.a_phi_), a_gamma_.kron(o.a_gamma_), gamma_, inv);
}

HerrCochain d1(const ModulePresentation &m, const HerrCochain &c)
{
    if (c.degree != 0) {
        throw DomainError("d1 takes a degree-0 cochain");
    }
    return HerrCochain{1, sub(m.act_gamma(c.x), c.x), sub(m.act_phi(c.x), c.x)};
}

HerrCochain d2(const ModulePresentation &m, const HerrCochain &c)
{
    if (c.degree != 1) {
        throw DomainError("d2 takes a degree-1 cochain");
    }
    return HerrCochain{2, sub(sub(m.act_phi(c.x), c.x), sub(m.act_gamma(c.y), c.y)), {}};
}

HerrCochain cup(const ModulePresentation &m, const HerrCochain &c1, const ModulePresentation &n, const HerrCochain &c2)
{
    check_rank(m, c1.x);
    check_rank(n, c2.x);
    const int deg = c1.degree + c2.degree;
    if (deg > 2) {
        throw DomainError("cup product of degrees " + std::to_string(c1.degree) + " and " + std::to_string(c2.degree) +
                          " exceeds 2");
    }
    if (c1.degree == 0) {
        if (c2.degree == 1) {
            return HerrCochain{1, kron(c1.x, c2.x), kron(c1.x, c2.y)};
        }
        return HerrCochain{deg, kron(c1.x, c2.x), {}};
    }
    if (c1.degree == 1 && c2.degree == 1) {
        // ((x, y), (z, w)) -> y (x) phi(z) - x (x) gamma(w), x and z the gamma parts. This is the
        // usual formula written for phi-part-first pairs, transcribed to our ordering; it makes the
        // cup of a coboundary with a cocycle a coboundary.
        return HerrCochain{2, sub(kron(c1.y, n.act_phi(c2.x)), kron(c1.x, n.act_gamma(c2.y))), {}};
    }
    throw DomainError("cup product supports degree pairs (0,0), (0,1), (0,2), (1,1)");
}

PadicScalar h2_pairing(const Character &delta1, const HerrCochain &c1, const Character &delta2, const HerrCochain &c2,
                       const GammaGenerator &g)
{
    const Character prod = delta1 * delta2;
    if (!prod.equals_at_precision(char_omega(g.p, W(g.p)))) {
        throw DomainError("h2_pairing: product character " + prod.to_string() + " is not omega");
    }
    const ModulePresentation m = ModulePresentation::rank_one(delta1, g);
    const ModulePresentation n = ModulePresentation::rank_one(delta2, g);
    const HerrCochain c = cup(m, c1, n, c2);
    if (c.degree != 2) {
        throw DomainError("h2_pairing: cup product lands in degree " + std::to_string(c.degree));
    }
    return Res(c.x[0]);
}

HerrCochain psi_complex_map(const ModulePresentation &m, const HerrCochain &c)
{
    switch (c.degree) {
    case 0:
        return c;
    case 1:
        return HerrCochain{1, c.x, neg(m.act_psi(c.y))};
    case 2:
        return HerrCochain{2, neg(m.act_psi(c.x)), {}};
    default:
        throw DomainError("psi_complex_map: bad degree");
    }
}

HerrCochain d1_psi(const ModulePresentation &m, const HerrCochain &c)
{
    if (c.degree != 0) {
        throw DomainError("d1 takes a degree-0 cochain");
    }
    return HerrCochain{1, sub(m.act_gamma(c.x), c.x), sub(m.act_psi(c.x), c.x)};
}

HerrCochain d2_psi(const ModulePresentation &m, const HerrCochain &c)
{
    if (c.degree != 1) {
        throw DomainError("d2 takes a degree-1 cochain");
    }
    return HerrCochain{2, sub(sub(m.act_psi(c.x), c.x), sub(m.act_gamma(c.y), c.y)), {}};
}

// ---------------------------------------------------------------------------
// H^2 reduction

TruncatedLaurent h2_coboundary(const Character &delta, const GammaGenerator &g, const TruncatedLaurent &a,
                               const TruncatedLaurent &b, int hi)
{
    const TruncatedLaurent ga = delta.at_chi_gamma(g) * substitute(a, g.chi_gamma, hi);
    const TruncatedLaurent pb = delta.delta_p * phi(b);
    return (ga - a) - (pb - b);
}

namespace
{

int top_degree(const TruncatedLaurent &f, const H2ReduceOptions &opt)
{
    return f.closed() ? std::max(opt.hi, f.hi()) : f.hi();
}

Trivialization verified(const Character &delta, const GammaGenerator &g, const TruncatedLaurent &f,
                        TruncatedLaurent a, TruncatedLaurent b, const H2ReduceOptions &opt)
{
    const TruncatedLaurent cb = h2_coboundary(delta, g, a, b, top_degree(f, opt));
    Trivialization t{std::move(a), std::move(b), residual_valuation(cb, f), std::min(cb.precision(), f.precision())};
    return t;
}

// Windowed linear solve for v_p(delta(p)) < 0: unknowns a_j T^j and b_j T^j, equations
// on every degree of f's window.
Trivialization base_solve(const Character &delta, const GammaGenerator &g, const TruncatedLaurent &f,
                          const H2ReduceOptions &opt)
{
    const std::int64_t p = f.prime();
    const int H = top_degree(f, opt);
    const int La = std::min(f.lo(), 0);
    const int Hb = H;
    const PadicScalar dg = delta.at_chi_gamma(g);
    std::vector<TruncatedLaurent> cols;
    std::vector<std::pair<char, int>> tags;
    const PadicScalar one = PadicScalar::one(p, W(p));
    int L = La;
    for (int j = La; j <= H; ++j) {
        const TruncatedLaurent m = TruncatedLaurent::monomial(p, j, one);
        cols.push_back(dg * substitute(m, g.chi_gamma, H) - m);
        tags.emplace_back('a', j);
    }
    for (int j = 0; j <= Hb; ++j) {
        const TruncatedLaurent m = TruncatedLaurent::monomial(p, j, one);
        cols.push_back(m - delta.delta_p * phi(m));
        tags.emplace_back('b', j);
        L = std::min(L, cols.back().lo());
    }
    const int nrows = H - L + 1;
    PadicMatrix A(p, nrows, static_cast<int>(cols.size()), W(p));
    for (std::size_t c = 0; c < cols.size(); ++c) {
        for (int d = L; d <= H; ++d) {
            A(d - L, static_cast<int>(c)) = cols[c].coeff(d);
        }
    }
    std::vector<PadicScalar> rhs;
    for (int d = L; d <= H; ++d) {
        rhs.push_back(f.coeff(d));
    }
    const SolveInfo s = solve(A, rhs, opt.margin);
    if (!s.consistent) {
        throw PrecisionError("h2_reduce: linear solve inconsistent at precision (residual valuation " +
                             std::to_string(s.inconsistency_valuation) + ")");
    }
    std::vector<PadicScalar> av, bv;
    for (std::size_t c = 0; c < cols.size(); ++c) {
        (tags[c].first == 'a' ? av : bv).push_back(s.x[c]);
    }
    TruncatedLaurent a = TruncatedLaurent::from_coeffs(p, W(p), La, av, true);
    TruncatedLaurent b = TruncatedLaurent::from_coeffs(p, W(p), 0, bv, true);
    return verified(delta, g, f, std::move(a), std::move(b), opt);
}

// Laurent polynomial agreeing with f up to degree hi.
TruncatedLaurent closed_at(const TruncatedLaurent &f, int hi)
{
    const int top = std::min(hi, f.hi());
    if (top < f.lo()) {
        return TruncatedLaurent::zero(f.prime(), f.precision(), 0, -1, true);
    }
    std::vector<std::int64_t> r(f.residues().begin(), f.residues().begin() + (top - f.lo() + 1));
    return TruncatedLaurent::from_residues(f.prime(), f.precision(), f.shift(), f.lo(), top, true, std::move(r));
}

// (1+T)^z for z in Z_p, up to degree hi.
TruncatedLaurent one_plus_T_power(const PadicScalar &z, int hi)
{
    std::vector<PadicScalar> c;
    for (int k = 0; k <= hi; ++k) {
        c.push_back(binomial(z, k));
    }
    return TruncatedLaurent::from_coeffs(z.prime(), z.precision(), 0, c, true);
}

// v_p(delta(p)) < 0. First b = -sum_n (delta(p)^-1 psi)^n f, after which
// c = f + (delta(p) phi - 1) b satisfies psi(c) = 0. Write c = sum_i (1+T)^i phi(c_i) for
// i in (Z/p)^x; delta(chi) gamma permutes the slots cyclically, and going once round the
// cycle leaves (G - 1) a_1 = h with G(y) = G(1) gamma^(p-1)(y). Its inverse is the
// T-adically convergent iteration y <- y + (h - (G - 1) y) / (G(1) - G(1)(0)).
Trivialization psi_route(const Character &delta, const GammaGenerator &g, const TruncatedLaurent &f,
                         const H2ReduceOptions &opt)
{
    const std::int64_t p = f.prime();
    const int P = static_cast<int>(p);
    const int H = top_degree(f, opt);
    const int N = f.precision();
    const TruncatedLaurent f0 = closed_at(f, H);
    const PadicScalar dp_inv = PadicScalar::one(p, W(p)) / delta.delta_p;
    const PadicScalar D = delta.at_chi_gamma(g);

    TruncatedLaurent b = TruncatedLaurent::zero(p, N, 0, -1, true);
    TruncatedLaurent s = f0;
    for (int n = 0; n <= N + 1 && !s.is_zero(); ++n) {
        s = dp_inv * psi(s);
        b -= s;
    }
    const TruncatedLaurent c = f0 + (delta.delta_p * phi(b) - b);

    // Slot i of x is psi((1+T)^-i x); slots are needed up to Hc, the work window is Hw.
    // phi(T^k) reaches down to T^k with coefficients of valuation >= k - (d - k)/(p - 1) at T^d.
    const int Hc = (N * (P - 1) + std::max(H, 0)) / P + 2;
    const int Hw = Hc + N + 4;
    const int e = c.precision() + c.shift();
    const int Hpre = P * (Hw + e + 2) + P;
    const PadicScalar one = PadicScalar::one(p, W(p));
    const TruncatedLaurent inv1pT = TruncatedLaurent::from_coeffs(p, W(p), 0, {one, one}, true).inverse(Hpre);
    std::vector<TruncatedLaurent> slot(static_cast<std::size_t>(P));
    {
        TruncatedLaurent w = closed_at(c, Hpre);
        for (int i = 1; i < P; ++i) {
            w = closed_at(w * inv1pT, Hpre);
            slot[static_cast<std::size_t>(i)] = closed_at(psi(w), Hw);
        }
    }

    // Cycle 1 -> chi -> chi^2 -> ... mod p, with carries z_i = (chi i - r) / p.
    const std::int64_t chi0 = detail::mod(g.chi_gamma.unit(), p);
    std::vector<int> orbit{1};
    while (static_cast<int>(orbit.size()) < P - 1) {
        orbit.push_back(static_cast<int>(detail::mod(orbit.back() * chi0, p)));
    }
    if (detail::mod(orbit.back() * chi0, p) != 1) {
        throw DomainError("h2_reduce: chi(gamma) does not generate (Z/p)^x");
    }
    std::vector<TruncatedLaurent> carry;
    for (int i : orbit) {
        const std::int64_t r = detail::mod(i * chi0, p);
        const PadicScalar z = (PadicScalar::from_int(p, i, W(p)) * g.chi_gamma - PadicScalar::from_int(p, r, W(p))) /
                              PadicScalar::from_int(p, p, W(p));
        carry.push_back(D * one_plus_T_power(z, Hw));
    }
    auto step = [&](std::size_t k, const TruncatedLaurent &y) {
        return closed_at(carry[k] * substitute(y, g.chi_gamma, Hw), Hw);
    };
    // x_{k+1} = L_k(x_k) - slot(orbit[k+1]), with orbit[p-1] = orbit[0].
    auto run = [&](const TruncatedLaurent &a1) {
        std::vector<TruncatedLaurent> x{a1};
        for (std::size_t k = 0; k < orbit.size(); ++k) {
            const int nxt = orbit[(k + 1) % orbit.size()];
            x.push_back(step(k, x.back()) - slot[static_cast<std::size_t>(nxt)]);
        }
        return x;
    };
    const TruncatedLaurent zero = TruncatedLaurent::zero(p, N, 0, -1, true);
    const TruncatedLaurent h = -run(zero).back();
    auto G = [&](const TruncatedLaurent &y) {
        TruncatedLaurent v = y;
        for (std::size_t k = 0; k < orbit.size(); ++k) {
            v = step(k, v);
        }
        return v;
    };
    const TruncatedLaurent G1 = G(TruncatedLaurent::monomial(p, 0, one));
    const TruncatedLaurent u = G1 - TruncatedLaurent::monomial(p, 0, G1.coeff(0));
    const TruncatedLaurent uinv = u.inverse(Hw + 2);
    TruncatedLaurent a1 = zero;
    TruncatedLaurent err = closed_at(h, Hw);
    const int max_iter = 4 * (N + Hw - std::min(f.lo(), 0)) + 16;
    int it = 0;
    while (!closed_at(err, Hc).is_zero()) {
        if (++it > max_iter) {
            throw PrecisionError("h2_reduce: gamma inversion on psi = 0 did not converge");
        }
        a1 = closed_at(a1 + err * uinv, Hw);
        err = closed_at(h - (G(a1) - a1), Hw);
    }
    const std::vector<TruncatedLaurent> xs = run(a1);
    TruncatedLaurent a = zero;
    for (std::size_t k = 0; k < orbit.size(); ++k) {
        const int i = orbit[k];
        const TruncatedLaurent pw = one_plus_T_power(PadicScalar::from_int(p, i, W(p)), i);
        a += closed_at(pw * phi(closed_at(xs[k], Hc)), H + 1);
    }
    return verified(delta, g, f, std::move(a), std::move(b), opt);
}

Trivialization trivialize(const Character &delta, const GammaGenerator &g, const TruncatedLaurent &f,
                          const H2ReduceOptions &opt)
{
    const std::int64_t p = f.prime();
    if (degree(delta) < 0) {
        try {
            return psi_route(delta, g, f, opt);
        } catch (const PrecisionError &) {
            return base_solve(delta, g, f, opt);
        }
    }
    // Kill the residue with the pivot (1+T)/T, then descend along partial to R(x^-1 delta).
    const TruncatedLaurent pivot = one_plus_T_over_T(p);
    const PadicScalar r = Res(f);
    TruncatedLaurent a0 = TruncatedLaurent::zero(p, W(p), 0, -1, true);
    TruncatedLaurent b0 = a0;
    if (!r.is_zero()) {
        const PadicScalar one = PadicScalar::one(p, W(p));
        const PadicScalar den_a = delta.at_chi_gamma(g) / g.chi_gamma - one;
        const PadicScalar den_b = delta.delta_p - one;
        if (den_a.is_zero() && den_b.is_zero()) {
            throw DomainError("h2_reduce: nonzero residue over omega is not a coboundary");
        }
        if (den_b.is_zero() || (!den_a.is_zero() && den_a.valuation() < den_b.valuation())) {
            a0 = (r / den_a) * pivot;
        } else {
            b0 = (-(r / den_b)) * pivot;
        }
    }
    const int H = top_degree(f, opt);
    const TruncatedLaurent f1 = f - h2_coboundary(delta, g, a0, b0, H);
    const TruncatedLaurent h = partial_inverse(f1.closed() ? f1 : f1);
    const Character down = delta * char_x(p, W(p)).inverse();
    H2ReduceOptions sub_opt = opt;
    sub_opt.hi = H + 1;
    const Trivialization s = trivialize(down, g, h, sub_opt);
    TruncatedLaurent a = a0 + partial(s.a);
    TruncatedLaurent b = b0 + partial(s.b);
    return verified(delta, g, f, std::move(a), std::move(b), opt);
}

} // namespace

H2Reduction h2_reduce(const Character &delta, const TruncatedLaurent &f, const GammaGenerator &g,
                      const H2ReduceOptions &opt)
{
    const std::int64_t p = f.prime();
    if (delta.prime() != p || g.p != p) {
        throw DomainError("h2_reduce: prime mismatch");
    }
    const Classification cls = classify(delta, opt.search_limit);
    if (cls.kind == Classification::Kind::OmegaXI) {
        const int k = cls.i;
        const TruncatedLaurent gen = h2_generator(p, k);
        const int H = top_degree(f, opt);
        const TruncatedLaurent tk = h0_generator(p, k, std::max(H - f.lo() + 2, 1));
        const PadicScalar c = Res(tk * f) / Res(tk * gen);
        if (c.is_zero()) {
            // The class vanishes at precision: f itself is a coboundary.
            return trivialize(delta, g, f, opt);
        }
        const TruncatedLaurent rest = f - c * gen;
        CanonicalClass cc{c, k, trivialize(delta, g, rest, opt)};
        return cc;
    }
    return trivialize(delta, g, f, opt);
}

} // namespace robba
