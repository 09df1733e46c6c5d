#include <robba/torsion.hpp>

#include <algorithm>

namespace robba
{

CyclotomicLevel::CyclotomicLevel(std::int64_t p, int n, int prec) : p_(p), n_(n), prec_(prec)
{
    if (!detail::is_odd_prime(p)) {
        throw DomainError("cyclotomic level: p must be an odd prime");
    }
    if (n < 1) {
        throw DomainError("cyclotomic level: n must be at least 1");
    }
    order_ = detail::ppow(p, n);
    deg_ = static_cast<int>(order_ / p * (p - 1));
}

CycElem CyclotomicLevel::zero() const { return CycElem(static_cast<std::size_t>(deg_), PadicScalar::zero(p_, prec_)); }

CycElem CyclotomicLevel::one() const { return scalar(PadicScalar::one(p_, prec_)); }

CycElem CyclotomicLevel::scalar(const PadicScalar &c) const
{
    CycElem a = zero();
    a[0] = c;
    return a;
}

CycElem CyclotomicLevel::root_power(std::int64_t e) const
{
    std::vector<PadicScalar> c(static_cast<std::size_t>(order_), PadicScalar::zero(p_, prec_));
    c[static_cast<std::size_t>(detail::mod(e, order_))] = PadicScalar::one(p_, prec_);
    return reduce(c);
}

CycElem CyclotomicLevel::reduce(const std::vector<PadicScalar> &c) const
{
    // X^((p-1)m + r) = -sum_{j < p-1} X^(jm + r), m = p^(n-1).
    const std::int64_t m = order_ / p_;
    CycElem out(c.begin(), c.begin() + deg_);
    for (std::int64_t r = 0; r < m; ++r) {
        const PadicScalar &x = c[static_cast<std::size_t>(deg_ + r)];
        if (x.is_zero()) {
            continue;
        }
        for (std::int64_t j = 0; j + 1 < p_; ++j) {
            out[static_cast<std::size_t>(j * m + r)] -= x;
        }
    }
    return out;
}

CycElem CyclotomicLevel::add(const CycElem &a, const CycElem &b) const
{
    CycElem c = a;
    for (int i = 0; i < deg_; ++i) {
        c[static_cast<std::size_t>(i)] += b[static_cast<std::size_t>(i)];
    }
    return c;
}

CycElem CyclotomicLevel::sub(const CycElem &a, const CycElem &b) const
{
    CycElem c = a;
    for (int i = 0; i < deg_; ++i) {
        c[static_cast<std::size_t>(i)] -= b[static_cast<std::size_t>(i)];
    }
    return c;
}

CycElem CyclotomicLevel::mul(const CycElem &a, const CycElem &b) const
{
    std::vector<PadicScalar> c(static_cast<std::size_t>(order_), PadicScalar::zero(p_, prec_));
    for (int i = 0; i < deg_; ++i) {
        if (a[static_cast<std::size_t>(i)].is_zero()) {
            continue;
        }
        for (int j = 0; j < deg_; ++j) {
            if (!b[static_cast<std::size_t>(j)].is_zero()) {
                c[static_cast<std::size_t>((i + j) % order_)] +=
                    a[static_cast<std::size_t>(i)] * b[static_cast<std::size_t>(j)];
            }
        }
    }
    return reduce(c);
}

CycElem CyclotomicLevel::scale(const PadicScalar &c, const CycElem &a) const
{
    CycElem out = a;
    for (auto &x : out) {
        x = c * x;
    }
    return out;
}

CycElem CyclotomicLevel::inverse(const CycElem &a) const
{
    // Solve (multiplication by a) y = 1.
    PadicMatrix m(p_, deg_, deg_, prec_);
    for (int j = 0; j < deg_; ++j) {
        const CycElem col = mul(a, root_power(j));
        for (int i = 0; i < deg_; ++i) {
            m(i, j) = col[static_cast<std::size_t>(i)];
        }
    }
    const SolveInfo s = solve(m, one(), 0);
    if (!s.consistent || s.rank < deg_) {
        throw PrecisionError("cyclotomic inverse: element is not invertible at precision");
    }
    return s.x;
}

CycElem CyclotomicLevel::sigma(const PadicScalar &a, const CycElem &x) const
{
    if (!a.is_unit()) {
        throw DomainError("sigma_a needs a p-adic unit");
    }
    const std::int64_t e = detail::mod(a.unit(), order_);
    std::vector<PadicScalar> c(static_cast<std::size_t>(order_), PadicScalar::zero(p_, prec_));
    for (int i = 0; i < deg_; ++i) {
        c[static_cast<std::size_t>(detail::mulmod(i, e, order_))] += x[static_cast<std::size_t>(i)];
    }
    return reduce(c);
}

CycElem CyclotomicLevel::embed_next(const CycElem &x) const
{
    const CyclotomicLevel up(p_, n_ + 1, prec_);
    std::vector<PadicScalar> c(static_cast<std::size_t>(up.order()), PadicScalar::zero(p_, prec_));
    for (int i = 0; i < deg_; ++i) {
        c[static_cast<std::size_t>(p_ * i)] = x[static_cast<std::size_t>(i)];
    }
    return up.reduce(c);
}

bool CyclotomicLevel::is_zero(const CycElem &a) const
{
    return std::all_of(a.begin(), a.end(), [](const PadicScalar &x) { return x.is_zero(); });
}

CycTElem CyclotomicTLevel::zero() const { return CycTElem(static_cast<std::size_t>(k), K.zero()); }

CycTElem CyclotomicTLevel::one() const { return from_base(K.one()); }

CycTElem CyclotomicTLevel::from_base(const CycElem &a) const
{
    CycTElem x = zero();
    x[0] = a;
    return x;
}

CycTElem CyclotomicTLevel::add(const CycTElem &a, const CycTElem &b) const
{
    CycTElem c = a;
    for (int i = 0; i < k; ++i) {
        c[static_cast<std::size_t>(i)] = K.add(a[static_cast<std::size_t>(i)], b[static_cast<std::size_t>(i)]);
    }
    return c;
}

CycTElem CyclotomicTLevel::sub(const CycTElem &a, const CycTElem &b) const
{
    CycTElem c = a;
    for (int i = 0; i < k; ++i) {
        c[static_cast<std::size_t>(i)] = K.sub(a[static_cast<std::size_t>(i)], b[static_cast<std::size_t>(i)]);
    }
    return c;
}

CycTElem CyclotomicTLevel::mul(const CycTElem &a, const CycTElem &b) const
{
    CycTElem c = zero();
    for (int i = 0; i < k; ++i) {
        if (K.is_zero(a[static_cast<std::size_t>(i)])) {
            continue;
        }
        for (int j = 0; i + j < k; ++j) {
            auto &s = c[static_cast<std::size_t>(i + j)];
            s = K.add(s, K.mul(a[static_cast<std::size_t>(i)], b[static_cast<std::size_t>(j)]));
        }
    }
    return c;
}

CycTElem CyclotomicTLevel::inverse(const CycTElem &a) const
{
    const CycElem a0inv = K.inverse(a[0]);
    CycTElem b = zero();
    b[0] = a0inv;
    for (int i = 1; i < k; ++i) {
        CycElem s = K.zero();
        for (int j = 1; j <= i; ++j) {
            s = K.add(s, K.mul(a[static_cast<std::size_t>(j)], b[static_cast<std::size_t>(i - j)]));
        }
        b[static_cast<std::size_t>(i)] = K.scale(-PadicScalar::one(K.prime(), K.precision()), K.mul(a0inv, s));
    }
    return b;
}

CycTElem CyclotomicTLevel::sigma(const PadicScalar &a, const CycTElem &x) const
{
    CycTElem y = zero();
    PadicScalar ai = PadicScalar::one(K.prime(), a.precision());
    for (int i = 0; i < k; ++i) {
        y[static_cast<std::size_t>(i)] = K.scale(ai, K.sigma(a, x[static_cast<std::size_t>(i)]));
        ai *= a;
    }
    return y;
}

bool CyclotomicTLevel::is_zero(const CycTElem &a) const
{
    return std::all_of(a.begin(), a.end(), [&](const CycElem &x) { return K.is_zero(x); });
}

std::vector<PadicScalar> CyclotomicTLevel::flatten(const CycTElem &a) const
{
    std::vector<PadicScalar> v;
    v.reserve(static_cast<std::size_t>(k * K.degree()));
    for (const auto &c : a) {
        v.insert(v.end(), c.begin(), c.end());
    }
    return v;
}

CycTElem CyclotomicTLevel::unflatten(const std::vector<PadicScalar> &v) const
{
    CycTElem a = zero();
    const auto deg = static_cast<std::size_t>(K.degree());
    for (std::size_t i = 0; i < static_cast<std::size_t>(k); ++i) {
        a[i].assign(v.begin() + static_cast<std::ptrdiff_t>(i * deg),
                    v.begin() + static_cast<std::ptrdiff_t>((i + 1) * deg));
    }
    return a;
}

CycTElem localize_at_n(const TruncatedLaurent &f, int n, int k)
{
    if (n < 1 || k < 1) {
        throw DomainError("localize_at_n: need n >= 1 and k >= 1");
    }
    const std::int64_t p = f.prime();
    const int prec = f.precision();
    const CyclotomicTLevel R{CyclotomicLevel(p, n, prec), k};
    // u = eps e^(t/p^n) - 1
    CycTElem u = R.zero();
    PadicScalar c = PadicScalar::one(p, detail::storage_digits(p));
    const PadicScalar pn = PadicScalar::from_parts(p, n, 1, detail::storage_digits(p));
    for (int j = 0; j < k; ++j) {
        u[static_cast<std::size_t>(j)] = R.K.scale(c, R.K.root_power(1));
        c = c / (PadicScalar::from_int(p, j + 1, detail::storage_digits(p)) * pn);
    }
    u[0] = R.K.sub(u[0], R.K.one());
    const int top = f.hi();
    CycTElem out = R.zero();
    if (top >= std::max(f.lo(), 0)) {
        CycTElem pw = R.one();
        for (int d = 0; d < std::max(f.lo(), 0); ++d) {
            pw = R.mul(pw, u);
        }
        for (int d = std::max(f.lo(), 0); d <= top; ++d) {
            const PadicScalar a = f.coeff(d);
            if (!a.is_zero()) {
                out = R.add(out, R.mul(R.from_base(R.K.scalar(a)), pw));
            }
            pw = R.mul(pw, u);
        }
    }
    if (f.lo() < 0) {
        const CycTElem uinv = R.inverse(u);
        CycTElem pw = uinv;
        for (int d = -1; d >= f.lo(); --d) {
            const PadicScalar a = f.coeff(d);
            if (!a.is_zero()) {
                out = R.add(out, R.mul(R.from_base(R.K.scalar(a)), pw));
            }
            pw = R.mul(pw, uinv);
        }
    }
    if (!f.closed()) {
        // Unknown coefficients are taken to satisfy v(a_d) >= -floor(log_p d), as those of
        // integral series and of log(1+T) do. In the eps-basis the t^j part of u^d has
        // valuation at least floor((d-j)/e) - n j - v_p(j!), e = [K_n : Q_p].
        const int e = R.K.degree();
        int bound = prec;
        int vfact = 0;
        for (int j = 0; j < k; ++j) {
            if (j > 0) {
                vfact += detail::val_int(p, j);
            }
            for (int d = top + 1; d <= top + 1 + e * (prec + 2 * n * k + 8); ++d) {
                int lg = 0;
                for (std::int64_t q = p; q <= d; q *= p) {
                    ++lg;
                }
                bound = std::min(bound, (d - j) / e - n * j - vfact - lg);
            }
        }
        for (auto &part : out) {
            for (auto &c : part) {
                c = c.truncated(bound);
            }
        }
    }
    return out;
}

CycElem gauss_sum(const CyclotomicLevel &K, int j)
{
    const std::int64_t p = K.prime();
    if (detail::mod(j, p - 1) == 0) {
        return K.one();
    }
    const std::int64_t step = K.order() / p; // eps_1 = eps_n^(p^(n-1))
    CycElem g = K.zero();
    for (std::int64_t x = 1; x < p; ++x) {
        const PadicScalar eta = teichmuller(p, x, K.precision()).pow(static_cast<int>(detail::mod(j, p - 1)));
        g = K.add(g, K.scale(eta, K.root_power(x * step)));
    }
    return g;
}

TorsionFiber TorsionFiber::from_matrix(const CyclotomicTLevel &R, int d, std::vector<CycTElem> m,
                                       const PadicScalar &chi_gamma)
{
    if (d < 1 || static_cast<int>(m.size()) != d * d) {
        throw DomainError("torsion fiber: gamma matrix must be d x d");
    }
    TorsionFiber s;
    s.R_ = R;
    s.d_ = d;
    s.m_ = std::move(m);
    s.chi_ = chi_gamma;
    const int blk = R.k * R.K.degree();
    s.gamma_ = PadicMatrix(R.K.prime(), d * blk, d * blk, R.K.precision());
    for (int i = 0; i < d; ++i) {
        for (int b = 0; b < blk; ++b) {
            std::vector<PadicScalar> e(static_cast<std::size_t>(blk), PadicScalar::zero(R.K.prime(), R.K.precision()));
            e[static_cast<std::size_t>(b)] = PadicScalar::one(R.K.prime(), R.K.precision());
            const CycTElem sx = R.sigma(chi_gamma, R.unflatten(e));
            for (int j = 0; j < d; ++j) {
                const std::vector<PadicScalar> col =
                    R.flatten(R.mul(s.m_[static_cast<std::size_t>(j * d + i)], sx));
                for (int r = 0; r < blk; ++r) {
                    s.gamma_(j * blk + r, i * blk + b) = col[static_cast<std::size_t>(r)];
                }
            }
        }
    }
    return s;
}

TorsionFiber TorsionFiber::twisted_quotient(std::int64_t p, int n, int k, const Character &delta,
                                            const GammaGenerator &g, int prec)
{
    const CyclotomicTLevel R{CyclotomicLevel(p, n, prec), k};
    return from_matrix(R, 1, {R.from_base(R.K.scalar(delta.at_chi_gamma(g)))}, g.chi_gamma);
}

std::vector<PadicScalar> TorsionFiber::act_gamma(const std::vector<PadicScalar> &x) const { return gamma_.apply(x); }

TorsionFiber TorsionFiber::next_level() const
{
    const CyclotomicTLevel up{CyclotomicLevel(R_.K.prime(), R_.K.level() + 1, R_.K.precision()), R_.k};
    std::vector<CycTElem> m;
    for (const auto &e : m_) {
        CycTElem x;
        for (const auto &c : e) {
            x.push_back(R_.K.embed_next(c));
        }
        m.push_back(std::move(x));
    }
    return from_matrix(up, d_, std::move(m), chi_);
}

std::vector<PadicScalar> TorsionFiber::connect(const std::vector<PadicScalar> &x) const
{
    if (static_cast<int>(x.size()) != dimension()) {
        throw DomainError("connect: element of the wrong dimension");
    }
    const std::size_t deg = static_cast<std::size_t>(R_.K.degree());
    std::vector<PadicScalar> out;
    for (std::size_t off = 0; off < x.size(); off += deg) {
        const CycElem c(x.begin() + static_cast<std::ptrdiff_t>(off),
                        x.begin() + static_cast<std::ptrdiff_t>(off + deg));
        const CycElem up = R_.K.embed_next(c);
        out.insert(out.end(), up.begin(), up.end());
    }
    return out;
}

namespace
{

PadicMatrix minus_identity(const PadicMatrix &a)
{
    return a - PadicMatrix::identity(a.prime(), a.rows(), a.precision());
}

} // namespace

FiberDims fiber_cohomology(const TorsionFiber &s, int margin)
{
    const PadicMatrix a = minus_identity(s.gamma_matrix());
    const int dim = s.dimension();
    // Kernel from the column rank, cokernel from the row rank of the transpose.
    return FiberDims{dim - rank(a, margin).rank, dim - rank(transpose(a), margin).rank};
}

TorsionReport torsion_cohomology(const TorsionFiber &level1, int n_max, int margin)
{
    if (n_max < 1) {
        throw DomainError("torsion_cohomology: n_max must be at least 1");
    }
    std::vector<TorsionFiber> fibers{level1};
    while (static_cast<int>(fibers.size()) < n_max) {
        fibers.push_back(fibers.back().next_level());
    }
    TorsionReport rep;
    for (std::size_t i = 0; i < fibers.size(); ++i) {
        const TorsionFiber &s = fibers[i];
        LevelReport lr;
        lr.n = s.level();
        lr.dimension = s.dimension();
        lr.dims = fiber_cohomology(s, margin);
        if (i + 1 < fibers.size()) {
            const TorsionFiber &up = fibers[i + 1];
            const auto kb = kernel_basis(minus_identity(s.gamma_matrix()), margin);
            bool ok = true;
            PadicMatrix imgs(s.ring().K.prime(), up.dimension(), static_cast<int>(kb.size()), s.ring().K.precision());
            for (std::size_t c = 0; c < kb.size(); ++c) {
                const auto v = s.connect(kb[c]);
                const auto gv = up.act_gamma(v);
                for (std::size_t r = 0; r < v.size(); ++r) {
                    ok = ok && (gv[r] - v[r]).is_zero();
                    imgs(static_cast<int>(r), static_cast<int>(c)) = v[r];
                }
            }
            ok = ok && (kb.empty() || rank(imgs, margin).rank == static_cast<int>(kb.size()));
            lr.injective_next = ok;
        }
        rep.levels.push_back(lr);
    }
    const LevelReport &top = rep.levels.back();
    rep.h0 = top.dims.dim_fix;
    rep.h1 = top.dims.dim_coinv;
    int n0 = static_cast<int>(rep.levels.size()) - 1;
    while (n0 > 0 && rep.levels[static_cast<std::size_t>(n0 - 1)].dims.dim_fix == top.dims.dim_fix &&
           rep.levels[static_cast<std::size_t>(n0 - 1)].dims.dim_coinv == top.dims.dim_coinv) {
        --n0;
    }
    rep.stabilized_at = rep.levels[static_cast<std::size_t>(n0)].n;
    rep.stabilized = n0 + 1 < static_cast<int>(rep.levels.size());
    return rep;
}

namespace
{

std::vector<TorsionFiber> fiber_chain(const TorsionFiber &first, std::size_t count)
{
    std::vector<TorsionFiber> fibers{first};
    while (fibers.size() < count) {
        fibers.push_back(fibers.back().next_level());
    }
    return fibers;
}

void check_family(const std::vector<TorsionFiber> &fibers, const std::vector<std::vector<PadicScalar>> &y)
{
    for (std::size_t j = 0; j < y.size(); ++j) {
        if (static_cast<int>(y[j].size()) != fibers[j].dimension()) {
            throw DomainError("phi shift: component " + std::to_string(j) + " does not match its fiber");
        }
    }
}

} // namespace

std::vector<std::vector<PadicScalar>> phi_shift_preimage(const TorsionFiber &first,
                                                         const std::vector<std::vector<PadicScalar>> &y)
{
    const auto fibers = fiber_chain(first, y.size());
    check_family(fibers, y);
    std::vector<std::vector<PadicScalar>> x;
    for (std::size_t j = 0; j < y.size(); ++j) {
        std::vector<PadicScalar> v = j == 0 ? std::vector<PadicScalar>(y[0].size(), PadicScalar::zero(first.ring().K.prime(), first.ring().K.precision()))
                                            : fibers[j - 1].connect(x.back());
        for (std::size_t r = 0; r < v.size(); ++r) {
            v[r] -= y[j][r];
        }
        x.push_back(std::move(v));
    }
    return x;
}

std::vector<std::vector<PadicScalar>> phi_shift_apply(const TorsionFiber &first,
                                                      const std::vector<std::vector<PadicScalar>> &x)
{
    const auto fibers = fiber_chain(first, x.size());
    check_family(fibers, x);
    std::vector<std::vector<PadicScalar>> out;
    for (std::size_t j = 0; j < x.size(); ++j) {
        std::vector<PadicScalar> v = j == 0 ? std::vector<PadicScalar>(x[0].size(), PadicScalar::zero(first.ring().K.prime(), first.ring().K.precision()))
                                            : fibers[j - 1].connect(x[j - 1]);
        for (std::size_t r = 0; r < v.size(); ++r) {
            v[r] -= x[j][r];
        }
        out.push_back(std::move(v));
    }
    return out;
}

} // namespace robba
