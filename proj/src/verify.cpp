#include <robba/verify.hpp>

#include <robba/induction.hpp>
#include <robba/torsion.hpp>

#include <algorithm>
#include <limits>

namespace robba
{

GammaGenerator VerifyConfig::gamma() const
{
    return chi_gamma ? GammaGenerator::from_value(p, *chi_gamma) : GammaGenerator::standard(p);
}

void VerifyConfig::validate() const
{
    if (!detail::is_odd_prime(p)) {
        throw DomainError("prime must be an odd prime, got " + std::to_string(p));
    }
    if (prec < 6) {
        throw DomainError("precision must be at least 6, got " + std::to_string(prec));
    }
    if (prec > detail::storage_digits(p)) {
        throw DomainError("precision " + std::to_string(prec) + " exceeds the storage limit " +
                          std::to_string(detail::storage_digits(p)) + " for p = " + std::to_string(p));
    }
    if (!(lo <= -2 && hi >= 2)) {
        throw DomainError("window must satisfy lo <= -2 <= 2 <= hi");
    }
    if (count < 1) {
        throw DomainError("count must be positive");
    }
    if (search_limit < 0 || margin < 0) {
        throw DomainError("search limit and margin must be non-negative");
    }
    (void)gamma();
}

bool SuiteReport::pass() const
{
    return std::all_of(checks.begin(), checks.end(), [](const CheckResult &c) { return c.pass; });
}

TruncatedLaurent random_series(std::mt19937_64 &rng, std::int64_t p, int prec, int lo, int hi)
{
    std::uniform_int_distribution<std::int64_t> dist(0, detail::ppow(p, prec) - 1);
    std::vector<PadicScalar> c;
    c.reserve(static_cast<std::size_t>(hi - lo + 1));
    for (int k = lo; k <= hi; ++k) {
        c.push_back(PadicScalar::from_int(p, dist(rng), prec));
    }
    return TruncatedLaurent::from_coeffs(p, prec, lo, c, false);
}

namespace
{

// Accumulates cases of one named check.
class Tally
{
public:
    explicit Tally(std::string name) { r_.name = std::move(name); }

    // A series identity: the two sides must agree at their common precision.
    void series(const TruncatedLaurent &a, const TruncatedLaurent &b)
    {
        ++r_.cases;
        const int v = residual_valuation(a, b);
        const int need = std::min(a.precision(), b.precision());
        note(v, need, v >= need);
    }

    // A scalar that must vanish to at least `need` digits.
    void vanishes(const PadicScalar &x, int need)
    {
        ++r_.cases;
        note(x.valuation(), need, x.valuation() >= need);
    }

    void valuation(int v, int need)
    {
        ++r_.cases;
        note(v, need, v >= need);
    }

    void boolean(bool ok, const std::string &why = {})
    {
        ++r_.cases;
        if (!ok) {
            pass_ = false;
            if (r_.detail.empty()) {
                r_.detail = why;
            }
        }
    }

    // Context for a passing check; a failure message takes precedence.
    void info(const std::string &text)
    {
        if (pass_ && r_.detail.empty()) {
            r_.detail = text;
        }
    }

    void fail(const std::string &why)
    {
        pass_ = false;
        if (r_.detail.empty()) {
            r_.detail = why;
        }
    }

    CheckResult done()
    {
        r_.pass = pass_ && r_.cases > 0;
        if (worst_ != std::numeric_limits<int>::max()) {
            r_.worst_valuation = worst_;
            r_.required = need_;
        }
        return r_;
    }

private:
    void note(int v, int need, bool ok)
    {
        // Report the case with the smallest margin over its requirement.
        if (worst_ == std::numeric_limits<int>::max() || v - need < worst_ - need_) {
            worst_ = v;
            need_ = need;
        }
        if (!ok) {
            pass_ = false;
            if (r_.detail.empty()) {
                r_.detail = "case " + std::to_string(r_.cases) + ": residual valuation " + std::to_string(v) + " < " +
                            std::to_string(need);
            }
        }
    }

    CheckResult r_;
    bool pass_ = true;
    int worst_ = std::numeric_limits<int>::max();
    int need_ = 0;
};

// Runs body(tally) and turns a thrown library error into a failed check.
template <class F> CheckResult run_check(const std::string &name, F &&body)
{
    Tally t(name);
    try {
        body(t);
    } catch (const std::exception &e) {
        t.fail(std::string("error: ") + e.what());
    }
    return t.done();
}

TruncatedLaurent zero_like(const TruncatedLaurent &f)
{
    return TruncatedLaurent::zero(f.prime(), f.precision(), f.lo(), f.hi(), f.closed());
}

Character trivial_character(std::int64_t p, int prec)
{
    return char_x_pow(p, 0, prec);
}

std::vector<PadicScalar> random_vector(std::mt19937_64 &rng, std::int64_t p, int n, int prec)
{
    std::uniform_int_distribution<std::int64_t> dist(0, detail::ppow(p, prec) - 1);
    std::vector<PadicScalar> v;
    for (int i = 0; i < n; ++i) {
        v.push_back(PadicScalar::from_int(p, dist(rng), prec));
    }
    return v;
}

bool vectors_equal(const std::vector<PadicScalar> &a, const std::vector<PadicScalar> &b)
{
    if (a.size() != b.size()) {
        return false;
    }
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (!a[i].equals_at_precision(b[i])) {
            return false;
        }
    }
    return true;
}

PadicMatrix power(const PadicMatrix &a, int e)
{
    PadicMatrix r = PadicMatrix::identity(a.prime(), a.rows(), a.precision());
    for (int i = 0; i < e; ++i) {
        r = r * a;
    }
    return r;
}

std::string twist_name(int tw) { return tw == 0 ? "trivial" : "omega"; }

} // namespace

SuiteReport verify_operators(const VerifyConfig &cfg)
{
    const std::int64_t p = cfg.p;
    const GammaGenerator g = cfg.gamma();
    const PadicScalar pp = PadicScalar::from_int(p, p, detail::storage_digits(p));
    std::mt19937_64 rng(cfg.seed);
    std::vector<TruncatedLaurent> fs;
    for (int i = 0; i < cfg.count; ++i) {
        fs.push_back(random_series(rng, p, cfg.prec, cfg.lo, cfg.hi));
    }

    SuiteReport rep{"operators", {}};
    rep.checks.push_back(run_check("∂φ=pφ∂", [&](Tally &t) {
        for (const auto &f : fs) {
            t.series(partial(phi(f)), pp * phi(partial(f)));
        }
    }));
    rep.checks.push_back(run_check("∂γ=χ(γ)γ∂", [&](Tally &t) {
        for (const auto &f : fs) {
            t.series(partial(gamma_act(f, g)), g.chi_gamma * gamma_act(partial(f), g));
        }
    }));
    rep.checks.push_back(run_check("ψφ=id", [&](Tally &t) {
        for (const auto &f : fs) {
            t.series(psi(phi(f)), f);
        }
    }));
    rep.checks.push_back(run_check("ψ((1+T)^iφ(f))=0", [&](Tally &t) {
        const PadicScalar one = PadicScalar::one(p, detail::storage_digits(p));
        for (std::size_t j = 0; j < fs.size() && j < 20; ++j) {
            TruncatedLaurent u = TruncatedLaurent::monomial(p, 0, one);
            const TruncatedLaurent onept = TruncatedLaurent::from_coeffs(p, one.precision(), 0, {one, one}, true);
            const TruncatedLaurent pf = phi(fs[j]);
            for (std::int64_t i = 1; i < p; ++i) {
                u = u * onept;
                const TruncatedLaurent r = psi(u * pf);
                t.series(r, zero_like(r));
            }
        }
    }));
    rep.checks.push_back(run_check("φγ=γφ", [&](Tally &t) {
        for (const auto &f : fs) {
            t.series(phi(gamma_act(f, g)), gamma_act(phi(f), g));
        }
    }));
    return rep;
}

SuiteReport verify_residues(const VerifyConfig &cfg)
{
    const std::int64_t p = cfg.p;
    const GammaGenerator g = cfg.gamma();
    const int need = cfg.prec - 2;
    std::mt19937_64 rng(cfg.seed + 1);
    std::vector<TruncatedLaurent> fs;
    for (int i = 0; i < cfg.count; ++i) {
        fs.push_back(random_series(rng, p, cfg.prec, cfg.lo, cfg.hi));
    }

    SuiteReport rep{"residues", {}};
    rep.checks.push_back(run_check("Res(φf)=Res(f)", [&](Tally &t) {
        for (const auto &f : fs) {
            t.vanishes(Res(phi(f)) - Res(f), need);
        }
    }));
    rep.checks.push_back(run_check("Res(γf)=χ(γ)⁻¹Res(f)", [&](Tally &t) {
        for (const auto &f : fs) {
            t.vanishes(Res(gamma_act(f, g)) - Res(f) / g.chi_gamma, need);
        }
    }));
    rep.checks.push_back(run_check("Res(∂f)=0", [&](Tally &t) {
        for (const auto &f : fs) {
            t.vanishes(Res(partial(f)), need);
        }
    }));
    rep.checks.push_back(run_check("Res(1/T)=1", [&](Tally &t) {
        const auto inv_t = TruncatedLaurent::monomial(p, -1, PadicScalar::one(p, cfg.prec));
        t.vanishes(Res(inv_t) - PadicScalar::one(p, cfg.prec), cfg.prec);
    }));
    return rep;
}

SuiteReport verify_herr(const VerifyConfig &cfg)
{
    const std::int64_t p = cfg.p;
    const int N = cfg.prec;
    const GammaGenerator g = cfg.gamma();
    const int W = detail::storage_digits(p);
    const Character omega = char_omega(p, W);
    const Character x_inv = char_x_pow(p, -1, W);
    const Character omega_x = char_omega_x_pow(p, 1, W);
    const int per = std::max(5, cfg.count / 10);
    // phi of a tail starting at lo reaches down to about p*lo - (p-1)*W, so t must be known that far
    // up for the residue of a product to be determined.
    const int t_hi = cfg.hi + static_cast<int>(p) * (-cfg.lo) + static_cast<int>(p - 1) * W;
    std::mt19937_64 rng(cfg.seed + 2);
    auto rnd = [&] { return random_series(rng, p, N, cfg.lo, cfg.hi); };

    SuiteReport rep{"herr", {}};
    rep.checks.push_back(run_check("d2∘d1=0", [&](Tally &t) {
        for (const Character &d : {char_abs_x(p, W), x_inv, omega, char_x(p, W)}) {
            const auto m = ModulePresentation::rank_one(d, g);
            for (int i = 0; i < per; ++i) {
                const auto r = d2(m, d1(m, HerrCochain::deg0(rnd()))).x[0];
                t.series(r, zero_like(r));
            }
        }
    }));
    rep.checks.push_back(run_check("Res∘d2=0 over ω", [&](Tally &t) {
        const auto m = ModulePresentation::rank_one(omega, g);
        for (int i = 0; i < 50; ++i) {
            const auto a = rnd();
            const auto b = rnd();
            t.vanishes(Res(d2(m, HerrCochain::deg1(a, b)).x[0]), N - 2);
        }
    }));
    rep.checks.push_back(run_check("(φ,γ)→(ψ,γ) chain map", [&](Tally &t) {
        for (const Character &d : {omega, char_abs_x(p, W)}) {
            const auto m = ModulePresentation::rank_one(d, g);
            for (int i = 0; i < per; ++i) {
                const auto z = HerrCochain::deg0(rnd());
                const auto lhs0 = psi_complex_map(m, d1(m, z));
                const auto rhs0 = d1_psi(m, psi_complex_map(m, z));
                t.series(lhs0.x[0], rhs0.x[0]);
                t.series(lhs0.y[0], rhs0.y[0]);
                const auto c = HerrCochain::deg1(rnd(), rnd());
                t.series(psi_complex_map(m, d2(m, c)).x[0], d2_psi(m, psi_complex_map(m, c)).x[0]);
            }
        }
    }));
    rep.checks.push_back(run_check("h2_reduce(ω,1/T)=CanonicalClass(1,0)", [&](Tally &t) {
        H2ReduceOptions opt;
        opt.hi = cfg.hi;
        opt.search_limit = cfg.search_limit;
        const auto r = h2_reduce(omega, TruncatedLaurent::monomial(p, -1, PadicScalar::one(p, N)), g, opt);
        const auto *cc = std::get_if<CanonicalClass>(&r);
        t.boolean(cc != nullptr, "returned a trivialization");
        if (cc != nullptr) {
            t.boolean(cc->k == 0, "k = " + std::to_string(cc->k));
            t.vanishes(cc->c - PadicScalar::one(p, N), std::min(N, cc->c.precision()));
        }
    }));
    rep.checks.push_back(run_check("h2_reduce(|x|,f) trivializes", [&](Tally &t) {
        H2ReduceOptions opt;
        opt.hi = cfg.hi;
        opt.search_limit = cfg.search_limit;
        for (int i = 0; i < 10; ++i) {
            const auto r = h2_reduce(char_abs_x(p, W), rnd(), g, opt);
            const auto *tr = std::get_if<Trivialization>(&r);
            t.boolean(tr != nullptr, "returned a canonical class");
            if (tr != nullptr) {
                t.valuation(tr->residual_valuation, N - 3);
            }
        }
    }));
    rep.checks.push_back(run_check("H⁰(x^-i) generated by t^i", [&](Tally &t) {
        for (int i = 0; i <= 3; ++i) {
            const RankOneModule m{char_x_pow(p, -i, W), g};
            const auto ti = h0_generator(p, i, cfg.hi).with_precision(N);
            t.series(m.act_phi(ti), ti);
            t.series(m.act_gamma(ti), ti);
        }
    }));
    rep.checks.push_back(run_check("⟨t,(1+T)/T²⟩=1", [&](Tally &t) {
        const auto tt = t_series(p, cfg.hi);
        const auto f = one_plus_T_over_T(p) * TruncatedLaurent::monomial(p, -1, PadicScalar::one(p, W));
        const auto v = h2_pairing(x_inv, HerrCochain::deg0(tt), omega_x, HerrCochain::deg2(f), g);
        t.vanishes(v - PadicScalar::one(p, W), std::min(N, v.precision()));
        const auto mx = ModulePresentation::rank_one(x_inv, g);
        const auto mw = ModulePresentation::rank_one(omega_x, g);
        t.series(cup(mx, HerrCochain::deg0(tt), mw, HerrCochain::deg2(f)).x[0], tt * f);
    }));
    rep.checks.push_back(run_check("H¹×H¹ pairing nonzero", [&](Tally &t) {
        // Cocycles (t, 0) and (0, t) of R(x^-1) against the explicit parts of the dual classes in
        // R(omega x); only one term of each cup survives.
        const auto tt = t_series(p, t_hi);
        const auto f = one_plus_T_over_T(p) * TruncatedLaurent::monomial(p, -1, PadicScalar::one(p, W));
        const auto v1 = h2_pairing(x_inv, HerrCochain::deg1(tt, zero_like(tt)), omega_x,
                                   HerrCochain::deg1(zero_like(f), -f), g);
        const auto v2 = h2_pairing(x_inv, HerrCochain::deg1(zero_like(tt), tt), omega_x,
                                   HerrCochain::deg1(-f, zero_like(f)), g);
        for (const auto &v : {v1, v2}) {
            t.boolean(v.valuation() < std::min(N, v.precision()), "pairing value " + v.to_string() + " vanishes");
        }
        t.info("values " + v1.to_string() + ", " + v2.to_string());
    }));
    rep.checks.push_back(run_check("coboundaries pair to zero", [&](Tally &t) {
        // Laurent polynomials, so every product below is known in degree -1.
        auto poly = [&] {
            return TruncatedLaurent::from_coeffs(p, N, -2, random_vector(rng, p, 9, N), true);
        };
        const auto mx = ModulePresentation::rank_one(x_inv, g);
        const auto mw = ModulePresentation::rank_one(omega_x, g);
        // t known far enough up to meet the lowest degree of its partner.
        auto t_for = [&](const HerrCochain &c) {
            int lo = cfg.lo;
            for (const auto &s : c.x) {
                lo = std::min({lo, s.lo(), mw.act_gamma({s})[0].lo()});
            }
            for (const auto &s : c.y) {
                lo = std::min(lo, mw.act_phi({s})[0].lo());
            }
            return t_series(p, std::max(cfg.hi, 2 - lo));
        };
        for (int i = 0; i < per; ++i) {
            const auto w = d1(mw, HerrCochain::deg0(poly()));
            const auto tt = t_for(w);
            t.vanishes(h2_pairing(x_inv, HerrCochain::deg1(tt, zero_like(tt)), omega_x, w, g), N - 4);
            t.vanishes(h2_pairing(omega_x, w, x_inv, HerrCochain::deg1(zero_like(tt), tt), g), N - 4);
            const auto z = d1(mx, HerrCochain::deg0(poly()));
            t.vanishes(h2_pairing(x_inv, z, omega_x, d1(mw, HerrCochain::deg0(poly())), g), N - 4);
            const auto b = d2(mw, HerrCochain::deg1(poly(), poly()));
            t.vanishes(h2_pairing(x_inv, HerrCochain::deg0(t_for(HerrCochain::deg0(b.x[0]))), omega_x, b, g), N - 4);
        }
    }));
    rep.checks.push_back(run_check("∂-transfer pairs with t^k", [&](Tally &t) {
        TruncatedLaurent f = TruncatedLaurent::monomial(p, -1, PadicScalar::one(p, W));
        for (int k = 0; k <= 2; ++k) {
            if (k > 0) {
                f = partial_transfer(char_omega_x_pow(p, k, W), f);
                t.series(f, h2_generator(p, k));
            }
            const auto v = Res(h0_generator(p, k, cfg.hi) * f);
            t.boolean(!v.is_zero() && v.valuation() < N - 2, "Res(t^k ∂^k(1/T)) = " + v.to_string());
        }
    }));
    return rep;
}

SuiteReport verify_torsion(const VerifyConfig &cfg)
{
    const std::int64_t p = cfg.p;
    const int N = cfg.prec;
    const GammaGenerator g = cfg.gamma();
    const int W = detail::storage_digits(p);
    constexpr int n_max = 3;
    std::mt19937_64 rng(cfg.seed + 3);

    SuiteReport rep{"torsion", {}};
    for (int k : {1, 2}) {
        for (int tw : {0, 1}) {
            const Character d = tw == 0 ? trivial_character(p, W) : char_omega(p, W);
            const std::string tag = " (R/t^" + std::to_string(k) + ", " + twist_name(tw) + ")";
            TorsionReport r;
            std::string err;
            try {
                r = torsion_cohomology(TorsionFiber::twisted_quotient(p, 1, k, d, g, N), n_max, cfg.margin);
            } catch (const std::exception &e) {
                err = e.what();
            }
            rep.checks.push_back(run_check("dim_fix=dim_coinv" + tag, [&](Tally &t) {
                if (!err.empty()) {
                    t.fail("error: " + err);
                }
                for (const auto &l : r.levels) {
                    t.boolean(l.dims.dim_fix == l.dims.dim_coinv,
                              "level " + std::to_string(l.n) + ": " + std::to_string(l.dims.dim_fix) +
                                  " vs " + std::to_string(l.dims.dim_coinv));
                }
            }));
            rep.checks.push_back(run_check("χ=0" + tag, [&](Tally &t) {
                t.boolean(err.empty() && r.euler() == 0, "euler characteristic " + std::to_string(r.euler()));
            }));
            rep.checks.push_back(run_check("stabilization" + tag, [&](Tally &t) {
                t.boolean(err.empty() && r.stabilized, "not stabilized by level " + std::to_string(n_max));
                for (const auto &l : r.levels) {
                    if (l.injective_next) {
                        t.boolean(*l.injective_next, "level " + std::to_string(l.n) + " not injective");
                    }
                }
            }));
        }
    }

    rep.checks.push_back(run_check("phi_shift_preimage", [&](Tally &t) {
        const auto first = TorsionFiber::twisted_quotient(p, 1, 1, trivial_character(p, W), g, N);
        std::vector<int> dims;
        TorsionFiber s = first;
        for (int j = 0; j < n_max; ++j) {
            dims.push_back(s.dimension());
            s = s.next_level();
        }
        for (int i = 0; i < 20; ++i) {
            std::vector<std::vector<PadicScalar>> y;
            for (int dim : dims) {
                y.push_back(random_vector(rng, p, dim, N));
            }
            const auto back = phi_shift_apply(first, phi_shift_preimage(first, y));
            bool ok = back.size() == y.size();
            for (std::size_t j = 0; ok && j < y.size(); ++j) {
                ok = vectors_equal(back[j], y[j]);
            }
            t.boolean(ok, "family " + std::to_string(i) + " does not re-substitute");
        }
    }));

    rep.checks.push_back(run_check("Gauss-sum eigenrelation", [&](Tally &t) {
        const CyclotomicLevel K(p, 1, N);
        for (int k = 1; k <= 3; ++k) {
            const CyclotomicTLevel R{K, k};
            std::vector<std::vector<PadicScalar>> cols;
            for (int j = 0; j < p - 1; ++j) {
                const CycElem G = gauss_sum(K, j);
                for (int i = 0; i < k; ++i) {
                    CycTElem v = R.zero();
                    v[static_cast<std::size_t>(i)] = G;
                    cols.push_back(R.flatten(v));
                    for (std::int64_t a : {g.chi_gamma.unit(), std::int64_t{p - 1}, std::int64_t{1 + p}}) {
                        const PadicScalar ga = PadicScalar::from_int(p, a, W);
                        // eta^-1(a) chi(a)^i with eta = omega_T^j
                        const PadicScalar ev =
                            teichmuller(p, a, W).pow(-j) * ga.pow(i);
                        CycTElem want = R.zero();
                        want[static_cast<std::size_t>(i)] = K.scale(ev, G);
                        t.boolean(vectors_equal(R.flatten(R.sigma(ga, v)), R.flatten(want)),
                                  "eta = omega^" + std::to_string(j) + ", i = " + std::to_string(i));
                    }
                }
            }
            PadicMatrix m(p, static_cast<int>(cols.size()), static_cast<int>(cols.size()), N);
            for (std::size_t c = 0; c < cols.size(); ++c) {
                for (std::size_t r = 0; r < cols[c].size(); ++r) {
                    m(static_cast<int>(r), static_cast<int>(c)) = cols[c][r];
                }
            }
            t.boolean(rank(m, cfg.margin).rank == static_cast<int>(cols.size()),
                      "eigenvectors do not span at k = " + std::to_string(k));
        }
    }));

    rep.checks.push_back(run_check("localize_at_n kills φ^(n-1)(q)^k", [&](Tally &t) {
        TruncatedLaurent q = q_series(p);
        for (int n = 1; n <= 2; ++n) {
            for (int k = 1; k <= 2; ++k) {
                const auto img = localize_at_n(q.pow(k), n, k);
                const CyclotomicTLevel R{CyclotomicLevel(p, n, N), k};
                t.boolean(R.is_zero(img), "n = " + std::to_string(n) + ", k = " + std::to_string(k));
            }
            // Simple zero: the image mod t^2 of q itself is not zero.
            const CyclotomicTLevel R2{CyclotomicLevel(p, n, N), 2};
            t.boolean(!R2.is_zero(localize_at_n(q, n, 2)), "zero of order > 1 at n = " + std::to_string(n));
            q = phi(q);
        }
    }));
    return rep;
}

SuiteReport verify_shapiro_suite(const VerifyConfig &cfg)
{
    const std::int64_t p = cfg.p;
    const int N = cfg.prec;
    const GammaGenerator g = cfg.gamma();
    const int W = detail::storage_digits(p);
    std::mt19937_64 rng(cfg.seed + 4);

    SuiteReport rep{"shapiro", {}};
    const auto base = TorsionFiber::twisted_quotient(p, 1, 1, char_omega(p, W), g, N);
    rep.checks.push_back(run_check("reconstruction", [&](Tally &t) {
        for (int m : {2, 3}) {
            const InducedModule ind(power(base.gamma_matrix(), m), m);
            for (int i = 0; i < 20; ++i) {
                InducedModule::Element f;
                for (int s = 0; s < m; ++s) {
                    f.push_back(random_vector(rng, p, ind.base_dimension(), N));
                }
                t.boolean(vectors_equal(ind.flatten(ind.reconstruct(f)), ind.flatten(f)),
                          "m = " + std::to_string(m) + ", tuple " + std::to_string(i));
            }
        }
    }));

    struct Case
    {
        std::string name;
        PadicMatrix gamma_l;
        bool is_fiber;
        TorsionFiber fiber;
    };
    std::vector<Case> cases;
    for (int k : {1, 2}) {
        for (int tw : {0, 1}) {
            const Character d = tw == 0 ? trivial_character(p, W) : char_omega(p, W);
            cases.push_back({"R/t^" + std::to_string(k) + " " + twist_name(tw), {}, true,
                             TorsionFiber::twisted_quotient(p, 1, k, d, g, N)});
        }
    }
    {
        PadicMatrix sign(p, 1, 1, N);
        sign(0, 0) = PadicScalar::from_int(p, -1, N);
        cases.push_back({"sign character", sign, false, {}});
    }
    for (const auto &c : cases) {
        rep.checks.push_back(run_check("Shapiro dims (" + c.name + ")", [&](Tally &t) {
            for (int m : {1, 2, 3}) {
                const ShapiroReport r =
                    c.is_fiber ? verify_shapiro(c.fiber, m, cfg.margin) : verify_shapiro(c.gamma_l, m, cfg.margin);
                t.boolean(r.dims_agree(), "m = " + std::to_string(m) + ": dims differ");
                t.boolean(r.q_tilde_iso, "m = " + std::to_string(m) + ": Q~ not an isomorphism on H^0");
                t.boolean(r.q_map_iso, "m = " + std::to_string(m) + ": Q not an isomorphism on H^1");
            }
        }));
    }
    return rep;
}

std::vector<SuiteReport> run_suite(const std::string &name, const VerifyConfig &cfg)
{
    cfg.validate();
    std::vector<SuiteReport> out;
    const bool all = name == "all";
    if (all || name == "operators") {
        out.push_back(verify_operators(cfg));
    }
    if (all || name == "residues") {
        out.push_back(verify_residues(cfg));
    }
    if (all || name == "herr") {
        out.push_back(verify_herr(cfg));
    }
    if (all || name == "torsion") {
        out.push_back(verify_torsion(cfg));
    }
    if (all || name == "shapiro") {
        out.push_back(verify_shapiro_suite(cfg));
    }
    if (out.empty()) {
        throw DomainError("unknown suite '" + name + "'");
    }
    return out;
}

} // namespace robba
