#include <robba/induction.hpp>
#include <robba/parse.hpp>
#include <robba/verify.hpp>

#include <CLI11.hpp>
#include <json.hpp>

#include <iostream>
#include <sstream>

using json = nlohmann::ordered_json;
using namespace robba;

namespace
{

enum Exit { kOk = 0, kAssertion = 1, kPrecision = 2, kInput = 3 };

const char *kGrammar = R"GR(Expressions
  Scalars, series and characters share one grammar:
    expr   := term (('+' | '-') term)*
    term   := unary (('*' | '/') unary)*
    unary  := '-' unary | power
    power  := atom ('^' ['-'] integer)?
    atom   := integer | 'p' | 'T' | 't' | 'q' | 'one_plus_T_over_T' | '(' expr ')'
  t = log(1+T), q = ((1+T)^p - 1)/T. Infinite expansions are cut at the window top.
  A series can also be a list of deg:coeff pairs, e.g. "-1:1 2:3^1*2".
  Characters are products and integer powers of
    x, |x|, w (= x|x|), ur(<scalar>), char(dp=<scalar>, te=<int>, du=<scalar>), 1
  Cochains: "(a, b)" is degree 1 (gamma part, phi part); a single series takes the
  degree implied by the command. Annotated cochains are "<cochain>@<character>".

Exit codes: 0 success, 1 assertion failure, 2 precision ambiguity, 3 parse/config error.)GR";

struct Globals
{
    std::int64_t p = 3;
    int prec = 12;
    std::string window = "-10,80";
    std::uint64_t seed = 1;
    int count = 100;
    std::optional<std::int64_t> chi;
    int search_limit = kDefaultSearchLimit;
    int margin = kDefaultRankMargin;
    bool json_out = false;
};

VerifyConfig make_config(const Globals &g)
{
    VerifyConfig c;
    c.p = g.p;
    c.prec = g.prec;
    c.seed = g.seed;
    c.count = g.count;
    c.chi_gamma = g.chi;
    c.search_limit = g.search_limit;
    c.margin = g.margin;
    std::string w = g.window;
    for (char &ch : w) {
        if (ch == ':' || ch == '[' || ch == ']') {
            ch = ch == ':' ? ',' : ' ';
        }
    }
    std::istringstream in(w);
    char comma = 0;
    if (!(in >> c.lo >> comma >> c.hi) || comma != ',' || !(in >> std::ws).eof()) {
        throw ParseError("window must be 'lo,hi', got '" + g.window + "'");
    }
    c.validate();
    return c;
}

ParseContext context(const VerifyConfig &c) { return ParseContext{c.p, c.prec, c.hi}; }

json config_json(const VerifyConfig &c)
{
    json j;
    j["prime"] = c.p;
    j["precision"] = c.prec;
    j["window"] = {c.lo, c.hi};
    j["seed"] = c.seed;
    j["count"] = c.count;
    j["chi_gamma"] = c.gamma().chi_gamma.unit();
    j["search_limit"] = c.search_limit;
    j["margin"] = c.margin;
    return j;
}

json scalar_json(const PadicScalar &x)
{
    json j;
    j["text"] = x.to_string();
    j["valuation"] = x.valuation();
    j["precision"] = x.precision();
    // Balanced integer representative, for values that are small integers at this precision.
    if (x.is_integral() && x.precision() <= detail::storage_digits(x.prime())) {
        const std::int64_t m = detail::ppow(x.prime(), x.precision());
        std::int64_t r = x.scaled_residue(0);
        if (r > m / 2) {
            r -= m;
        }
        if (r > -1000000 && r < 1000000) {
            j["integer"] = r;
        }
    }
    return j;
}

json series_json(const TruncatedLaurent &f)
{
    json j;
    j["literal"] = f.to_literal();
    j["lo"] = f.lo();
    j["hi"] = f.hi();
    j["closed"] = f.closed();
    j["precision"] = f.precision();
    return j;
}

json cochain_json(const HerrCochain &c)
{
    json j;
    j["degree"] = c.degree;
    j["x"] = json::array();
    for (const auto &s : c.x) {
        j["x"].push_back(series_json(s));
    }
    if (c.degree == 1) {
        j["y"] = json::array();
        for (const auto &s : c.y) {
            j["y"].push_back(series_json(s));
        }
    }
    return j;
}

void print_text(const json &j, const std::string &prefix, std::ostream &os)
{
    if (j.is_object()) {
        for (const auto &[k, v] : j.items()) {
            print_text(v, prefix.empty() ? k : prefix + "." + k, os);
        }
    } else if (j.is_array() && !j.empty() && (j.front().is_object() || j.front().is_array())) {
        for (std::size_t i = 0; i < j.size(); ++i) {
            print_text(j[i], prefix + "[" + std::to_string(i) + "]", os);
        }
    } else {
        os << prefix << ": " << (j.is_string() ? j.get<std::string>() : j.dump()) << "\n";
    }
}

void emit(const Globals &g, const std::string &command, const VerifyConfig &cfg, const json &result, bool ok)
{
    json rep;
    rep["schema"] = "robba-report/1";
    rep["command"] = command;
    rep["config"] = config_json(cfg);
    rep["ok"] = ok;
    rep["result"] = result;
    if (g.json_out) {
        std::cout << rep.dump(2) << "\n";
    } else {
        print_text(result, "", std::cout);
        std::cout << "ok: " << (ok ? "true" : "false") << "\n";
    }
}

json check_json(const CheckResult &c)
{
    json j;
    j["name"] = c.name;
    j["pass"] = c.pass;
    j["cases"] = c.cases;
    j["worst_valuation"] = c.worst_valuation ? json(*c.worst_valuation) : json(nullptr);
    j["required"] = c.required ? json(*c.required) : json(nullptr);
    j["detail"] = c.detail;
    return j;
}

int cmd_verify(const Globals &g, const std::string &suite, const std::string &command)
{
    const VerifyConfig cfg = make_config(g);
    const auto reports = run_suite(suite, cfg);
    bool ok = true;
    json suites = json::array();
    for (const auto &r : reports) {
        json s;
        s["suite"] = r.suite;
        s["pass"] = r.pass();
        s["checks"] = json::array();
        for (const auto &c : r.checks) {
            s["checks"].push_back(check_json(c));
        }
        suites.push_back(s);
        ok = ok && r.pass();
    }
    if (g.json_out) {
        emit(g, command, cfg, json{{"suite", suite}, {"suites", suites}}, ok);
    } else {
        for (const auto &r : reports) {
            for (const auto &c : r.checks) {
                std::cout << c.name << ": " << (c.pass ? "pass" : "FAIL");
                if (c.worst_valuation) {
                    std::cout << "  (residual valuation " << *c.worst_valuation << ", required " << *c.required << ")";
                }
                if (!c.detail.empty()) {
                    std::cout << "  " << c.detail;
                }
                std::cout << "\n";
            }
        }
        std::cout << "seed: " << cfg.seed << "\nok: " << (ok ? "true" : "false") << "\n";
    }
    return ok ? kOk : kAssertion;
}

int cmd_classify(const Globals &g, const std::string &literal)
{
    const VerifyConfig cfg = make_config(g);
    const Character d = parse_character(literal, context(cfg));
    const Classification c = classify(d, cfg.search_limit);
    const CohomologyDims dims = cohomology_dims(c);
    const Rational mu = FormalModule::of(d).slope();
    json r;
    r["character"] = d.to_string();
    r["class"] = c.to_string();
    r["beyond_limit"] = c.beyond_limit;
    r["h0"] = dims.h0;
    r["h1"] = dims.h1;
    r["h2"] = dims.h2;
    r["euler"] = dims.euler();
    r["degree"] = degree(d);
    r["slope"] = mu.to_string();
    const bool ok = dims.euler() == -1;
    r["euler_check"] = ok ? "pass" : "fail";
    emit(g, "classify", cfg, r, ok);
    return ok ? kOk : kAssertion;
}

int cmd_pair(const Globals &g, const std::string &s1, const std::string &s2)
{
    const VerifyConfig cfg = make_config(g);
    const auto ctx = context(cfg);
    const AnnotatedCochain a = parse_annotated(s1, ctx, 0);
    const AnnotatedCochain b = parse_annotated(s2, ctx, 2 - a.cochain.degree);
    const PadicScalar v = h2_pairing(a.delta, a.cochain, b.delta, b.cochain, cfg.gamma());
    json r;
    r["degrees"] = {a.cochain.degree, b.cochain.degree};
    r["value"] = scalar_json(v);
    emit(g, "pair", cfg, r, true);
    return kOk;
}

int cmd_cup(const Globals &g, const std::string &ch1, const std::string &ch2, const std::string &s1,
            const std::string &s2)
{
    const VerifyConfig cfg = make_config(g);
    const auto ctx = context(cfg);
    const Character d1 = parse_character(ch1, ctx);
    const Character d2 = parse_character(ch2, ctx);
    const HerrCochain c1 = parse_cochain(s1, ctx, 0);
    const HerrCochain c2 = parse_cochain(s2, ctx, c1.degree == 0 ? 0 : 1);
    const GammaGenerator gam = cfg.gamma();
    const auto m = ModulePresentation::rank_one(d1, gam);
    const auto n = ModulePresentation::rank_one(d2, gam);
    const HerrCochain c = cup(m, c1, n, c2);
    json r;
    r["character"] = (d1 * d2).to_string();
    r["cup"] = cochain_json(c);
    const Character w = char_omega(cfg.p, detail::storage_digits(cfg.p));
    if (c.degree == 2 && (d1 * d2).equals_at_precision(w)) {
        r["Res"] = scalar_json(Res(c.x[0]));
    }
    emit(g, "cup", cfg, r, true);
    return kOk;
}

int cmd_h2reduce(const Globals &g, const std::string &ch, const std::string &fs)
{
    const VerifyConfig cfg = make_config(g);
    const auto ctx = context(cfg);
    const Character d = parse_character(ch, ctx);
    const TruncatedLaurent f = parse_series(fs, ctx);
    H2ReduceOptions opt;
    opt.hi = cfg.hi;
    opt.search_limit = cfg.search_limit;
    const H2Reduction red = h2_reduce(d, f, cfg.gamma(), opt);
    json r;
    auto triv = [](const Trivialization &t) {
        json j;
        j["a"] = series_json(t.a);
        j["b"] = series_json(t.b);
        j["residual_valuation"] = t.residual_valuation;
        j["residual_precision"] = t.residual_precision;
        return j;
    };
    if (const auto *t = std::get_if<Trivialization>(&red)) {
        r["kind"] = "Trivialization";
        r["witness"] = triv(*t);
    } else {
        const auto &cc = std::get<CanonicalClass>(red);
        r["kind"] = "CanonicalClass";
        r["c"] = scalar_json(cc.c);
        r["k"] = cc.k;
        r["defect"] = triv(cc.defect);
    }
    emit(g, "h2reduce", cfg, r, true);
    return kOk;
}

Character twist_character(const std::string &twist, const VerifyConfig &cfg)
{
    const int W = detail::storage_digits(cfg.p);
    if (twist == "trivial") {
        return char_x_pow(cfg.p, 0, W);
    }
    if (twist == "omega") {
        return char_omega(cfg.p, W);
    }
    return parse_character(twist, ParseContext{cfg.p, W, cfg.hi});
}

int cmd_torsion(const Globals &g, int k, const std::string &twist, int n_max)
{
    const VerifyConfig cfg = make_config(g);
    if (k < 1 || n_max < 1) {
        throw ParseError("torsion: --k and --nmax must be positive");
    }
    const auto s = TorsionFiber::twisted_quotient(cfg.p, 1, k, twist_character(twist, cfg), cfg.gamma(), cfg.prec);
    const TorsionReport rep = torsion_cohomology(s, n_max, cfg.margin);
    json levels = json::array();
    bool fine = true;
    for (const auto &l : rep.levels) {
        json j;
        j["n"] = l.n;
        j["dimension"] = l.dimension;
        j["dim_fix"] = l.dims.dim_fix;
        j["dim_coinv"] = l.dims.dim_coinv;
        j["injective_next"] = l.injective_next ? json(*l.injective_next) : json(nullptr);
        fine = fine && l.dims.dim_fix == l.dims.dim_coinv && l.injective_next.value_or(true);
        levels.push_back(j);
    }
    json r;
    r["k"] = k;
    r["twist"] = twist;
    r["levels"] = levels;
    r["h0"] = rep.h0;
    r["h1"] = rep.h1;
    r["chi"] = rep.euler();
    r["stabilized"] = rep.stabilized;
    r["stabilized_at"] = rep.stabilized ? json(rep.stabilized_at) : json(nullptr);
    const bool ok = fine && rep.euler() == 0 && rep.stabilized;
    emit(g, "torsion", cfg, r, ok);
    return ok ? kOk : kAssertion;
}

int cmd_shapiro(const Globals &g, int m, int k, const std::string &twist)
{
    const VerifyConfig cfg = make_config(g);
    if (m < 1 || k < 1) {
        throw ParseError("shapiro: --m and --k must be positive");
    }
    const auto s = TorsionFiber::twisted_quotient(cfg.p, 1, k, twist_character(twist, cfg), cfg.gamma(), cfg.prec);
    const ShapiroReport rep = verify_shapiro(s, m, cfg.margin);
    json r;
    r["m"] = m;
    r["fiber"] = {{"k", k}, {"twist", twist}, {"dimension", s.dimension()}};
    r["base"] = {{"h0", rep.base_h0}, {"h1", rep.base_h1}};
    r["induced"] = {{"h0", rep.induced_h0}, {"h1", rep.induced_h1}};
    r["dims_agree"] = rep.dims_agree();
    r["q_tilde_iso"] = rep.q_tilde_iso;
    r["q_map_iso"] = rep.q_map_iso;
    emit(g, "shapiro", cfg, r, rep.ok());
    return rep.ok() ? kOk : kAssertion;
}

void error_report(const Globals &g, const std::string &kind, const std::string &msg)
{
    if (g.json_out) {
        json rep;
        rep["schema"] = "robba-report/1";
        rep["ok"] = false;
        rep["error"] = {{"kind", kind}, {"message", msg}};
        std::cout << rep.dump(2) << "\n";
    }
    std::cerr << "robba: " << kind << ": " << msg << "\n";
}

} // namespace

int main(int argc, char **argv)
{
    CLI::App app{"Cohomology of rank-one and torsion (phi, Gamma)-modules over the Robba ring"};
    app.footer(kGrammar);
    app.require_subcommand(1);

    Globals g;
    app.add_option("--prime", g.p, "odd prime p")->envname("ROBBA_PRIME");
    app.add_option("--precision", g.prec, "p-adic precision N (>= 6)")->envname("ROBBA_PRECISION");
    app.add_option("--window", g.window, "T-adic window 'lo,hi' with lo <= -2 <= 2 <= hi")->envname("ROBBA_WINDOW");
    app.add_option("--seed", g.seed, "seed for random test data")->envname("ROBBA_SEED");
    app.add_option("--count", g.count, "random series per identity")->envname("ROBBA_COUNT");
    app.add_option("--chi", g.chi, "override chi(gamma) (an integer generating Z_p^x)")->envname("ROBBA_CHI");
    app.add_option("--search-limit", g.search_limit, "largest i tried when classifying x^-i and omega x^i")
        ->envname("ROBBA_SEARCH_LIMIT");
    app.add_option("--margin", g.margin, "extra digits required of a pivot before it counts toward a rank")
        ->envname("ROBBA_MARGIN");
    app.add_flag("--json", g.json_out, "emit a JSON report")->envname("ROBBA_JSON");

    std::function<int()> run;

    auto *classify_cmd = app.add_subcommand("classify", "classify a character and print its cohomology dimensions");
    std::string ch_literal;
    classify_cmd->add_option("character", ch_literal, "character expression")->required();
    classify_cmd->callback([&] { run = [&] { return cmd_classify(g, ch_literal); }; });

    auto *verify_cmd = app.add_subcommand("verify", "run an identity suite");
    std::string suite = "all";
    verify_cmd->add_option("suite", suite, "operators | residues | herr | torsion | shapiro | all")
        ->check(CLI::IsMember({"operators", "residues", "herr", "torsion", "shapiro", "all"}));
    verify_cmd->callback([&] { run = [&] { return cmd_verify(g, suite, "verify"); }; });

    auto *ident_cmd = app.add_subcommand("verify-identities", "run every identity suite");
    ident_cmd->callback([&] { run = [&] { return cmd_verify(g, "all", "verify-identities"); }; });

    auto *pair_cmd = app.add_subcommand("pair", "Res of the cup product of two annotated cochains");
    std::string c1, c2;
    pair_cmd->add_option("--c1", c1, "cochain@character")->required();
    pair_cmd->add_option("--c2", c2, "cochain@character")->required();
    pair_cmd->callback([&] { run = [&] { return cmd_pair(g, c1, c2); }; });

    auto *cup_cmd = app.add_subcommand("cup", "cup product of two cochains");
    std::string char1, char2, cc1, cc2;
    cup_cmd->add_option("--char1", char1, "character of the first module")->required();
    cup_cmd->add_option("--char2", char2, "character of the second module")->required();
    cup_cmd->add_option("--c1", cc1, "first cochain")->required();
    cup_cmd->add_option("--c2", cc2, "second cochain")->required();
    cup_cmd->callback([&] { run = [&] { return cmd_cup(g, char1, char2, cc1, cc2); }; });

    auto *h2_cmd = app.add_subcommand("h2reduce", "reduce a degree-2 cochain of R(delta)");
    std::string h2_char, h2_f;
    h2_cmd->add_option("--char", h2_char, "character")->required();
    h2_cmd->add_option("--f", h2_f, "series")->required();
    h2_cmd->callback([&] { run = [&] { return cmd_h2reduce(g, h2_char, h2_f); }; });

    auto *tors_cmd = app.add_subcommand("torsion", "cohomology of R(delta)/t^k along the cyclotomic tower");
    int tk = 1, nmax = 3;
    std::string twist = "trivial";
    tors_cmd->add_option("--k", tk, "power of t");
    tors_cmd->add_option("--twist", twist, "trivial | omega | character expression");
    tors_cmd->add_option("--nmax", nmax, "top level");
    tors_cmd->callback([&] { run = [&] { return cmd_torsion(g, tk, twist, nmax); }; });

    auto *shap_cmd = app.add_subcommand("shapiro", "Shapiro comparison for a torsion fiber");
    int sm = 2, sk = 1;
    std::string stwist = "trivial";
    shap_cmd->add_option("--m", sm, "index [Gamma_K : Gamma_L]");
    shap_cmd->add_option("--k", sk, "fiber R(delta)/t^k at level 1");
    shap_cmd->add_option("--twist", stwist, "trivial | omega | character expression");
    std::string fiber;
    shap_cmd->add_option("--fiber", fiber, "'<k>:<twist>', shorthand for --k and --twist");
    shap_cmd->callback([&] {
        run = [&] {
            if (!fiber.empty()) {
                const auto colon = fiber.find(':');
                try {
                    sk = std::stoi(fiber.substr(0, colon));
                } catch (const std::exception &) {
                    throw ParseError("--fiber must be '<k>:<twist>', got '" + fiber + "'");
                }
                stwist = colon == std::string::npos ? "trivial" : fiber.substr(colon + 1);
            }
            return cmd_shapiro(g, sm, sk, stwist);
        };
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp &e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp &e) {
        return app.exit(e);
    } catch (const CLI::ParseError &e) {
        app.exit(e);
        return kInput;
    }

    try {
        return run();
    } catch (const PrecisionError &e) {
        error_report(g, "precision", e.what());
        return kPrecision;
    } catch (const ParseError &e) {
        error_report(g, "parse", e.what());
        return kInput;
    } catch (const DomainError &e) {
        error_report(g, "config", e.what());
        return kInput;
    } catch (const std::exception &e) {
        error_report(g, "error", e.what());
        return kInput;
    }
}
