#include <robba/parse.hpp>

#include <cctype>
#include <string>

namespace robba
{

namespace
{

// Intermediate value: constants stay scalars until they meet a series.
struct Value
{
    bool scalar = true;
    PadicScalar s;
    TruncatedLaurent f;
};

class Parser
{
public:
    Parser(std::string_view text, const ParseContext &ctx) : text_(text), ctx_(ctx), w_(exact_precision(ctx.p)) {}

    Value expr()
    {
        Value v = term();
        for (;;) {
            skip();
            if (eat('+')) {
                v = add(v, term(), false);
            } else if (eat('-')) {
                v = add(v, term(), true);
            } else {
                return v;
            }
        }
    }

    Character character()
    {
        Character c = char_power();
        for (;;) {
            skip();
            if (!eat('*')) {
                return c;
            }
            c = c * char_power();
        }
    }

    void finish()
    {
        skip();
        if (pos_ != text_.size()) {
            fail("unexpected '" + std::string(1, text_[pos_]) + "'");
        }
    }

    [[noreturn]] void fail(const std::string &msg) const
    {
        throw ParseError(msg + " at position " + std::to_string(pos_) + " in \"" + std::string(text_) + "\"");
    }

private:
    void skip()
    {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) {
            ++pos_;
        }
    }

    bool eat(char c)
    {
        skip();
        if (pos_ < text_.size() && text_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    void expect(char c)
    {
        if (!eat(c)) {
            fail(std::string("expected '") + c + "'");
        }
    }

    bool peek_alpha()
    {
        skip();
        return pos_ < text_.size() && (std::isalpha(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_');
    }

    std::string ident()
    {
        skip();
        const std::size_t b = pos_;
        while (pos_ < text_.size() &&
               (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_')) {
            ++pos_;
        }
        return std::string(text_.substr(b, pos_ - b));
    }

    std::int64_t integer()
    {
        skip();
        const std::size_t b = pos_;
        while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
            ++pos_;
        }
        if (b == pos_) {
            fail("expected an integer");
        }
        if (pos_ - b > 17) {
            fail("integer too large");
        }
        return std::stoll(std::string(text_.substr(b, pos_ - b)));
    }

    int signed_integer()
    {
        const bool neg = eat('-');
        const std::int64_t v = integer();
        return static_cast<int>(neg ? -v : v);
    }

    TruncatedLaurent as_series(const Value &v) const
    {
        return v.scalar ? TruncatedLaurent::monomial(ctx_.p, 0, v.s) : v.f;
    }

    Value add(const Value &a, const Value &b, bool minus) const
    {
        if (a.scalar && b.scalar) {
            return Value{true, minus ? a.s - b.s : a.s + b.s, {}};
        }
        return Value{false, {}, minus ? as_series(a) - as_series(b) : as_series(a) + as_series(b)};
    }

    Value mul(const Value &a, const Value &b) const
    {
        if (a.scalar && b.scalar) {
            return Value{true, a.s * b.s, {}};
        }
        if (a.scalar) {
            return Value{false, {}, a.s * b.f};
        }
        if (b.scalar) {
            return Value{false, {}, b.s * a.f};
        }
        return Value{false, {}, a.f * b.f};
    }

    Value invert(const Value &a)
    {
        if (a.scalar) {
            if (a.s.is_zero()) {
                fail("division by zero");
            }
            return Value{true, PadicScalar::one(ctx_.p, w_) / a.s, {}};
        }
        if (a.f.is_zero()) {
            fail("division by the zero series");
        }
        return Value{false, {}, a.f.inverse(ctx_.hi)};
    }

    Value term()
    {
        Value v = unary();
        for (;;) {
            skip();
            if (eat('*')) {
                v = mul(v, unary());
            } else if (pos_ < text_.size() && text_[pos_] == '/') {
                ++pos_;
                v = mul(v, invert(unary()));
            } else {
                return v;
            }
        }
    }

    Value unary()
    {
        if (eat('-')) {
            const Value v = unary();
            return v.scalar ? Value{true, -v.s, {}} : Value{false, {}, -v.f};
        }
        return power();
    }

    Value power()
    {
        Value base = atom();
        if (!eat('^')) {
            return base;
        }
        const int e = signed_integer();
        if (e < 0) {
            base = invert(base);
        }
        const int k = e < 0 ? -e : e;
        if (base.scalar) {
            return Value{true, base.s.pow(k), {}};
        }
        return Value{false, {}, base.f.pow(k)};
    }

    Value atom()
    {
        skip();
        if (pos_ >= text_.size()) {
            fail("unexpected end of input");
        }
        if (eat('(')) {
            Value v = expr();
            expect(')');
            return v;
        }
        if (std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
            return Value{true, PadicScalar::from_int(ctx_.p, integer(), w_), {}};
        }
        if (peek_alpha()) {
            const std::size_t at = pos_;
            const std::string id = ident();
            const PadicScalar one = PadicScalar::one(ctx_.p, w_);
            if (id == "T") {
                return Value{false, {}, TruncatedLaurent::monomial(ctx_.p, 1, one)};
            }
            if (id == "t") {
                return Value{false, {}, t_series(ctx_.p, ctx_.hi)};
            }
            if (id == "q") {
                return Value{false, {}, q_series(ctx_.p)};
            }
            if (id == "one_plus_T_over_T") {
                return Value{false, {}, one_plus_T_over_T(ctx_.p)};
            }
            if (id == "p") {
                return Value{true, PadicScalar::from_int(ctx_.p, ctx_.p, w_), {}};
            }
            pos_ = at;
            fail("unknown name '" + id + "'");
        }
        fail("unexpected '" + std::string(1, text_[pos_]) + "'");
    }

    PadicScalar scalar_arg()
    {
        const Value v = expr();
        if (!v.scalar) {
            fail("expected a scalar");
        }
        return v.s.truncated(std::min(v.s.precision(), ctx_.prec));
    }

    Character char_power()
    {
        Character c = char_atom();
        if (eat('^')) {
            c = c.pow(signed_integer());
        }
        return c;
    }

    Character char_atom()
    {
        const std::int64_t p = ctx_.p;
        const int prec = ctx_.prec;
        if (eat('(')) {
            Character c = character();
            expect(')');
            return c;
        }
        if (eat('|')) {
            if (ident() != "x") {
                fail("expected '|x|'");
            }
            expect('|');
            return char_abs_x(p, prec);
        }
        skip();
        if (pos_ < text_.size() && text_[pos_] == '1') {
            ++pos_;
            return Character{PadicScalar::one(p, prec), 0, PadicScalar::one(p, prec)};
        }
        const std::size_t at = pos_;
        const std::string id = ident();
        if (id == "x") {
            return char_x(p, prec);
        }
        if (id == "w") {
            return char_omega(p, prec);
        }
        if (id == "ur") {
            expect('(');
            const PadicScalar c = scalar_arg();
            expect(')');
            if (c.is_zero()) {
                fail("ur() needs a nonzero value");
            }
            return char_unramified(c);
        }
        if (id == "char") {
            expect('(');
            key("dp");
            const PadicScalar dp = scalar_arg();
            expect(',');
            key("te");
            const int te = signed_integer();
            expect(',');
            key("du");
            const PadicScalar du = scalar_arg();
            expect(')');
            if (dp.is_zero()) {
                fail("char() needs dp nonzero");
            }
            return Character{dp, static_cast<int>(detail::mod(te, p - 1)), du};
        }
        pos_ = at;
        fail(id.empty() ? "expected a character" : "unknown character '" + id + "'");
    }

    void key(const char *name)
    {
        if (ident() != name) {
            fail(std::string("expected '") + name + "='");
        }
        expect('=');
    }

    std::string_view text_;
    ParseContext ctx_;
    int w_;
    std::size_t pos_ = 0;
};

void check_context(const ParseContext &ctx)
{
    if (!detail::is_odd_prime(ctx.p)) {
        throw ParseError("prime must be an odd prime, got " + std::to_string(ctx.p));
    }
}

TruncatedLaurent parse_pairs(std::string_view text, const ParseContext &ctx)
{
    std::vector<std::pair<int, PadicScalar>> terms;
    std::size_t i = 0;
    while (i < text.size()) {
        while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) {
            ++i;
        }
        if (i >= text.size()) {
            break;
        }
        std::size_t j = i;
        while (j < text.size() && !std::isspace(static_cast<unsigned char>(text[j]))) {
            ++j;
        }
        const std::string_view item = text.substr(i, j - i);
        const auto colon = item.find(':');
        if (colon == std::string_view::npos) {
            throw ParseError("expected deg:coeff, got \"" + std::string(item) + "\"");
        }
        int deg = 0;
        try {
            std::size_t used = 0;
            deg = std::stoi(std::string(item.substr(0, colon)), &used);
            if (used != colon) {
                throw ParseError("bad degree");
            }
        } catch (const std::logic_error &) {
            throw ParseError("bad degree in \"" + std::string(item) + "\"");
        }
        terms.emplace_back(deg, parse_scalar_expr(item.substr(colon + 1), ctx));
        i = j;
    }
    if (terms.empty()) {
        throw ParseError("empty series literal");
    }
    int lo = terms.front().first, hi = lo;
    for (const auto &t : terms) {
        lo = std::min(lo, t.first);
        hi = std::max(hi, t.first);
    }
    std::vector<PadicScalar> c(static_cast<std::size_t>(hi - lo + 1), PadicScalar::zero(ctx.p, ctx.prec));
    for (const auto &t : terms) {
        c[static_cast<std::size_t>(t.first - lo)] += t.second;
    }
    return TruncatedLaurent::from_coeffs(ctx.p, ctx.prec, lo, c, true);
}

// Position of the top-level separator `sep` (outside parentheses), or npos.
std::size_t top_level(std::string_view s, char sep)
{
    int depth = 0;
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (s[i] == '(') {
            ++depth;
        } else if (s[i] == ')') {
            --depth;
        } else if (s[i] == sep && depth == 0) {
            return i;
        }
    }
    return std::string_view::npos;
}

// True when the first '(' of s is closed by its last character.
bool encloses(std::string_view s)
{
    if (s.size() < 2 || s.front() != '(' || s.back() != ')') {
        return false;
    }
    int depth = 0;
    for (std::size_t i = 0; i < s.size(); ++i) {
        depth += s[i] == '(' ? 1 : s[i] == ')' ? -1 : 0;
        if (depth == 0 && i + 1 < s.size()) {
            return false;
        }
    }
    return true;
}

std::string_view trim(std::string_view s)
{
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) {
        s.remove_prefix(1);
    }
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) {
        s.remove_suffix(1);
    }
    return s;
}

} // namespace

PadicScalar parse_scalar_expr(std::string_view text, const ParseContext &ctx)
{
    check_context(ctx);
    Parser ps(text, ctx);
    const Value v = ps.expr();
    ps.finish();
    if (!v.scalar) {
        ps.fail("expected a scalar");
    }
    return v.s.truncated(std::min(v.s.precision(), ctx.prec));
}

TruncatedLaurent parse_series(std::string_view text, const ParseContext &ctx)
{
    check_context(ctx);
    text = trim(text);
    if (text.find(':') != std::string_view::npos) {
        return parse_pairs(text, ctx);
    }
    Parser ps(text, ctx);
    const Value v = ps.expr();
    ps.finish();
    const TruncatedLaurent f = v.scalar ? TruncatedLaurent::monomial(ctx.p, 0, v.s) : v.f;
    return f.with_precision(std::min(ctx.prec, f.precision()));
}

Character parse_character(std::string_view text, const ParseContext &ctx)
{
    check_context(ctx);
    Parser ps(text, ctx);
    const Character c = ps.character();
    ps.finish();
    return c;
}

HerrCochain parse_cochain(std::string_view text, const ParseContext &ctx, int single_degree)
{
    text = trim(text);
    if (encloses(text)) {
        const std::string_view inner = text.substr(1, text.size() - 2);
        const std::size_t comma = top_level(inner, ',');
        if (comma != std::string_view::npos) {
            return HerrCochain::deg1(parse_series(inner.substr(0, comma), ctx),
                                     parse_series(inner.substr(comma + 1), ctx));
        }
    }
    if (single_degree != 0 && single_degree != 2) {
        throw ParseError("a single series is a cochain of degree 0 or 2");
    }
    const TruncatedLaurent f = parse_series(text, ctx);
    return single_degree == 0 ? HerrCochain::deg0(f) : HerrCochain::deg2(f);
}

AnnotatedCochain parse_annotated(std::string_view text, const ParseContext &ctx, int single_degree)
{
    const std::size_t at = text.rfind('@');
    if (at == std::string_view::npos) {
        throw ParseError("expected <cochain>@<character>, got \"" + std::string(text) + "\"");
    }
    std::string_view lhs = trim(text.substr(0, at));
    if (lhs.size() >= 2 && lhs.front() == '"' && lhs.back() == '"') {
        lhs = lhs.substr(1, lhs.size() - 2);
    }
    return AnnotatedCochain{parse_cochain(lhs, ctx, single_degree), parse_character(text.substr(at + 1), ctx)};
}

} // namespace robba
