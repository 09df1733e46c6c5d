#pragma once

#include <robba/herr.hpp>

#include <string_view>

namespace robba
{

struct ParseContext
{
    std::int64_t p = 3;
    int prec = 12;
    // Truncation for series that only exist as infinite expansions (inverses, t, ...).
    int hi = kDefaultHi;
};

// Grammar shared by scalars, series and characters:
//
//   expr   := term (('+' | '-') term)*
//   term   := unary (('*' | '/') unary)*
//   unary  := '-' unary | power
//   power  := atom ('^' ['-'] integer)?
//   atom   := integer | 'p' | 'T' | 't' | 'q' | 'one_plus_T_over_T' | '(' expr ')'
//
// A series may also be given as "deg:coeff" pairs separated by spaces, e.g. "-1:1 1:5^1*1".
// Characters: products and integer powers of 'x', '|x|', 'w', 'ur(<scalar>)' and
// 'char(dp=<scalar>, te=<integer>, du=<scalar>)'; '1' is the trivial character.
PadicScalar parse_scalar_expr(std::string_view text, const ParseContext &ctx);
TruncatedLaurent parse_series(std::string_view text, const ParseContext &ctx);
Character parse_character(std::string_view text, const ParseContext &ctx);

// "(a, b)" is a degree-1 cochain; anything else is a single series in degree `single_degree`.
HerrCochain parse_cochain(std::string_view text, const ParseContext &ctx, int single_degree = 0);

// "<cochain>@<character>"
struct AnnotatedCochain
{
    HerrCochain cochain;
    Character delta;
};
AnnotatedCochain parse_annotated(std::string_view text, const ParseContext &ctx, int single_degree = 0);

} // namespace robba
