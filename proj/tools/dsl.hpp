#ifndef QSERIES_DSL_HPP
#define QSERIES_DSL_HPP

#include <cstddef>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include <qseries/monomial.hpp>
#include <qseries/numeric.hpp>
#include <qseries/series.hpp>

namespace qseries::dsl
{

enum class TokenKind { number, name, q, plus, minus, star, slash, caret, lparen, rparen, comma, semicolon, end };

struct Token {
    TokenKind kind;
    std::string lexeme;
    std::size_t offset;
};

// Ends with an `end` token at offset input.size(). Throws LexError.
std::vector<Token> tokenize(std::string_view input);

// Literals are nonnegative integers; fractions are division nodes.
struct Ast {
    enum class Kind { number, q, name, neg, add, sub, mul, div, pow, call };
    Kind kind = Kind::number;
    BigInt value;      // number
    std::string name;  // name, call
    std::vector<Ast> args;
    std::size_t offset = 0;
};

// Structural equality; offsets are ignored.
bool same_shape(const Ast &a, const Ast &b);

// Throws ParseError (with the expected set) or LexError.
Ast parse(std::string_view input);
Ast parse(const std::vector<Token> &tokens);

// Minimal parenthesization; parse(print(a)) has the same shape as a.
std::string print(const Ast &a);

// Bindings are c q^e monomials in both modes. Numeric mode substitutes the
// rational q, so there e must be an integer.
using Bindings = std::map<std::string, Monomial>;

// Reduces a closed expression built from literals, q, * / unary minus and ^
// to a monomial; used for --bind values. Throws EvalError otherwise.
Monomial parse_monomial(std::string_view text);

// Names that must be bound (call keywords such as variants and inf excluded).
std::vector<std::string> free_variables(const Ast &a);

// Both throw UnboundVariable before evaluating; library errors from a call
// come back as EvalError naming the call and its offset.
Series eval_formal(const Ast &a, const Bindings &b, const Coeff &order);
Certified eval_numeric(const Ast &a, const Bindings &b, const Coeff &q, const Coeff &eps);

} // namespace qseries::dsl

#endif
