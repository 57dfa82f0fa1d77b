#include "dsl.hpp"

#include <algorithm>
#include <cctype>
#include <set>
#include <type_traits>
#include <variant>

#include <qseries/backend.hpp>
#include <qseries/error.hpp>
#include <qseries/evaluate.hpp>
#include <qseries/kernels.hpp>
#include <qseries/qfunctions.hpp>
#include <qseries/sums.hpp>

namespace qseries::dsl
{

namespace
{

const char *kind_text(TokenKind k)
{
    switch (k) {
    case TokenKind::number: return "number";
    case TokenKind::name: return "name";
    case TokenKind::q: return "q";
    case TokenKind::plus: return "'+'";
    case TokenKind::minus: return "'-'";
    case TokenKind::star: return "'*'";
    case TokenKind::slash: return "'/'";
    case TokenKind::caret: return "'^'";
    case TokenKind::lparen: return "'('";
    case TokenKind::rparen: return "')'";
    case TokenKind::comma: return "','";
    case TokenKind::semicolon: return "';'";
    case TokenKind::end: return "end of input";
    }
    return "?";
}

// arity; semi: number of arguments before the ';' (0: none); keyword: index of
// an argument that is a bare word rather than an expression (-1: none).
struct Signature {
    int arity;
    int semi;
    int keyword;
};

const std::map<std::string, Signature> &signatures()
{
    static const std::map<std::string, Signature> s = {
        {"j", {2, 1, -1}},        {"m", {3, 0, -1}},         {"J", {2, 0, -1}},         {"Jb", {2, 0, -1}},
        {"Jm", {1, 0, -1}},       {"poch", {2, 0, -1}},      {"kron1", {2, 0, -1}},     {"kron2", {2, 0, -1}},
        {"hecke14", {2, 0, -1}},  {"hick_same", {2, 0, -1}}, {"hick_diff", {2, 0, -1}}, {"triple", {4, 3, 3}},
        {"F", {4, 1, 0}},         {"G", {4, 1, 0}},          {"G1", {4, 1, 0}},         {"G2", {4, 1, 0}},
    };
    return s;
}

class Parser
{
public:
    explicit Parser(const std::vector<Token> &t) : t_(t) {}

    Ast run()
    {
        Ast a = expr(0);
        if (peek().kind != TokenKind::end) {
            fail({TokenKind::plus, TokenKind::minus, TokenKind::star, TokenKind::slash, TokenKind::caret,
                  TokenKind::end});
        }
        return a;
    }

private:
    const std::vector<Token> &t_;
    std::size_t i_ = 0;

    const Token &peek() const
    {
        return t_[std::min(i_, t_.size() - 1)];
    }
    const Token &take()
    {
        const Token &tok = peek();
        if (i_ < t_.size() - 1) {
            ++i_;
        }
        return tok;
    }

    [[noreturn]] void fail(std::initializer_list<TokenKind> expected, const std::string &why = "") const
    {
        std::string msg = why.empty() ? "" : why + "; ";
        msg += "expected one of {";
        bool first = true;
        for (TokenKind k : expected) {
            msg += (first ? "" : ", ") + std::string(kind_text(k));
            first = false;
        }
        msg += "}, got " + std::string(kind_text(peek().kind));
        throw ParseError(peek().offset, msg);
    }

    static int lbp(TokenKind k)
    {
        switch (k) {
        case TokenKind::plus:
        case TokenKind::minus: return 10;
        case TokenKind::star:
        case TokenKind::slash: return 20;
        case TokenKind::caret: return 40;
        default: return 0;
        }
    }

    Ast expr(int rbp)
    {
        Ast left = nud();
        while (lbp(peek().kind) > rbp) {
            const Token &op = take();
            Ast node;
            node.offset = op.offset;
            switch (op.kind) {
            case TokenKind::plus: node.kind = Ast::Kind::add; break;
            case TokenKind::minus: node.kind = Ast::Kind::sub; break;
            case TokenKind::star: node.kind = Ast::Kind::mul; break;
            case TokenKind::slash: node.kind = Ast::Kind::div; break;
            default: node.kind = Ast::Kind::pow; break;
            }
            // ^ is right-associative: its right operand may hold another ^.
            Ast right = expr(node.kind == Ast::Kind::pow ? 39 : lbp(op.kind));
            node.args.push_back(std::move(left));
            node.args.push_back(std::move(right));
            left = std::move(node);
        }
        return left;
    }

    Ast nud()
    {
        const Token &tok = peek();
        Ast a;
        a.offset = tok.offset;
        switch (tok.kind) {
        case TokenKind::number:
            take();
            a.kind = Ast::Kind::number;
            a.value = BigInt(tok.lexeme);
            return a;
        case TokenKind::q:
            take();
            a.kind = Ast::Kind::q;
            return a;
        case TokenKind::minus:
            take();
            a.kind = Ast::Kind::neg;
            a.args.push_back(expr(30));
            return a;
        case TokenKind::lparen: {
            take();
            Ast inner = expr(0);
            if (peek().kind != TokenKind::rparen) {
                fail({TokenKind::rparen});
            }
            take();
            return inner;
        }
        case TokenKind::name:
            take();
            if (peek().kind == TokenKind::lparen) {
                return call(tok);
            }
            a.kind = Ast::Kind::name;
            a.name = tok.lexeme;
            return a;
        default:
            fail({TokenKind::number, TokenKind::name, TokenKind::q, TokenKind::minus, TokenKind::lparen});
        }
    }

    Ast call(const Token &callee)
    {
        const auto it = signatures().find(callee.lexeme);
        if (it == signatures().end()) {
            throw ParseError(callee.offset, "unknown function '" + callee.lexeme + "'");
        }
        const Signature sig = it->second;
        const std::string need = callee.lexeme + " requires " + std::to_string(sig.arity) + " args";
        take(); // (
        Ast a;
        a.kind = Ast::Kind::call;
        a.name = callee.lexeme;
        a.offset = callee.offset;
        for (int k = 0; k < sig.arity; ++k) {
            a.args.push_back(expr(0));
            if (k + 1 == sig.arity) {
                if (peek().kind != TokenKind::rparen) {
                    fail({TokenKind::rparen}, need);
                }
            } else {
                const TokenKind sep = (k + 1 == sig.semi) ? TokenKind::semicolon : TokenKind::comma;
                if (peek().kind != sep) {
                    fail({sep}, need);
                }
            }
            take();
        }
        return a;
    }
};

int precedence(const Ast &a)
{
    switch (a.kind) {
    case Ast::Kind::add:
    case Ast::Kind::sub: return 10;
    case Ast::Kind::mul:
    case Ast::Kind::div: return 20;
    case Ast::Kind::neg: return 30;
    case Ast::Kind::pow: return 40;
    default: return 100;
    }
}

std::string wrap(const Ast &a, bool parens)
{
    return parens ? "(" + print(a) + ")" : print(a);
}

bool is_keyword_arg(const Ast &call, std::size_t k)
{
    const Signature sig = signatures().at(call.name);
    if (sig.keyword >= 0 && k == static_cast<std::size_t>(sig.keyword)) {
        return true;
    }
    return call.name == "poch" && k == 1 && call.args[1].kind == Ast::Kind::name && call.args[1].name == "inf";
}

void collect(const Ast &a, std::set<std::string> &out)
{
    if (a.kind == Ast::Kind::name) {
        out.insert(a.name);
    }
    for (std::size_t k = 0; k < a.args.size(); ++k) {
        if (a.kind == Ast::Kind::call && is_keyword_arg(a, k)) {
            continue;
        }
        collect(a.args[k], out);
    }
}

std::string at(const Ast &a)
{
    return " at offset " + std::to_string(a.offset);
}

std::int64_t to_int64(const BigInt &z, const Ast &where)
{
    if (!z.fits_slong_p()) {
        throw EvalError("integer out of range" + at(where));
    }
    return z.get_si();
}

// Literal, q, * / unary minus and ^ only.
Monomial reduce(const Ast &a)
{
    switch (a.kind) {
    case Ast::Kind::number:
        if (a.value == 0) {
            throw EvalError("zero is not a monomial" + at(a));
        }
        return Monomial::constant(Coeff(a.value));
    case Ast::Kind::q: return Monomial::q_pow(Coeff(1));
    case Ast::Kind::neg: return -reduce(a.args[0]);
    case Ast::Kind::mul: return reduce(a.args[0]) * reduce(a.args[1]);
    case Ast::Kind::div: return reduce(a.args[0]) / reduce(a.args[1]);
    case Ast::Kind::pow: {
        const Monomial k = reduce(a.args[1]);
        if (k.e != 0) {
            throw EvalError("exponent must be a constant" + at(a));
        }
        if (a.args[0].kind == Ast::Kind::q) {
            return Monomial::q_pow(k.c);
        }
        if (!is_integer(k.c)) {
            throw EvalError("only q takes a fractional exponent" + at(a));
        }
        return reduce(a.args[0]).pow(to_int64(k.c.get_num(), a));
    }
    default: throw EvalError("expected a monomial c*q^(p/r)" + at(a));
    }
}

// Partial products of (x; q)_inf up to I, stopping once the tail factor
// prod_{i > I} (1 - x q^i) is within 2S of 1, S = |x| |q|^(I+1) / (1 - |q|) <= 1/2
// (|prod (1 + v_i) - 1| <= e^S - 1 <= 2S).
Certified poch_inf_numeric(const Coeff &x, const NumericBackend &b)
{
    const Coeff aq = abs(b.qval()), ax = abs(x);
    Certified p = Certified::exact(Coeff(1));
    Coeff qi = 1;
    for (int i = 0; i < 100000; ++i) {
        p = p * Certified::exact(Coeff(1 - x * qi));
        qi *= b.qval();
        const Coeff s = ax * abs(qi) / (1 - aq);
        if (s <= Coeff(1, 2)) {
            const Coeff tail = (abs(p.value) + p.bound) * 2 * s;
            if (tail * 4 <= b.eps()) {
                return {p.value, Coeff(p.bound + tail)};
            }
        }
    }
    throw PrecisionError("infinite product did not converge");
}

template <class B>
class Evaluator
{
public:
    using Var = typename B::Var;
    using Value = typename B::Value;
    using Item = std::variant<Monomial, Value>;
    static constexpr bool kFormal = std::is_same_v<B, FormalBackend>;

    Evaluator(const B &b, const Bindings &binds) : b_(b), binds_(binds) {}

    Value value(const Item &it) const
    {
        if (const auto *m = std::get_if<Monomial>(&it)) {
            return b_.lift(var(*m, 0));
        }
        return std::get<Value>(it);
    }

    Item eval(const Ast &a) const
    {
        try {
            return node(a);
        } catch (const EvalError &) {
            throw;
        } catch (const UnboundVariable &) {
            throw;
        } catch (const error &e) {
            throw EvalError(describe(a) + at(a) + ": " + e.kind() + ": " + e.what());
        } catch (const std::invalid_argument &e) {
            throw EvalError(describe(a) + at(a) + ": " + e.what());
        } catch (const std::domain_error &e) {
            throw EvalError(describe(a) + at(a) + ": " + e.what());
        }
    }

private:
    const B &b_;
    const Bindings &binds_;

    static std::string describe(const Ast &a)
    {
        return a.kind == Ast::Kind::call ? "in " + a.name + "(...)" : "in '" + print(a) + "'";
    }

    Var var(const Monomial &m, std::size_t offset) const
    {
        if constexpr (kFormal) {
            return m;
        } else {
            if (!is_integer(m.e) || !m.e.get_num().fits_slong_p()) {
                throw EvalError("q^(" + m.e.get_str() + ") has no rational value at offset " +
                                std::to_string(offset));
            }
            return Coeff(m.c * b_.q(m.e.get_num().get_si()));
        }
    }

    Monomial mono(const Ast &a) const
    {
        const Item it = eval(a);
        if (const auto *m = std::get_if<Monomial>(&it)) {
            return *m;
        }
        throw EvalError("argument must reduce to a monomial c*q^e" + at(a));
    }

    std::int64_t integer(const Ast &a) const
    {
        const Monomial m = mono(a);
        if (m.e != 0 || !is_integer(m.c)) {
            throw EvalError("argument must be an integer" + at(a));
        }
        return to_int64(m.c.get_num(), a);
    }

    std::int64_t modulus(const Ast &a) const
    {
        const Monomial m = mono(a);
        if (m.c != 1 || !is_integer(m.e) || m.e <= 0) {
            throw EvalError("modulus must be q^m with m a positive integer" + at(a));
        }
        return to_int64(m.e.get_num(), a);
    }

    static const std::string &keyword(const Ast &a)
    {
        if (a.kind != Ast::Kind::name) {
            throw EvalError("expected a bare word" + at(a));
        }
        return a.name;
    }

    Value power(const Value &v, std::int64_t k) const
    {
        if (k < 0) {
            return b_.div(b_.constant(Coeff(1)), power(v, -k));
        }
        Value acc = b_.constant(Coeff(1));
        Value base = v;
        for (; k > 0; k >>= 1) {
            if (k & 1) {
                acc = acc * base;
            }
            if (k > 1) {
                base = base * base;
            }
        }
        return acc;
    }

    QuadrantSum<Coeff> numeric_quadrant(const QuadrantSum<Monomial> &s) const
    {
        QuadrantSum<Coeff> r{var(s.coef, 0), s.shift, s.qa, s.qb, s.cross, s.la, s.lb,
                             var(s.y, 0), var(s.z, 0), std::nullopt, s.parity};
        if (s.den) {
            r.den = DiagonalDenominator<Coeff>{var(s.den->u, 0), s.den->p, s.den->r};
        }
        return r;
    }

    Item node(const Ast &a) const
    {
        using K = Ast::Kind;
        switch (a.kind) {
        case K::number:
            if (a.value == 0) {
                return b_.constant(Coeff(0));
            }
            return Monomial::constant(Coeff(a.value));
        case K::q: return Monomial::q_pow(Coeff(1));
        case K::name: {
            const auto it = binds_.find(a.name);
            if (it == binds_.end()) {
                throw UnboundVariable("'" + a.name + "'" + at(a));
            }
            return it->second;
        }
        case K::neg: {
            const Item v = eval(a.args[0]);
            if (const auto *m = std::get_if<Monomial>(&v)) {
                return -*m;
            }
            return -std::get<Value>(v);
        }
        case K::add: return value(eval(a.args[0])) + value(eval(a.args[1]));
        case K::sub: return value(eval(a.args[0])) - value(eval(a.args[1]));
        case K::mul: {
            const Item l = eval(a.args[0]), r = eval(a.args[1]);
            if (std::holds_alternative<Monomial>(l) && std::holds_alternative<Monomial>(r)) {
                return std::get<Monomial>(l) * std::get<Monomial>(r);
            }
            return value(l) * value(r);
        }
        case K::div: {
            const Item l = eval(a.args[0]), r = eval(a.args[1]);
            if (const auto *rm = std::get_if<Monomial>(&r)) {
                if (const auto *lm = std::get_if<Monomial>(&l)) {
                    return *lm / *rm;
                }
                return value(l) * b_.lift(var(rm->inverse(), a.offset));
            }
            return b_.div(value(l), value(r));
        }
        case K::pow: {
            const Monomial k = mono(a.args[1]);
            if (k.e != 0) {
                throw EvalError("exponent must be a constant" + at(a));
            }
            if (a.args[0].kind == K::q) {
                return Monomial::q_pow(k.c);
            }
            if (!is_integer(k.c)) {
                throw EvalError("only q takes a fractional exponent" + at(a));
            }
            const std::int64_t n = to_int64(k.c.get_num(), a);
            const Item base = eval(a.args[0]);
            if (const auto *m = std::get_if<Monomial>(&base)) {
                return m->pow(n);
            }
            return power(std::get<Value>(base), n);
        }
        case K::call: return call(a);
        }
        throw std::logic_error("bad node");
    }

    Item call(const Ast &a) const
    {
        const std::string &f = a.name;
        const auto &x = a.args;
        const Kernels<B> k = kernels(b_);
        if (f == "j") {
            return b_.theta(var(mono(x[0]), x[0].offset), modulus(x[1]));
        }
        if (f == "m") {
            return b_.appell(var(mono(x[0]), x[0].offset), modulus(x[1]), var(mono(x[2]), x[2].offset));
        }
        if (f == "J" || f == "Jb" || f == "Jm") {
            const std::int64_t m = integer(x.back());
            if (m <= 0) {
                throw EvalError("modulus must be positive" + at(x.back()));
            }
            if (f == "Jm") {
                return b_.J(m);
            }
            const Var qa = b_.q(integer(x[0]));
            return b_.theta(f == "J" ? qa : Var(-qa), m);
        }
        if (f == "poch") {
            const Monomial xm = mono(x[0]);
            if (x[1].kind == Ast::Kind::name && x[1].name == "inf") {
                if constexpr (kFormal) {
                    return pochhammer_inf(xm, b_.work());
                } else {
                    return poch_inf_numeric(var(xm, x[0].offset), b_);
                }
            }
            const std::int64_t n = integer(x[1]);
            if (n < 0) {
                throw EvalError("poch length must be >= 0" + at(x[1]));
            }
            Value acc = b_.constant(Coeff(1));
            for (std::int64_t i = 0; i < n; ++i) {
                acc = acc * (b_.constant(Coeff(1)) - b_.lift(var(xm * Monomial::q_pow(Coeff(i)), a.offset)));
            }
            return acc;
        }
        if (f == "kron1") {
            return b_.sum(kronecker_family(var(mono(x[0]), x[0].offset), var(mono(x[1]), x[1].offset)));
        }
        if (f == "kron2" || f == "hecke14" || f == "hick_same" || f == "hick_diff") {
            DoubleSumSpec s{0, 0, 1, false, Parity::none, mono(x[0]), mono(x[1])};
            if (f == "hecke14") {
                s.alpha = 1;
                s.beta = 1;
                s.gamma = 2;
                s.twist = true;
            } else if (f == "hick_same") {
                s.parity = Parity::same;
            } else if (f == "hick_diff") {
                s.parity = Parity::diff;
            }
            if constexpr (kFormal) {
                return double_sum(s, b_.work());
            } else {
                return b_.sum(numeric_quadrant(s.positive())) + b_.sum(numeric_quadrant(s.negative()));
            }
        }
        if (f == "triple") {
            const std::string &mode = keyword(x[3]);
            TripleSumSpec s{TripleParity::all, mono(x[0]), mono(x[1]), mono(x[2])};
            if (mode == "same") {
                s.parity = TripleParity::same;
            } else if (mode == "rs_not_t") {
                s.parity = TripleParity::rs_not_t;
            } else if (mode != "all") {
                throw EvalError("triple mode must be all, same or rs_not_t" + at(x[3]));
            }
            if constexpr (kFormal) {
                return triple_sum(s, b_.work());
            } else {
                throw Unsupported("triple sums have no numeric evaluator");
            }
        }
        // F, G, G1, G2
        const Variant v = variant_from_string(keyword(x[0]));
        const Monomial xm = mono(x[1]);
        if constexpr (kFormal) {
            check_kernel_genericity(v, xm);
        }
        const Var X = var(xm, x[1].offset), Y = var(mono(x[2]), x[2].offset), Z = var(mono(x[3]), x[3].offset);
        if (f == "F") {
            return k.F(v, X, Y, Z);
        }
        return k.G(v, f == "G" ? Part::full : f == "G1" ? Part::g1 : Part::g2, X, Y, Z);
    }
};

void check_bound(const Ast &a, const Bindings &b)
{
    for (const std::string &name : free_variables(a)) {
        if (!b.count(name)) {
            throw UnboundVariable("'" + name + "' is not bound");
        }
    }
}

} // namespace

std::vector<Token> tokenize(std::string_view in)
{
    std::vector<Token> out;
    std::size_t i = 0;
    auto single = [](char c) -> std::optional<TokenKind> {
        switch (c) {
        case '+': return TokenKind::plus;
        case '-': return TokenKind::minus;
        case '*': return TokenKind::star;
        case '/': return TokenKind::slash;
        case '^': return TokenKind::caret;
        case '(': return TokenKind::lparen;
        case ')': return TokenKind::rparen;
        case ',': return TokenKind::comma;
        case ';': return TokenKind::semicolon;
        default: return std::nullopt;
        }
    };
    while (i < in.size()) {
        const unsigned char c = static_cast<unsigned char>(in[i]);
        if (std::isspace(c)) {
            ++i;
        } else if (std::isdigit(c)) {
            const std::size_t s = i;
            while (i < in.size() && std::isdigit(static_cast<unsigned char>(in[i]))) {
                ++i;
            }
            out.push_back({TokenKind::number, std::string(in.substr(s, i - s)), s});
        } else if (std::isalpha(c) || c == '_') {
            const std::size_t s = i;
            while (i < in.size() && (std::isalnum(static_cast<unsigned char>(in[i])) || in[i] == '_')) {
                ++i;
            }
            std::string word(in.substr(s, i - s));
            out.push_back({word == "q" ? TokenKind::q : TokenKind::name, std::move(word), s});
        } else if (const auto k = single(static_cast<char>(c))) {
            out.push_back({*k, std::string(1, static_cast<char>(c)), i});
            ++i;
        } else {
            throw LexError(i, "unexpected byte '" + std::string(1, static_cast<char>(c)) + "'");
        }
    }
    out.push_back({TokenKind::end, "", in.size()});
    return out;
}

bool same_shape(const Ast &a, const Ast &b)
{
    if (a.kind != b.kind || a.value != b.value || a.name != b.name || a.args.size() != b.args.size()) {
        return false;
    }
    for (std::size_t k = 0; k < a.args.size(); ++k) {
        if (!same_shape(a.args[k], b.args[k])) {
            return false;
        }
    }
    return true;
}

Ast parse(const std::vector<Token> &tokens)
{
    if (tokens.empty() || tokens.back().kind != TokenKind::end) {
        throw std::invalid_argument("token stream must end with an end token");
    }
    return Parser(tokens).run();
}

Ast parse(std::string_view input)
{
    return parse(tokenize(input));
}

std::string print(const Ast &a)
{
    using K = Ast::Kind;
    const int p = precedence(a);
    switch (a.kind) {
    case K::number: return a.value.get_str();
    case K::q: return "q";
    case K::name: return a.name;
    case K::neg: return "-" + wrap(a.args[0], precedence(a.args[0]) < p);
    case K::pow:
        return wrap(a.args[0], precedence(a.args[0]) <= p) + "^" + wrap(a.args[1], precedence(a.args[1]) < p);
    case K::add:
    case K::sub:
    case K::mul:
    case K::div: {
        const char *op = a.kind == K::add ? " + " : a.kind == K::sub ? " - " : a.kind == K::mul ? "*" : "/";
        return wrap(a.args[0], precedence(a.args[0]) < p) + op + wrap(a.args[1], precedence(a.args[1]) <= p);
    }
    case K::call: {
        const int semi = signatures().at(a.name).semi;
        std::string s = a.name + "(";
        for (std::size_t k = 0; k < a.args.size(); ++k) {
            if (k > 0) {
                s += static_cast<int>(k) == semi ? "; " : ", ";
            }
            s += print(a.args[k]);
        }
        return s + ")";
    }
    }
    return "";
}

Monomial parse_monomial(std::string_view text)
{
    return reduce(parse(text));
}

std::vector<std::string> free_variables(const Ast &a)
{
    std::set<std::string> names;
    collect(a, names);
    return {names.begin(), names.end()};
}

Series eval_formal(const Ast &a, const Bindings &b, const Coeff &order)
{
    check_bound(a, b);
    return to_order(order, [&](const Coeff &w) {
        const FormalBackend fb(w);
        const Evaluator<FormalBackend> ev(fb, b);
        return ev.value(ev.eval(a));
    });
}

Certified eval_numeric(const Ast &a, const Bindings &b, const Coeff &q, const Coeff &eps)
{
    check_bound(a, b);
    check_q(q);
    return numeric_eval(
        [&](const NumericBackend &nb) {
            const Evaluator<NumericBackend> ev(nb, b);
            return ev.value(ev.eval(a));
        },
        q, eps);
}

} // namespace qseries::dsl
