#include <doctest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <random>

#include <qseries/error.hpp>

#include "dsl.hpp"
#include "support.hpp"

using namespace qseries;
using namespace qseries::dsl;
using testing::M;
using testing::Q;
using testing::qp;

namespace
{

std::vector<TokenKind> kinds(const std::string &s)
{
    std::vector<TokenKind> out;
    for (const Token &t : tokenize(s)) {
        out.push_back(t.kind);
    }
    return out;
}

bool equal_to(const Series &a, const Series &b, const Coeff &N)
{
    return eq_upto(a, b, N).equal;
}

Ast leaf(Ast::Kind k, std::string name = "", long v = 0)
{
    Ast a;
    a.kind = k;
    a.name = std::move(name);
    a.value = v;
    return a;
}

Ast node(Ast::Kind k, std::vector<Ast> args, std::string name = "")
{
    Ast a;
    a.kind = k;
    a.name = std::move(name);
    a.args = std::move(args);
    return a;
}

// Random well-formed expression trees; calls use their fixed arities and
// keyword slots get a bare word.
Ast random_ast(std::mt19937_64 &rng, int depth)
{
    using K = Ast::Kind;
    auto roll = [&](int n) { return std::uniform_int_distribution<int>(0, n - 1)(rng); };
    if (depth == 0 || roll(4) == 0) {
        switch (roll(3)) {
        case 0: return leaf(K::number, "", roll(30));
        case 1: return leaf(K::q);
        default: return leaf(K::name, testing::pick(rng, std::vector<std::string>{"x", "y", "z", "w2"}));
        }
    }
    const int pick = roll(9);
    if (pick < 4) {
        const K op = std::vector<K>{K::add, K::sub, K::mul, K::div}[pick];
        return node(op, {random_ast(rng, depth - 1), random_ast(rng, depth - 1)});
    }
    if (pick == 4) {
        return node(K::neg, {random_ast(rng, depth - 1)});
    }
    if (pick == 5) {
        // fractional exponent on q, or an integer exponent (possibly negated)
        if (roll(2) == 0) {
            return node(K::pow, {leaf(K::q), node(K::div, {leaf(K::number, "", 1 + roll(5)), leaf(K::number, "", 1 + roll(7))})});
        }
        Ast e = leaf(K::number, "", roll(5));
        if (roll(3) == 0) {
            e = node(K::neg, {e});
        }
        return node(K::pow, {random_ast(rng, depth - 1), e});
    }
    if (pick == 6) {
        return node(K::pow, {node(K::pow, {random_ast(rng, depth - 1), leaf(K::number, "", 2)}), leaf(K::number, "", 3)});
    }
    const std::vector<std::pair<std::string, int>> calls{{"j", 2},     {"m", 3},       {"J", 2},     {"Jb", 2},
                                                          {"Jm", 1},    {"poch", 2},    {"kron1", 2}, {"kron2", 2},
                                                          {"hecke14", 2}, {"hick_same", 2}, {"triple", 4}, {"F", 4},
                                                          {"G", 4}};
    const auto &[name, arity] = testing::pick(rng, calls);
    std::vector<Ast> args;
    for (int k = 0; k < arity; ++k) {
        args.push_back(random_ast(rng, depth - 1));
    }
    if (name == "triple") {
        args[3] = leaf(K::name, testing::pick(rng, std::vector<std::string>{"all", "same", "rs_not_t"}));
    } else if (name == "F" || name == "G") {
        args[0] = leaf(K::name, testing::pick(rng, std::vector<std::string>{"thm1", "same", "diff"}));
    } else if (name == "poch" && roll(2) == 0) {
        args[1] = leaf(K::name, "inf");
    }
    return node(K::call, std::move(args), name);
}

int run_cli(const std::string &args)
{
    const std::string cmd = std::string(QSERIES_CLI) + " " + args + " > /dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

} // namespace

TEST_CASE("tokenize")
{
    using T = TokenKind;
    CHECK(kinds("j(q*x; q^3)") == std::vector<T>{T::name, T::lparen, T::q, T::star, T::name, T::semicolon, T::q,
                                                  T::caret, T::number, T::rparen, T::end});
    const auto toks = tokenize("1/2*q^(1/2)");
    CHECK(toks[0].lexeme == "1");
    CHECK(toks[1].kind == T::slash);
    CHECK(toks[2].lexeme == "2");
    for (std::size_t i = 1; i < toks.size(); ++i) {
        CHECK(toks[i].offset > toks[i - 1].offset);
    }
    try {
        tokenize("j(q@x)");
        FAIL("expected LexError");
    } catch (const LexError &e) {
        CHECK(e.offset() == 3);
    }
    CHECK(tokenize("q_1").front().kind == T::name);
}

TEST_CASE("parse")
{
    const Ast a = parse("1 - q - q^2 + q^5");
    CHECK(a.kind == Ast::Kind::add);
    const Ast m = parse("m(x, q^2, q*x*y)");
    CHECK(m.kind == Ast::Kind::call);
    CHECK(m.args.size() == 3);
    try {
        parse("j(x)");
        FAIL("expected ParseError");
    } catch (const ParseError &e) {
        CHECK(std::string(e.what()).find("j requires 2 args") != std::string::npos);
        CHECK(e.offset() == 3);
    }
    // precedence: ^ binds tighter than unary minus, which binds tighter than *
    CHECK(same_shape(parse("-q^2"), parse("-(q^2)")));
    CHECK(same_shape(parse("-2*3"), parse("(-2)*3")));
    CHECK(same_shape(parse("2^3^2"), parse("2^(3^2)")));
    CHECK(same_shape(parse("1-2-3"), parse("(1-2)-3")));
    CHECK(same_shape(parse("1/2/3"), parse("(1/2)/3")));
    CHECK_THROWS_AS(parse("m(x, q; z)"), ParseError);
    CHECK_THROWS_AS(parse("nosuch(x)"), ParseError);
    CHECK_THROWS_AS(parse("(q"), ParseError);
    CHECK_THROWS_AS(parse("q q"), ParseError);
    CHECK_THROWS_AS(parse(""), ParseError);
}

TEST_CASE("error offsets lie inside the input")
{
    for (const std::string s : {"j(x)", "(q", "q +", "q q", "m(x, q; z)", "J(1,2,3)", "a$b", "((((", "x^", "poch(x inf)"}) {
        try {
            parse(s);
            FAIL("expected an error for ", s);
        } catch (const ParseError &e) {
            CHECK(e.offset() <= s.size());
        } catch (const LexError &e) {
            CHECK(e.offset() < s.size());
        }
    }
}

TEST_CASE("pretty-printer round trip on 200 generated expressions")
{
    std::mt19937_64 rng(314159);
    for (int i = 0; i < 200; ++i) {
        const Ast a = random_ast(rng, 4);
        const std::string text = print(a);
        INFO(text);
        const Ast b = parse(text);
        CHECK(same_shape(a, b));
        CHECK(print(b) == text);
    }
}

TEST_CASE("free variables skip keyword slots")
{
    CHECK(free_variables(parse("F(thm1; x, y, q*z) + poch(w, inf)")) == std::vector<std::string>{"w", "x", "y", "z"});
    CHECK_THROWS_AS(eval_formal(parse("j(x; q)"), {}, 5), UnboundVariable);
}

TEST_CASE("formal evaluation")
{
    const Series e = eval_formal(parse("j(q; q^3)"), {}, 12);
    CHECK(testing::first_difference(testing::poly_of(e, 12), oracle::euler(1, 12)) == "");
    CHECK(equal_to(eval_formal(parse("J(1,3)"), {}, 12), eval_formal(parse("poch(q, inf)"), {}, 12), 12));
    const Bindings xyz{{"x", qp(1, 3)}, {"y", qp(1, 2)}, {"z", qp(2, 5)}};
    CHECK(eval_formal(parse("G(thm1; x,y,z) - F(thm1; x,y,z)"), xyz, 15).empty());
    const Bindings xz{{"x", qp(1, 3)}, {"z", M(-1, Q(2, 5))}};
    CHECK(equal_to(eval_formal(parse("m(q*x, q, z) + x*m(x, q, z)"), xz, 20), Series::constant(1), 20));
    CHECK(equal_to(eval_formal(parse("1/2*q^(1/2) + q^(1/2)/2"), {}, 5), Series::monomial(1, Q(1, 2)), 5));
    CHECK(equal_to(eval_formal(parse("(1 - q)^-1"), {}, 6), eval_formal(parse("1/(1 - q)"), {}, 6), 6));
    CHECK(equal_to(eval_formal(parse("kron2(x, y)"), {{"x", qp(1, 2)}, {"y", qp(1, 3)}}, 10),
                   eval_formal(parse("Jm(1)^3*j(x*y; q)/(j(x; q)*j(y; q))"), {{"x", qp(1, 2)}, {"y", qp(1, 3)}}, 10),
                   10));
}

TEST_CASE("evaluation errors carry the call span")
{
    try {
        eval_formal(parse("1 + j(x; q^0)"), {{"x", qp(1, 2)}}, 5);
        FAIL("expected EvalError");
    } catch (const EvalError &e) {
        CHECK(std::string(e.what()).find("offset 11") != std::string::npos);
    }
    try {
        eval_formal(parse("q + m(x, q, z)"), {{"x", qp(1, 2)}, {"z", qp(1)}}, 5);
        FAIL("expected EvalError");
    } catch (const EvalError &e) {
        CHECK(std::string(e.what()).find("DegenerateZ") != std::string::npos);
        CHECK(std::string(e.what()).find("offset 4") != std::string::npos);
    }
    CHECK_THROWS_AS(eval_formal(parse("x^(1/2)"), {{"x", qp(1, 2)}}, 5), EvalError);
    CHECK_THROWS_AS(eval_formal(parse("j(x + 1; q)"), {{"x", qp(1, 2)}}, 5), EvalError);
    CHECK_THROWS_AS(eval_numeric(parse("q^(1/2)"), {}, Q(1, 7), Q(1, 1000)), EvalError);
}

TEST_CASE("bindings")
{
    CHECK(parse_monomial("q^(1/3)") == qp(1, 3));
    CHECK(parse_monomial("-2*q^(2/5)") == M(-2, Q(2, 5)));
    CHECK(parse_monomial("1/2") == M(Q(1, 2), 0));
    CHECK_THROWS_AS(parse_monomial("q + 1"), EvalError);
    CHECK_THROWS_AS(parse_monomial("x"), EvalError);
    CHECK_THROWS_AS(parse_monomial("0"), EvalError);
}

TEST_CASE("formal then substitute agrees with numeric evaluation")
{
    // A formal binding c*q^e at q = t^6 is the numeric constant c*t^(6e). The
    // coefficients of these expressions grow at most like 5^n, so the formal
    // tail beyond q^60 at |q| <= 1/10 is far below the 10^-15 tolerance.
    struct Case {
        std::string text;
        Bindings formal;
        Coeff t;
    };
    const Bindings ints{{"x", M(Q(-1, 2), 0)}, {"y", M(3, 1)}, {"z", M(Q(2, 5), 0)}};
    const Bindings fracs{{"x", qp(1, 3)}, {"y", M(-1, Q(1, 2))}, {"z", M(Q(1, 2), Q(1, 6))}};
    const Coeff t1 = Q(1, 10), t6 = Q(2, 3);
    const std::vector<Case> cases{{"j(x; q^2)*m(x, q, z) + Jm(3)/j(y; q)", ints, t1},
                                  {"poch(x, inf)*poch(q/x, inf) - j(x; q)/Jm(1)", ints, t1},
                                  {"G(thm1; x, y, z)", ints, t1},
                                  {"kron1(x, y)", fracs, t6},
                                  {"kron2(x, y)*Jb(1, 2)", fracs, t6},
                                  {"F(thm1; x, y, z) - G(same; x, y, z)", fracs, t6},
                                  {"m(x, q^2, z)/j(y; q^3)", fracs, t6}};
    const Coeff eps = Coeff(1, BigInt("1000000000000000000000000"));
    const Coeff tol = Coeff(1, BigInt("1000000000000000"));
    for (const Case &c : cases) {
        INFO(c.text);
        const bool integral = c.t == t1;
        const Coeff q = integral ? c.t : Coeff(c.t * c.t * c.t * c.t * c.t * c.t);
        Bindings numeric;
        for (const auto &[name, m] : c.formal) {
            numeric.emplace(name, integral ? m : Monomial(Coeff(m.c * pow(c.t, Coeff(m.e * 6).get_num().get_si())), 0));
        }
        const Ast a = parse(c.text);
        const Series s = eval_formal(a, c.formal, 60).compacted();
        const Coeff formal_value = evaluate_at(s, integral ? q : c.t);
        REQUIRE(s.scale() == (integral ? 1 : 6));
        const Certified num = eval_numeric(a, numeric, q, eps);
        CHECK(abs(formal_value - num.value) <= tol);
    }
}

TEST_CASE("command-line exit codes")
{
    CHECK(run_cli("list") == 0);
    CHECK(run_cli("expand \"J(1,3)\" --order 7 --format json") == 0);
    CHECK(run_cli("verify --id thm1 --bind 'x=q^(1/3)' --bind 'y=q^(1/2)' --bind 'z=q^(2/5)' --order 15") == 0);
    CHECK(run_cli("verify --id thm1-qxy --bind 'x=q^(1/3)' --bind 'y=q^(1/2)' --bind 'z=q^(2/5)' --order 10") == 1);
    CHECK(run_cli("verify --id thm1 --bind 'x=q' --bind 'y=q^(1/2)' --bind 'z=q^(2/5)'") == 2);
    CHECK(run_cli("expand \"j(x)\"") == 2);
    CHECK(run_cli("expand \"j(q@x)\"") == 2);
    CHECK(run_cli("frobnicate") == 2);
    CHECK(run_cli("residues --family prop21 --n 0..1 --q 1/7") == 0);
}
