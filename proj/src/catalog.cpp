#include <qseries/verify.hpp>

#include <qseries/error.hpp>
#include <qseries/qfunctions.hpp>
#include <qseries/sums.hpp>

namespace qseries
{

template <class V>
const V &Args<V>::operator()(const std::string &name) const
{
    auto it = vars.find(name);
    if (it == vars.end()) {
        throw UnboundVariable("identity variable '" + name + "' is not bound");
    }
    return it->second;
}

template struct Args<Monomial>;
template struct Args<Coeff>;

namespace
{

Monomial vpow(const Monomial &m, std::int64_t k)
{
    return m.pow(k);
}

Coeff vpow(const Coeff &c, std::int64_t k)
{
    return pow(c, k);
}

template <class K>
typename K::Var sign_var(const K &k, std::int64_t n)
{
    const typename K::Var one = k.q(0);
    return n % 2 == 0 ? one : typename K::Var(-one);
}

std::int64_t binom2(std::int64_t n)
{
    return n * (n - 1) / 2;
}

// g(kernels, args) written once for both backends.
template <class G>
FormalSide formal_of(G g)
{
    return [g](const FormalArgs &a, const Coeff &N) {
        return to_order(N, [&](const Coeff &w) {
            const FormalBackend b(w);
            return g(kernels(b), a);
        });
    };
}

template <class G>
NumericSide numeric_of(G g)
{
    return [g](const NumericBackend &b, const NumericArgs &a) { return g(kernels(b), a); };
}

struct Builder {
    std::vector<IdentitySpec> &out;

    IdentitySpec &add(std::string id, std::string citation, std::vector<std::string> vars,
                      std::vector<Constraint> cons)
    {
        IdentitySpec s;
        s.id = std::move(id);
        s.citation = std::move(citation);
        s.vars = std::move(vars);
        s.constraints = std::move(cons);
        out.push_back(std::move(s));
        return out.back();
    }

    // Both sides generic: formal and numeric.
    template <class L, class R>
    IdentitySpec &generic(std::string id, std::string citation, std::vector<std::string> vars,
                          std::vector<Constraint> cons, L lhs, R rhs)
    {
        IdentitySpec &s = add(std::move(id), std::move(citation), std::move(vars), std::move(cons));
        s.lhs = formal_of(lhs);
        s.rhs = formal_of(rhs);
        s.nlhs = numeric_of(lhs);
        s.nrhs = numeric_of(rhs);
        return s;
    }
};

Constraint ann(const char *v)
{
    return {v, Hypothesis::annulus};
}

// -- shared right-hand sides --------------------------------------------------

auto kq = [](const auto &k, const auto &u, const auto &v) { return k.kronecker_quotient(u, v); };

// J_{2,4} = j(q^2; q^4)
auto J24 = [](const auto &k) { return k.j(k.q(2), 4); };

auto hickerson_same = [](const auto &k, const auto &a) {
    const auto &x = a("x");
    const auto &y = a("y");
    const auto q1 = k.q(1);
    return k.b.div(J24(k) * k.j(q1 * x * y, 2) * k.j(-(q1 * x / y), 2) * k.j(x * x * y * y, 4),
                   k.j(x * x, 2) * k.j(y * y, 2));
};

auto hickerson_diff = [](const auto &k, const auto &a) {
    const auto &x = a("x");
    const auto &y = a("y");
    return k.L(y) * k.b.div(J24(k) * k.j(x * y, 2) * k.j(-(x / y), 2) * k.j(k.q(2) * x * x * y * y, 4),
                            k.j(x * x, 2) * k.j(y * y, 2));
};

auto hecke_rhs = [](const auto &k, const auto &a) {
    const auto &x = a("x");
    const auto &y = a("y");
    const auto one = k.q(0);
    const auto q1 = k.q(1), q2 = k.q(2);
    const auto J3 = k.b.J(3);
    const auto t1 = k.j(y) * k.b.appell(q2 * x / (y * y), 3, -one);
    const auto t2 = k.j(x) * k.b.appell(q2 * y / (x * x), 3, -one);
    const auto t3 = k.L(y) * k.b.div(J3 * J3 * J3 * k.j(-(x / y)) * k.j(q2 * x * y, 3),
                                     k.j(-one, 3) * k.j(-(q1 * y * y / x), 3) * k.j(-(q1 * x * x / y), 3));
    return t1 + t2 - t3;
};

template <Variant V>
auto F_of = [](const auto &k, const auto &a) { return k.F(V, a("x"), a("y"), a("z")); };

template <Variant V, bool Qxy = false>
auto G_of = [](const auto &k, const auto &a) {
    return k.G(V, Part::full, a("x"), a("y"), a("z"), KernelOptions{Qxy});
};

// M(q^2 x) - (xq/yz) M(x) for M = F or G.
template <Variant V, bool UseG>
auto fe_lhs = [](const auto &k, const auto &a) {
    const auto &x = a("x");
    const auto &y = a("y");
    const auto &z = a("z");
    const auto c = k.L(x * k.q(1) / (y * z));
    if constexpr (UseG) {
        return k.G(V, Part::full, k.q(2) * x, y, z) - c * k.G(V, Part::full, x, y, z);
    } else {
        return k.F(V, k.q(2) * x, y, z) - c * k.F(V, x, y, z);
    }
};

template <Variant V>
auto fe_rhs_of = [](const auto &k, const auto &a) { return k.fe_rhs(V, a("x"), a("y"), a("z")); };

// H(q^2 x) - (xq/yz) H(x) with H = F - G.
template <Variant V>
auto h_fe = [](const auto &k, const auto &a) { return fe_lhs<V, false>(k, a) - fe_lhs<V, true>(k, a); };

auto m_xz = [](const auto &k, const auto &a) { return k.b.appell(a("x"), 1, a("z")); };

auto zero_of = [](const auto &k, const auto &) { return k.b.constant(Coeff(0)); };

Hypothesis x_hyp(Variant v)
{
    switch (v) {
    case Variant::thm1:
        return Hypothesis::not_q_power;
    case Variant::same:
        return Hypothesis::not_even_power;
    case Variant::diff:
        return Hypothesis::not_odd_power;
    }
    return Hypothesis::not_q_power;
}

template <Variant V>
void add_variant(Builder &B, const std::string &id, const std::string &cite_fg, const std::string &cite_fe,
                 const std::string &fe_prefix)
{
    const std::vector<Constraint> cons{{"x", x_hyp(V)}, ann("y"), ann("z")};
    B.generic(id, cite_fg, {"x", "y", "z"}, cons, F_of<V>, G_of<V>);
    B.generic(fe_prefix + "-F", cite_fe, {"x", "y", "z"}, cons, fe_lhs<V, false>, fe_rhs_of<V>);
    B.generic(fe_prefix + "-G", cite_fe, {"x", "y", "z"}, cons, fe_lhs<V, true>, fe_rhs_of<V>);
    B.generic("h-fe-" + to_string(V), "H = F - G inherits \"satisfy the functional equation\"", {"x", "y", "z"},
              cons, h_fe<V>, zero_of);
}

// Reindexing shifts exercised by the finite family, and the convergent ones.
const std::vector<std::pair<std::int64_t, std::int64_t>> kFiniteShifts{{2, 0}, {-2, 3}, {1, -1}, {0, 0}, {3, 2}};
const std::vector<std::pair<std::int64_t, std::int64_t>> kConvergentShifts{{1, 1}, {1, 0}, {0, 1}};

std::vector<IdentitySpec> build_catalog()
{
    std::vector<IdentitySpec> out;
    Builder B{out};

    // -- Kronecker, Hecke, Hickerson -----------------------------------------
    B.generic(
        "kronecker-1.1", "\"The following identity was known to Kronecker\"", {"x", "y"},
        {ann("x"), {"y", Hypothesis::not_q_power}},
        [](const auto &k, const auto &a) { return k.b.sum(kronecker_family(a("x"), a("y"))); },
        [](const auto &k, const auto &a) { return kq(k, a("x"), a("y")); });

    auto k12_lhs = [](const FormalArgs &a, const Coeff &N) {
        return double_sum({0, 0, 1, false, Parity::none, a("x"), a("y")}, N);
    };
    auto k12_rhs = formal_of([](const auto &k, const auto &a) { return kq(k, a("x"), a("y")); });
    {
        IdentitySpec &s = B.add("kronecker-1.2", "\"we have a more symmetric form\"", {"x", "y"}, {ann("x"), ann("y")});
        s.lhs = k12_lhs;
        s.rhs = k12_rhs;
    }
    {
        IdentitySpec &s = B.add("kronecker-1.2-perturbed", "negative control: q^1 coefficient of the right side moved by 1/7",
                                {"x", "y"}, {ann("x"), ann("y")});
        s.negative_control = true;
        s.lhs = k12_lhs;
        s.rhs = [k12_rhs](const FormalArgs &a, const Coeff &N) {
            return k12_rhs(a, N) + Series::monomial(Coeff(1, 7), Coeff(1));
        };
    }
    {
        IdentitySpec &s = B.add("hecke-1.4", "\"we expanded Hecke-type double sums\"", {"x", "y"}, {ann("x"), ann("y")});
        s.lhs = [](const FormalArgs &a, const Coeff &N) {
            return double_sum({1, 1, 2, true, Parity::none, a("x"), a("y")}, N);
        };
        s.rhs = formal_of(hecke_rhs);
    }
    {
        IdentitySpec &s = B.add("hickerson-1.7", "\"Hickerson's two identities\", same parity", {"x", "y"},
                                {ann("x"), ann("y")});
        s.lhs = [](const FormalArgs &a, const Coeff &N) {
            return double_sum({0, 0, 1, false, Parity::same, a("x"), a("y")}, N);
        };
        s.rhs = formal_of(hickerson_same);
    }
    {
        IdentitySpec &s = B.add("hickerson-1.8", "\"Hickerson's two identities\", different parity", {"x", "y"},
                                {ann("x"), ann("y")});
        s.lhs = [](const FormalArgs &a, const Coeff &N) {
            return double_sum({0, 0, 1, false, Parity::diff, a("x"), a("y")}, N);
        };
        s.rhs = formal_of(hickerson_diff);
    }

    // -- the double sum with denominator and its parity analogs ----------------
    add_variant<Variant::thm1>(B, "thm1", "\"there is a double-sum analog\"; F = G",
                               "\"satisfy the functional equation\"", "prop3.1");
    add_variant<Variant::same>(B, "thm6", "same-parity split: F = G", "same-parity functional equation", "prop6");
    add_variant<Variant::diff>(B, "thm7", "different-parity split: F = G", "different-parity functional equation",
                               "prop7");
    {
        IdentitySpec &s = B.add("thm1-qxy", "negative control: third m-term read with z-argument qxy",
                                {"x", "y", "z"}, {{"x", Hypothesis::not_q_power}, ann("y"), ann("z")});
        s.negative_control = true;
        s.lhs = formal_of(F_of<Variant::thm1>);
        s.rhs = formal_of(G_of<Variant::thm1, true>);
    }

    // -- triple sums -----------------------------------------------------------
    const std::vector<Constraint> all3{ann("x"), ann("y"), ann("z")};
    auto triple = [](TripleParity p) {
        return [p](const FormalArgs &a, const Coeff &N) { return triple_sum({p, a("x"), a("y"), a("z")}, N); };
    };
    {
        IdentitySpec &s = B.add("cor1.2", "\"Restricting $x$ and using the Appell-Lerch function notation\"",
                                {"x", "y", "z"}, all3);
        s.lhs = triple(TripleParity::all);
        s.rhs = formal_of(G_of<Variant::thm1>);
    }
    {
        IdentitySpec &s = B.add("thm1.3", "\"required to have the same parity\"", {"x", "y", "z"}, all3);
        s.lhs = triple(TripleParity::same);
        s.rhs = formal_of(G_of<Variant::same>);
    }
    {
        IdentitySpec &s = B.add("thm1.4", "\"do not all have the same parity\"", {"x", "y", "z"}, all3);
        s.lhs = triple(TripleParity::rs_not_t);
        s.rhs = formal_of(G_of<Variant::diff>);
    }
    {
        IdentitySpec &s = B.add("lemma8.1", "\"straightforward shift of indices\"", {"x", "y", "z"}, all3);
        s.direct = [](const FormalArgs &a, const Coeff &N) { return script_F_shift_check(a("x"), a("y"), a("z"), N); };
    }

    // -- theta functions ---------------------------------------------------------
    {
        IdentitySpec &s = B.generic(
            "eq2.1a", "\"We have the general identities\": j(q^n x) = (-1)^n q^(-binom(n,2)) x^(-n) j(x)", {"x"}, {},
            [](const auto &k, const auto &a) { return k.j(k.q(a.n) * a("x")); },
            [](const auto &k, const auto &a) {
                using Var = typename std::decay_t<decltype(k)>::Var;
                const auto &x = a("x");
                const Var c = sign_var(k, a.n) * k.q(-binom2(a.n)) * vpow(x, -a.n);
                return k.L(c) * k.j(x);
            });
        s.index = {{-3, 3}};
    }
    B.generic(
        "eq2.1b", "\"We have the general identities\": j(x) = j(q/x)", {"x"}, {},
        [](const auto &k, const auto &a) { return k.j(a("x")); },
        [](const auto &k, const auto &a) { return k.j(k.q(1) / a("x")); });
    B.generic(
        "eq2.1b-inv", "\"We have the general identities\": j(x) = -x j(1/x)", {"x"}, {},
        [](const auto &k, const auto &a) { return k.j(a("x")); },
        [](const auto &k, const auto &a) {
            const auto &x = a("x");
            return k.L(-x) * k.j(k.q(0) / x);
        });
    B.generic(
        "eq2.1c", "\"We have the general identities\": j(x;q) = J1 j(x;q^2) j(qx;q^2) / J2^2", {"x"}, {},
        [](const auto &k, const auto &a) { return k.j(a("x")); },
        [](const auto &k, const auto &a) {
            const auto &x = a("x");
            const auto J2 = k.b.J(2);
            return k.b.div(k.b.J(1) * k.j(x, 2) * k.j(k.q(1) * x, 2), J2 * J2);
        });
    auto j_x2 = [](const auto &k, const auto &a) {
        const auto &x = a("x");
        return k.j(x * x, 2);
    };
    B.generic("eq2.1d", "\"We have the general identities\": j(x^2;q^2) = J2 j(x) j(-x) / J1^2", {"x"}, {}, j_x2,
              [](const auto &k, const auto &a) {
                  const auto &x = a("x");
                  const auto J1 = k.b.J(1);
                  return k.b.div(k.b.J(2) * k.j(x) * k.j(-x), J1 * J1);
              });
    {
        IdentitySpec &s = B.generic("eq2.1d-printed", "negative control: denominator read as J1^1", {"x"}, {}, j_x2,
                                    [](const auto &k, const auto &a) {
                                        const auto &x = a("x");
                                        return k.b.div(k.b.J(2) * k.j(x) * k.j(-x), k.b.J(1));
                                    });
        s.negative_control = true;
    }

    // -- Appell-Lerch laws ---------------------------------------------------------
    B.generic("eq2.4a", "\"m(x,q,z)=m(x,q,qz)\"", {"x", "z"}, {}, m_xz,
              [](const auto &k, const auto &a) { return k.b.appell(a("x"), 1, k.q(1) * a("z")); });
    B.generic("eq2.4b", "\"m(x,q,z)=x^{-1}m(x^{-1},q,z^{-1})\"", {"x", "z"}, {}, m_xz,
              [](const auto &k, const auto &a) {
                  const auto one = k.q(0);
                  const auto &x = a("x");
                  return k.L(one / x) * k.b.appell(one / x, 1, one / a("z"));
              });
    B.generic(
        "eq2.4c", "\"m(qx,q,z)=1-xm(x,q,z)\"", {"x", "z"}, {},
        [](const auto &k, const auto &a) { return k.b.appell(k.q(1) * a("x"), 1, a("z")); },
        [](const auto &k, const auto &a) { return k.b.constant(Coeff(1)) - k.L(a("x")) * m_xz(k, a); });
    B.generic("eq2.4d", "\"m(x,q,z)=m(x,q,x^{-1}z^{-1})\"", {"x", "z"}, {}, m_xz,
              [](const auto &k, const auto &a) {
                  const auto &x = a("x");
                  return k.b.appell(x, 1, k.q(0) / (x * a("z")));
              });
    B.generic(
        "prop2.3", "\"the difference between these two quantities is a theta function\"", {"x", "z0", "z1"}, {},
        [](const auto &k, const auto &a) {
            return k.b.appell(a("x"), 1, a("z1")) - k.b.appell(a("x"), 1, a("z0"));
        },
        [](const auto &k, const auto &a) {
            const auto &x = a("x");
            const auto &z0 = a("z0");
            const auto &z1 = a("z1");
            const auto J1 = k.b.J(1);
            return k.L(z0) * k.b.div(J1 * J1 * J1 * k.j(z1 / z0) * k.j(x * z0 * z1),
                                     k.j(z0) * k.j(z1) * k.j(x * z0) * k.j(x * z1));
        });
    B.generic(
        "eq2.9", "\"A specialisation ... that we will use later reads\"", {"y", "z"}, {},
        [](const auto &k, const auto &a) {
            const auto &y = a("y");
            const auto &z = a("z");
            using Var = typename std::decay_t<decltype(k)>::Var;
            const Var q1 = k.q(1);
            const Var u = -(z / (q1 * y));
            return k.b.appell(u, 2, q1 * y) - k.b.appell(u, 2, -y);
        },
        [](const auto &k, const auto &a) {
            const auto &y = a("y");
            const auto &z = a("z");
            const auto q1 = k.q(1);
            const auto J2 = k.b.J(2);
            return k.L(y * q1 / z) * k.b.div(J2 * J2 * J2 * k.j(-q1, 2) * k.j(y * z, 2),
                                             k.j(q1 * y, 2) * k.j(-y, 2) * k.j(-z, 2) * k.j(q1 * z, 2));
        });
    {
        IdentitySpec &s = B.generic(
            "eq2.13", "\"combine the two results into one\"", {"x", "z"}, {},
            [](const auto &k, const auto &a) { return k.b.appell(k.q(a.n) * a("x"), 1, a("z")); },
            [](const auto &k, const auto &a) {
                const auto &x = a("x");
                const std::int64_t n = a.n;
                auto acc = conventional_range_sum(
                    0, n - 1,
                    [&](std::int64_t j) { return k.L(sign_var(k, j) * k.q(j * (n - 1) - binom2(j)) * vpow(x, j)); },
                    k.b.constant(Coeff(0)));
                return acc + k.L(sign_var(k, n) * k.q(binom2(n)) * vpow(x, n)) * m_xz(k, a);
            });
        s.index = {{-3, 3}};
    }
    {
        IdentitySpec &s = B.add("eq2.10", "\"we recall the useful\" reindexing, finitely supported terms", {"x", "y"},
                                {ann("x"), ann("y")});
        s.index = {{0, static_cast<std::int64_t>(kFiniteShifts.size()) - 1}};
        s.direct = [](const FormalArgs &a, const Coeff &N) {
            const auto [R, S] = kFiniteShifts.at(static_cast<std::size_t>(a.n));
            return reindex_shift_check(R, S, a("x"), a("y"), N);
        };
    }
    {
        IdentitySpec &s = B.add("eq2.10-w", "\"we recall the useful\" reindexing, terms with 1/(1 - w q^(r+s))",
                                {"x", "y", "w"}, {ann("x"), ann("y"), {"w", Hypothesis::not_q_power}});
        s.index = {{0, static_cast<std::int64_t>(kConvergentShifts.size()) - 1}};
        s.direct = [](const FormalArgs &a, const Coeff &N) {
            const auto [R, S] = kConvergentShifts.at(static_cast<std::size_t>(a.n));
            return reindex_shift_check(R, S, a("x"), a("y"), N, a("w"));
        };
    }
    return out;
}

} // namespace

const std::vector<IdentitySpec> &catalog()
{
    static const std::vector<IdentitySpec> c = build_catalog();
    return c;
}

const IdentitySpec &find_identity(const std::string &id)
{
    for (const IdentitySpec &s : catalog()) {
        if (s.id == id) {
            return s;
        }
    }
    throw ConfigError("unknown identity id '" + id + "'");
}

} // namespace qseries
