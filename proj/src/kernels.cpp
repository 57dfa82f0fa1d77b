#include <qseries/kernels.hpp>

#include <qseries/error.hpp>
#include <qseries/qfunctions.hpp>
#include <qseries/sums.hpp>

namespace qseries
{

std::string to_string(Variant v)
{
    switch (v) {
    case Variant::thm1:
        return "thm1";
    case Variant::same:
        return "same";
    case Variant::diff:
        return "diff";
    }
    return "?";
}

Variant variant_from_string(const std::string &s)
{
    if (s == "thm1") {
        return Variant::thm1;
    }
    if (s == "same" || s == "same_parity") {
        return Variant::same;
    }
    if (s == "diff" || s == "diff_parity") {
        return Variant::diff;
    }
    throw std::invalid_argument("unknown kernel variant '" + s + "'");
}

void check_kernel_genericity(Variant v, const Monomial &x)
{
    switch (v) {
    case Variant::thm1:
        if (x.is_integral_power_of_q()) {
            throw PoleAtSpecialization("x is an integral power of q");
        }
        return;
    case Variant::same:
        if (x.is_pm_even_power()) {
            throw PoleAtSpecialization("x is of the form +-q^(2n)");
        }
        return;
    case Variant::diff:
        if (x.is_pm_odd_power()) {
            throw PoleAtSpecialization("x is of the form +-q^(2n+1)");
        }
        return;
    }
}

Series F_kernel(Variant v, const Monomial &x, const Monomial &y, const Monomial &z, const Coeff &order)
{
    check_kernel_genericity(v, x);
    return to_order(order, [&](const Coeff &w) {
        FormalBackend b(w);
        return kernels(b).F(v, x, y, z);
    });
}

Series G_kernel(Variant v, Part p, const Monomial &x, const Monomial &y, const Monomial &z, const Coeff &order,
                KernelOptions opt)
{
    check_kernel_genericity(v, x);
    return to_order(order, [&](const Coeff &w) {
        FormalBackend b(w);
        return kernels(b).G(v, p, x, y, z, opt);
    });
}

Series fe_rhs_kernel(Variant v, const Monomial &x, const Monomial &y, const Monomial &z, const Coeff &order)
{
    return to_order(order, [&](const Coeff &w) {
        FormalBackend b(w);
        return kernels(b).fe_rhs(v, x, y, z);
    });
}

Series kronecker_rhs(const Monomial &x, const Monomial &y, const Coeff &order)
{
    for (const Monomial *v : {&x, &y}) {
        if (v->is_integral_power_of_q()) {
            throw PoleAtSpecialization(v->str() + " is an integral power of q, so j(" + v->str() + "; q) = 0");
        }
    }
    return to_order(order, [&](const Coeff &w) {
        FormalBackend b(w);
        return kernels(b).kronecker_quotient(x, y);
    });
}

namespace
{

constexpr std::int64_t kBox = 8;

Series finite_term(std::int64_t r, std::int64_t s, const Monomial &x, const Monomial &y)
{
    if (r < -kBox || r > kBox || s < -kBox || s > kBox) {
        return Series::zero_exact();
    }
    const Monomial m = Monomial::q_pow(Coeff(r * s)) * x.pow(r) * y.pow(s);
    return Series::monomial(m.c, m.e);
}

// sum_{sg(r)=sg(s)} sg(r) c(r+R, s+S) for the box-restricted family.
Series finite_shifted(std::int64_t R, std::int64_t S, const Monomial &x, const Monomial &y)
{
    Series acc = Series::zero_exact();
    for (std::int64_t r = -kBox - std::abs(R) - 1; r <= kBox + std::abs(R) + 1; ++r) {
        for (std::int64_t s = -kBox - std::abs(S) - 1; s <= kBox + std::abs(S) + 1; ++s) {
            if (sg(r) != sg(s)) {
                continue;
            }
            const Series t = finite_term(r + R, s + S, x, y);
            acc = sg(r) > 0 ? acc + t : acc - t;
        }
    }
    return acc;
}

} // namespace

DiffReport reindex_shift_check(std::int64_t R, std::int64_t S, const Monomial &x, const Monomial &y,
                               const Coeff &order, const std::optional<Monomial> &w)
{
    if (!w) {
        const Series lhs = finite_shifted(0, 0, x, y);
        Series rhs = finite_shifted(R, S, x, y);
        rhs = rhs + conventional_range_sum(
                        0, R - 1,
                        [&](std::int64_t r) {
                            Series row = Series::zero_exact();
                            for (std::int64_t s = -kBox; s <= kBox; ++s) {
                                row = row + finite_term(r, s, x, y);
                            }
                            return row;
                        },
                        Series::zero_exact());
        rhs = rhs + conventional_range_sum(
                        0, S - 1,
                        [&](std::int64_t s) {
                            Series col = Series::zero_exact();
                            for (std::int64_t r = -kBox; r <= kBox; ++r) {
                                col = col + finite_term(r, s, x, y);
                            }
                            return col;
                        },
                        Series::zero_exact());
        return eq_upto(lhs, rhs, order);
    }
    if (R < 0 || R > 1 || S < 0 || S > 1) {
        throw DivergentSpec("reindexing with a denominator: row sums converge only for shifts 0 and 1");
    }
    using O = OrthantSum<Monomial>;
    using DD = DiagonalDenominator<Monomial>;
    // c(r+R, s+S) = q^(RS) x^R y^S q^(rs + S r + R s) x^r y^s / (1 - w q^(R+S) q^(r+s)).
    const Monomial lead = Monomial::q_pow(Coeff(R * S)) * x.pow(R) * y.pow(S);
    const Series lhs = expand(O{Monomial(), Coeff(0), Coeff(1), Coeff(0), Coeff(0), x, y, DD{*w, Coeff(1), Coeff(0)}}, order);
    Series rhs = expand(O{lead, Coeff(0), Coeff(1), Coeff(S), Coeff(R), x, y, DD{*w, Coeff(1), Coeff(R + S)}}, order);
    // Row r = 0: sum_s y^s / (1 - w q^s); column s = 0: sum_r x^r / (1 - w q^r).
    if (R == 1) {
        rhs = rhs + expand(kronecker_family(y, *w), order);
    }
    if (S == 1) {
        rhs = rhs + expand(kronecker_family(x, *w), order);
    }
    return eq_upto(lhs, rhs, order);
}

DiffReport script_F_shift_check(const Monomial &x, const Monomial &y, const Monomial &z, const Coeff &order)
{
    const Monomial q1 = Monomial::q_pow(Coeff(1));
    const Coeff wide = order + abs(x.e) + 1;
    const Series a = triple_sum({TripleParity::all, x, y, z}, wide);
    const Series b = triple_sum({TripleParity::all, x, q1 * y, q1 * z}, wide);
    const Series lhs = (a - mul_monomial(b, x.c, x.e)).truncated(order);
    return eq_upto(lhs, kronecker_rhs(y, z, order), order);
}

} // namespace qseries
