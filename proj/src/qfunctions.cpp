#include <qseries/qfunctions.hpp>

#include <vector>

#include <qseries/sums.hpp>

namespace qseries
{

namespace
{

// buf *= prod_{i>=0} (1 - c q^(e + step i)) on dense scaled exponents 0..W.
void poch_into(std::vector<Coeff> &buf, const Coeff &c, Exp e, Exp step, Exp W)
{
    Coeff t;
    for (Exp d = e; d <= W; d += step) {
        if (d == 0) {
            const Coeff f = 1 - c;
            for (auto &v : buf) {
                v *= f;
            }
            continue;
        }
        for (Exp k = W; k >= d; --k) {
            const auto &src = buf[static_cast<std::size_t>(k - d)];
            if (mpq_sgn(src.get_mpq_t()) == 0) {
                continue;
            }
            mpq_mul(t.get_mpq_t(), c.get_mpq_t(), src.get_mpq_t());
            auto &dst = buf[static_cast<std::size_t>(k)];
            mpq_sub(dst.get_mpq_t(), dst.get_mpq_t(), t.get_mpq_t());
        }
        if (step <= 0) {
            break;
        }
    }
}

std::vector<Coeff> unit_buffer(Exp W)
{
    std::vector<Coeff> buf(static_cast<std::size_t>(W + 1));
    buf[0] = 1;
    return buf;
}

} // namespace

Series pochhammer_finite(const Monomial &x, std::int64_t n, const Coeff &order)
{
    if (n < 0) {
        throw std::invalid_argument("pochhammer_finite: n must be nonnegative");
    }
    Series acc = Series::constant(1);
    for (std::int64_t i = 0; i < n; ++i) {
        acc = acc * Series::from_terms(den64(x.e), Series::kExact,
                                       {{0, Coeff(1)}, {scaled_int(x.e + i, den64(x.e)), Coeff(-x.c)}});
    }
    return acc.truncated(order);
}

Series pochhammer_inf(const Monomial &x, const Coeff &order, std::int64_t step)
{
    if (x.e < 0) {
        throw NegativeExponentProduct("infinite product with negative exponent " + x.e.get_str());
    }
    if (step <= 0) {
        throw std::invalid_argument("pochhammer_inf: step must be positive");
    }
    const std::int64_t D = lcm64(den64(x.e), den64(order));
    const Exp W = scaled_floor(order, D);
    if (W < 0) {
        return Series::zero(order);
    }
    auto buf = unit_buffer(W);
    poch_into(buf, x.c, scaled_int(x.e, D), step * D, W);
    return Series::from_dense(D, W, 0, std::move(buf));
}

Series jacobi_theta(const Monomial &x, std::int64_t m, const Coeff &order, ThetaForm form)
{
    if (m <= 0) {
        throw std::invalid_argument("jacobi_theta: modulus must be positive");
    }
    if (x.is_lattice_point(m)) {
        return Series::zero_exact();
    }
    if (form == ThetaForm::sum) {
        return expand(theta_family(x, m), order);
    }
    const std::int64_t n = floor(Coeff(x.e / m)).get_si();
    const Coeff e0 = x.e - m * n;
    const Coeff shift = Coeff(-m * (n * (n - 1) / 2)) - n * e0;
    const Coeff pref = (n % 2 == 0 ? 1 : -1) * pow(x.c, -n);

    const Coeff inner = order - shift;
    const std::int64_t D = lcm64(den64(e0), den64(inner));
    const Exp W = scaled_floor(inner, D);
    if (W < 0) {
        return Series::zero(order);
    }
    // (x0; q^m)_inf (q^m/x0; q^m)_inf (q^m; q^m)_inf with 0 <= e0 < m.
    auto buf = unit_buffer(W);
    const Exp step = m * D;
    poch_into(buf, x.c, scaled_int(e0, D), step, W);
    poch_into(buf, Coeff(1 / x.c), step - scaled_int(e0, D), step, W);
    poch_into(buf, Coeff(1), step, step, W);
    Series s = Series::from_dense(D, W, 0, std::move(buf));
    return mul_monomial(s, pref, shift);
}

Series J_shorthand(std::int64_t a, std::int64_t m, JKind kind, const Coeff &order)
{
    switch (kind) {
    case JKind::plain:
        return jacobi_theta(Monomial::q_pow(Coeff(a)), m, order);
    case JKind::bar:
        return jacobi_theta(Monomial(Coeff(-1), Coeff(a)), m, order);
    case JKind::eta:
        return pochhammer_inf(Monomial::q_pow(Coeff(m)), order, m);
    }
    throw std::invalid_argument("J_shorthand: bad kind");
}

void check_appell_lerch_args(const Monomial &x, const Monomial &z, std::int64_t m)
{
    if (z.is_lattice_point(m)) {
        throw DegenerateZ("z = " + z.str() + " is an integral power of q^" + std::to_string(m));
    }
    if ((x * z).is_lattice_point(m)) {
        throw PoleAtSpecialization("xz = " + (x * z).str() + " is an integral power of q^" + std::to_string(m));
    }
}

Series appell_lerch_m(const Monomial &x, const Monomial &z, std::int64_t m, const Coeff &order)
{
    check_appell_lerch_args(x, z, m);
    const auto fam = appell_lerch_family(x, z, m);
    return to_order(order, [&](const Coeff &w) { return divide(expand(fam, w), jacobi_theta(z, m, w)); });
}

} // namespace qseries
