#ifndef QSERIES_KERNELS_HPP
#define QSERIES_KERNELS_HPP

#include <cstdint>
#include <optional>
#include <string>

#include <qseries/backend.hpp>
#include <qseries/families.hpp>

namespace qseries
{

// thm1: the plain double sum with 1/(1 - x q^(s+t)); same/diff: the
// even/odd-split forms behind the same-parity and different-parity triple sums.
enum class Variant { thm1, same, diff };
enum class Part { full, g1, g2 };

std::string to_string(Variant v);
Variant variant_from_string(const std::string &s);

// qxy selects the misprinted z-argument qxy in the third Appell-Lerch term of
// the thm1 G side; it exists only as a negative control.
struct KernelOptions {
    bool qxy = false;
};

// Kernel formulas over a backend B (see backend.hpp).
template <class B>
struct Kernels {
    using Var = typename B::Var;
    using Value = typename B::Value;

    const B &b;

    Value L(const Var &v) const
    {
        return b.lift(v);
    }
    Value j(const Var &v, std::int64_t m = 1) const
    {
        return b.theta(v, m);
    }
    Var q(std::int64_t e) const
    {
        return b.q(e);
    }

    // J1^3 j(uv) / (j(u) j(v)), the Kronecker theta quotient.
    Value kronecker_quotient(const Var &u, const Var &v) const
    {
        const Value J1 = b.J(1);
        return b.div(J1 * J1 * J1 * j(u * v), j(u) * j(v));
    }

    // J4^3 j(uv; q^4) / (j(u; q^4) j(v; q^4)).
    Value quartic_quotient(const Var &u, const Var &v) const
    {
        const Value J4 = b.J(4);
        return b.div(J4 * J4 * J4 * j(u * v, 4), j(u, 4) * j(v, 4));
    }

    Value F(Variant v, const Var &x, const Var &y, const Var &z) const
    {
        using O = OrthantSum<Var>;
        using DD = DiagonalDenominator<Var>;
        const Var one = one_of<Var>();
        switch (v) {
        case Variant::thm1:
            return b.sum(O{one, Coeff(0), Coeff(1), Coeff(0), Coeff(0), y, z, DD{x, Coeff(1), Coeff(0)}});
        case Variant::same: {
            const Var y2 = y * y, z2 = z * z, x2 = x * x;
            return b.sum(O{one, Coeff(0), Coeff(4), Coeff(0), Coeff(0), y2, z2, DD{x2, Coeff(4), Coeff(0)}}) +
                   b.sum(O{x * y * z, Coeff(3), Coeff(4), Coeff(4), Coeff(4), y2, z2, DD{x2, Coeff(4), Coeff(4)}});
        }
        case Variant::diff: {
            const Var y2 = y * y, z2 = z * z, x2 = x * x;
            return b.sum(O{z, Coeff(0), Coeff(4), Coeff(2), Coeff(0), y2, z2, DD{x2, Coeff(4), Coeff(2)}}) +
                   b.sum(O{x * y, Coeff(1), Coeff(4), Coeff(2), Coeff(4), y2, z2, DD{x2, Coeff(4), Coeff(2)}});
        }
        }
        throw std::logic_error("bad variant");
    }

    // sum_k (-1)^k q^(k^2) w^k / (1 + q^(2k) u).
    Value ksum_thm1(const Var &w, const Var &u) const
    {
        return b.sum(BilateralSum<Var>{one_of<Var>(), Coeff(0), 2, Coeff(1), -w,
                                       LinearDenominator<Var>{-u, Coeff(2), Coeff(0)}});
    }
    // sum_k q^(k^2 - k) w^k / (1 - q^(2k-1) u).
    Value ksum_odd(const Var &w, const Var &u) const
    {
        return b.sum(BilateralSum<Var>{one_of<Var>(), Coeff(0), 2, Coeff(0), w,
                                       LinearDenominator<Var>{u, Coeff(2), Coeff(-1)}});
    }
    // sum_k q^(k^2) w^k / (1 - q^(2k) u).
    Value ksum_even(const Var &w, const Var &u) const
    {
        return b.sum(BilateralSum<Var>{one_of<Var>(), Coeff(0), 2, Coeff(1), w,
                                       LinearDenominator<Var>{u, Coeff(2), Coeff(0)}});
    }

    // J1^3 J2^3 / (j(x) j(y) j(z)) * j(a; q^2) j(b; q^2) j(c; q^2) / (j(d; q^2) j(e; q^2) j(f; q^2)).
    Value theta_block(const Var &x, const Var &y, const Var &z, const Var &a, const Var &bb, const Var &c,
                      const Var &d, const Var &e, const Var &f) const
    {
        const Value J1 = b.J(1), J2 = b.J(2);
        const Value num = J1 * J1 * J1 * J2 * J2 * J2 * j(a, 2) * j(bb, 2) * j(c, 2);
        return b.div(num, j(x) * j(y) * j(z) * j(d, 2) * j(e, 2) * j(f, 2));
    }

    Value G2(Variant v, const Var &x, const Var &y, const Var &z) const
    {
        switch (v) {
        case Variant::thm1:
            return Coeff(-2) * theta_block(x, y, z, x * y, x * z, y * z, -x, -y, -z);
        case Variant::same:
            return theta_block(x, y, z, x * y, x * z, y * z, -x, -y, -z);
        case Variant::diff: {
            const Var qq = q(1);
            return -(L(z) * theta_block(x, y, z, x * y, qq * x * z, qq * y * z, -(qq * x), -(qq * y), -z));
        }
        }
        throw std::logic_error("bad variant");
    }

    Value G1(Variant v, const Var &x, const Var &y, const Var &z) const
    {
        const Value J1 = b.J(1), J2 = b.J(2), J4 = b.J(4);
        switch (v) {
        case Variant::thm1: {
            // j(uv; q^2) / (j(u) j(v)) * J1^4 / J2^2 * sum_k (-1)^k q^(k^2) (uv)^k / (1 + q^(2k) w)
            const Value c = b.div(J1 * J1 * J1 * J1, J2 * J2);
            auto part = [&](const Var &u, const Var &vv, const Var &w) {
                return b.div(j(u * vv, 2), j(u) * j(vv)) * c * ksum_thm1(u * vv, w);
            };
            return part(y, z, x) + part(x, y, z) + part(x, z, y);
        }
        case Variant::same: {
            // j(uv; q^2) / (j(u^2; q^4) j(v^2; q^4)) * J4^4 / J2^2 * sum_k q^(k^2-k) (uv)^k / (1 - q^(2k-1) w)
            const Value c = b.div(J4 * J4 * J4 * J4, J2 * J2);
            auto part = [&](const Var &u, const Var &vv, const Var &w) {
                return b.div(j(u * vv, 2), j(u * u, 4) * j(vv * vv, 4)) * c * ksum_odd(u * vv, w);
            };
            return part(y, z, x) + part(x, z, y) + part(x, y, z);
        }
        case Variant::diff: {
            const Value c = b.div(J4 * J4 * J4 * J4, J2 * J2);
            const Var qq = q(1), q2 = q(2);
            const Value t1 = L(z) * b.div(j(qq * y * z, 2), j(q2 * y * y, 4) * j(z * z, 4)) * c * ksum_even(y * z, x);
            const Value t2 = L(z) * b.div(j(qq * x * z, 2), j(q2 * x * x, 4) * j(z * z, 4)) * c * ksum_even(x * z, y);
            const Value t3 = L(qq / (x * y)) * b.div(j(x * y, 2), j(q2 * x * x, 4) * j(q2 * y * y, 4)) * c *
                             ksum_odd(x * y, z);
            return t1 + t2 - t3;
        }
        }
        throw std::logic_error("bad variant");
    }

    Value G_full(Variant v, const Var &x, const Var &y, const Var &z, KernelOptions opt = {}) const
    {
        const Var qq = q(1);
        switch (v) {
        case Variant::thm1: {
            const Var third = opt.qxy ? qq * x * y : qq * x * z;
            return kronecker_quotient(y, z) * b.appell(-(qq * x) / (y * z), 2, qq * y * z) +
                   kronecker_quotient(x, y) * b.appell(-(qq * z) / (x * y), 2, qq * x * y) +
                   kronecker_quotient(x, z) * b.appell(-(qq * y) / (x * z), 2, third) + G2(v, x, y, z);
        }
        case Variant::same:
            return quartic_quotient(y * y, z * z) * b.appell(-(qq * x) / (y * z), 2, -(y * z)) +
                   quartic_quotient(x * x, z * z) * b.appell(-(qq * y) / (x * z), 2, -(x * z)) + G2(v, x, y, z) +
                   quartic_quotient(x * x, y * y) * b.appell(-(qq * z) / (x * y), 2, -(x * y));
        case Variant::diff: {
            const Var q2 = q(2);
            const Value J4 = b.J(4);
            const Value J43 = J4 * J4 * J4;
            const Value t1 = L(z) * b.div(J43 * j(q2 * y * y * z * z, 4), j(q2 * y * y, 4) * j(z * z, 4)) *
                             b.appell(-(qq * x) / (y * z), 2, -(qq * y * z));
            const Value t2 = L(z) * b.div(J43 * j(q2 * x * x * z * z, 4), j(q2 * x * x, 4) * j(z * z, 4)) *
                             b.appell(-(qq * y) / (x * z), 2, -(qq * x * z));
            const Value t4 = L(qq / (x * y)) * b.div(J43 * j(x * x * y * y, 4), j(q2 * x * x, 4) * j(q2 * y * y, 4)) *
                             b.appell(-(qq * z) / (x * y), 2, -(x * y));
            return t1 + t2 + G2(v, x, y, z) - t4;
        }
        }
        throw std::logic_error("bad variant");
    }

    Value G(Variant v, Part p, const Var &x, const Var &y, const Var &z, KernelOptions opt = {}) const
    {
        switch (p) {
        case Part::full:
            return G_full(v, x, y, z, opt);
        case Part::g1:
            return G1(v, x, y, z);
        case Part::g2:
            return G2(v, x, y, z);
        }
        throw std::logic_error("bad part");
    }

    // The theta combination R with M(q^2 x) = (xq/yz) M(x) + R for M in {F, G}.
    Value fe_rhs(Variant v, const Var &x, const Var &y, const Var &z) const
    {
        const Var qq = q(1);
        const Value c = L(x * qq / (y * z));
        switch (v) {
        case Variant::thm1:
            return kronecker_quotient(y, z) - c * kronecker_quotient(x, y) - c * kronecker_quotient(x, z);
        case Variant::same:
            return quartic_quotient(y * y, z * z) - c * quartic_quotient(x * x, y * y) -
                   c * quartic_quotient(x * x, z * z);
        case Variant::diff: {
            const Var q2 = q(2);
            return L(z) * quartic_quotient(q2 * y * y, z * z) -
                   L(x * qq / y) * b.div(b.J(4) * b.J(4) * b.J(4) * j(q2 * x * x * z * z, 4),
                                         j(q2 * x * x, 4) * j(z * z, 4)) +
                   L(q2 / (z * y * y)) * b.div(b.J(4) * b.J(4) * b.J(4) * j(x * x * y * y, 4),
                                               j(q2 * x * x, 4) * j(q2 * y * y, 4));
        }
        }
        throw std::logic_error("bad variant");
    }
};

template <class B>
Kernels<B> kernels(const B &b)
{
    return Kernels<B>{b};
}

// Formal kernels through q^order. Each checks the variant's genericity clause
// on x first (thm1: x not an integral power of q; same: x != +-q^(2n);
// diff: x != +-q^(2n+1)) and throws PoleAtSpecialization naming it.
void check_kernel_genericity(Variant v, const Monomial &x);
Series F_kernel(Variant v, const Monomial &x, const Monomial &y, const Monomial &z, const Coeff &order);
Series G_kernel(Variant v, Part p, const Monomial &x, const Monomial &y, const Monomial &z, const Coeff &order,
                KernelOptions opt = {});
Series fe_rhs_kernel(Variant v, const Monomial &x, const Monomial &y, const Monomial &z, const Coeff &order);

// J1^3 j(xy) / (j(x) j(y)) through q^order.
Series kronecker_rhs(const Monomial &x, const Monomial &y, const Coeff &order);

// Reindexing of sg-weighted double sums:
//   sum sg(r) c(r,s) = sum sg(r) c(r+R,s+S) + sum_{r=0}^{R-1} sum_s c(r,s) + sum_{s=0}^{S-1} sum_r c(r,s),
// with the range convention for negative R, S. Without w the term family is
// c(r,s) = q^(rs) x^r y^s restricted to |r|, |s| <= 8, making every sum finite
// (the unrestricted row sums diverge). With w the family is the convergent
// c(r,s) = q^(rs) x^r y^s / (1 - w q^(r+s)), whose row and column sums converge
// only for R, S in {0, 1}; other shifts throw DivergentSpec.
DiffReport reindex_shift_check(std::int64_t R, std::int64_t S, const Monomial &x, const Monomial &y,
                               const Coeff &order, const std::optional<Monomial> &w = std::nullopt);

// F(x,y,z) - x F(x,qy,qz) against J1^3 j(yz) / (j(y) j(z)), F the plus-form triple sum.
DiffReport script_F_shift_check(const Monomial &x, const Monomial &y, const Monomial &z, const Coeff &order);

} // namespace qseries

#endif
