#ifndef QSERIES_QFUNCTIONS_HPP
#define QSERIES_QFUNCTIONS_HPP

#include <cstdint>

#include <qseries/error.hpp>
#include <qseries/families.hpp>
#include <qseries/monomial.hpp>
#include <qseries/series.hpp>

namespace qseries
{

// Runs build(W) for working orders W = n, then larger, until the result is
// exact through q^n, and returns it truncated there. Divisions lose order by
// an amount only known after the fact; this closes that loop.
template <class F>
Series to_order(const Coeff &n, F &&build, int max_rounds = 16)
{
    Coeff w = n;
    for (int round = 0; round < max_rounds; ++round) {
        Series s = build(w);
        const auto got = s.order_q();
        if (!got || *got >= n) {
            return s.truncated(n);
        }
        Coeff deficit = n - *got;
        w += deficit < 1 ? Coeff(1) : deficit;
    }
    throw PrecisionError("working order did not reach the requested order");
}

// prod_{i=0}^{n-1} (1 - x q^i), truncated at q^order.
Series pochhammer_finite(const Monomial &x, std::int64_t n, const Coeff &order);

// (x; q^step)_inf = prod_{i>=0} (1 - x q^(step i)) through q^order; requires e_x >= 0.
Series pochhammer_inf(const Monomial &x, const Coeff &order, std::int64_t step = 1);

enum class ThetaForm { product, sum };

// j(x; q^m) through q^order. The product form first moves x into exponent
// range [0, m) with j(q^(mn) x) = (-1)^n q^(-m binom(n,2)) x^-n j(x).
Series jacobi_theta(const Monomial &x, std::int64_t m, const Coeff &order, ThetaForm form = ThetaForm::product);

enum class JKind { plain, bar, eta };

// J_{a,m} = j(q^a; q^m), bar: j(-q^a; q^m), eta: J_m = (q^m; q^m)_inf (a ignored).
Series J_shorthand(std::int64_t a, std::int64_t m, JKind kind, const Coeff &order);

// Throws DegenerateZ if z is a lattice point of q^m, PoleAtSpecialization if xz is.
void check_appell_lerch_args(const Monomial &x, const Monomial &z, std::int64_t m);

// m(x, q^m, z) through q^order.
Series appell_lerch_m(const Monomial &x, const Monomial &z, std::int64_t m, const Coeff &order);

} // namespace qseries

#endif
