#ifndef QSERIES_MONOMIAL_HPP
#define QSERIES_MONOMIAL_HPP

#include <cstdint>
#include <ostream>
#include <string>

#include <qseries/rational.hpp>

namespace qseries
{

// A specialization x := c q^e of a complex parameter, c != 0.
struct Monomial {
    Coeff c{1};
    Coeff e{0};

    Monomial() = default;
    Monomial(Coeff coeff, Coeff exponent);

    static Monomial q_pow(const Coeff &e)
    {
        return {Coeff(1), e};
    }
    static Monomial constant(const Coeff &c)
    {
        return {c, Coeff(0)};
    }

    // c = 1 and e an integer.
    bool is_integral_power_of_q() const;
    // c = +-1 and e an even integer.
    bool is_pm_even_power() const;
    // c = +-1 and e an odd integer.
    bool is_pm_odd_power() const;
    // c = 1 and e a multiple of m: j(x; q^m) vanishes identically.
    bool is_lattice_point(std::int64_t m) const;

    Monomial pow(std::int64_t k) const;
    Monomial inverse() const;

    std::string str() const;

    friend bool operator==(const Monomial &, const Monomial &) = default;
};

Monomial operator*(const Monomial &a, const Monomial &b);
Monomial operator/(const Monomial &a, const Monomial &b);
Monomial operator-(const Monomial &a);

std::ostream &operator<<(std::ostream &os, const Monomial &m);

} // namespace qseries

#endif
