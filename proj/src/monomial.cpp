#include <qseries/monomial.hpp>

#include <stdexcept>

namespace qseries
{

Monomial::Monomial(Coeff coeff, Coeff exponent) : c(std::move(coeff)), e(std::move(exponent))
{
    if (c == 0) {
        throw std::invalid_argument("monomial coefficient must be nonzero");
    }
}

bool Monomial::is_integral_power_of_q() const
{
    return c == 1 && is_integer(e);
}

bool Monomial::is_pm_even_power() const
{
    return (c == 1 || c == -1) && is_integer(e) && mpz_even_p(e.get_num_mpz_t());
}

bool Monomial::is_pm_odd_power() const
{
    return (c == 1 || c == -1) && is_integer(e) && mpz_odd_p(e.get_num_mpz_t());
}

bool Monomial::is_lattice_point(std::int64_t m) const
{
    if (c != 1 || !is_integer(e)) {
        return false;
    }
    return mpz_divisible_ui_p(e.get_num_mpz_t(), static_cast<unsigned long>(m)) != 0;
}

Monomial Monomial::pow(std::int64_t k) const
{
    return {qseries::pow(c, k), Coeff(e * k)};
}

Monomial Monomial::inverse() const
{
    return {Coeff(1 / c), Coeff(-e)};
}

std::string Monomial::str() const
{
    std::string out;
    if (e == 0) {
        return c.get_str();
    }
    if (c == -1) {
        out = "-";
    } else if (c != 1) {
        out = c.get_str() + "*";
    }
    out += "q^(" + e.get_str() + ")";
    return out;
}

Monomial operator*(const Monomial &a, const Monomial &b)
{
    return {Coeff(a.c * b.c), Coeff(a.e + b.e)};
}

Monomial operator/(const Monomial &a, const Monomial &b)
{
    return {Coeff(a.c / b.c), Coeff(a.e - b.e)};
}

Monomial operator-(const Monomial &a)
{
    return {Coeff(-a.c), a.e};
}

std::ostream &operator<<(std::ostream &os, const Monomial &m)
{
    return os << m.str();
}

} // namespace qseries
