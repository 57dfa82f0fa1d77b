#include <qseries/rational.hpp>

#include <cctype>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace qseries
{

std::string to_pq(const Coeff &c)
{
    return c.get_num().get_str() + "/" + c.get_den().get_str();
}

namespace
{

BigInt parse_digits(std::string_view s)
{
    if (s.empty()) {
        throw std::invalid_argument("empty integer");
    }
    for (char ch : s) {
        if (!std::isdigit(static_cast<unsigned char>(ch))) {
            throw std::invalid_argument("bad digit in '" + std::string(s) + "'");
        }
    }
    return BigInt(std::string(s), 10);
}

} // namespace

Coeff parse_rational(std::string_view text)
{
    std::string_view s = text;
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) {
        s.remove_prefix(1);
    }
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) {
        s.remove_suffix(1);
    }
    if (s.empty()) {
        throw std::invalid_argument("empty rational");
    }
    bool neg = false;
    if (s.front() == '+' || s.front() == '-') {
        neg = s.front() == '-';
        s.remove_prefix(1);
    }
    Coeff out;
    if (auto slash = s.find('/'); slash != std::string_view::npos) {
        BigInt p = parse_digits(s.substr(0, slash));
        BigInt q = parse_digits(s.substr(slash + 1));
        if (q == 0) {
            throw std::invalid_argument("zero denominator");
        }
        out = Coeff(p, q);
        out.canonicalize();
    } else {
        std::int64_t exp10 = 0;
        if (auto e = s.find_first_of("eE"); e != std::string_view::npos) {
            std::string ex(s.substr(e + 1));
            if (ex.empty()) {
                throw std::invalid_argument("empty exponent");
            }
            std::size_t used = 0;
            exp10 = std::stoll(ex, &used);
            if (used != ex.size()) {
                throw std::invalid_argument("bad exponent");
            }
            s = s.substr(0, e);
        }
        std::string digits;
        if (auto dot = s.find('.'); dot != std::string_view::npos) {
            digits = std::string(s.substr(0, dot)) + std::string(s.substr(dot + 1));
            exp10 -= static_cast<std::int64_t>(s.size() - dot - 1);
            if (digits.empty()) {
                throw std::invalid_argument("bad decimal");
            }
        } else {
            digits = std::string(s);
        }
        BigInt m = parse_digits(digits);
        BigInt p10;
        mpz_ui_pow_ui(p10.get_mpz_t(), 10, static_cast<unsigned long>(exp10 < 0 ? -exp10 : exp10));
        out = exp10 >= 0 ? Coeff(m * p10) : Coeff(m, p10);
        out.canonicalize();
    }
    return neg ? Coeff(-out) : out;
}

Coeff pow(const Coeff &c, std::int64_t k)
{
    if (k == 0) {
        return Coeff(1);
    }
    const auto e = static_cast<unsigned long>(k < 0 ? -k : k);
    BigInt n, d;
    mpz_pow_ui(n.get_mpz_t(), c.get_num_mpz_t(), e);
    mpz_pow_ui(d.get_mpz_t(), c.get_den_mpz_t(), e);
    if (k < 0) {
        if (n == 0) {
            throw std::domain_error("negative power of zero");
        }
        std::swap(n, d);
    }
    Coeff out(n, d);
    out.canonicalize();
    return out;
}

Coeff abs(const Coeff &c)
{
    return c < 0 ? Coeff(-c) : c;
}

std::int64_t lcm64(std::int64_t a, std::int64_t b)
{
    return std::lcm(a, b);
}

std::int64_t den64(const Coeff &e)
{
    if (!e.get_den().fits_slong_p()) {
        throw std::overflow_error("exponent denominator too large");
    }
    return e.get_den().get_si();
}

std::int64_t scaled_int(const Coeff &e, std::int64_t scale)
{
    Coeff v = e * scale;
    if (v.get_den() != 1) {
        throw std::domain_error("exponent " + to_pq(e) + " not a multiple of 1/" + std::to_string(scale));
    }
    if (!v.get_num().fits_slong_p()) {
        throw std::overflow_error("scaled exponent overflow");
    }
    return v.get_num().get_si();
}

BigInt floor(const Coeff &c)
{
    BigInt out;
    mpz_fdiv_q(out.get_mpz_t(), c.get_num_mpz_t(), c.get_den_mpz_t());
    return out;
}

BigInt ceil(const Coeff &c)
{
    BigInt out;
    mpz_cdiv_q(out.get_mpz_t(), c.get_num_mpz_t(), c.get_den_mpz_t());
    return out;
}

bool is_integer(const Coeff &c)
{
    return c.get_den() == 1;
}

Coeff round_to_grid(const Coeff &c, unsigned bits)
{
    if (c.get_den() == 1) {
        return c;
    }
    // floor(c * 2^bits + 1/2) / 2^bits
    BigInt scaled_num = c.get_num();
    mpz_mul_2exp(scaled_num.get_mpz_t(), scaled_num.get_mpz_t(), bits + 1);
    scaled_num += c.get_den();
    BigInt den = c.get_den();
    mpz_mul_2exp(den.get_mpz_t(), den.get_mpz_t(), 1);
    BigInt q;
    mpz_fdiv_q(q.get_mpz_t(), scaled_num.get_mpz_t(), den.get_mpz_t());
    BigInt grid = 1;
    mpz_mul_2exp(grid.get_mpz_t(), grid.get_mpz_t(), bits);
    Coeff out(q, grid);
    out.canonicalize();
    return out;
}

double approx(const Coeff &c)
{
    return c.get_d();
}

} // namespace qseries
