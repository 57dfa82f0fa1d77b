#ifndef QSERIES_RATIONAL_HPP
#define QSERIES_RATIONAL_HPP

#include <cstdint>
#include <string>
#include <string_view>

#include <gmpxx.h>

namespace qseries
{

// Exact rational coefficient. gmpxx keeps values canonical (lowest terms,
// positive denominator) after every arithmetic operation.
using Coeff = mpq_class;
using BigInt = mpz_class;

// "p/q" with the denominator always present, e.g. "-3/1".
std::string to_pq(const Coeff &c);

// Accepts "p", "p/q", and decimal/scientific forms such as "-0.25" or "1e-30".
// Throws std::invalid_argument on malformed input.
Coeff parse_rational(std::string_view text);

// c^k for any integer k (k < 0 requires c != 0).
Coeff pow(const Coeff &c, std::int64_t k);

Coeff abs(const Coeff &c);

std::int64_t lcm64(std::int64_t a, std::int64_t b);

// Denominator of an exponent as int64; throws std::overflow_error if it does not fit.
std::int64_t den64(const Coeff &e);

// e * scale as an exact int64 (throws std::domain_error if not integral).
std::int64_t scaled_int(const Coeff &e, std::int64_t scale);

// Largest integer <= c.
BigInt floor(const Coeff &c);
// Smallest integer >= c.
BigInt ceil(const Coeff &c);

bool is_integer(const Coeff &c);

// 2^-bits grid rounding (round-half-away); returns the rounded value.
Coeff round_to_grid(const Coeff &c, unsigned bits);

// Floating approximation for display only.
double approx(const Coeff &c);

} // namespace qseries

#endif
