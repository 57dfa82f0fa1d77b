#ifndef QSERIES_SERIES_HPP
#define QSERIES_SERIES_HPP

#include <cstdint>
#include <limits>
#include <optional>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include <qseries/rational.hpp>

namespace qseries
{

// Exponents are stored as int64 numerators over the series scale D, i.e. the
// term (e, c) stands for c * q^(e/D).
using Exp = std::int64_t;

struct Term {
    Exp exp;
    Coeff coeff;
};

// A truncated formal Laurent series in q^(1/D) with exact rational coefficients.
//
// order() is the inclusive truncation bound: every coefficient with exponent
// <= order is exact, nothing is known above it. The sentinel kExact marks a
// Laurent polynomial whose stored terms are the whole value.
//
// Invariants: terms sorted by strictly increasing exponent, no zero coefficient,
// every exponent <= order. Values are immutable once built.
class Series
{
public:
    static constexpr Exp kExact = std::numeric_limits<Exp>::max();

    Series() = default;

    static Series zero_exact(std::int64_t scale = 1);
    // Zero known through q-exponent `order`.
    static Series zero(const Coeff &order);
    static Series constant(const Coeff &c);
    static Series monomial(const Coeff &c, const Coeff &e);
    // Terms may be unsorted, repeated or zero; they are merged and cleaned.
    // Terms above `order` are dropped.
    static Series from_terms(std::int64_t scale, Exp order, std::vector<Term> terms);
    // Dense coefficients for exponents low, low+1, ... (scaled units).
    static Series from_dense(std::int64_t scale, Exp order, Exp low, std::vector<Coeff> &&coeffs);

    std::int64_t scale() const noexcept
    {
        return scale_;
    }
    // Scaled truncation bound (kExact for exact values).
    Exp order() const noexcept
    {
        return order_;
    }
    bool is_exact() const noexcept
    {
        return order_ == kExact;
    }
    // Truncation bound as a q-exponent; nullopt for exact values.
    std::optional<Coeff> order_q() const;
    const std::vector<Term> &terms() const noexcept
    {
        return terms_;
    }
    bool empty() const noexcept
    {
        return terms_.empty();
    }
    // Lowest stored exponent; for an empty truncated series order+1, for an
    // empty exact series kExact.
    Exp low() const noexcept;
    // Lowest exponent as a q-exponent (requires !empty()).
    Coeff low_q() const;

    // Same value over a finer scale; new_scale must be a multiple of scale().
    Series rescaled(std::int64_t new_scale) const;
    // Smallest scale that represents the value and order exactly.
    Series compacted() const;
    // Drop everything above q-exponent n (no-op if already lower).
    Series truncated(const Coeff &n) const;

    // Coefficient of q^e; throws BeyondTruncation when e > order.
    Coeff coeff_at(const Coeff &e) const;

    // Structural validator; returns a description of the first violation.
    std::optional<std::string> check_invariants() const;

private:
    std::int64_t scale_ = 1;
    Exp order_ = kExact;
    std::vector<Term> terms_;
};

// Saturating helpers for orders that may be kExact.
Exp order_add(Exp a, Exp b);

// Exponent window of a Series as a rational; used by builders to convert a
// q-order into scaled units (floor).
Exp scaled_floor(const Coeff &q_exponent, std::int64_t scale);

Series operator-(const Series &a);
Series operator+(const Series &a, const Series &b);
Series operator-(const Series &a, const Series &b);
// Cauchy product; result order = min(order_a + low_b, order_b + low_a).
Series operator*(const Series &a, const Series &b);
Series operator*(const Coeff &c, const Series &a);
// a * c q^e without a full product.
Series mul_monomial(const Series &a, const Coeff &c, const Coeff &e);

// a / s. Result order = min(order_a - low_s, order_s - 2 low_s + low_a, cap).
// cap is a q-exponent and is required when the quotient would otherwise be an
// infinite expansion claimed exact. Throws EmptySeries if s vanishes to its order.
Series divide(const Series &a, const Series &s, const std::optional<Coeff> &cap = std::nullopt);
Series invert(const Series &s, const std::optional<Coeff> &cap = std::nullopt);

// 1/(1 - c q^d) expanded at q = 0, truncated at q-exponent n.
// d > 0: sum c^k q^(kd); d = 0: the constant 1/(1-c); d < 0: -sum_{k>=1} c^-k q^(-kd).
// Throws PoleAtSpecialization when c = 1 and d = 0.
Series geom_expand(const Coeff &c, const Coeff &d, const Coeff &n);

// Substitute q -> q^k (k > 0 rational).
Series dilate(const Series &a, const Coeff &k);

struct DiffReport {
    bool equal = true;
    Coeff exponent;     // first disagreement (q-exponent)
    std::int64_t scale = 1;
    Coeff lhs, rhs;
};

// Compare coefficients for all exponents <= n. Throws BeyondTruncation when n
// exceeds either order.
DiffReport eq_upto(const Series &a, const Series &b, const Coeff &n);

// Sum c_k t^k with t = q^(1/D); the value of the truncated series at q = t^D.
Coeff evaluate_at(const Series &a, const Coeff &t);

std::ostream &operator<<(std::ostream &os, const Series &s);

} // namespace qseries

#endif
