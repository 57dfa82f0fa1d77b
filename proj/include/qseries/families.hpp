#ifndef QSERIES_FAMILIES_HPP
#define QSERIES_FAMILIES_HPP

#include <cstdint>
#include <optional>
#include <type_traits>

#include <qseries/monomial.hpp>
#include <qseries/rational.hpp>

namespace qseries
{

// Parameter types: Monomial for formal expansion, Coeff for numeric
// evaluation at a rational point. Both support *, / and these helpers.
inline Monomial inv(const Monomial &m)
{
    return m.inverse();
}
inline Coeff inv(const Coeff &c)
{
    return 1 / c;
}
inline Monomial powi(const Monomial &m, std::int64_t k)
{
    return m.pow(k);
}
inline Coeff powi(const Coeff &c, std::int64_t k)
{
    return pow(c, k);
}

template <class V>
V one_of()
{
    if constexpr (std::is_same_v<V, Monomial>) {
        return Monomial();
    } else {
        return V(1);
    }
}

// sg(r) = 1 for r >= 0, -1 for r < 0.
constexpr int sg(std::int64_t r) noexcept
{
    return r >= 0 ? 1 : -1;
}

// sum_{r=a}^{b} term(r) with the convention sum_{r=a}^{b} = -sum_{r=b+1}^{a-1}
// for b < a. In particular sum_{r=1}^{0} = 0 and sum_{r=1}^{-1} = -term(0).
template <class T, class F>
T conventional_range_sum(std::int64_t a, std::int64_t b, F &&term, T zero)
{
    T acc = std::move(zero);
    if (a <= b) {
        for (std::int64_t r = a; r <= b; ++r) {
            acc = acc + term(r);
        }
        return acc;
    }
    for (std::int64_t r = b + 1; r <= a - 1; ++r) {
        acc = acc - term(r);
    }
    return acc;
}

// Optional factor 1/(1 - u q^(b*n + d)) attached to a 1D family.
template <class V>
struct LinearDenominator {
    V u;
    Coeff b;
    Coeff d;
};

// sum_{n in Z} coef q^shift * q^(a*binom(n,2) + p*n) * w^n / (1 - u q^(b n + d)).
// Covers theta sums, the Appell-Lerch bilateral sum, Kronecker's unilateral
// sum and the k-sums appearing in the G1 decompositions.
template <class V>
struct BilateralSum {
    V coef = one_of<V>();
    Coeff shift{0};
    std::int64_t a = 0;
    Coeff p{0};
    V w;
    std::optional<LinearDenominator<V>> den;
};

enum class Parity { none, same, diff };

// Optional factor 1/(1 - u q^(p*(i+j) + r)) attached to a 2D family.
template <class V>
struct DiagonalDenominator {
    V u;
    Coeff p;
    Coeff r;
};

// sum_{i,j >= 0} coef q^shift q^(qa i^2 + qb j^2 + cross i j + la i + lb j) y^i z^j / den(i+j),
// with an optional parity filter on (i, j). qa, qb, cross must be >= 0.
template <class V>
struct QuadrantSum {
    V coef = one_of<V>();
    Coeff shift{0};
    Coeff qa{0}, qb{0}, cross{0};
    Coeff la{0}, lb{0};
    V y, z;
    std::optional<DiagonalDenominator<V>> den;
    Parity parity = Parity::none;
};

// sum_{sg(s)=sg(t)} sg(s) coef q^shift q^(cross st + ls s + lt t) y^s z^t / (1 - u q^(p(s+t) + r)),
// i.e. the minus form (sum_{s,t>=0} - sum_{s,t<0}).
template <class V>
struct OrthantSum {
    V coef = one_of<V>();
    Coeff shift{0};
    Coeff cross{1};
    Coeff ls{0}, lt{0};
    V y, z;
    std::optional<DiagonalDenominator<V>> den;

    QuadrantSum<V> positive() const
    {
        return {coef, shift, Coeff(0), Coeff(0), cross, ls, lt, y, z, den, Parity::none};
    }

    // s = -1-i, t = -1-j: cross st + ls s + lt t becomes
    // cross ij + (cross - ls) i + (cross - lt) j + (cross - ls - lt); overall sign -1.
    QuadrantSum<V> negative() const
    {
        std::optional<DiagonalDenominator<V>> nd;
        if (den) {
            nd = DiagonalDenominator<V>{den->u, Coeff(-den->p), Coeff(den->r - 2 * den->p)};
        }
        return {-(coef * inv(y) * inv(z)),
                Coeff(shift + cross - ls - lt),
                Coeff(0),
                Coeff(0),
                cross,
                Coeff(cross - ls),
                Coeff(cross - lt),
                inv(y),
                inv(z),
                nd,
                Parity::none};
    }
};

// sum_k (-1)^k q^(m binom(k,2)) x^k, the sum side of j(x; q^m).
template <class V>
BilateralSum<V> theta_family(const V &x, std::int64_t m)
{
    BilateralSum<V> s;
    s.a = m;
    s.w = -x;
    return s;
}

// Bilateral part of m(x, q^m, z): sum_r (-1)^r q^(m binom(r,2)) z^r / (1 - q^(m(r-1)) x z).
template <class V>
BilateralSum<V> appell_lerch_family(const V &x, const V &z, std::int64_t m)
{
    BilateralSum<V> s;
    s.a = m;
    s.w = -z;
    s.den = LinearDenominator<V>{x * z, Coeff(m), Coeff(-m)};
    return s;
}

// sum_r x^r / (1 - y q^r).
template <class V>
BilateralSum<V> kronecker_family(const V &x, const V &y)
{
    BilateralSum<V> s;
    s.w = x;
    s.den = LinearDenominator<V>{y, Coeff(1), Coeff(0)};
    return s;
}

} // namespace qseries

#endif
