#ifndef QSERIES_NUMERIC_HPP
#define QSERIES_NUMERIC_HPP

#include <ostream>

#include <qseries/families.hpp>
#include <qseries/rational.hpp>

namespace qseries
{

// A rational approximation with a rigorous absolute error bound:
// the true value lies in [value - bound, value + bound].
struct Certified {
    Coeff value{0};
    Coeff bound{0};

    static Certified exact(const Coeff &v)
    {
        return {v, Coeff(0)};
    }
};

// Grid used to keep rationals small: products and quotients are rounded to
// multiples of 2^-bits and the rounding error joins the bound.
inline constexpr unsigned kGridBits = 240;

Certified operator-(const Certified &a);
Certified operator+(const Certified &a, const Certified &b);
Certified operator-(const Certified &a, const Certified &b);
// |ab - a'b'| <= |a| eb + |b| ea + ea eb.
Certified operator*(const Certified &a, const Certified &b);
Certified operator*(const Coeff &c, const Certified &a);
// Requires |b.value| > b.bound; the error is (ea |b| + |a| eb) / (|b| (|b| - eb)).
// Throws PoleTooClose otherwise.
Certified operator/(const Certified &a, const Certified &b);

std::ostream &operator<<(std::ostream &os, const Certified &c);

// Certified evaluation of the sum families at a rational q with 0 < |q| < 1.
// All q-exponents in the family (shift, p, b, d, and for 2D sums cross, la,
// lb, p, r) must be integers. eps bounds the total error of the result.
// With absolute set, each term is replaced by its coefficientwise majorant
// |C q^(...) w^k| / |1 - |v||, v = u q^(...), the value at |q| of the expansion
// that the formal absolute mode produces, so the result bounds that series.
//
// 1D tail bound. For k >= k0 write the term as
//   T(k) = C q^(a binom(k,2) + p k) w^k / (1 - u q^(b k + d)).
// Once |u q^(bk+d)| <= 1/2 (b > 0) the denominator factor is at most 2; once
// |u q^(bk+d)| >= 2 (b < 0) it is at most 2/|u q^(bk+d)|; for b = 0 it is the
// constant 1/|1 - u q^d|. Hence |T(k)| <= M(k) with
//   M(k+1)/M(k) = r(k) = |q|^(a k + p') |w|,  p' = p, or p - b when b < 0,
// which is nonincreasing in k as a >= 0. When r(k0) < 1,
//   sum_{k >= k0} |T(k)| <= M(k0) / (1 - r(k0)).
// The sum over k < 0 is the same family in k' = -k >= 1 with
// p -> a - p, w -> 1/w, b -> -b.
Certified numeric_sum(const BilateralSum<Coeff> &s, const Coeff &q, const Coeff &eps, bool absolute = false);

// 2D tail bound for cross >= 0, qa = qb = 0, no parity filter. Write
//   T(i,j) = C q^(X ij + la i + lb j) y^i z^j / (1 - U q^(P(i+j) + R)).
// For i + j >= K0, where the denominator is in the regime of the 1D case,
//   |T(i,j)| <= K rho^(ij) alpha^i beta^j,  rho = |q|^X <= 1,
// with alpha = |q|^la |y|, beta = |q|^lb |z| (each times |q|^-P when P < 0).
// Requiring alpha, beta < 1, rows j > T contribute at most
//   K beta^(T+1) / ((1 - alpha)(1 - beta)),
// and inside row j the cells i > S contribute at most
//   K beta^j (alpha rho^j)^(S+1) / (1 - alpha rho^j).
// Cells with i + j < K0 (and T >= K0 ensures they lie in rows <= T) are summed
// exactly.
Certified numeric_sum(const QuadrantSum<Coeff> &s, const Coeff &q, const Coeff &eps, bool absolute = false);
Certified numeric_sum(const OrthantSum<Coeff> &s, const Coeff &q, const Coeff &eps, bool absolute = false);

// Throws NonconvergentPoint unless 0 < |q| < 1.
void check_q(const Coeff &q);

} // namespace qseries

#endif
