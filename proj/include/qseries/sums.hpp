#ifndef QSERIES_SUMS_HPP
#define QSERIES_SUMS_HPP

#include <qseries/families.hpp>
#include <qseries/series.hpp>

namespace qseries
{

// Formal expansion of the sum families through q-exponent n.
//
// Each term carries a lower bound L on its q-order: its base exponent plus
// max(0, -d) where d is the exponent inside its 1/(1 - u q^d) factor (the
// d < 0 rewrite starts at q^-d). Terms with L > n are skipped; every emitted
// expansion is checked against its L at runtime.
//
// With absolute set, every coefficient of every term expansion is replaced by
// its absolute value, producing a coefficientwise majorant of the sum.
Series expand(const BilateralSum<Monomial> &s, const Coeff &n, bool absolute = false);
Series expand(const QuadrantSum<Monomial> &s, const Coeff &n, bool absolute = false);
Series expand(const OrthantSum<Monomial> &s, const Coeff &n, bool absolute = false);

// sum_{sg(r)=sg(s)} sg(r) (-1)^{twist (r+s)} q^(alpha binom(r,2) + beta binom(s,2) + gamma rs) x^r y^s
// restricted by parity.
struct DoubleSumSpec {
    std::int64_t alpha = 0;
    std::int64_t beta = 0;
    std::int64_t gamma = 1;
    bool twist = false;
    Parity parity = Parity::none;
    Monomial x, y;

    // The two quadrants (r,s >= 0 and r,s < 0 reindexed) of the sum.
    QuadrantSum<Monomial> positive() const;
    QuadrantSum<Monomial> negative() const;
};

Series double_sum(const DoubleSumSpec &spec, const Coeff &n);

enum class TripleParity { all, same, rs_not_t };

// (sum_{r,s,t>=0} + sum_{r,s,t<0}) q^(rs+rt+st) x^r y^s z^t over the parity class.
struct TripleSumSpec {
    TripleParity parity = TripleParity::all;
    Monomial x, y, z;
};

Series triple_sum(const TripleSumSpec &spec, const Coeff &n, bool absolute = false);

// sum_{r in Z} x^r / (1 - y q^r).
Series kronecker_unilateral(const Monomial &x, const Monomial &y, const Coeff &n);

} // namespace qseries

#endif
