#ifndef QSERIES_BACKEND_HPP
#define QSERIES_BACKEND_HPP

#include <cstdint>
#include <map>

#include <qseries/families.hpp>
#include <qseries/monomial.hpp>
#include <qseries/numeric.hpp>
#include <qseries/series.hpp>

namespace qseries
{

// The closed-form sides are written once against this interface:
//   Var    parameter values (Monomial or Coeff), closed under * / and unary -
//   Value  results (Series or Certified), closed under + - * and Coeff * Value
//   q(e), lift(v), theta(x, m) = j(x; q^m), J(m) = J_m, appell(x, m, z) = m(x, q^m, z),
//   sum(family), div(a, b).
// Backends cache J_m and are not meant to be shared between threads.

// Every Value is exact through q^work; products and quotients may lose order,
// which callers recover with to_order.
class FormalBackend
{
public:
    using Var = Monomial;
    using Value = Series;

    explicit FormalBackend(Coeff work) : work_(std::move(work)) {}

    Var q(std::int64_t e) const
    {
        return Monomial::q_pow(Coeff(e));
    }
    Value lift(const Var &v) const
    {
        return Series::monomial(v.c, v.e);
    }
    Value constant(const Coeff &c) const
    {
        return Series::constant(c);
    }
    Value theta(const Var &x, std::int64_t m) const;
    Value J(std::int64_t m) const;
    Value appell(const Var &x, std::int64_t m, const Var &z) const;
    Value sum(const BilateralSum<Var> &s) const;
    Value sum(const QuadrantSum<Var> &s) const;
    Value sum(const OrthantSum<Var> &s) const;
    Value div(const Value &a, const Value &b) const;

    const Coeff &work() const noexcept
    {
        return work_;
    }

private:
    Coeff work_;
    mutable std::map<std::int64_t, Series> jcache_;
};

// Every primitive is evaluated to within eps at the rational point q.
class NumericBackend
{
public:
    using Var = Coeff;
    using Value = Certified;

    NumericBackend(Coeff q, Coeff eps);

    Var q(std::int64_t e) const
    {
        return pow(q_, e);
    }
    Value lift(const Var &v) const
    {
        return Certified::exact(v);
    }
    Value constant(const Coeff &c) const
    {
        return Certified::exact(c);
    }
    Value theta(const Var &x, std::int64_t m) const;
    Value J(std::int64_t m) const;
    Value appell(const Var &x, std::int64_t m, const Var &z) const;
    Value sum(const BilateralSum<Var> &s) const;
    Value sum(const QuadrantSum<Var> &s) const;
    Value sum(const OrthantSum<Var> &s) const;
    Value div(const Value &a, const Value &b) const
    {
        return a / b;
    }

    const Coeff &qval() const noexcept
    {
        return q_;
    }
    const Coeff &eps() const noexcept
    {
        return eps_;
    }

private:
    Coeff q_;
    Coeff eps_;
    mutable std::map<std::int64_t, Certified> jcache_;
};

} // namespace qseries

#endif
