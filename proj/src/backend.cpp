#include <qseries/backend.hpp>

#include <qseries/qfunctions.hpp>
#include <qseries/sums.hpp>

namespace qseries
{

Series FormalBackend::theta(const Monomial &x, std::int64_t m) const
{
    return jacobi_theta(x, m, work_);
}

Series FormalBackend::J(std::int64_t m) const
{
    auto it = jcache_.find(m);
    if (it == jcache_.end()) {
        it = jcache_.emplace(m, J_shorthand(0, m, JKind::eta, work_)).first;
    }
    return it->second;
}

Series FormalBackend::appell(const Monomial &x, std::int64_t m, const Monomial &z) const
{
    return appell_lerch_m(x, z, m, work_);
}

Series FormalBackend::sum(const BilateralSum<Monomial> &s) const
{
    return expand(s, work_);
}

Series FormalBackend::sum(const QuadrantSum<Monomial> &s) const
{
    return expand(s, work_);
}

Series FormalBackend::sum(const OrthantSum<Monomial> &s) const
{
    return expand(s, work_);
}

Series FormalBackend::div(const Series &a, const Series &b) const
{
    return divide(a, b, work_ + Coeff(1));
}

NumericBackend::NumericBackend(Coeff q, Coeff eps) : q_(std::move(q)), eps_(std::move(eps))
{
    check_q(q_);
    if (eps_ <= 0) {
        throw std::invalid_argument("eps must be positive");
    }
}

Certified NumericBackend::theta(const Coeff &x, std::int64_t m) const
{
    return numeric_sum(theta_family(x, m), q_, eps_);
}

Certified NumericBackend::J(std::int64_t m) const
{
    auto it = jcache_.find(m);
    if (it == jcache_.end()) {
        // J_m = j(q^m; q^(3m)).
        it = jcache_.emplace(m, numeric_sum(theta_family(pow(q_, m), 3 * m), q_, eps_)).first;
    }
    return it->second;
}

Certified NumericBackend::appell(const Coeff &x, std::int64_t m, const Coeff &z) const
{
    return numeric_sum(appell_lerch_family(x, z, m), q_, eps_) / theta(z, m);
}

Certified NumericBackend::sum(const BilateralSum<Coeff> &s) const
{
    return numeric_sum(s, q_, eps_);
}

Certified NumericBackend::sum(const QuadrantSum<Coeff> &s) const
{
    return numeric_sum(s, q_, eps_);
}

Certified NumericBackend::sum(const OrthantSum<Coeff> &s) const
{
    return numeric_sum(s, q_, eps_);
}

} // namespace qseries
