#include <doctest.h>

#include <random>

#include <qseries/error.hpp>
#include <qseries/qfunctions.hpp>

#include "support.hpp"

using namespace qseries;
using testing::M;
using testing::poly_of;
using testing::Q;
using testing::qp;

namespace
{

std::string diff(const Series &s, const oracle::Poly &o, const Coeff &N)
{
    return testing::first_difference(poly_of(s, N), o);
}

bool equal_to(const Series &a, const Series &b, const Coeff &N)
{
    return eq_upto(a, b, N).equal;
}

Series J(std::int64_t m, const Coeff &N)
{
    return J_shorthand(0, m, JKind::eta, N);
}

} // namespace

TEST_CASE("pochhammer_finite")
{
    CHECK(diff(pochhammer_finite(qp(1, 2), 2, 10), oracle::poch(1, Q(1, 2), 2, 10), 10).empty());
    CHECK(equal_to(pochhammer_finite(qp(1, 2), 2, 10),
                   Series::from_terms(2, 20, {{0, 1}, {1, -1}, {3, -1}, {4, 1}}), 10));
    CHECK(equal_to(pochhammer_finite(M(3, Q(2, 7)), 0, 10), Series::constant(1), 10));
    CHECK(equal_to(pochhammer_finite(M(2, 0), 1, 10), Series::constant(-1), 10));
}

TEST_CASE("pochhammer_inf")
{
    CHECK(diff(pochhammer_inf(qp(1), 12), oracle::euler(1, 12), 12).empty());
    CHECK(equal_to(pochhammer_inf(qp(13), 12), Series::constant(1), 12));
    // (-q; q)_inf through q^4: 1 + q + q^2 + 2q^3 + 2q^4
    const Series s = pochhammer_inf(M(-1, 1), 4);
    CHECK(diff(s, oracle::poch(-1, 1, 4, 4), 4).empty());
    CHECK(s.coeff_at(3) == 2);
    CHECK(s.coeff_at(4) == 2);
    CHECK_THROWS_AS(pochhammer_inf(qp(-1, 2), 4), NegativeExponentProduct);
}

TEST_CASE("jacobi_theta")
{
    CHECK(jacobi_theta(qp(1), 1, 10).empty());
    CHECK(jacobi_theta(qp(1), 1, 10, ThetaForm::sum).empty());
    CHECK(diff(jacobi_theta(qp(1), 3, 12), oracle::euler(1, 12), 12).empty());
    // j(-1; q) = 2 J2^2 / J1
    const Series lhs = jacobi_theta(M(-1, 0), 1, 15);
    const Series rhs = Coeff(2) * J(2, 15) * J(2, 15) * invert(J(1, 15));
    CHECK(equal_to(lhs, rhs, 15));
}

TEST_CASE("J shorthands")
{
    const Coeff N = 16;
    const Series J1 = J(1, N), J2 = J(2, N), J4 = J(4, N);
    CHECK(diff(J1, oracle::euler(1, 12), 12).empty());
    CHECK(J1.coeff_at(12) == -1);
    CHECK(J1.coeff_at(7) == 1);
    // Jbar_{0,2} = 2 J4^2 / J2 and Jbar_{1,2} = J2^5 / (J1^2 J4^2)
    CHECK(equal_to(J_shorthand(0, 2, JKind::bar, N), Coeff(2) * J4 * J4 * invert(J2), N));
    CHECK(equal_to(J_shorthand(1, 2, JKind::bar, N), J2 * J2 * J2 * J2 * J2 * invert(J1 * J1 * J4 * J4), N));
    CHECK(equal_to(J_shorthand(1, 3, JKind::plain, N), J1, N));
}

TEST_CASE("theta product form equals the lattice sum for random arguments")
{
    std::mt19937_64 rng(40);
    const std::vector<Coeff> cs{1, -1, 2, -2, 3, Q(1, 2), Q(-1, 3)};
    const std::vector<Coeff> es{0, Q(1, 2), Q(1, 3), Q(2, 5), Q(3, 7), Q(5, 8), Q(-7, 4), Q(9, 2), 2};
    const Coeff N = 40;
    int checked = 0;
    while (checked < 50) {
        const Monomial x = M(testing::pick(rng, cs), testing::pick(rng, es));
        const std::int64_t m = std::uniform_int_distribution<int>(1, 4)(rng);
        if (x.is_lattice_point(m)) {
            continue;
        }
        const Series prod = jacobi_theta(x, m, N, ThetaForm::product);
        const Series sum = jacobi_theta(x, m, N, ThetaForm::sum);
        const oracle::Poly ref = oracle::theta_sum(x.c, x.e, m, N);
        INFO("x = ", x.str(), ", m = ", m);
        CHECK(diff(prod, ref, N) == "");
        CHECK(diff(sum, ref, N) == "");
        ++checked;
    }
}

TEST_CASE("theta functional equations")
{
    const Coeff N = 20;
    const Monomial x = M(2, Q(1, 3));
    const Series jx = jacobi_theta(x, 1, N + 10);
    for (std::int64_t n = -3; n <= 3; ++n) {
        // j(q^n x) = (-1)^n q^(-binom(n,2)) x^(-n) j(x)
        const Series lhs = jacobi_theta(x * Monomial::q_pow(n), 1, N);
        const Monomial f = Monomial(n % 2 == 0 ? 1 : -1, Q(-n * (n - 1), 2)) * x.pow(-n);
        CHECK(equal_to(lhs, mul_monomial(jx, f.c, f.e), N));
    }
    CHECK(equal_to(jx, jacobi_theta(qp(1) / x, 1, N), N));
    CHECK(equal_to(jx, mul_monomial(jacobi_theta(x.inverse(), 1, N + 1), -x.c, x.e), N));
}

TEST_CASE("appell_lerch_m against direct bilateral summation")
{
    // m(q^(1/2), q, q^(1/3)) through q^5, r in [-12, 12]
    const Series m = appell_lerch_m(qp(1, 2), qp(1, 3), 1, 5);
    CHECK(diff(m, oracle::appell_m(1, Q(1, 2), 1, Q(1, 3), 1, 12, 5, 2), 5) == "");
    const Series m2 = appell_lerch_m(M(-2, Q(2, 5)), M(3, Q(1, 7)), 2, 8);
    CHECK(diff(m2, oracle::appell_m(-2, Q(2, 5), 3, Q(1, 7), 2, 14, 8, 3), 8) == "");
}

TEST_CASE("appell_lerch_m x-shift law")
{
    // m(qx, q, z) = 1 - x m(x, q, z)
    const Coeff N = 20;
    const Monomial x = qp(1, 3), z = qp(1, 5);
    const Series lhs = appell_lerch_m(qp(1) * x, z, 1, N);
    const Series rhs = Series::constant(1) - mul_monomial(appell_lerch_m(x, z, 1, N + 1), x.c, x.e);
    CHECK(equal_to(lhs, rhs, N));
}

TEST_CASE("appell_lerch_m contract")
{
    CHECK_THROWS_AS(appell_lerch_m(qp(1, 2), qp(1), 1, 5), DegenerateZ);
    CHECK_THROWS_AS(appell_lerch_m(qp(1, 2), qp(1, 2), 1, 5), PoleAtSpecialization);
}
