#include <doctest.h>

#include <random>

#include <qseries/error.hpp>
#include <qseries/qfunctions.hpp>
#include <qseries/series.hpp>

#include "support.hpp"

using namespace qseries;
using testing::Q;

namespace
{

Series poly(std::int64_t scale, Exp order, std::vector<Term> t)
{
    return Series::from_terms(scale, order, std::move(t));
}

Series exact(std::vector<Term> t)
{
    return Series::from_terms(1, Series::kExact, std::move(t));
}

bool same(const Series &a, const Series &b, const Coeff &n)
{
    return eq_upto(a, b, n).equal;
}

// Small random series: scale 1..3, up to 6 terms with exponents in [-2, 8]
// (scaled units), coefficients in [-3, 3], order 6..12 scaled units.
Series random_series(std::mt19937_64 &rng, bool unit = false)
{
    std::uniform_int_distribution<int> scale(1, 3), count(0, 6), ex(unit ? 1 : -2, 8), co(-3, 3), ord(6, 12);
    const std::int64_t d = scale(rng);
    std::vector<Term> t;
    if (unit) {
        t.push_back({0, Coeff(co(rng) == 0 ? 1 : 2)});
    }
    for (int i = count(rng); i > 0; --i) {
        t.push_back({ex(rng), Coeff(co(rng))});
    }
    return Series::from_terms(d, ord(rng), std::move(t));
}

Coeff window(const Series &a, const Series &b)
{
    return std::min(*a.order_q(), *b.order_q());
}

} // namespace

TEST_CASE("addition")
{
    CHECK(same(exact({{0, 1}, {1, -1}}) + exact({{1, 1}}), Series::constant(1), 10));
    CHECK(same(exact({{0, 1}, {2, 1}}) + Series::zero_exact(), exact({{0, 1}, {2, 1}}), 10));
    const Series half = Series::monomial(Q(1, 2), Q(1, 2));
    const Series sum = half + half;
    CHECK(sum.terms().size() == 1);
    CHECK(same(sum, Series::monomial(1, Q(1, 2)), 10));
    // order of a sum is the smaller order
    CHECK(*(poly(1, 5, {{0, 1}}) + poly(1, 3, {{1, 1}})).order_q() == 3);
}

TEST_CASE("multiplication")
{
    CHECK(same(exact({{0, 1}, {1, -1}}) * exact({{0, 1}, {1, 1}}), exact({{0, 1}, {2, -1}}), 10));
    CHECK(same(exact({{-1, 1}}) * exact({{1, 1}}), Series::constant(1), 10));
    // (1 + q + ... + q^5, order 5) (1 - q) = 1 through q^5
    const Series geo = poly(1, 5, {{0, 1}, {1, 1}, {2, 1}, {3, 1}, {4, 1}, {5, 1}});
    const Series prod = geo * exact({{0, 1}, {1, -1}});
    CHECK(*prod.order_q() == 5);
    CHECK(same(prod, Series::constant(1), 5));
    // Laurent order rule: (q^-1 + O(q^3)) (q^-2 + O(q^4)) is known through q^1
    CHECK(*(poly(1, 3, {{-1, 1}}) * poly(1, 4, {{-2, 1}})).order_q() == 1);
}

TEST_CASE("invert and divide")
{
    const Series inv = invert(exact({{0, 1}, {1, -1}}), Coeff(6));
    CHECK(same(inv, poly(1, 6, {{0, 1}, {1, 1}, {2, 1}, {3, 1}, {4, 1}, {5, 1}, {6, 1}}), 6));
    CHECK(same(invert(Series::constant(2)), Series::constant(Q(1, 2)), 10));
    // q^(1/2) (1 - q) inverts to q^(-1/2) (1 + q + ...)
    const Series s = Series::from_terms(2, Series::kExact, {{1, 1}, {3, -1}});
    const Series r = invert(s, Coeff(4));
    CHECK(r.coeff_at(Q(-1, 2)) == 1);
    CHECK(r.coeff_at(Q(1, 2)) == 1);
    CHECK(r.coeff_at(Q(7, 2)) == 1);
    CHECK(r.coeff_at(Coeff(0)) == 0);
    CHECK_THROWS_AS(invert(exact({{0, 1}, {1, -1}})), PrecisionError);
    CHECK_THROWS_AS(invert(poly(1, 3, {})), EmptySeries);
}

TEST_CASE("geom_expand")
{
    CHECK(same(geom_expand(2, 1, 3), poly(1, 3, {{0, 1}, {1, 2}, {2, 4}, {3, 8}}), 3));
    CHECK(same(geom_expand(3, 0, 5), Series::constant(Q(-1, 2)), 5));
    CHECK(same(geom_expand(2, -1, 3), poly(1, 3, {{1, Q(-1, 2)}, {2, Q(-1, 4)}, {3, Q(-1, 8)}}), 3));
    CHECK_THROWS_AS(geom_expand(1, 0, 3), PoleAtSpecialization);
    // multiplying back by 1 - c q^d gives 1 in all three regimes
    for (const auto &[c, d] : std::vector<std::pair<Coeff, Coeff>>{{2, 1}, {Q(1, 3), Q(1, 2)}, {3, 0}, {-2, -1},
                                                                   {Q(5, 2), Q(-2, 3)}}) {
        const Series g = geom_expand(c, d, 12);
        const Series back = g * (Series::constant(1) - Series::monomial(c, d));
        CHECK(same(back, Series::constant(1), 12 + std::min(Coeff(0), d)));
    }
}

TEST_CASE("dilate")
{
    CHECK(same(dilate(exact({{0, 1}, {1, -1}}), 2), exact({{0, 1}, {2, -1}}), 10));
    CHECK(same(dilate(Series::monomial(1, Q(1, 2)), 2), Series::monomial(1, 1), 10));
    CHECK(same(dilate(exact({{0, 1}, {1, -1}, {3, 1}}), Q(1, 2)),
               Series::from_terms(2, Series::kExact, {{0, 1}, {1, -1}, {3, 1}}), 10));
    std::mt19937_64 rng(7);
    for (int i = 0; i < 50; ++i) {
        const Series a = random_series(rng);
        const Coeff k1 = testing::pick(rng, std::vector<Coeff>{2, 3, Q(1, 2), Q(2, 3)});
        const Coeff k2 = testing::pick(rng, std::vector<Coeff>{2, Q(1, 3), Q(3, 2)});
        const Series lhs = dilate(a, k1 * k2), rhs = dilate(dilate(a, k1), k2);
        CHECK(same(lhs, rhs, window(lhs, rhs)));
        CHECK(same(dilate(a, 1), a, *a.order_q()));
    }
}

TEST_CASE("coeff_at and eq_upto")
{
    const Series euler = pochhammer_inf(Monomial::q_pow(1), 12);
    CHECK(euler.coeff_at(5) == 1);
    CHECK(euler.coeff_at(5) == oracle::coeff(oracle::euler(1, 12), 5));
    const Series lin = poly(1, 5, {{0, 1}, {1, -1}});
    CHECK(lin.coeff_at(0) == 1);
    CHECK_THROWS_AS(lin.coeff_at(7), BeyondTruncation);
    CHECK(eq_upto(exact({{0, 1}, {2, -1}}), exact({{0, 1}, {1, -1}}) * exact({{0, 1}, {1, 1}}), 10).equal);
    CHECK(eq_upto(Series::constant(1), exact({{0, 1}, {40, 1}}), 39).equal);
    const DiffReport d = eq_upto(Series::constant(1), exact({{0, 1}, {40, 1}}), 40);
    CHECK_FALSE(d.equal);
    CHECK(d.exponent == 40);
    CHECK(d.lhs == 0);
    CHECK(d.rhs == 1);
    CHECK_THROWS_AS(eq_upto(lin, Series::constant(1), 6), BeyondTruncation);
}

TEST_CASE("ring axioms on random series")
{
    std::mt19937_64 rng(20240611);
    for (int i = 0; i < 200; ++i) {
        const Series a = random_series(rng), b = random_series(rng), c = random_series(rng);
        const Series s1 = (a + b) + c, s2 = a + (b + c);
        CHECK(same(s1, s2, window(s1, s2)));
        const Series p1 = a * b, p2 = b * a;
        CHECK(same(p1, p2, window(p1, p2)));
        const Series d1 = a * (b + c), d2 = a * b + a * c;
        // both sides are exact through the smaller window
        CHECK(same(d1, d2, window(d1, d2)));
        for (const Series *s : {&s1, &p1, &d1, &d2}) {
            const auto bad = s->check_invariants();
            CHECK_MESSAGE(!bad, bad.value_or(""));
        }
    }
}

TEST_CASE("invert is a two-sided inverse on unit series")
{
    std::mt19937_64 rng(99);
    for (int i = 0; i < 100; ++i) {
        const Series a = random_series(rng, true);
        const Series inv = invert(a);
        const Series one = a * inv;
        CHECK(same(one, Series::constant(1), *one.order_q()));
        CHECK_FALSE(inv.check_invariants());
    }
}

TEST_CASE("monomial genericity predicates")
{
    CHECK(Monomial(1, 2).is_integral_power_of_q());
    CHECK_FALSE(Monomial(2, 2).is_integral_power_of_q());
    CHECK_FALSE(Monomial(1, Q(1, 2)).is_integral_power_of_q());
    CHECK(Monomial(-1, 4).is_pm_even_power());
    CHECK_FALSE(Monomial(-1, 3).is_pm_even_power());
    CHECK(Monomial(-1, 3).is_pm_odd_power());
    CHECK_THROWS(Monomial(0, 1));
}
