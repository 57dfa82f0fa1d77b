#include <doctest.h>

#include <algorithm>
#include <array>

#include <qseries/error.hpp>
#include <qseries/families.hpp>
#include <qseries/kernels.hpp>
#include <qseries/sums.hpp>

#include "support.hpp"

using namespace qseries;
using testing::M;
using testing::poly_of;
using testing::Q;
using testing::qp;

namespace
{

oracle::Mono om(const Monomial &m)
{
    return {m.c, m.e};
}

std::string diff(const Series &s, const oracle::Poly &o, const Coeff &N)
{
    return testing::first_difference(poly_of(s, N), o);
}

bool equal_to(const Series &a, const Series &b, const Coeff &N)
{
    return eq_upto(a, b, N).equal;
}

auto all_cells = [](std::int64_t, std::int64_t, std::int64_t) { return true; };
auto same_cells = [](std::int64_t r, std::int64_t s, std::int64_t t) { return (r - s) % 2 == 0 && (s - t) % 2 == 0; };
// r = s mod 2, t of the other parity
auto rs_not_t_cells = [](std::int64_t r, std::int64_t s, std::int64_t t) {
    return (r - s) % 2 == 0 && (r - t) % 2 != 0;
};

} // namespace

TEST_CASE("sg and the conventional range sum")
{
    CHECK(sg(0) == 1);
    CHECK(sg(-1) == -1);
    CHECK(sg(5) == 1);
    auto c = [](std::int64_t r) { return Coeff(r + 10); };
    CHECK(conventional_range_sum(1, -1, c, Coeff(0)) == -c(0));
    CHECK(conventional_range_sum(1, 0, c, Coeff(0)) == 0);
    CHECK(conventional_range_sum(0, 2, [](std::int64_t) { return Coeff(1); }, Coeff(0)) == 3);
    CHECK(conventional_range_sum(3, -1, c, Coeff(0)) == -(c(0) + c(1) + c(2)));
}

TEST_CASE("kronecker_unilateral")
{
    const Coeff N = 10;
    const Series lhs = kronecker_unilateral(qp(1, 2), qp(1, 3), N);
    CHECK(lhs.coeff_at(0) == 1);
    CHECK(equal_to(lhs, kronecker_rhs(qp(1, 2), qp(1, 3), N), N));
    // the same sum built by the minus-form lattice (Kronecker's symmetric form)
    CHECK(diff(lhs, oracle::double_lattice(0, 0, 1, false, 0, {1, Q(1, 2)}, {1, Q(1, 3)}, N), N) == "");
    CHECK_THROWS_AS(kronecker_unilateral(qp(1, 2), M(1, 0), N), PoleAtSpecialization);
    // y = 2: constant term from the r = 0 term -1 plus the inverted factors
    const Series two = kronecker_unilateral(qp(1, 2), M(2, 0), 0);
    CHECK(two.coeff_at(0) == kronecker_rhs(qp(1, 2), M(2, 0), 0).coeff_at(0));
    // direct enumeration of sum_r x^r / (1 - 2 q^r), each factor expanded on its own
    oracle::Poly ref;
    for (std::int64_t r = -20; r <= 20; ++r) {
        const Coeff shift = Q(r, 2);
        for (const auto &[e, c] : oracle::geom(2, r, Coeff(2 - shift))) {
            oracle::add(ref, Coeff(e + shift), c, 2);
        }
    }
    CHECK(oracle::coeff(ref, 0) == -1);
    CHECK(diff(kronecker_unilateral(qp(1, 2), M(2, 0), 2), ref, 2) == "");
    CHECK(two.coeff_at(0) == -1);
}

TEST_CASE("double sums match lattice enumeration")
{
    const Coeff N = 12;
    struct Case {
        DoubleSumSpec spec;
        int parity;
    };
    const std::vector<std::pair<Monomial, Monomial>> points{
        {qp(1, 2), qp(1, 3)}, {M(2, Q(2, 5)), M(-1, Q(3, 7))}, {M(Q(1, 2), Q(5, 8)), qp(1, 2)}};
    for (const auto &[x, y] : points) {
        const std::vector<Case> cases{{{0, 0, 1, false, Parity::none, x, y}, 0},
                                      {{1, 1, 2, true, Parity::none, x, y}, 0},
                                      {{0, 0, 1, false, Parity::same, x, y}, 1},
                                      {{0, 0, 1, false, Parity::diff, x, y}, 2}};
        for (const Case &c : cases) {
            INFO("x = ", x.str(), " y = ", y.str(), " alpha = ", c.spec.alpha, " parity = ", c.parity);
            const oracle::Poly ref = oracle::double_lattice(c.spec.alpha, c.spec.beta, c.spec.gamma, c.spec.twist,
                                                            c.parity, om(x), om(y), N);
            CHECK(diff(double_sum(c.spec, N), ref, N) == "");
        }
    }
}

TEST_CASE("symmetric Kronecker form at x = y = q^(1/2)")
{
    const Series s = double_sum({0, 0, 1, false, Parity::none, qp(1, 2), qp(1, 2)}, 5);
    CHECK(s.coeff_at(0) == 0);
    CHECK(s.coeff_at(Q(1, 2)) == 0);
    CHECK(s.empty());
    const Series t = double_sum({0, 0, 1, false, Parity::none, qp(1, 2), qp(1, 3)}, 0);
    CHECK(t.coeff_at(0) == 1);
    CHECK(kronecker_rhs(qp(1, 2), qp(1, 3), 0).coeff_at(0) == 1);
}

TEST_CASE("triple sums match lattice enumeration")
{
    const Coeff N = 10;
    const std::vector<std::array<Monomial, 3>> points{{qp(1, 2), qp(1, 2), qp(1, 2)},
                                                      {qp(1, 3), M(-1, Q(1, 2)), M(2, Q(2, 5))},
                                                      {M(Q(1, 2), Q(3, 7)), qp(5, 8), M(-2, Q(1, 3))}};
    for (const auto &[x, y, z] : points) {
        INFO("x = ", x.str(), " y = ", y.str(), " z = ", z.str());
        CHECK(diff(triple_sum({TripleParity::all, x, y, z}, N), oracle::triple_lattice(om(x), om(y), om(z), N, all_cells),
                   N) == "");
        CHECK(diff(triple_sum({TripleParity::same, x, y, z}, N),
                   oracle::triple_lattice(om(x), om(y), om(z), N, same_cells), N) == "");
        CHECK(diff(triple_sum({TripleParity::rs_not_t, x, y, z}, N),
                   oracle::triple_lattice(om(x), om(y), om(z), N, rs_not_t_cells), N) == "");
    }
    CHECK(triple_sum({TripleParity::all, qp(1, 2), qp(1, 2), qp(1, 2)}, 1).coeff_at(0) == 1);
}

TEST_CASE("rs_not_t filter keeps only the intended cells")
{
    // incommensurable exponents make every lattice cell its own term
    const Monomial x = qp(1, 11), y = qp(1, 101), z = qp(1, 1009);
    const Coeff N = 6;
    const Series s = triple_sum({TripleParity::rs_not_t, x, y, z}, N);
    std::size_t seen = 0;
    for (std::int64_t r = -6; r <= 6; ++r) {
        for (std::int64_t a = -6; a <= 6; ++a) {
            for (std::int64_t t = -6; t <= 6; ++t) {
                const bool orthant = (r >= 0 && a >= 0 && t >= 0) || (r < 0 && a < 0 && t < 0);
                const Coeff e = Coeff(r * a + r * t + a * t) + x.e * r + y.e * a + z.e * t;
                if (!orthant || e > N) {
                    continue;
                }
                ++seen;
                CHECK((s.coeff_at(e) != 0) == rs_not_t_cells(r, a, t));
            }
        }
    }
    CHECK(seen > 50);
}

TEST_CASE("thm1 F kernel equals the lattice sum of its defining triple series")
{
    // 1/(1 - x q^(s+t)) expanded geometrically in r turns F into the plus-form triple sum
    const Coeff N = 12;
    const Monomial x = qp(1, 3), y = qp(1, 2), z = qp(2, 5);
    CHECK(diff(F_kernel(Variant::thm1, x, y, z, N), oracle::triple_lattice(om(x), om(y), om(z), N, all_cells), N) ==
          "");
}

TEST_CASE("kernel symmetries")
{
    const Coeff N = 10;
    const Monomial x = qp(1, 3), y = M(-1, Q(1, 2)), z = M(2, Q(2, 5));
    CHECK(equal_to(F_kernel(Variant::thm1, x, y, z, N), F_kernel(Variant::thm1, x, z, y, N), N));
    CHECK(equal_to(G_kernel(Variant::thm1, Part::full, x, y, z, N), G_kernel(Variant::thm1, Part::full, x, z, y, N),
                   N));
    const Series base = triple_sum({TripleParity::all, x, y, z}, N);
    const std::array<Monomial, 3> v{x, y, z};
    std::array<int, 3> perm{0, 1, 2};
    do {
        CHECK(equal_to(triple_sum({TripleParity::all, v[perm[0]], v[perm[1]], v[perm[2]]}, N), base, N));
    } while (std::next_permutation(perm.begin(), perm.end()));
}

TEST_CASE("parity splitting of the triple sum")
{
    const Coeff N = 10;
    const Monomial x = qp(1, 3), y = M(-1, Q(1, 2)), z = M(2, Q(2, 5));
    const Series split = triple_sum({TripleParity::same, x, y, z}, N) +
                         triple_sum({TripleParity::rs_not_t, x, y, z}, N) +
                         triple_sum({TripleParity::rs_not_t, y, z, x}, N) +
                         triple_sum({TripleParity::rs_not_t, z, x, y}, N);
    CHECK(equal_to(split, triple_sum({TripleParity::all, x, y, z}, N), N));
}

TEST_CASE("same-parity split form agrees with the same-parity triple sum")
{
    const Coeff N = 15;
    const Monomial x = qp(1, 3), y = qp(1, 2), z = qp(2, 5);
    CHECK(equal_to(F_kernel(Variant::same, x, y, z, N), triple_sum({TripleParity::same, x, y, z}, N), N));
    CHECK(equal_to(F_kernel(Variant::diff, x, y, z, N), triple_sum({TripleParity::rs_not_t, x, y, z}, N), N));
}

TEST_CASE("kernel genericity")
{
    CHECK_THROWS_AS(F_kernel(Variant::thm1, M(1, 2), qp(1, 2), qp(2, 5), 5), PoleAtSpecialization);
    CHECK_THROWS_AS(F_kernel(Variant::same, M(-1, 2), qp(1, 2), qp(2, 5), 5), PoleAtSpecialization);
    CHECK_THROWS_AS(F_kernel(Variant::diff, M(-1, 1), qp(1, 2), qp(2, 5), 5), PoleAtSpecialization);
    CHECK_NOTHROW(F_kernel(Variant::same, M(1, 1), qp(1, 2), qp(2, 5), 5));
    CHECK_THROWS_AS(kronecker_rhs(qp(1, 2), M(1, 0), 5), PoleAtSpecialization);
}

TEST_CASE("reindexing of sg-weighted double sums")
{
    CHECK(reindex_shift_check(0, 0, qp(1, 2), qp(1, 3), 10).equal);
    CHECK(reindex_shift_check(1, 1, qp(1, 2), qp(1, 2), 10).equal);
    CHECK(reindex_shift_check(2, 0, qp(1, 3), qp(1, 2), 10).equal);
    CHECK(reindex_shift_check(-2, 3, qp(1, 3), qp(1, 2), 10).equal);
    CHECK(reindex_shift_check(1, 0, qp(1, 3), qp(1, 2), 10, M(2, Q(1, 5))).equal);
    CHECK_THROWS_AS(reindex_shift_check(2, 0, qp(1, 3), qp(1, 2), 10, M(2, Q(1, 5))), DivergentSpec);
}

TEST_CASE("shift of the plus-form triple sum")
{
    CHECK(script_F_shift_check(qp(1, 3), qp(1, 2), qp(2, 5), 12).equal);
    CHECK(script_F_shift_check(M(-2, Q(3, 7)), M(3, Q(1, 2)), M(-1, Q(5, 8)), 10).equal);
}
