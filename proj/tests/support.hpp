#ifndef QSERIES_TESTS_SUPPORT_HPP
#define QSERIES_TESTS_SUPPORT_HPP

#include <random>
#include <string>

#include <qseries/monomial.hpp>
#include <qseries/series.hpp>

#include "oracle.hpp"

namespace testing
{

using qseries::Coeff;
using qseries::Monomial;
using qseries::Series;

inline Coeff Q(long p, long r = 1)
{
    Coeff c{qseries::BigInt(p), qseries::BigInt(r)};
    c.canonicalize();
    return c;
}

inline Monomial M(const Coeff &c, const Coeff &e)
{
    return Monomial(c, e);
}

inline Monomial qp(long p, long r = 1)
{
    return Monomial::q_pow(Q(p, r));
}

// Terms of s with exponent <= N as an oracle polynomial.
inline oracle::Poly poly_of(const Series &s, const Coeff &N)
{
    oracle::Poly p;
    for (const auto &t : s.terms()) {
        Coeff e(qseries::BigInt(t.exp), qseries::BigInt(s.scale()));
        e.canonicalize();
        oracle::add(p, e, t.coeff, N);
    }
    return p;
}

// First exponent <= N where the two disagree, as text; empty if equal.
inline std::string first_difference(const oracle::Poly &a, const oracle::Poly &b)
{
    auto ia = a.begin();
    auto ib = b.begin();
    while (ia != a.end() || ib != b.end()) {
        if (ib == b.end() || (ia != a.end() && ia->first < ib->first)) {
            return "q^" + ia->first.get_str() + ": " + ia->second.get_str() + " vs 0";
        }
        if (ia == a.end() || ib->first < ia->first) {
            return "q^" + ib->first.get_str() + ": 0 vs " + ib->second.get_str();
        }
        if (ia->second != ib->second) {
            return "q^" + ia->first.get_str() + ": " + ia->second.get_str() + " vs " + ib->second.get_str();
        }
        ++ia;
        ++ib;
    }
    return "";
}

template <class T>
const T &pick(std::mt19937_64 &rng, const std::vector<T> &v)
{
    return v[std::uniform_int_distribution<std::size_t>(0, v.size() - 1)(rng)];
}

} // namespace testing

#endif
