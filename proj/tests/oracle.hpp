#ifndef QSERIES_TESTS_ORACLE_HPP
#define QSERIES_TESTS_ORACLE_HPP

// Brute-force reference expansions. Nothing here uses the library's series
// code: every value is a sparse map exponent -> coefficient built by direct
// lattice enumeration or schoolbook products, keeping exponents <= N.

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <stdexcept>

#include <gmpxx.h>

namespace oracle
{

using Q = mpq_class;
using Poly = std::map<Q, Q>;

inline void add(Poly &p, const Q &e, const Q &c, const Q &N)
{
    if (e > N || c == 0) {
        return;
    }
    Q &slot = p[e];
    slot += c;
    if (slot == 0) {
        p.erase(e);
    }
}

inline Poly mul(const Poly &a, const Poly &b, const Q &N)
{
    Poly out;
    for (const auto &[ea, ca] : a) {
        for (const auto &[eb, cb] : b) {
            add(out, Q(ea + eb), Q(ca * cb), N);
        }
    }
    return out;
}

inline Poly sub(Poly a, const Poly &b, const Q &N)
{
    for (const auto &[e, c] : b) {
        add(a, e, Q(-c), N);
    }
    return a;
}

inline Q qpow(const Q &c, std::int64_t k)
{
    Q r = 1;
    for (std::int64_t i = 0; i < (k < 0 ? -k : k); ++i) {
        r *= c;
    }
    return k < 0 ? Q(1 / r) : r;
}

inline Q coeff(const Poly &p, const Q &e)
{
    const auto it = p.find(e);
    return it == p.end() ? Q(0) : it->second;
}

// prod_{i=1}^{floor(N/m)} (1 - q^(m i)).
inline Poly euler(std::int64_t m, const Q &N)
{
    Poly p{{Q(0), Q(1)}};
    for (std::int64_t i = 1; m * i <= N; ++i) {
        p = mul(p, Poly{{Q(0), Q(1)}, {Q(m * i), Q(-1)}}, N);
    }
    return p;
}

// prod_{i=0}^{n-1} (1 - c q^(e + i)).
inline Poly poch(const Q &c, const Q &e, std::int64_t n, const Q &N)
{
    Poly p{{Q(0), Q(1)}};
    for (std::int64_t i = 0; i < n; ++i) {
        Poly f;
        add(f, Q(0), Q(1), N);
        add(f, Q(e + i), Q(-c), N);
        p = mul(p, f, N);
    }
    return p;
}

// sum_n (-1)^n q^(m binom(n,2)) (c q^e)^n, enumerated outward from n = 0 until
// the quadratic exponent passes N for good.
inline Poly theta_sum(const Q &c, const Q &e, std::int64_t m, const Q &N)
{
    Poly p;
    for (int dir : {1, -1}) {
        for (std::int64_t n = (dir == 1 ? 0 : -1);; n += dir) {
            const Q ex = Q(m * n * (n - 1), 2) + e * n;
            // beyond the vertex of the parabola the exponent only grows
            const bool past_vertex = dir == 1 ? Q(m * n) - Q(m, 2) + e > 0 : Q(m * n) - Q(m, 2) + e < 0;
            if (ex > N && past_vertex) {
                break;
            }
            add(p, ex, Q((n % 2 == 0 ? 1 : -1) * qpow(c, n)), N);
        }
    }
    return p;
}

// 1 / (1 - c q^d) by direct geometric expansion in whichever direction
// converges formally.
inline Poly geom(const Q &c, const Q &d, const Q &N)
{
    Poly p;
    if (d > 0) {
        for (std::int64_t k = 0; d * k <= N; ++k) {
            add(p, Q(d * k), qpow(c, k), N);
        }
    } else if (d == 0) {
        add(p, Q(0), Q(1 / (1 - c)), N);
    } else {
        for (std::int64_t k = 1; -d * k <= N; ++k) {
            add(p, Q(-d * k), Q(-qpow(c, -k)), N);
        }
    }
    return p;
}

// 1 / a through N, a with lowest term c0 q^e0: a = c0 q^e0 (1 + u), u of
// positive order, 1/(1+u) = sum (-u)^k. Needs a known through N + 2 e0 - e_min.
inline Poly inverse(const Poly &a, const Q &N)
{
    if (a.empty()) {
        throw std::domain_error("inverse of zero");
    }
    const Q e0 = a.begin()->first, c0 = a.begin()->second;
    Poly u;
    for (const auto &[e, c] : a) {
        if (e != e0) {
            add(u, Q(e - e0), Q(-c / c0), N + e0);
        }
    }
    Poly acc{{Q(0), Q(1)}}, power{{Q(0), Q(1)}};
    const Q step = u.empty() ? Q(0) : u.begin()->first;
    for (std::int64_t k = 1; !u.empty() && step * k <= N + e0; ++k) {
        power = mul(power, u, N + e0);
        for (const auto &[e, c] : power) {
            add(acc, e, c, N + e0);
        }
    }
    Poly out;
    for (const auto &[e, c] : acc) {
        add(out, Q(e - e0), Q(c / c0), N);
    }
    return out;
}

// Bilateral Appell-Lerch sum of m(x, q^m, z) over r in [-R, R], each factor
// 1/(1 - xz q^(m(r-1))) expanded separately, divided by j(z; q^m).
inline Poly appell_m(const Q &cx, const Q &ex, const Q &cz, const Q &ez, std::int64_t m, std::int64_t R,
                     const Q &N, const Q &slack)
{
    const Q W = N + slack;
    Poly s;
    for (std::int64_t r = -R; r <= R; ++r) {
        Poly term;
        add(term, Q(Q(m * r * (r - 1), 2) + ez * r), Q((r % 2 == 0 ? 1 : -1) * qpow(cz, r)), W);
        if (term.empty()) {
            continue;
        }
        // g is needed through W minus the term's exponent
        const Q G = W - term.begin()->first;
        const Q d = Q(m * (r - 1)) + ex + ez;
        Poly g;
        if (d > 0) {
            for (std::int64_t k = 0; d * k <= G; ++k) {
                add(g, Q(d * k), qpow(cx * cz, k), G);
            }
        } else if (d == 0) {
            add(g, Q(0), Q(1 / (1 - cx * cz)), G);
        } else {
            for (std::int64_t k = 1; -d * k <= G; ++k) {
                add(g, Q(-d * k), Q(-qpow(cx * cz, -k)), G);
            }
        }
        for (const auto &[e, c] : mul(term, g, W)) {
            add(s, e, c, W);
        }
    }
    return mul(s, inverse(theta_sum(cz, ez, m, W), W), N);
}

struct Mono {
    Q c, e;
};

// Lattice bound: indices beyond B cannot reach exponent N when every variable
// exponent lies in (0, 1).
inline std::int64_t lattice_bound(std::initializer_list<Q> exps, const Q &N)
{
    Q lo = 1;
    for (const Q &e : exps) {
        lo = std::min({lo, e, Q(1 - e)});
    }
    const Q b = (N + 2) / lo;
    return b.get_num().get_si() / b.get_den().get_si() + 3;
}

// sum_{sg(r)=sg(s)} sg(r) (-1)^(twist (r+s)) q^(alpha binom(r,2) + beta binom(s,2) + gamma rs) x^r y^s,
// parity 0 none, 1 r = s mod 2, 2 r != s mod 2.
inline Poly double_lattice(std::int64_t alpha, std::int64_t beta, std::int64_t gamma, bool twist, int parity,
                           const Mono &x, const Mono &y, const Q &N)
{
    const std::int64_t B = lattice_bound({x.e, y.e}, N);
    Poly p;
    for (std::int64_t r = -B; r <= B; ++r) {
        for (std::int64_t s = -B; s <= B; ++s) {
            if ((r >= 0) != (s >= 0)) {
                continue;
            }
            const bool same = ((r - s) % 2) == 0;
            if ((parity == 1 && !same) || (parity == 2 && same)) {
                continue;
            }
            const Q e = Q(alpha * r * (r - 1) + beta * s * (s - 1), 2) + gamma * r * s + x.e * r + y.e * s;
            Q c = qpow(x.c, r) * qpow(y.c, s) * (r >= 0 ? 1 : -1);
            if (twist && (r + s) % 2 != 0) {
                c = -c;
            }
            add(p, e, c, N);
        }
    }
    return p;
}

// (sum_{r,s,t>=0} + sum_{r,s,t<0}) q^(rs+rt+st) x^r y^s z^t; keep(r,s,t) filters.
inline Poly triple_lattice(const Mono &x, const Mono &y, const Mono &z, const Q &N,
                           const std::function<bool(std::int64_t, std::int64_t, std::int64_t)> &keep)
{
    const std::int64_t B = lattice_bound({x.e, y.e, z.e}, N);
    Poly p;
    for (int sign : {1, -1}) {
        const std::int64_t start = sign == 1 ? 0 : 1;
        for (std::int64_t a = start; a <= B; ++a) {
            for (std::int64_t b = start; b <= B; ++b) {
                for (std::int64_t c = start; c <= B; ++c) {
                    const std::int64_t r = sign * a, s = sign * b, t = sign * c;
                    const Q e = Q(r * s + r * t + s * t) + x.e * r + y.e * s + z.e * t;
                    // exponent is increasing in c on both orthants
                    if (e > N) {
                        break;
                    }
                    if (keep(r, s, t)) {
                        add(p, e, Q(qpow(x.c, r) * qpow(y.c, s) * qpow(z.c, t)), N);
                    }
                }
            }
        }
    }
    return p;
}

} // namespace oracle

#endif
