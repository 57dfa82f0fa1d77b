#include <qseries/sums.hpp>

#include <algorithm>
#include <initializer_list>
#include <stdexcept>
#include <vector>

#include <qseries/accumulator.hpp>
#include <qseries/error.hpp>

namespace qseries
{

namespace
{

std::int64_t common_scale(std::initializer_list<const Coeff *> values)
{
    std::int64_t d = 1;
    for (const Coeff *v : values) {
        d = lcm64(d, den64(*v));
    }
    return d;
}

// floor(a / b) for b > 0.
std::int64_t floor_div(std::int64_t a, std::int64_t b)
{
    std::int64_t q = a / b;
    if ((a % b != 0) && (a < 0)) {
        --q;
    }
    return q;
}

void guard(Exp emitted_low, Exp bound)
{
    if (emitted_low < bound) {
        throw std::logic_error("truncation guard: term below its predicted order bound");
    }
}

constexpr std::int64_t kMaxIndex = 10'000'000;

} // namespace

Series expand(const BilateralSum<Monomial> &s, const Coeff &n, bool absolute)
{
    if (s.a < 0) {
        throw DivergentSpec("bilateral sum with negative quadratic coefficient");
    }
    const Coeff zero(0);
    const Coeff &ue = s.den ? s.den->u.e : zero;
    const Coeff &b = s.den ? s.den->b : zero;
    const Coeff &dd = s.den ? s.den->d : zero;
    const std::int64_t D = common_scale({&s.coef.e, &s.shift, &s.p, &s.w.e, &ue, &b, &dd, &n});

    const Exp c0 = scaled_int(s.coef.e + s.shift, D);
    const Exp A = s.a * D;
    const Exp P = scaled_int(s.p + s.w.e, D);
    const Exp U = scaled_int(ue, D);
    const Exp B = scaled_int(b, D);
    const Exp Dd = scaled_int(dd, D);
    const Exp W = scaled_floor(n, D);

    if (s.a == 0) {
        // Linear growth: need positive slope of the order bound in both directions.
        const Exp up = P + (s.den ? std::max<Exp>(0, -B) : 0);
        const Exp down = -P + (s.den ? std::max<Exp>(0, B) : 0);
        if (up <= 0 || down <= 0) {
            throw DivergentSpec("bilateral sum: term orders do not grow in both directions");
        }
    }

    auto E = [&](std::int64_t k) { return c0 + A * (k * (k - 1) / 2) + P * k; };
    auto dn = [&](std::int64_t k) { return U + B * k + Dd; };
    // L(k) = E(k) + max(0, -dn(k)) is convex in k.
    auto L = [&](std::int64_t k) {
        Exp l = E(k);
        if (s.den) {
            l += std::max<Exp>(0, -dn(k));
        }
        return l;
    };

    Accumulator acc(D, W);
    for (int dir : {1, -1}) {
        const Coeff step = dir > 0 ? s.w.c : Coeff(1 / s.w.c);
        Coeff wk = dir > 0 ? Coeff(1) : step;
        for (std::int64_t k = dir > 0 ? 0 : -1;; k += dir, wk *= step) {
            if (k > kMaxIndex || k < -kMaxIndex) {
                throw DivergentSpec("bilateral sum: index bound exceeded");
            }
            const Exp lk = L(k);
            if (lk > W) {
                if (L(k + dir) >= lk) {
                    break;
                }
                continue;
            }
            Coeff c = s.coef.c * wk;
            if (s.den) {
                guard(acc.add_geometric(E(k), c, s.den->u.c, dn(k), absolute), lk);
            } else {
                acc.add(E(k), absolute ? abs(c) : c);
            }
        }
    }
    return std::move(acc).finish();
}

Series expand(const QuadrantSum<Monomial> &s, const Coeff &n, bool absolute)
{
    if (s.qa < 0 || s.qb < 0 || s.cross < 0) {
        throw DivergentSpec("quadrant sum with negative quadratic coefficient");
    }
    const Coeff zero(0);
    const Coeff &ue = s.den ? s.den->u.e : zero;
    const Coeff &dp = s.den ? s.den->p : zero;
    const Coeff &dr = s.den ? s.den->r : zero;
    const std::int64_t D = common_scale(
        {&s.coef.e, &s.shift, &s.qa, &s.qb, &s.cross, &s.la, &s.lb, &s.y.e, &s.z.e, &ue, &dp, &dr, &n});

    const Exp K = scaled_int(s.coef.e + s.shift, D);
    const Exp QA = scaled_int(s.qa, D);
    const Exp QB = scaled_int(s.qb, D);
    const Exp X = scaled_int(s.cross, D);
    const Exp LA = scaled_int(s.la + s.y.e, D);
    const Exp LB = scaled_int(s.lb + s.z.e, D);
    const Exp U = scaled_int(ue, D);
    const Exp P = scaled_int(dp, D);
    const Exp R = scaled_int(dr, D);
    const Exp W = scaled_floor(n, D);

    auto base = [&](std::int64_t i, std::int64_t j) { return K + QA * i * i + QB * j * j + X * i * j + LA * i + LB * j; };
    auto dn = [&](std::int64_t i, std::int64_t j) { return U + P * (i + j) + R; };

    // Linear lower bounds sigma_i i + sigma_j j + kappa <= L(i,j), from
    // i^2 >= i, j^2 >= j, ij >= 0 and max(0, -dn) >= 0 (resp. >= -dn).
    struct Plane {
        Exp si, sj, k;
    };
    std::vector<Plane> planes;
    planes.push_back({QA + LA, QB + LB, K});
    if (s.den) {
        planes.push_back({QA + LA - P, QB + LB - P, K - U - R});
    }
    std::erase_if(planes, [](const Plane &p) { return p.si <= 0 || p.sj <= 0; });
    if (planes.empty()) {
        throw DivergentSpec("quadrant sum: no positive growth bound on the index set");
    }

    std::int64_t imax = kMaxIndex;
    for (const auto &p : planes) {
        imax = std::min(imax, W < p.k ? -1 : floor_div(W - p.k, p.si));
    }
    if (imax >= kMaxIndex) {
        throw DivergentSpec("quadrant sum: index bound exceeded");
    }

    Accumulator acc(D, W);
    if (imax < 0) {
        return std::move(acc).finish();
    }
    std::vector<Coeff> ypow(static_cast<std::size_t>(imax + 1));
    ypow[0] = s.coef.c;
    for (std::int64_t i = 1; i <= imax; ++i) {
        ypow[i] = ypow[i - 1] * s.y.c;
    }
    std::vector<Coeff> zpow(1, Coeff(1));
    Coeff c;
    for (std::int64_t i = 0; i <= imax; ++i) {
        std::int64_t jmax = kMaxIndex;
        for (const auto &p : planes) {
            const Exp rest = W - p.k - p.si * i;
            jmax = std::min(jmax, rest < 0 ? -1 : floor_div(rest, p.sj));
        }
        while (static_cast<std::int64_t>(zpow.size()) <= jmax) {
            zpow.push_back(zpow.back() * s.z.c);
        }
        for (std::int64_t j = 0; j <= jmax; ++j) {
            if (s.parity == Parity::same && ((i - j) & 1) != 0) {
                continue;
            }
            if (s.parity == Parity::diff && ((i - j) & 1) == 0) {
                continue;
            }
            const Exp e = base(i, j);
            Exp l = e;
            if (s.den) {
                l += std::max<Exp>(0, -dn(i, j));
            }
            if (l > W) {
                continue;
            }
            mpq_mul(c.get_mpq_t(), ypow[i].get_mpq_t(), zpow[j].get_mpq_t());
            if (s.den) {
                guard(acc.add_geometric(e, c, s.den->u.c, dn(i, j), absolute), l);
            } else {
                acc.add(e, absolute ? abs(c) : c);
            }
        }
    }
    return std::move(acc).finish();
}

Series expand(const OrthantSum<Monomial> &s, const Coeff &n, bool absolute)
{
    return expand(s.positive(), n, absolute) + expand(s.negative(), n, absolute);
}

QuadrantSum<Monomial> DoubleSumSpec::positive() const
{
    QuadrantSum<Monomial> out;
    out.coef = Monomial();
    out.qa = Coeff(alpha, 2);
    out.qb = Coeff(beta, 2);
    out.cross = Coeff(gamma);
    out.la = Coeff(-alpha, 2);
    out.lb = Coeff(-beta, 2);
    out.y = twist ? -x : x;
    out.z = twist ? -y : y;
    out.parity = parity;
    for (Coeff *c : {&out.qa, &out.qb, &out.la, &out.lb}) {
        c->canonicalize();
    }
    return out;
}

// r = -1-a, s = -1-b: binom(r,2) = (a^2 + 3a + 2)/2, rs = ab + a + b + 1,
// (-1)^(r+s) = (-1)^(a+b), and parity of r - s equals that of a - b.
QuadrantSum<Monomial> DoubleSumSpec::negative() const
{
    QuadrantSum<Monomial> out;
    out.coef = -(x.inverse() * y.inverse());
    out.shift = Coeff(alpha + beta + gamma);
    out.qa = Coeff(alpha, 2);
    out.qb = Coeff(beta, 2);
    out.cross = Coeff(gamma);
    out.la = Coeff(3 * alpha + 2 * gamma, 2);
    out.lb = Coeff(3 * beta + 2 * gamma, 2);
    out.y = twist ? -x.inverse() : x.inverse();
    out.z = twist ? -y.inverse() : y.inverse();
    out.parity = parity;
    for (Coeff *c : {&out.qa, &out.qb, &out.la, &out.lb}) {
        c->canonicalize();
    }
    return out;
}

Series double_sum(const DoubleSumSpec &spec, const Coeff &n)
{
    if (spec.alpha < 0 || spec.beta < 0 || spec.gamma < 0) {
        throw DivergentSpec("double sum: quadratic form coefficients must be nonnegative");
    }
    return expand(spec.positive(), n) + expand(spec.negative(), n);
}

namespace
{

bool parity_ok(TripleParity mode, std::int64_t r, std::int64_t s, std::int64_t t)
{
    switch (mode) {
    case TripleParity::all:
        return true;
    case TripleParity::same:
        return ((r - s) & 1) == 0 && ((r - t) & 1) == 0;
    case TripleParity::rs_not_t:
        return ((r - s) & 1) == 0 && ((r - t) & 1) != 0;
    }
    return false;
}

// Adds sum_{a,b,c>=0} cx cy cz q^(k0 + ab+ac+bc + la a + lb b + lc c) over the
// parity class, where cx = x0 * xs^a etc. Exponents in scaled units; the
// quadratic part is scaled by D. Requires la, lb, lc > 0.
void orthant3(Accumulator &acc, std::int64_t D, Exp k0, Exp la, Exp lb, Exp lc, const Coeff &x0, const Coeff &xs,
              const Coeff &y0, const Coeff &ys, const Coeff &z0, const Coeff &zs, TripleParity mode, bool absolute)
{
    if (la <= 0 || lb <= 0 || lc <= 0) {
        throw DivergentSpec("triple sum: linear growth must be positive on both orthants");
    }
    const Exp W = acc.order();
    if (k0 > W) {
        return;
    }
    Coeff cx = x0, cxy, c;
    for (std::int64_t a = 0; k0 + la * a <= W; ++a, cx *= xs) {
        cxy = cx * y0;
        for (std::int64_t b = 0; k0 + la * a + (D * a + lb) * b <= W; ++b, cxy *= ys) {
            const Exp e0 = k0 + la * a + lb * b + D * a * b;
            const Exp slope = D * (a + b) + lc;
            c = cxy * z0;
            for (std::int64_t t = 0; e0 + slope * t <= W; ++t, c *= zs) {
                if (parity_ok(mode, a, b, t)) {
                    acc.add(e0 + slope * t, absolute ? abs(c) : c);
                }
            }
        }
    }
}

} // namespace

Series triple_sum(const TripleSumSpec &spec, const Coeff &n, bool absolute)
{
    const auto &[mode, x, y, z] = spec;
    const std::int64_t D = common_scale({&x.e, &y.e, &z.e, &n});
    const Exp ex = scaled_int(x.e, D);
    const Exp ey = scaled_int(y.e, D);
    const Exp ez = scaled_int(z.e, D);
    Accumulator acc(D, scaled_floor(n, D));
    orthant3(acc, D, 0, ex, ey, ez, Coeff(1), x.c, Coeff(1), y.c, Coeff(1), z.c, mode, absolute);
    // r = -1-a etc.: rs+rt+st = 3 + 2(a+b+c) + ab+ac+bc; x^r = x^-1 (x^-1)^a.
    // Parity relations between (r,s,t) carry over to (a,b,c).
    const Coeff xi = 1 / x.c, yi = 1 / y.c, zi = 1 / z.c;
    orthant3(acc, D, 3 * D - ex - ey - ez, 2 * D - ex, 2 * D - ey, 2 * D - ez, xi, xi, yi, yi, zi, zi, mode,
             absolute);
    return std::move(acc).finish();
}

Series kronecker_unilateral(const Monomial &x, const Monomial &y, const Coeff &n)
{
    if (y.is_integral_power_of_q()) {
        throw PoleAtSpecialization("y is an integral power of q");
    }
    return expand(kronecker_family(x, y), n);
}

} // namespace qseries
