#include <qseries/numeric.hpp>

#include <qseries/error.hpp>

namespace qseries
{

namespace
{

// Smallest grid value >= c (c >= 0).
Coeff round_up(const Coeff &c)
{
    if (c == 0) {
        return c;
    }
    Coeff scaled = c;
    mpq_mul_2exp(scaled.get_mpq_t(), scaled.get_mpq_t(), kGridBits);
    Coeff r(ceil(scaled));
    mpq_div_2exp(r.get_mpq_t(), r.get_mpq_t(), kGridBits);
    return r;
}

Certified rounded(const Coeff &v, const Coeff &bound)
{
    Coeff r = round_to_grid(v, kGridBits);
    return {r, round_up(bound + abs(Coeff(r - v)))};
}

std::int64_t int_exp(const Coeff &e, const char *what)
{
    if (!is_integer(e)) {
        throw Unsupported(std::string("numeric evaluation needs an integral q-exponent for ") + what);
    }
    return e.get_num().get_si();
}

constexpr std::int64_t kMaxTerms = 1'000'000;

struct Direction {
    Coeff C;
    std::int64_t a, p;
    Coeff w;
    bool den;
    Coeff u;
    std::int64_t b, d;
    std::int64_t k0;
};

// Majorant of 1/(1 - v): its geometric expansion in v (|v| < 1) or in 1/v
// (|v| > 1) with every coefficient made positive. |v| = 1 only arises for a
// constant factor, which has no expansion.
Coeff majorant_factor(const Coeff &v)
{
    const Coeff av = abs(v);
    return av == 1 ? Coeff(1 / abs(Coeff(1 - v))) : Coeff(1 / abs(Coeff(1 - av)));
}

// Sum of T(k) for k >= k0 with the tail rule documented in the header.
Certified sum_direction(const Direction &f, const Coeff &q, const Coeff &eps, bool absolute)
{
    const Coeff aq = abs(q);
    const Coeff aw = abs(f.w);
    const Coeff qa = pow(q, f.a);
    const Coeff qb = pow(q, f.b);
    const std::int64_t k0 = f.k0;
    Coeff qk = pow(q, f.a * (k0 * (k0 - 1) / 2) + f.p * k0);
    Coeff step = pow(q, f.a * k0 + f.p);
    Coeff wk = pow(f.w, k0);
    Coeff vk = f.den ? Coeff(f.u * pow(q, f.b * k0 + f.d)) : Coeff(0);

    Coeff sum(0), err(0), term, mag, maj, ratio;
    for (std::int64_t k = k0;; ++k) {
        if (k - k0 > kMaxTerms) {
            throw NonconvergentPoint("bilateral sum: no convergent tail within the term limit");
        }
        if (f.den && vk == 1) {
            throw PoleAtSpecialization("bilateral sum: denominator vanishes at the evaluation point");
        }
        mag = abs(Coeff(f.C * qk * wk));
        ratio = abs(step) * aw;
        bool regime = true;
        if (!f.den) {
            maj = mag;
        } else if (f.b > 0) {
            regime = abs(vk) * 2 <= 1;
            maj = 2 * mag;
        } else if (f.b < 0) {
            regime = abs(vk) >= 2;
            maj = 2 * mag / abs(vk);
            ratio /= pow(aq, f.b);
        } else {
            maj = absolute ? Coeff(mag * majorant_factor(vk)) : Coeff(mag / abs(Coeff(1 - vk)));
        }
        if (regime) {
            if (ratio < 1) {
                const Coeff tail = maj / (1 - ratio);
                if (tail <= eps) {
                    return rounded(sum, err + tail);
                }
            } else if (f.a == 0) {
                throw NonconvergentPoint("bilateral sum diverges at this point (term ratio >= 1)");
            }
        }
        term = f.C * qk * wk;
        if (absolute) {
            term = abs(term);
            if (f.den) {
                term *= majorant_factor(vk);
            }
        } else if (f.den) {
            term /= 1 - vk;
        }
        Coeff r = round_to_grid(term, kGridBits);
        err += abs(Coeff(r - term));
        sum += r;
        qk *= step;
        step *= qa;
        wk *= f.w;
        if (f.den) {
            vk *= qb;
        }
    }
}

} // namespace

void check_q(const Coeff &q)
{
    if (q == 0 || abs(q) >= 1) {
        throw NonconvergentPoint("need 0 < |q| < 1, got q = " + to_pq(q));
    }
}

Certified operator-(const Certified &a)
{
    return {-a.value, a.bound};
}

Certified operator+(const Certified &a, const Certified &b)
{
    return rounded(a.value + b.value, a.bound + b.bound);
}

Certified operator-(const Certified &a, const Certified &b)
{
    return rounded(a.value - b.value, a.bound + b.bound);
}

Certified operator*(const Certified &a, const Certified &b)
{
    return rounded(a.value * b.value, abs(a.value) * b.bound + abs(b.value) * a.bound + a.bound * b.bound);
}

Certified operator*(const Coeff &c, const Certified &a)
{
    return rounded(c * a.value, abs(c) * a.bound);
}

Certified operator/(const Certified &a, const Certified &b)
{
    const Coeff ab = abs(b.value);
    if (ab <= b.bound) {
        throw PoleTooClose("division by a value not certified nonzero");
    }
    const Coeff err = (a.bound * ab + abs(a.value) * b.bound) / (ab * (ab - b.bound));
    return rounded(a.value / b.value, err);
}

std::ostream &operator<<(std::ostream &os, const Certified &c)
{
    return os << approx(c.value) << " +- " << approx(c.bound);
}

Certified numeric_sum(const BilateralSum<Coeff> &s, const Coeff &q, const Coeff &eps, bool absolute)
{
    check_q(q);
    if (s.a < 0) {
        throw NonconvergentPoint("bilateral sum with negative quadratic coefficient");
    }
    if (s.w == 0) {
        throw Unsupported("bilateral sum with w = 0");
    }
    const Coeff C = s.coef * pow(q, int_exp(s.shift, "shift"));
    const std::int64_t p = int_exp(s.p, "p");
    const bool den = s.den.has_value();
    const Coeff u = den ? s.den->u : Coeff(0);
    const std::int64_t b = den ? int_exp(s.den->b, "b") : 0;
    const std::int64_t d = den ? int_exp(s.den->d, "d") : 0;
    const Certified up = sum_direction({C, s.a, p, s.w, den, u, b, d, 0}, q, eps / 4, absolute);
    const Certified down = sum_direction({C, s.a, s.a - p, Coeff(1 / s.w), den, u, -b, d, 1}, q, eps / 4, absolute);
    return up + down;
}

Certified numeric_sum(const QuadrantSum<Coeff> &s, const Coeff &q, const Coeff &eps, bool absolute)
{
    check_q(q);
    if (s.qa != 0 || s.qb != 0 || s.parity != Parity::none) {
        throw Unsupported("numeric quadrant sums need qa = qb = 0 and no parity filter");
    }
    if (s.y == 0 || s.z == 0) {
        throw Unsupported("quadrant sum with zero variable");
    }
    const std::int64_t X = int_exp(s.cross, "cross");
    const std::int64_t LA = int_exp(s.la, "la");
    const std::int64_t LB = int_exp(s.lb, "lb");
    if (X < 0) {
        throw NonconvergentPoint("quadrant sum with negative cross coefficient");
    }
    const Coeff aq = abs(q);
    const Coeff C = s.coef * pow(q, int_exp(s.shift, "shift"));
    const bool den = s.den.has_value();
    const std::int64_t P = den ? int_exp(s.den->p, "p") : 0;
    const std::int64_t R = den ? int_exp(s.den->r, "r") : 0;
    const Coeff U = den ? s.den->u : Coeff(0);

    // Regime start K0 and the constant K of the majorant.
    std::int64_t K0 = 0;
    Coeff K = abs(C);
    Coeff alpha = pow(aq, LA) * abs(s.y);
    Coeff beta = pow(aq, LB) * abs(s.z);
    if (den) {
        const Coeff uq = abs(U) * pow(aq, R);
        if (P > 0) {
            for (Coeff v = uq; v * 2 > 1; v *= pow(aq, P)) {
                ++K0;
            }
            K *= 2;
        } else if (P < 0) {
            for (Coeff v = uq; v < 2; v /= pow(aq, -P)) {
                ++K0;
            }
            K *= 2 / uq;
            alpha /= pow(aq, P);
            beta /= pow(aq, P);
        } else {
            const Coeff v = U * pow(q, R);
            if (v == 1) {
                throw PoleAtSpecialization("quadrant sum: constant denominator vanishes");
            }
            K *= absolute ? majorant_factor(v) : Coeff(1 / abs(Coeff(1 - v)));
        }
    }
    if (alpha >= 1 || beta >= 1) {
        throw NonconvergentPoint("quadrant sum diverges at this point");
    }
    const Coeff rho = pow(aq, X);

    std::int64_t T = K0;
    Coeff btail = pow(beta, T + 1);
    const Coeff rows_den = (1 - alpha) * (1 - beta);
    while (K * btail / rows_den > eps / 3) {
        ++T;
        btail *= beta;
        if (T > kMaxTerms) {
            throw NonconvergentPoint("quadrant sum: no convergent tail within the term limit");
        }
    }
    Coeff err = round_up(K * btail / rows_den);
    const Coeff row_eps = eps / (3 * (T + 1));

    Coeff sum(0), term, v0;
    Coeff rowc = C;                        // C q^(LB j) z^j
    Coeff rowstep = pow(q, LA) * s.y;      // q^(X j + LA) y
    const Coeff qX = pow(q, X);
    const Coeff qLBz = pow(q, LB) * s.z;
    Coeff bj(1), arj = alpha;              // beta^j, alpha rho^j
    for (std::int64_t j = 0; j <= T; ++j) {
        Coeff cell = rowc;
        Coeff v = den ? Coeff(U * pow(q, P * j + R)) : Coeff(0);
        const Coeff qP = den ? pow(q, P) : Coeff(1);
        Coeff tailmaj = K * bj / (1 - arj); // times arj^i
        for (std::int64_t i = 0;; ++i) {
            if (i + j >= K0 && tailmaj <= row_eps) {
                err += round_up(tailmaj);
                break;
            }
            if (i > kMaxTerms) {
                throw NonconvergentPoint("quadrant sum: row does not converge");
            }
            if (den && v == 1) {
                throw PoleAtSpecialization("quadrant sum: denominator vanishes at the evaluation point");
            }
            if (absolute) {
                term = den ? Coeff(abs(cell) * majorant_factor(v)) : Coeff(abs(cell));
            } else {
                term = den ? Coeff(cell / (1 - v)) : cell;
            }
            Coeff r = round_to_grid(term, kGridBits);
            err += abs(Coeff(r - term));
            sum += r;
            cell *= rowstep;
            if (den) {
                v *= qP;
            }
            tailmaj *= arj;
        }
        rowc *= qLBz;
        rowstep *= qX;
        bj *= beta;
        arj *= rho;
    }
    return rounded(sum, err);
}

Certified numeric_sum(const OrthantSum<Coeff> &s, const Coeff &q, const Coeff &eps, bool absolute)
{
    return numeric_sum(s.positive(), q, eps / 2, absolute) + numeric_sum(s.negative(), q, eps / 2, absolute);
}

} // namespace qseries
