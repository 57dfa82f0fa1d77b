#include <qseries/residues.hpp>

#include <chrono>
#include <map>
#include <stdexcept>

#include <qseries/error.hpp>

namespace qseries
{

std::string to_string(ResidueFamily f)
{
    switch (f) {
    case ResidueFamily::f4:
        return "f4";
    case ResidueFamily::f6:
        return "f6";
    case ResidueFamily::f7:
        return "f7";
    case ResidueFamily::prop21:
        return "prop21";
    }
    return "?";
}

ResidueFamily residue_family_from_string(const std::string &s)
{
    for (ResidueFamily f : all_residue_families()) {
        if (to_string(f) == s) {
            return f;
        }
    }
    throw ConfigError("unknown residue family '" + s + "'");
}

const std::vector<ResidueFamily> &all_residue_families()
{
    static const std::vector<ResidueFamily> v{ResidueFamily::prop21, ResidueFamily::f4, ResidueFamily::f6,
                                              ResidueFamily::f7};
    return v;
}

namespace
{

using NB = NumericBackend;
using Builder = NumericBuilder;

std::int64_t floor_div2(std::int64_t n)
{
    return n >= 0 ? n / 2 : -((-n + 1) / 2);
}

Certified c_(const Coeff &v)
{
    return Certified::exact(v);
}

// sum_{s=1}^{N-1} (sign)^s q^(s(N-s)+N) / (y^s z^(N-s)), range convention for N < 2.
Certified partial_sum(const Coeff &q, const Coeff &y, const Coeff &z, std::int64_t N, bool alternate)
{
    Coeff acc = conventional_range_sum(
        1, N - 1,
        [&](std::int64_t s) {
            Coeff t = pow(q, s * (N - s) + N) / (pow(y, s) * pow(z, N - s));
            return (alternate && (s % 2 != 0)) ? Coeff(-t) : t;
        },
        Coeff(0));
    return c_(acc);
}

// q^e / (y^n z^n)
Coeff lead(const Coeff &q, const Coeff &y, const Coeff &z, std::int64_t e, std::int64_t n)
{
    return pow(q, e) / (pow(y, n) * pow(z, n));
}

Coeff sgn_pow(std::int64_t n)
{
    return (n % 2 == 0) ? Coeff(1) : Coeff(-1);
}

struct Point {
    Coeff q, y, z;
    bool printed = false;
};

// Theta blocks shared by the lemmas; each takes the backend.
Certified j(const NB &b, const Coeff &v, std::int64_t m = 1)
{
    return b.theta(v, m);
}

Certified pow4(const Certified &a)
{
    const Certified a2 = a * a;
    return a2 * a2;
}

// J2^8 / (J1^2 J4^2)
Certified eight_block(const NB &b)
{
    const Certified J1 = b.J(1), J2 = b.J(2), J4 = b.J(4);
    return pow4(J2) * pow4(J2) / (J1 * J1 * J4 * J4);
}

// J1^4 / J2^2
Certified j14_block(const NB &b)
{
    const Certified J1 = b.J(1), J2 = b.J(2);
    return pow4(J1) / (J2 * J2);
}

// J4^4 / J2^2
Certified j44_block(const NB &b)
{
    const Certified J2 = b.J(2), J4 = b.J(4);
    return pow4(J4) / (J2 * J2);
}

struct Pole {
    std::string kind;
    Coeff x0;
};

// Poles of the kernel variant at index n. Each pole lists closed forms for
// F, G1 and G2 in that order.
struct PoleForms {
    Pole pole;
    Builder F, G1, G2;
    std::string citeF, citeG1, citeG2;
};

std::vector<PoleForms> thm1_poles(const Point &P, std::int64_t n)
{
    const Coeff q = P.q, y = P.y, z = P.z;
    std::vector<PoleForms> out;
    // x0 = q^n.
    {
        Builder theta_term;
        if (n % 2 == 0) {
            const std::int64_t m = n / 2;
            theta_term = [=](const NB &b) {
                const Certified J2 = b.J(2);
                return -lead(q, y, z, m * m + 2 * m, m) *
                       (J2 * J2 * J2 * j(b, -q, 2) * j(b, y * z, 2) /
                        (j(b, q * y, 2) * j(b, -y, 2) * j(b, -z, 2) * j(b, q * z, 2)));
            };
        } else {
            const std::int64_t m = floor_div2(n - 1);
            theta_term = [=](const NB &b) {
                const Certified J2 = b.J(2);
                return lead(q, y, z, m * m + 3 * m + 1, m) *
                       (J2 * J2 * J2 * j(b, Coeff(-1), 2) * j(b, y * z, 2) /
                        (j(b, y, 2) * j(b, -y, 2) * j(b, z, 2) * j(b, -z, 2)));
            };
        }
        const Builder F = [=](const NB &) { return partial_sum(q, y, z, n, false); };
        out.push_back({{"q^n", pow(q, n)},
                       F,
                       [=](const NB &b) { return F(b) + theta_term(b); },
                       [=](const NB &b) { return -theta_term(b); },
                       "F: \"has simple poles at $x_0=q^{n}$\"",
                       "G1: \"has simple poles at $x_0=q^{n}$\"",
                       "G2: \"has simple poles at $x_0=q^{n}$\""});
    }
    // x0 = -q^(2n); F is analytic there.
    {
        const Builder g1 = [=](const NB &b) {
            return sgn_pow(n) * lead(q, y, z, n * n + 2 * n, n) *
                   (j(b, y * z, 2) / (j(b, y) * j(b, z)) * j14_block(b));
        };
        out.push_back({{"-q^2n", -pow(q, 2 * n)},
                       [](const NB &) { return c_(Coeff(0)); },
                       g1,
                       [=](const NB &b) { return -g1(b); },
                       "F: analytic at $x_0=-q^{2n}$",
                       "G1: \"has simple poles at $x_0=-q^{2n}$\"",
                       "G2: \"has simple poles at $x_0=-q^{2n}$\""});
    }
    return out;
}

std::vector<PoleForms> same_poles(const Point &P, std::int64_t n)
{
    const Coeff q = P.q, y = P.y, z = P.z;
    const Coeff half(1, 2);
    const Coeff g2_scale = P.printed ? Coeff(2) : Coeff(1);
    std::vector<PoleForms> out;
    // x0 = q^(2n).
    {
        const Builder F = [=](const NB &) { return half * partial_sum(q, y, z, 2 * n, false); };
        const Builder t = [=](const NB &b) {
            return half * lead(q, y, z, n * n + 2 * n, n) *
                   (eight_block(b) * j(b, y * z, 2) /
                    (j(b, q * y, 2) * j(b, -y, 2) * j(b, -z, 2) * j(b, q * z, 2)));
        };
        out.push_back({{"q^2n", pow(q, 2 * n)},
                       F,
                       [=](const NB &b) { return F(b) + t(b); },
                       [=](const NB &b) { return -t(b); },
                       "F: \"has simple poles at $x_0^2=q^{4n}$\"",
                       "G1: \"has simple poles at $x_0^2=q^{4n}$\"",
                       "G2: \"has simple poles at $x_0=q^{n}$\""});
    }
    // x0 = -q^(2n). The G2 residue carries the factor 1/2 of its derivation.
    {
        const Builder F = [=](const NB &) { return -half * partial_sum(q, y, z, 2 * n, true); };
        const Builder t = [=](const NB &b) {
            return half * sgn_pow(n) * lead(q, y, z, n * n + 2 * n, n) *
                   (j14_block(b) * j(b, y * z, 2) / (j(b, y) * j(b, z)));
        };
        out.push_back({{"-q^2n", -pow(q, 2 * n)},
                       F,
                       [=](const NB &b) { return F(b) - t(b); },
                       [=](const NB &b) { return g2_scale * t(b); },
                       "F: \"has simple poles at $x_0^2=q^{4n}$\"",
                       "G1: \"has simple poles at $x_0^2=q^{4n}$\"",
                       "G2: \"has simple poles at $x_0=-q^{2n}$\""});
    }
    // x0 = q^(2n+1); F is analytic there.
    {
        const Builder g1 = [=](const NB &b) {
            return -lead(q, y, z, n * n + 3 * n + 1, n) *
                   (j(b, y * z, 2) / (j(b, y * y, 4) * j(b, z * z, 4)) * j44_block(b));
        };
        out.push_back({{"q^2n+1", pow(q, 2 * n + 1)},
                       [](const NB &) { return c_(Coeff(0)); },
                       g1,
                       [=](const NB &b) { return -g1(b); },
                       "F: analytic at $x_0=q^{2n+1}$",
                       "G1: \"has simple poles at $x_0=q^{2n+1}$\"",
                       "G2: \"has simple poles at $x_0=q^{n}$\""});
    }
    return out;
}

std::vector<PoleForms> diff_poles(const Point &P, std::int64_t n)
{
    const Coeff q = P.q, y = P.y, z = P.z;
    const Coeff half(1, 2);
    std::vector<PoleForms> out;
    // x0 = q^(2n+1).
    {
        const Builder F = [=](const NB &) { return half * partial_sum(q, y, z, 2 * n + 1, false); };
        const Builder t = [=](const NB &b) {
            return half * lead(q, y, z, n * n + 3 * n + 1, n) *
                   (eight_block(b) * j(b, q * y * z, 2) /
                    (j(b, y, 2) * j(b, -z, 2) * j(b, -q * y, 2) * j(b, q * z, 2)));
        };
        out.push_back({{"q^2n+1", pow(q, 2 * n + 1)},
                       F,
                       [=](const NB &b) { return F(b) - t(b); },
                       t,
                       "F: \"has simple poles at $x_0^2=q^{4n+2}$\"",
                       "G1: \"has simple poles at $x_0^2=q^{4n+2}$\"",
                       "G2: \"has simple poles at $x_0=q^{n}$\""});
    }
    // x0 = -q^(2n+1).
    {
        const Builder F = [=](const NB &) { return -half * partial_sum(q, y, z, 2 * n + 1, true); };
        const Builder t = [=](const NB &b) {
            return half * sgn_pow(n) * lead(q, y, z, n * n + 3 * n + 1, n) *
                   (j14_block(b) * j(b, q * y * z, 2) / (j(b, y) * j(b, z)));
        };
        out.push_back({{"-q^2n+1", -pow(q, 2 * n + 1)},
                       F,
                       [=](const NB &b) { return F(b) - t(b); },
                       t,
                       "F: \"has simple poles at $x_0^2=q^{4n+2}$\"",
                       "G1: \"has simple poles at $x_0^2=q^{4n+2}$\"",
                       "G2: \"has simple poles at $x_0=-q^{2n+1}$\""});
    }
    // x0 = q^(2n); F is analytic there.
    {
        const Builder g1 = [=](const NB &b) {
            return -(z * lead(q, y, z, n * n + 2 * n, n)) *
                   (j44_block(b) * j(b, q * y * z, 2) / (j(b, q * q * y * y, 4) * j(b, z * z, 4)));
        };
        out.push_back({{"q^2n", pow(q, 2 * n)},
                       [](const NB &) { return c_(Coeff(0)); },
                       g1,
                       [=](const NB &b) { return -g1(b); },
                       "F: analytic at $x_0=q^{2n}$",
                       "G1: \"has simple poles at $x_0=q^{2n}$\"",
                       "G2: \"has simple poles at $x_0=q^{n}$\""});
    }
    return out;
}

std::vector<std::pair<std::string, std::string>> point_bindings(const Point &P)
{
    return {{"q", to_pq(P.q)}, {"y", to_pq(P.y)}, {"z", to_pq(P.z)}};
}

void kernel_cases(std::vector<ResidueCase> &out, ResidueFamily fam, Variant v, std::int64_t n, const Point &P)
{
    std::vector<PoleForms> poles;
    switch (v) {
    case Variant::thm1:
        poles = thm1_poles(P, n);
        break;
    case Variant::same:
        poles = same_poles(P, n);
        break;
    case Variant::diff:
        poles = diff_poles(P, n);
        break;
    }
    const Coeff y = P.y, z = P.z;
    for (const PoleForms &pf : poles) {
        const std::string group = pf.pole.kind + ":n=" + std::to_string(n);
        const auto add = [&](const std::string &target, Part part, const Builder &closed, const std::string &cite) {
            ResidueCase c;
            c.id = to_string(fam) + ":" + target + "@" + group;
            c.citation = cite;
            c.family = fam;
            c.target = target;
            c.group = group;
            c.n = n;
            c.q = P.q;
            c.x0 = pf.pole.x0;
            c.bindings = point_bindings(P);
            if (part == Part::full) {
                c.f = [v, y, z](const NB &b, const Coeff &x) { return kernels(b).F(v, x, y, z); };
            } else {
                c.f = [v, part, y, z](const NB &b, const Coeff &x) { return kernels(b).G(v, part, x, y, z); };
            }
            c.closed = closed;
            out.push_back(std::move(c));
        };
        add("F", Part::full, pf.F, pf.citeF);
        add("G1", Part::g1, pf.G1, pf.citeG1);
        add("G2", Part::g2, pf.G2, pf.citeG2);
    }
}

struct Prop21Shape {
    Coeff beta;
    std::int64_t b;
    std::int64_t m;
};

void prop21_cases(std::vector<ResidueCase> &out, std::int64_t k, const Coeff &q)
{
    static const std::vector<Prop21Shape> shapes{{Coeff(1), 1, 1}, {Coeff(2), 1, 1}, {Coeff(1), 2, 2}};
    for (const Prop21Shape &s : shapes) {
        // z0^b = q^(km) / beta; for b = 2 only beta = 1 with m even is used, so
        // both roots +-q^(km/2) are rational.
        std::vector<Coeff> roots;
        if (s.b == 1) {
            roots.push_back(pow(q, k * s.m) / s.beta);
        } else {
            roots.push_back(pow(q, k * s.m / 2));
            roots.push_back(-pow(q, k * s.m / 2));
        }
        for (const Coeff &z0 : roots) {
            ResidueCase c;
            const std::string shape =
                "beta=" + to_pq(s.beta) + ",b=" + std::to_string(s.b) + ",m=" + std::to_string(s.m);
            c.group = "z0=" + to_pq(z0) + ":k=" + std::to_string(k);
            c.id = "prop21:" + shape + ":" + c.group;
            c.citation = "\"The residue at such $z_0$ is ${(-1)^{k+1}q^{m\\binom{k}{2}}z_0}/{bJ_m^3}$\"";
            c.family = ResidueFamily::prop21;
            c.target = "1/j";
            c.n = k;
            c.q = q;
            c.x0 = z0;
            c.bindings = {{"q", to_pq(q)}, {"beta", to_pq(s.beta)}, {"b", std::to_string(s.b)},
                          {"m", std::to_string(s.m)}, {"k", std::to_string(k)}};
            c.f = [s](const NB &b, const Coeff &x) {
                return Certified::exact(Coeff(1)) / b.theta(s.beta * pow(x, s.b), s.m);
            };
            const Coeff sign = sgn_pow(k + 1);
            const std::int64_t e = s.m * (k * (k - 1) / 2);
            c.closed = [=](const NB &b) {
                const Certified Jm = b.J(s.m);
                return Certified::exact(sign * pow(q, e) * z0 / Coeff(s.b)) / (Jm * Jm * Jm);
            };
            out.push_back(std::move(c));
        }
    }
}

} // namespace

std::vector<ResidueCase> residue_cases(ResidueFamily fam, std::int64_t lo, std::int64_t hi, const ResidueParams &p)
{
    std::vector<ResidueCase> out;
    const Point P{p.q, p.y, p.z, p.printed_same_g2};
    for (std::int64_t n = lo; n <= hi; ++n) {
        switch (fam) {
        case ResidueFamily::f4:
            kernel_cases(out, fam, Variant::thm1, n, P);
            break;
        case ResidueFamily::f6:
            kernel_cases(out, fam, Variant::same, n, P);
            break;
        case ResidueFamily::f7:
            kernel_cases(out, fam, Variant::diff, n, P);
            break;
        case ResidueFamily::prop21:
            prop21_cases(out, n, p.q);
            break;
        }
    }
    return out;
}

ResidueOutcome check_residue(const ResidueCase &c, const Coeff &eps, int levels)
{
    const auto t0 = std::chrono::steady_clock::now();
    ResidueOutcome out;
    Report &r = out.report;
    r.id = c.id;
    r.citation = c.citation;
    r.mode = "residue";
    r.bindings = c.bindings;
    r.bindings.emplace_back("x0", to_pq(c.x0));
    r.order_or_eps = to_pq(eps);
    try {
        const Coeff delta0 = pow(abs(c.q), std::abs(c.n) + 3);
        const auto f = c.f;
        const Coeff q = c.q;
        out.computed = richardson_residue(
            [&](const Coeff &x, const Coeff &e) {
                return numeric_eval([&](const NumericBackend &b) { return f(b, x); }, q, e);
            },
            c.x0, delta0, levels, eps);
        out.closed = numeric_eval(c.closed, c.q, eps);
        const Coeff diff = abs(Coeff(out.computed.value - out.closed.value));
        const Coeff bound = out.closed.bound + out.computed.bound + out.computed.estimate;
        r.abs_diff = diff;
        r.bound = bound;
        r.status = diff <= bound ? Status::pass : Status::fail;
    } catch (const std::exception &e) {
        r.status = Status::error;
        r.message = e.what();
    }
    r.millis = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    return out;
}

Report check_residue_lemma(const ResidueCase &c, const Coeff &eps, int levels)
{
    return check_residue(c, eps, levels).report;
}

std::vector<Report> run_residue_family(ResidueFamily fam, std::int64_t lo, std::int64_t hi, const ResidueParams &p)
{
    const std::vector<ResidueCase> cases = residue_cases(fam, lo, hi, p);
    std::vector<Report> out;
    struct Acc {
        Coeff sum{0};
        Coeff bound{0};
        int seen = 0;
        bool ok = true;
        const ResidueCase *first = nullptr;
    };
    std::map<std::string, Acc> groups;
    for (std::size_t i = 0; i < cases.size(); ++i) {
        const ResidueCase &c = cases[i];
        const ResidueOutcome o = check_residue(c, p.eps, p.levels);
        out.push_back(o.report);
        if (fam == ResidueFamily::prop21) {
            continue;
        }
        Acc &a = groups[c.group];
        if (!a.first) {
            a.first = &c;
        }
        if (o.report.status == Status::error) {
            a.ok = false;
        } else {
            a.sum += c.target == "F" ? o.computed.value : Coeff(-o.computed.value);
            a.bound += o.computed.bound + o.computed.estimate;
        }
        if (++a.seen == 3) {
            Report h;
            h.id = to_string(fam) + ":H@" + c.group;
            h.citation = "H = F - G \"is analytic for $x\\ne 0$\"";
            h.mode = "residue";
            h.bindings = o.report.bindings;
            h.order_or_eps = to_pq(p.eps);
            if (!a.ok) {
                h.status = Status::error;
                h.message = "a constituent residue could not be computed";
            } else {
                h.abs_diff = abs(a.sum);
                h.bound = a.bound;
                h.status = abs(a.sum) <= a.bound ? Status::pass : Status::fail;
            }
            out.push_back(std::move(h));
        }
    }
    return out;
}

} // namespace qseries

namespace qseries
{

std::string to_string(Status s)
{
    switch (s) {
    case Status::pass:
        return "pass";
    case Status::fail:
        return "fail";
    case Status::error:
        return "error";
    }
    return "?";
}

} // namespace qseries
