#include <qseries/verify.hpp>

#include <algorithm>
#include <atomic>
#include <chrono>
#include <set>
#include <thread>

#include <json.hpp>

#include <qseries/error.hpp>
#include <qseries/residues.hpp>
#include <qseries/sums.hpp>

namespace qseries
{

namespace
{

bool is_power_of(const Coeff &v, const Coeff &q, std::int64_t step, std::int64_t offset, bool either_sign)
{
    // v = (+-) q^(step k + offset) for some integer k? |q| < 1, so walk |w| toward 1.
    Coeff w = v / pow(q, offset);
    if (either_sign) {
        w = abs(w);
    }
    const Coeff qs = pow(q, step);
    for (int i = 0; i < 4096; ++i) {
        if (w == 1) {
            return true;
        }
        if (abs(w) > 1) {
            w *= qs;
            if (abs(w) < 1 && w != 1) {
                return false;
            }
        } else {
            w /= qs;
            if (abs(w) > 1) {
                return false;
            }
        }
    }
    return false;
}

std::string hyp_text(Hypothesis h, const std::string &v)
{
    switch (h) {
    case Hypothesis::annulus:
        return "|q| < |" + v + "| < 1";
    case Hypothesis::not_q_power:
        return v + " is an integral power of q";
    case Hypothesis::not_even_power:
        return v + " is of the form +-q^(2n)";
    case Hypothesis::not_odd_power:
        return v + " is of the form +-q^(2n+1)";
    }
    return "?";
}

[[noreturn]] void violation(const Constraint &c)
{
    if (c.hyp == Hypothesis::annulus) {
        throw ConstraintViolation("hypothesis " + hyp_text(c.hyp, c.var) + " fails");
    }
    throw ConstraintViolation(hyp_text(c.hyp, c.var));
}

bool formal_ok(const Monomial &m, Hypothesis h)
{
    switch (h) {
    case Hypothesis::annulus:
        return m.e > 0 && m.e < 1;
    case Hypothesis::not_q_power:
        return !m.is_integral_power_of_q();
    case Hypothesis::not_even_power:
        return !m.is_pm_even_power();
    case Hypothesis::not_odd_power:
        return !m.is_pm_odd_power();
    }
    return false;
}

bool numeric_ok(const Coeff &v, const Coeff &q, Hypothesis h)
{
    switch (h) {
    case Hypothesis::annulus:
        return abs(q) < abs(v) && abs(v) < 1;
    case Hypothesis::not_q_power:
        return v != 0 && !is_power_of(v, q, 1, 0, false);
    case Hypothesis::not_even_power:
        return v != 0 && !is_power_of(v, q, 2, 0, true);
    case Hypothesis::not_odd_power:
        return v != 0 && !is_power_of(v, q, 2, 1, true);
    }
    return false;
}

// Errors that mean "this specialization is not generic enough" rather than a defect.
bool is_genericity_error(const std::string &kind)
{
    static const std::set<std::string> kinds{"PoleAtSpecialization", "DegenerateZ", "ConstraintViolation",
                                             "PoleTooClose", "DivergentSpec", "NegativeExponentProduct"};
    return kinds.count(kind) != 0;
}

std::string error_kind(const Report &r)
{
    const auto p = r.message.find(':');
    return p == std::string::npos ? std::string() : r.message.substr(0, p);
}

double millis_since(std::chrono::steady_clock::time_point t0)
{
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
}

} // namespace

void check_constraints(const IdentitySpec &spec, const Specialization &s)
{
    for (const std::string &v : spec.vars) {
        const bool bound = s.mode == Specialization::Mode::formal ? s.formal.count(v) != 0 : s.numeric.count(v) != 0;
        if (!bound) {
            throw UnboundVariable("identity " + spec.id + " needs a binding for '" + v + "'");
        }
    }
    if (spec.index && (s.n < spec.index->first || s.n > spec.index->second)) {
        throw ConstraintViolation("index n = " + std::to_string(s.n) + " outside [" +
                                  std::to_string(spec.index->first) + ", " + std::to_string(spec.index->second) + "]");
    }
    if (s.mode == Specialization::Mode::numeric) {
        check_q(s.q);
    }
    for (const Constraint &c : spec.constraints) {
        const bool ok = s.mode == Specialization::Mode::formal ? formal_ok(s.formal.at(c.var), c.hyp)
                                                               : numeric_ok(s.numeric.at(c.var), s.q, c.hyp);
        if (!ok) {
            violation(c);
        }
    }
}

Report check_identity(const IdentitySpec &spec, const Specialization &s)
{
    const auto t0 = std::chrono::steady_clock::now();
    Report r;
    r.id = spec.id;
    r.citation = spec.citation;
    const bool formal = s.mode == Specialization::Mode::formal;
    r.mode = formal ? "formal" : "numeric";
    if (formal) {
        for (const auto &[k, v] : s.formal) {
            r.bindings.emplace_back(k, v.str());
        }
        r.order_or_eps = to_pq(s.order);
    } else {
        r.bindings.emplace_back("q", to_pq(s.q));
        for (const auto &[k, v] : s.numeric) {
            r.bindings.emplace_back(k, to_pq(v));
        }
        r.order_or_eps = to_pq(s.eps);
    }
    if (spec.index) {
        r.bindings.emplace_back("n", std::to_string(s.n));
    }
    try {
        check_constraints(spec, s);
        if (formal) {
            const FormalArgs a{s.formal, s.n};
            DiffReport d;
            if (spec.direct) {
                d = spec.direct(a, s.order);
            } else {
                d = eq_upto(spec.lhs(a, s.order), spec.rhs(a, s.order), s.order);
            }
            if (d.equal) {
                r.status = Status::pass;
            } else {
                r.status = Status::fail;
                r.first_discrepancy = Discrepancy{d.exponent, d.lhs, d.rhs};
            }
        } else {
            if (!spec.nlhs || !spec.nrhs) {
                throw Unsupported("identity " + spec.id + " has no numeric evaluation");
            }
            const NumericArgs a{s.numeric, s.n};
            const Certified L = numeric_eval([&](const NumericBackend &b) { return spec.nlhs(b, a); }, s.q, s.eps);
            const Certified R = numeric_eval([&](const NumericBackend &b) { return spec.nrhs(b, a); }, s.q, s.eps);
            const Coeff diff = abs(Coeff(L.value - R.value));
            const Coeff bound = L.bound + R.bound;
            r.abs_diff = diff;
            r.bound = bound;
            r.status = diff <= 2 * bound ? Status::pass : Status::fail;
        }
    } catch (const error &e) {
        r.status = Status::error;
        r.message = e.kind() + ": " + e.what();
    } catch (const std::exception &e) {
        r.status = Status::error;
        r.message = std::string("exception: ") + e.what();
    }
    r.millis = millis_since(t0);
    return r;
}

namespace
{

template <class T>
const T &pick(const std::vector<T> &v, std::mt19937_64 &rng)
{
    std::uniform_int_distribution<std::size_t> d(0, v.size() - 1);
    return v[d(rng)];
}

} // namespace

Specialization random_specialization(const IdentitySpec &spec, std::mt19937_64 &rng, const Coeff &order)
{
    static const std::vector<Coeff> exps{Coeff(1, 2), Coeff(1, 3), Coeff(2, 5), Coeff(3, 7), Coeff(5, 8)};
    static const std::vector<Coeff> coeffs{Coeff(1), Coeff(-1), Coeff(2), Coeff(-2), Coeff(3), Coeff(1, 2)};
    Specialization s;
    s.mode = Specialization::Mode::formal;
    s.order = order;
    for (int attempt = 0; attempt < 1000; ++attempt) {
        s.formal.clear();
        for (const std::string &v : spec.vars) {
            s.formal[v] = Monomial(pick(coeffs, rng), pick(exps, rng));
        }
        bool ok = true;
        for (const Constraint &c : spec.constraints) {
            ok = ok && formal_ok(s.formal.at(c.var), c.hyp);
        }
        if (ok) {
            return s;
        }
    }
    throw ConfigError("no specialization satisfies the constraints of " + spec.id);
}

Specialization random_numeric_specialization(const IdentitySpec &spec, std::mt19937_64 &rng, const Coeff &eps)
{
    static const std::vector<Coeff> qs{Coeff(1, 5), Coeff(1, 7), Coeff(1, 10)};
    static const std::vector<Coeff> vals{Coeff(1, 2), Coeff(2, 5), Coeff(1, 3), Coeff(3, 10), Coeff(-1, 2),
                                         Coeff(-3, 5)};
    Specialization s;
    s.mode = Specialization::Mode::numeric;
    s.eps = eps;
    for (int attempt = 0; attempt < 1000; ++attempt) {
        s.q = pick(qs, rng);
        s.numeric.clear();
        for (const std::string &v : spec.vars) {
            s.numeric[v] = pick(vals, rng);
        }
        bool ok = true;
        for (const Constraint &c : spec.constraints) {
            ok = ok && numeric_ok(s.numeric.at(c.var), s.q, c.hyp);
        }
        if (ok) {
            return s;
        }
    }
    throw ConfigError("no numeric point satisfies the constraints of " + spec.id);
}

Coeff monomial_at(const Monomial &m, const Coeff &t, std::int64_t D)
{
    const Coeff k = m.e * D;
    if (!is_integer(k)) {
        throw std::invalid_argument("monomial exponent is not a multiple of 1/D");
    }
    return m.c * pow(t, k.get_num().get_si());
}

namespace
{

std::int64_t checked_int(const Coeff &c, const char *what)
{
    if (!is_integer(c)) {
        throw Unsupported(std::string("cross-validation needs an integral ") + what);
    }
    return c.get_num().get_si();
}

// Value of the series at q = t^D (D a multiple of the series scale).
Coeff series_at(const Series &s, const Coeff &t, std::int64_t D)
{
    if (D % s.scale() != 0) {
        throw std::invalid_argument("series scale does not divide D");
    }
    return evaluate_at(s, pow(t, D / s.scale()));
}

template <class S, class ToNumeric>
CrossReport cross_common(const S &s, const Coeff &t, std::int64_t D, const Coeff &N, const Coeff &eps,
                         ToNumeric to_numeric)
{
    const Coeff q = pow(t, D);
    const Coeff aq = abs(q);
    const Coeff at = abs(t);
    CrossReport out;
    const Series SN = expand(s, N);
    const Series AN = expand(s, N, true);
    out.formal_value = series_at(SN, t, D);
    const Certified direct = numeric_sum(to_numeric(t, D), q, eps);
    const Certified absolute = numeric_sum(to_numeric(at, D), aq, eps, true);
    const Coeff tail = absolute.value + absolute.bound - series_at(AN, at, D);
    out.numeric_value = direct.value;
    out.diff = abs(Coeff(out.formal_value - direct.value));
    out.allowance = direct.bound + tail;
    out.pass = out.diff <= out.allowance;
    return out;
}

} // namespace

CrossReport cross_validate(const BilateralSum<Monomial> &s, const Coeff &t, std::int64_t D, const Coeff &N,
                           const Coeff &eps)
{
    checked_int(s.p, "linear exponent");
    if (s.den) {
        checked_int(s.den->b, "denominator slope");
        checked_int(s.den->d, "denominator offset");
    }
    auto to_numeric = [&](const Coeff &tt, std::int64_t DD) {
        BilateralSum<Coeff> c;
        c.coef = monomial_at(s.coef, tt, DD) * monomial_at(Monomial::q_pow(s.shift), tt, DD);
        c.shift = 0;
        c.a = s.a;
        c.p = s.p;
        c.w = monomial_at(s.w, tt, DD);
        if (s.den) {
            c.den = LinearDenominator<Coeff>{monomial_at(s.den->u, tt, DD), s.den->b, s.den->d};
        }
        return c;
    };
    return cross_common(s, t, D, N, eps, to_numeric);
}

CrossReport cross_validate(const QuadrantSum<Monomial> &s, const Coeff &t, std::int64_t D, const Coeff &N,
                           const Coeff &eps)
{
    if (s.den) {
        checked_int(s.den->p, "denominator slope");
        checked_int(s.den->r, "denominator offset");
    }
    checked_int(s.la, "linear exponent");
    checked_int(s.lb, "linear exponent");
    checked_int(s.cross, "cross exponent");
    auto to_numeric = [&](const Coeff &tt, std::int64_t DD) {
        QuadrantSum<Coeff> c;
        c.coef = monomial_at(s.coef, tt, DD) * monomial_at(Monomial::q_pow(s.shift), tt, DD);
        c.shift = 0;
        c.qa = s.qa;
        c.qb = s.qb;
        c.cross = s.cross;
        c.la = s.la;
        c.lb = s.lb;
        c.y = monomial_at(s.y, tt, DD);
        c.z = monomial_at(s.z, tt, DD);
        if (s.den) {
            c.den = DiagonalDenominator<Coeff>{monomial_at(s.den->u, tt, DD), s.den->p, s.den->r};
        }
        c.parity = s.parity;
        return c;
    };
    return cross_common(s, t, D, N, eps, to_numeric);
}

// -- suite ---------------------------------------------------------------------

bool SuiteReport::all_passed() const
{
    return std::all_of(reports.begin(), reports.end(), [](const Report &r) { return r.status == Status::pass; });
}

SuiteConfig parse_suite_config(const std::string &json_text)
{
    using nlohmann::json;
    json j;
    try {
        j = json::parse(json_text);
    } catch (const json::exception &e) {
        throw ConfigError(std::string("malformed config: ") + e.what());
    }
    if (!j.is_object()) {
        throw ConfigError("config must be a JSON object");
    }
    SuiteConfig c;
    try {
        for (const auto &[key, value] : j.items()) {
            if (key == "identities") {
                c.identities = value.get<std::vector<std::string>>();
                c.empty = c.identities.empty();
            } else if (key == "seed") {
                c.seed = value.get<std::uint64_t>();
            } else if (key == "order") {
                c.order = value.is_string() ? parse_rational(value.get<std::string>()) : Coeff(value.get<long>());
            } else if (key == "eps") {
                if (!value.is_string()) {
                    throw ConfigError("eps must be an exact rational string such as \"1/10^30\" or \"1e-30\"");
                }
                c.eps = parse_rational(value.get<std::string>());
            } else if (key == "parallelism") {
                c.parallelism = value.get<int>();
            } else if (key == "samples") {
                c.samples = value.get<int>();
            } else if (key == "numeric") {
                c.numeric = value.get<bool>();
            } else if (key == "residues") {
                c.residues = value.get<bool>();
            } else if (key == "include_negative") {
                c.include_negative = value.get<bool>();
            } else {
                throw ConfigError("unknown config key '" + key + "'");
            }
        }
    } catch (const json::exception &e) {
        throw ConfigError(std::string("malformed config value: ") + e.what());
    } catch (const std::invalid_argument &e) {
        throw ConfigError(std::string("malformed config value: ") + e.what());
    }
    if (c.parallelism < 1 || c.samples < 0 || c.order <= 0 || c.eps <= 0) {
        throw ConfigError("parallelism must be >= 1, samples >= 0, order and eps positive");
    }
    for (const std::string &id : c.identities) {
        if (id.rfind("residues:", 0) == 0) {
            residue_family_from_string(id.substr(9));
        } else {
            find_identity(id);
        }
    }
    return c;
}

namespace
{

struct Job {
    const IdentitySpec *spec = nullptr;
    bool numeric = false;
    std::int64_t n = 0;
    std::optional<ResidueFamily> family;
    std::uint64_t seed = 0;
};

std::uint64_t job_seed(std::uint64_t seed, std::size_t i)
{
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(i)};
    std::uint64_t out[1];
    std::uint32_t words[2];
    seq.generate(words, words + 2);
    out[0] = (static_cast<std::uint64_t>(words[0]) << 32) | words[1];
    return out[0];
}

std::vector<Report> run_job(const Job &job, const SuiteConfig &cfg)
{
    if (job.family) {
        return run_residue_family(*job.family, -2, 3);
    }
    std::mt19937_64 rng(job.seed);
    Report last;
    for (int attempt = 0; attempt < 25; ++attempt) {
        Specialization s = job.numeric ? random_numeric_specialization(*job.spec, rng, cfg.eps)
                                       : random_specialization(*job.spec, rng, cfg.order);
        s.n = job.n;
        last = check_identity(*job.spec, s);
        if (last.status != Status::error || !is_genericity_error(error_kind(last))) {
            return {last};
        }
    }
    return {last};
}

} // namespace

SuiteReport run_suite(const SuiteConfig &config)
{
    SuiteReport out;
    if (config.empty) {
        return out;
    }
    std::vector<const IdentitySpec *> specs;
    std::vector<ResidueFamily> families;
    if (config.identities.empty()) {
        for (const IdentitySpec &s : catalog()) {
            if (!s.negative_control || config.include_negative) {
                specs.push_back(&s);
            }
        }
        if (config.residues) {
            families = all_residue_families();
        }
    } else {
        for (const std::string &id : config.identities) {
            if (id.rfind("residues:", 0) == 0) {
                families.push_back(residue_family_from_string(id.substr(9)));
            } else {
                specs.push_back(&find_identity(id));
            }
        }
    }
    std::vector<Job> jobs;
    for (const IdentitySpec *s : specs) {
        std::int64_t lo = 0, hi = 0;
        if (s->index) {
            lo = s->index->first;
            hi = s->index->second;
        }
        for (std::int64_t n = lo; n <= hi; ++n) {
            for (int k = 0; k < config.samples; ++k) {
                jobs.push_back({s, false, n, std::nullopt, 0});
            }
            if (config.numeric && s->nlhs) {
                jobs.push_back({s, true, n, std::nullopt, 0});
            }
        }
    }
    for (ResidueFamily f : families) {
        jobs.push_back({nullptr, false, 0, f, 0});
    }
    for (std::size_t i = 0; i < jobs.size(); ++i) {
        jobs[i].seed = job_seed(config.seed, i);
    }
    std::vector<std::vector<Report>> results(jobs.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < jobs.size(); i = next++) {
            results[i] = run_job(jobs[i], config);
        }
    };
    const int threads = std::max(1, config.parallelism);
    std::vector<std::thread> pool;
    for (int i = 1; i < threads; ++i) {
        pool.emplace_back(worker);
    }
    worker();
    for (std::thread &t : pool) {
        t.join();
    }
    for (auto &rs : results) {
        for (Report &r : rs) {
            out.reports.push_back(std::move(r));
        }
    }
    std::stable_sort(out.reports.begin(), out.reports.end(),
                     [](const Report &a, const Report &b) { return a.id < b.id; });
    return out;
}

// -- JSON -------------------------------------------------------------------------

namespace
{

nlohmann::ordered_json report_json(const Report &r)
{
    nlohmann::ordered_json j;
    j["id"] = r.id;
    j["citation"] = r.citation;
    j["mode"] = r.mode;
    nlohmann::ordered_json b = nlohmann::ordered_json::object();
    for (const auto &[k, v] : r.bindings) {
        b[k] = v;
    }
    j["bindings"] = b;
    j["order_or_eps"] = r.order_or_eps;
    j["status"] = to_string(r.status);
    if (r.first_discrepancy) {
        const Discrepancy &d = *r.first_discrepancy;
        j["first_discrepancy"] = {{"exponent_num", d.exponent.get_num().get_str()},
                                  {"exponent_den", d.exponent.get_den().get_str()},
                                  {"lhs", to_pq(d.lhs)},
                                  {"rhs", to_pq(d.rhs)}};
    } else {
        j["first_discrepancy"] = nullptr;
    }
    j["abs_diff"] = r.abs_diff ? nlohmann::ordered_json(to_pq(*r.abs_diff)) : nlohmann::ordered_json(nullptr);
    j["bound"] = r.bound ? nlohmann::ordered_json(to_pq(*r.bound)) : nlohmann::ordered_json(nullptr);
    j["millis"] = r.millis;
    if (!r.message.empty()) {
        j["message"] = r.message;
    }
    return j;
}

} // namespace

std::string to_json(const Report &r)
{
    return report_json(r).dump(2);
}

std::string to_json(const SuiteReport &r)
{
    nlohmann::ordered_json arr = nlohmann::ordered_json::array();
    for (const Report &x : r.reports) {
        arr.push_back(report_json(x));
    }
    nlohmann::ordered_json j;
    j["passed"] = r.all_passed();
    j["reports"] = arr;
    return j.dump(2);
}

} // namespace qseries
