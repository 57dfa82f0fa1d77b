#include <cctype>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include <qseries/error.hpp>
#include <qseries/residues.hpp>
#include <qseries/verify.hpp>

#include "dsl.hpp"

namespace
{

using namespace qseries;

// Bad flags, bad expressions and bad bindings: exit 2.
struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

Coeff rational_arg(const std::string &flag, const std::string &text)
{
    try {
        return parse_rational(text);
    } catch (const std::invalid_argument &) {
        throw UsageError(flag + ": not a rational number: " + text);
    }
}

dsl::Bindings parse_bindings(const std::vector<std::string> &items)
{
    dsl::Bindings out;
    for (const std::string &item : items) {
        const auto eq = item.find('=');
        const std::string name = item.substr(0, eq);
        const bool ident = !name.empty() && name != "q" && (std::isalpha(static_cast<unsigned char>(name[0])) || name[0] == '_');
        if (eq == std::string::npos || !ident) {
            throw UsageError("--bind expects NAME=VALUE, got '" + item + "'");
        }
        if (out.count(name)) {
            throw UsageError("'" + name + "' is bound twice");
        }
        try {
            out.emplace(name, dsl::parse_monomial(item.substr(eq + 1)));
        } catch (const error &e) {
            throw UsageError("--bind " + name + ": " + e.what());
        }
    }
    return out;
}

Coeff numeric_value(const Monomial &m, const Coeff &q)
{
    if (!is_integer(m.e)) {
        throw UsageError("numeric bindings need integral q-exponents, got " + m.str());
    }
    return m.c * pow(q, m.e.get_num().get_si());
}

Coeff exponent_of(const Term &t, std::int64_t scale)
{
    Coeff e(BigInt(t.exp), BigInt(scale));
    e.canonicalize();
    return e;
}

std::string sci(const Coeff &c)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3e", approx(c));
    return buf;
}

std::string status_word(Status s)
{
    switch (s) {
    case Status::pass: return "PASS";
    case Status::fail: return "FAIL";
    case Status::error: return "ERROR";
    }
    return "?";
}

std::string report_line(const Report &r)
{
    std::string s = status_word(r.status) + "  " + r.id + "  [" + r.mode + " " + r.order_or_eps + "]";
    for (const auto &[k, v] : r.bindings) {
        s += " " + k + "=" + v;
    }
    if (r.first_discrepancy) {
        s += "  first discrepancy at q^" + r.first_discrepancy->exponent.get_str() + ": " +
             r.first_discrepancy->lhs.get_str() + " vs " + r.first_discrepancy->rhs.get_str();
    }
    if (r.abs_diff) {
        s += "  |diff|=" + sci(*r.abs_diff);
    }
    if (r.bound) {
        s += " bound=" + sci(*r.bound);
    }
    if (!r.message.empty()) {
        s += "  (" + r.message + ")";
    }
    return s;
}

std::pair<std::int64_t, std::int64_t> parse_range(const std::string &text)
{
    const auto dots = text.find("..");
    try {
        if (dots == std::string::npos) {
            const std::int64_t n = std::stoll(text);
            return {n, n};
        }
        std::size_t used = 0;
        const std::int64_t lo = std::stoll(text.substr(0, dots), &used);
        if (used != dots) {
            throw std::invalid_argument(text);
        }
        const std::int64_t hi = std::stoll(text.substr(dots + 2), &used);
        if (used != text.size() - dots - 2 || lo > hi) {
            throw std::invalid_argument(text);
        }
        return {lo, hi};
    } catch (const std::logic_error &) {
        throw UsageError("--n expects N or LO..HI, got '" + text + "'");
    }
}

struct Options {
    std::string expr;
    std::vector<std::string> binds;
    std::string order = "20";
    bool numeric = false;
    std::string q;
    std::string eps = "1e-30";
    std::string format = "text";
    std::string id;
    std::int64_t n = 0;
    std::string config;
    std::optional<std::uint64_t> seed;
    std::optional<int> jobs;
    std::string family;
    std::string range = "-2..3";
    std::string y = "1/2", z = "2/5";
    int levels = 6;
};

int run_expand(const Options &o)
{
    const dsl::Ast ast = dsl::parse(o.expr);
    const dsl::Bindings b = parse_bindings(o.binds);
    if (o.numeric) {
        if (o.q.empty()) {
            throw UsageError("--numeric requires --q");
        }
        const Certified c = dsl::eval_numeric(ast, b, rational_arg("--q", o.q), rational_arg("--eps", o.eps));
        if (o.format == "json") {
            nlohmann::ordered_json j;
            j["value"] = to_pq(c.value);
            j["bound"] = to_pq(c.bound);
            std::cout << j.dump() << "\n";
        } else {
            std::cout << c.value.get_str() << "\n~ " << sci(c.value) << " +- " << sci(c.bound) << "\n";
        }
        return 0;
    }
    const Coeff order = rational_arg("--order", o.order);
    const Series s = dsl::eval_formal(ast, b, order);
    if (o.format == "json") {
        nlohmann::ordered_json coeffs = nlohmann::ordered_json::object();
        for (const Term &t : s.terms()) {
            coeffs[to_pq(exponent_of(t, s.scale()))] = to_pq(t.coeff);
        }
        nlohmann::ordered_json j;
        j["order"] = to_pq(order);
        j["coefficients"] = coeffs;
        std::cout << j.dump() << "\n";
    } else {
        for (const Term &t : s.terms()) {
            std::cout << "q^" << exponent_of(t, s.scale()).get_str() << "\t" << t.coeff.get_str() << "\n";
        }
        std::cout << "exact through q^" << order.get_str() << "\n";
    }
    return 0;
}

int run_verify(const Options &o)
{
    const IdentitySpec *spec = nullptr;
    try {
        spec = &find_identity(o.id);
    } catch (const ConfigError &e) {
        throw UsageError(e.what());
    }
    const dsl::Bindings b = parse_bindings(o.binds);
    for (const std::string &v : spec->vars) {
        if (!b.count(v)) {
            throw UsageError(o.id + " needs --bind " + v + "=...");
        }
    }
    Specialization s;
    s.n = o.n;
    if (o.numeric) {
        if (o.q.empty()) {
            throw UsageError("--numeric requires --q");
        }
        s.mode = Specialization::Mode::numeric;
        s.q = rational_arg("--q", o.q);
        s.eps = rational_arg("--eps", o.eps);
        for (const auto &[k, m] : b) {
            s.numeric.emplace(k, numeric_value(m, s.q));
        }
    } else {
        s.order = rational_arg("--order", o.order);
        s.formal = b;
    }
    try {
        check_constraints(*spec, s);
    } catch (const ConstraintViolation &e) {
        throw UsageError(e.what());
    }
    const Report r = check_identity(*spec, s);
    std::cout << (o.format == "json" ? to_json(r) : report_line(r)) << "\n";
    return r.status == Status::pass ? 0 : 1;
}

int run_suite_cmd(const Options &o)
{
    SuiteConfig cfg;
    if (!o.config.empty()) {
        std::ifstream in(o.config);
        if (!in) {
            throw UsageError("cannot read " + o.config);
        }
        std::stringstream text;
        text << in.rdbuf();
        try {
            cfg = parse_suite_config(text.str());
        } catch (const ConfigError &e) {
            throw UsageError(e.what());
        }
    }
    if (o.seed) {
        cfg.seed = *o.seed;
    }
    if (o.jobs) {
        cfg.parallelism = *o.jobs;
    }
    const SuiteReport rep = run_suite(cfg);
    if (o.format == "json") {
        std::cout << to_json(rep) << "\n";
    } else {
        std::size_t passed = 0;
        for (const Report &r : rep.reports) {
            std::cout << report_line(r) << "\n";
            passed += r.status == Status::pass;
        }
        std::cout << passed << "/" << rep.reports.size() << " checks passed\n";
    }
    return rep.all_passed() ? 0 : 1;
}

int run_residues(const Options &o)
{
    std::vector<ResidueFamily> fams = all_residue_families();
    if (!o.family.empty()) {
        try {
            fams = {residue_family_from_string(o.family)};
        } catch (const ConfigError &e) {
            throw UsageError(e.what());
        }
    }
    const auto [lo, hi] = parse_range(o.range);
    ResidueParams p;
    p.q = rational_arg("--q", o.q.empty() ? "1/7" : o.q);
    p.y = rational_arg("--y", o.y);
    p.z = rational_arg("--z", o.z);
    p.eps = rational_arg("--eps", o.eps);
    p.levels = o.levels;
    if (p.q <= 0 || p.q >= 1) {
        throw UsageError("--q must lie in (0, 1)");
    }
    std::vector<Report> all;
    for (ResidueFamily f : fams) {
        for (Report &r : run_residue_family(f, lo, hi, p)) {
            all.push_back(std::move(r));
        }
    }
    bool ok = true;
    if (o.format == "json") {
        SuiteReport rep{all};
        std::cout << to_json(rep) << "\n";
        ok = rep.all_passed();
    } else {
        for (const Report &r : all) {
            std::cout << report_line(r) << "\n";
            ok = ok && r.status == Status::pass;
        }
    }
    return ok ? 0 : 1;
}

int run_list()
{
    for (const IdentitySpec &s : catalog()) {
        std::cout << s.id << "\t" << s.citation;
        if (s.negative_control) {
            std::cout << "\t[negative control]";
        }
        std::cout << "\n";
    }
    for (ResidueFamily f : all_residue_families()) {
        std::cout << "residues:" << to_string(f) << "\tresidue family\n";
    }
    return 0;
}

} // namespace

int main(int argc, char **argv)
{
    CLI::App app{"Exact q-series expansion and identity checks"};
    app.require_subcommand(1);
    Options o;
    const auto formats = CLI::IsMember({"text", "json"});

    auto *expand = app.add_subcommand("expand", "Expand an expression formally or numerically");
    expand->add_option("expr", o.expr, "expression, e.g. \"j(q*x; q^3)\"")->required();
    expand->add_option("--bind", o.binds, "NAME=VALUE with VALUE c*q^(p/r)");
    expand->add_option("--order", o.order, "q-order N (formal mode)");
    expand->add_flag("--numeric", o.numeric, "evaluate at a rational q");
    expand->add_option("--q", o.q, "rational q for --numeric");
    expand->add_option("--eps", o.eps, "error bound for --numeric");
    expand->add_option("--format", o.format)->check(formats);

    auto *verify = app.add_subcommand("verify", "Check one catalog identity at a specialization");
    verify->add_option("--id", o.id)->required();
    verify->add_option("--bind", o.binds);
    verify->add_option("--n", o.n, "index for indexed identities");
    verify->add_option("--order", o.order);
    verify->add_flag("--numeric", o.numeric);
    verify->add_option("--q", o.q);
    verify->add_option("--eps", o.eps);
    verify->add_option("--format", o.format)->check(formats);

    auto *suite = app.add_subcommand("suite", "Run the verification suite");
    suite->add_option("--config", o.config, "JSON config file");
    suite->add_option("--seed", o.seed);
    suite->add_option("--jobs", o.jobs)->check(CLI::PositiveNumber);
    suite->add_option("--format", o.format)->check(formats);

    auto *residues = app.add_subcommand("residues", "Check residue closed forms numerically");
    residues->add_option("--family", o.family)->check(CLI::IsMember({"f4", "f6", "f7", "prop21"}));
    residues->add_option("--n", o.range, "N or LO..HI");
    residues->add_option("--q", o.q);
    residues->add_option("--y", o.y);
    residues->add_option("--z", o.z);
    residues->add_option("--eps", o.eps);
    residues->add_option("--levels", o.levels)->check(CLI::Range(2, 12));
    residues->add_option("--format", o.format)->check(formats);

    auto *list = app.add_subcommand("list", "Print the identity catalog");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        return app.exit(e) == 0 ? 0 : 2;
    }

    try {
        if (*expand) {
            return run_expand(o);
        }
        if (*verify) {
            return run_verify(o);
        }
        if (*suite) {
            return run_suite_cmd(o);
        }
        if (*residues) {
            return run_residues(o);
        }
        if (*list) {
            return run_list();
        }
    } catch (const UsageError &e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const error &e) {
        std::cerr << e.kind() << ": " << e.what() << "\n";
        return 2;
    } catch (const std::exception &e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
