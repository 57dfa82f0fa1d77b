#ifndef QSERIES_VERIFY_HPP
#define QSERIES_VERIFY_HPP

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include <qseries/evaluate.hpp>
#include <qseries/kernels.hpp>
#include <qseries/report.hpp>
#include <qseries/series.hpp>

namespace qseries
{

// Hypotheses attached to a variable. annulus: |q| < |v| < 1 (formally
// 0 < e < 1); not_q_power: v is not an integral power of q; not_even_power /
// not_odd_power: v is not +-q^(2n) / +-q^(2n+1).
enum class Hypothesis { annulus, not_q_power, not_even_power, not_odd_power };

struct Constraint {
    std::string var;
    Hypothesis hyp;
};

template <class V>
struct Args {
    std::map<std::string, V> vars;
    std::int64_t n = 0;

    const V &operator()(const std::string &name) const;
};

using FormalArgs = Args<Monomial>;
using NumericArgs = Args<Coeff>;

// A side built at working order W from the formal backend (generic sides) or
// directly through q^N (sums with no numeric counterpart).
using FormalSide = std::function<Series(const FormalArgs &, const Coeff &N)>;
using NumericSide = std::function<Certified(const NumericBackend &, const NumericArgs &)>;
using DirectCheck = std::function<DiffReport(const FormalArgs &, const Coeff &N)>;

struct IdentitySpec {
    std::string id;
    std::string citation;
    std::vector<std::string> vars;
    std::vector<Constraint> constraints;
    // Indexed families (e.g. an integer shift n) run over [lo, hi].
    std::optional<std::pair<std::int64_t, std::int64_t>> index;
    bool negative_control = false;
    FormalSide lhs, rhs;
    // Set for identities whose two sides are available numerically.
    NumericSide nlhs, nrhs;
    // Replaces lhs/rhs for checks that produce their own comparison.
    DirectCheck direct;
};

const std::vector<IdentitySpec> &catalog();
// Throws ConfigError for unknown ids.
const IdentitySpec &find_identity(const std::string &id);

struct Specialization {
    enum class Mode { formal, numeric } mode = Mode::formal;
    std::map<std::string, Monomial> formal;
    std::map<std::string, Coeff> numeric;
    std::int64_t n = 0;
    Coeff order{25};
    Coeff q;
    Coeff eps;
};

// Throws ConstraintViolation naming the first failed hypothesis.
void check_constraints(const IdentitySpec &spec, const Specialization &s);

// Formal: both sides through q^order, compared with eq_upto. Numeric: pass iff
// |L - R| <= 2 (bound_L + bound_R). Builder errors give status error.
Report check_identity(const IdentitySpec &spec, const Specialization &s);

// Formal specialization drawn from exponents {1/2, 1/3, 2/5, 3/7, 5/8} and
// coefficients {1, -1, 2, -2, 3, 1/2}, satisfying the identity's constraints
// (annulus variables keep exponents in (0,1) by construction).
Specialization random_specialization(const IdentitySpec &spec, std::mt19937_64 &rng, const Coeff &order);

// Numeric point: q from {1/5, 1/7, 1/10}, values from {1/2, 2/5, 1/3, 3/10, -1/2, -3/5}.
Specialization random_numeric_specialization(const IdentitySpec &spec, std::mt19937_64 &rng, const Coeff &eps);

// Formal-then-substitute against direct numeric evaluation for a sum with a
// coefficientwise majorant, at q = t^D where D is a multiple of every exponent
// denominator in the sum, so each variable c q^e takes the rational value c t^(eD). With S_N the expansion through
// q^N, A_N its absolute-value counterpart and A the absolute numeric sum at |q|:
//   |S(q) - S_N(q)| <= A(|q|) - A_N(|q|),
// so the check passes iff |S_N(q) - value| <= bound + (A.value + A.bound - A_N(|q|)).
struct CrossReport {
    bool pass = false;
    Coeff formal_value;
    Coeff numeric_value;
    Coeff diff;
    Coeff allowance;
};
CrossReport cross_validate(const BilateralSum<Monomial> &s, const Coeff &t, std::int64_t D, const Coeff &N,
                           const Coeff &eps);
CrossReport cross_validate(const QuadrantSum<Monomial> &s, const Coeff &t, std::int64_t D, const Coeff &N,
                           const Coeff &eps);

// Numeric value of a monomial c q^e at q = t^D where D is a multiple of den(e).
Coeff monomial_at(const Monomial &m, const Coeff &t, std::int64_t D);

struct SuiteConfig {
    std::vector<std::string> identities; // empty: whole default suite
    std::uint64_t seed = 20240611;
    Coeff order{20};
    Coeff eps{BigInt(1), BigInt("1000000000000000000000000000000")};
    int parallelism = 1;
    int samples = 3;
    bool numeric = true;   // also run identities with numeric sides at a numeric point
    bool residues = true;  // residue families (with an explicit list: ids "residues:f4" etc.)
    bool include_negative = false;
    bool empty = false; // an explicitly empty identities list
};

// Parses the JSON config {identities, seed, order, eps, parallelism}; throws
// ConfigError on malformed input or unknown ids.
SuiteConfig parse_suite_config(const std::string &json_text);

struct SuiteReport {
    std::vector<Report> reports;
    bool all_passed() const;
};

SuiteReport run_suite(const SuiteConfig &config);

std::string to_json(const Report &r);
std::string to_json(const SuiteReport &r);

} // namespace qseries

#endif
