#ifndef QSERIES_RESIDUES_HPP
#define QSERIES_RESIDUES_HPP

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include <qseries/evaluate.hpp>
#include <qseries/kernels.hpp>
#include <qseries/report.hpp>

namespace qseries
{

// f4, f6, f7: poles of F, G1, G2 for the thm1, same and diff kernels.
// prop21: poles of 1/j(beta z^b; q^m).
enum class ResidueFamily { f4, f6, f7, prop21 };

std::string to_string(ResidueFamily f);
ResidueFamily residue_family_from_string(const std::string &s);
const std::vector<ResidueFamily> &all_residue_families();

// target(b, x) evaluates the function whose pole sits at x0; closed(b) is the
// residue predicted by the lemma. group names the pole family member
// ("q^n:n=2"), so F, G1 and G2 at the same pole share a group.
struct ResidueCase {
    std::string id;
    std::string citation;
    ResidueFamily family;
    std::string target;
    std::string group;
    std::int64_t n = 0;
    Coeff q;
    Coeff x0;
    std::vector<std::pair<std::string, std::string>> bindings;
    std::function<Certified(const NumericBackend &, const Coeff &x)> f;
    NumericBuilder closed;
};

struct ResidueParams {
    Coeff q{1, 7};
    Coeff y{1, 2};
    Coeff z{2, 5};
    Coeff eps{BigInt(1), BigInt("1000000000000000000000000000000")};
    int levels = 6;
    // Negative control: the same-parity G2 residue at -q^(2n) without the
    // factor 1/2 that its derivation produces.
    bool printed_same_g2 = false;
};

// All cases of a family for n (or k, for prop21) in [lo, hi].
std::vector<ResidueCase> residue_cases(ResidueFamily fam, std::int64_t lo, std::int64_t hi,
                                       const ResidueParams &p = {});

// Richardson residue of the target at x0 with delta0 = |q|^(|n|+3), against the
// closed form. Pass iff |computed - closed| <= closed.bound + bound + estimate.
struct ResidueOutcome {
    Report report;
    ResidueResult computed;
    Certified closed;
};
ResidueOutcome check_residue(const ResidueCase &c, const Coeff &eps, int levels = 6);
Report check_residue_lemma(const ResidueCase &c, const Coeff &eps, int levels = 6);

// Runs every case, then for each group holding F, G1 and G2 adds a report on
// Res F - Res G1 - Res G2, the residue of H = F - G, which must vanish.
// Reports are in case order with each completeness report after its group.
std::vector<Report> run_residue_family(ResidueFamily fam, std::int64_t lo, std::int64_t hi,
                                       const ResidueParams &p = {});

} // namespace qseries

#endif
