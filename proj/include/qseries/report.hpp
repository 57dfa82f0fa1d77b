#ifndef QSERIES_REPORT_HPP
#define QSERIES_REPORT_HPP

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <qseries/rational.hpp>

namespace qseries
{

enum class Status { pass, fail, error };

std::string to_string(Status s);

// First coefficient where two formal sides differ, exponent in full q-powers.
struct Discrepancy {
    Coeff exponent;
    Coeff lhs;
    Coeff rhs;
};

// Outcome of one check. mode is "formal", "numeric" or "residue"; for the
// numeric modes abs_diff and bound are set, for formal fails first_discrepancy.
struct Report {
    std::string id;
    std::string citation;
    std::string mode;
    std::vector<std::pair<std::string, std::string>> bindings;
    std::string order_or_eps;
    Status status = Status::error;
    std::optional<Discrepancy> first_discrepancy;
    std::optional<Coeff> abs_diff;
    std::optional<Coeff> bound;
    std::string message;
    double millis = 0;
};

} // namespace qseries

#endif
