#ifndef QSERIES_EVALUATE_HPP
#define QSERIES_EVALUATE_HPP

#include <functional>

#include <qseries/backend.hpp>
#include <qseries/error.hpp>
#include <qseries/numeric.hpp>

namespace qseries
{

using NumericBuilder = std::function<Certified(const NumericBackend &)>;

// Evaluates build at q with every primitive certified to a working eps, and
// tightens the working eps until the propagated bound is <= eps.
Certified numeric_eval(const NumericBuilder &build, const Coeff &q, const Coeff &eps);

// Residue of f at the simple pole x0 by Richardson extrapolation of
// g(delta) = (x - x0) f(x), x = x0 (1 + delta), over delta_j = delta0 / 2^j,
// j = 0..levels:
//   T[j][0] = g(delta_j),  T[j][k] = (2^k T[j][k-1] - T[j-1][k-1]) / (2^k - 1).
// value = T[L][L]; estimate = |T[L][L] - T[L-1][L-1]|; bound = sum_j |w_j| b_j
// where T[L][L] = sum_j w_j g(delta_j) and b_j is the certified bound of g(delta_j).
struct ResidueResult {
    Coeff value;
    Coeff estimate;
    Coeff bound;
};

// f(x, eps) evaluates the target at x certified to eps.
using PointEvaluator = std::function<Certified(const Coeff &x, const Coeff &eps)>;

// Throws PoleTooClose when some f(x) cannot be certified (e.g. another
// singularity inside the ladder) and NoConvergence when the last extrapolants
// do not contract: |T[L][L] - T[L-1][L-1]| > |T[L-1][L-1] - T[L-2][L-2]| while
// the latter is above the noise floor.
ResidueResult richardson_residue(const PointEvaluator &f, const Coeff &x0, const Coeff &delta0, int levels,
                                 const Coeff &eps);

} // namespace qseries

#endif
