#include <qseries/evaluate.hpp>

#include <vector>

namespace qseries
{

Certified numeric_eval(const NumericBuilder &build, const Coeff &q, const Coeff &eps)
{
    check_q(q);
    if (eps <= 0) {
        throw std::invalid_argument("eps must be positive");
    }
    Coeff work = eps / 64;
    for (int round = 0; round < 12; ++round) {
        const NumericBackend b(q, work);
        Certified r = build(b);
        if (r.bound <= eps) {
            return r;
        }
        // The bound is roughly linear in the working eps.
        work = work * eps / (4 * r.bound);
        work = round_to_grid(work, 400);
        if (work <= 0) {
            break;
        }
    }
    throw PrecisionError("numeric evaluation could not reach the requested bound");
}

ResidueResult richardson_residue(const PointEvaluator &f, const Coeff &x0, const Coeff &delta0, int levels,
                                 const Coeff &eps)
{
    if (levels < 2) {
        throw std::invalid_argument("richardson_residue needs at least 2 levels");
    }
    const auto n = static_cast<std::size_t>(levels + 1);
    std::vector<Certified> g(n);
    Coeff delta = delta0;
    for (std::size_t j = 0; j < n; ++j, delta /= 2) {
        const Coeff x = x0 * (1 + delta);
        const Coeff h = x - x0;
        // |h| * bound(f) <= eps / 4 keeps every sample well under the target.
        const Certified fx = f(x, eps / (4 * abs(h)));
        g[j] = h * fx;
    }
    // Weight vectors of the extrapolation table: T[j][k] = sum_i W[j][k][i] g_i.
    using Weights = std::vector<Coeff>;
    std::vector<std::vector<Weights>> W(n, std::vector<Weights>(n));
    for (std::size_t j = 0; j < n; ++j) {
        W[j][0].assign(n, Coeff(0));
        W[j][0][j] = 1;
        for (std::size_t k = 1; k <= j; ++k) {
            const Coeff p(BigInt(1) << static_cast<mp_bitcnt_t>(k));
            W[j][k].assign(n, Coeff(0));
            for (std::size_t i = 0; i < n; ++i) {
                W[j][k][i] = (p * W[j][k - 1][i] - W[j - 1][k - 1][i]) / (p - 1);
            }
        }
    }
    auto value_of = [&](std::size_t j) {
        Coeff v(0);
        for (std::size_t i = 0; i < n; ++i) {
            v += W[j][j][i] * g[i].value;
        }
        return v;
    };
    const std::size_t L = n - 1;
    ResidueResult out;
    out.value = value_of(L);
    out.bound = 0;
    for (std::size_t i = 0; i < n; ++i) {
        out.bound += abs(W[L][L][i]) * g[i].bound;
    }
    const Coeff prev = value_of(L - 1);
    out.estimate = abs(Coeff(out.value - prev));
    const Coeff before = abs(Coeff(prev - value_of(L - 2)));
    if (out.estimate > before && before > 100 * out.bound) {
        throw NoConvergence("Richardson extrapolants do not contract");
    }
    return out;
}

} // namespace qseries
