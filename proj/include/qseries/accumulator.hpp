#ifndef QSERIES_ACCUMULATOR_HPP
#define QSERIES_ACCUMULATOR_HPP

#include <vector>

#include <qseries/series.hpp>

namespace qseries
{

// Dense coefficient buffer for building a Series term by term, exact through
// a fixed scaled order. Exponents above the order are ignored.
class Accumulator
{
public:
    Accumulator(std::int64_t scale, Exp order) : scale_(scale), order_(order) {}

    void add(Exp e, const Coeff &c);

    // Adds c q^e / (1 - cu q^du) expanded per geom_expand. With absolute set,
    // every emitted coefficient is replaced by its absolute value. Returns the
    // lowest exponent that the expansion starts at (whether or not it fell
    // inside the window).
    Exp add_geometric(Exp e, const Coeff &c, const Coeff &cu, Exp du, bool absolute = false);

    std::int64_t scale() const noexcept
    {
        return scale_;
    }
    Exp order() const noexcept
    {
        return order_;
    }

    Series finish() &&;

private:
    Coeff &slot(Exp e);

    std::int64_t scale_;
    Exp order_;
    Exp base_ = 0;
    std::vector<Coeff> buf_;
};

} // namespace qseries

#endif
