#include <qseries/accumulator.hpp>

#include <algorithm>

#include <qseries/error.hpp>

namespace qseries
{

Coeff &Accumulator::slot(Exp e)
{
    if (buf_.empty()) {
        base_ = e;
        buf_.resize(static_cast<std::size_t>(order_ - e + 1));
    } else if (e < base_) {
        // Grow downwards with some slack to amortize repeated prepends.
        const Exp need = base_ - e;
        const Exp grow = std::max<Exp>(need, static_cast<Exp>(buf_.size()) / 2 + 16);
        buf_.insert(buf_.begin(), static_cast<std::size_t>(grow), Coeff());
        base_ -= grow;
    }
    return buf_[static_cast<std::size_t>(e - base_)];
}

void Accumulator::add(Exp e, const Coeff &c)
{
    if (e > order_ || c == 0) {
        return;
    }
    auto &s = slot(e);
    mpq_add(s.get_mpq_t(), s.get_mpq_t(), c.get_mpq_t());
}

Exp Accumulator::add_geometric(Exp e, const Coeff &c, const Coeff &cu, Exp du, bool absolute)
{
    if (du == 0) {
        if (cu == 1) {
            throw PoleAtSpecialization("denominator 1 - q^0 vanishes: non-generic specialization");
        }
        Coeff v = c / (1 - cu);
        add(e, absolute ? abs(v) : v);
        return e;
    }
    if (du > 0) {
        Coeff ck = absolute ? abs(c) : c;
        const Coeff ratio = absolute ? abs(cu) : cu;
        for (Exp x = e; x <= order_; x += du) {
            add(x, ck);
            ck *= ratio;
        }
        return e;
    }
    // c / (1 - cu q^du) = -c cu^-1 q^-du / (1 - cu^-1 q^-du)
    const Exp step = -du;
    const Coeff ratio = absolute ? abs(Coeff(1 / cu)) : Coeff(1 / cu);
    Coeff ck = absolute ? Coeff(abs(c) * ratio) : Coeff(-c * ratio);
    for (Exp x = e + step; x <= order_; x += step) {
        add(x, ck);
        ck *= ratio;
    }
    return e + step;
}

Series Accumulator::finish() &&
{
    return Series::from_dense(scale_, order_, base_, std::move(buf_));
}

} // namespace qseries
