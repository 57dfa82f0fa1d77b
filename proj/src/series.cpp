#include <qseries/series.hpp>

#include <algorithm>
#include <cassert>
#include <numeric>

#include <qseries/error.hpp>

namespace qseries
{

namespace
{

// Exponents beyond this are treated as overflow bugs rather than data.
constexpr Exp kExpLimit = Exp(1) << 50;

void check_range(Exp e)
{
    if (e != Series::kExact && (e > kExpLimit || e < -kExpLimit)) {
        throw std::overflow_error("series exponent out of range");
    }
}

Exp order_min(Exp a, Exp b)
{
    return std::min(a, b);
}

// Bring both operands to a common scale.
std::pair<Series, Series> common(const Series &a, const Series &b)
{
    if (a.scale() == b.scale()) {
        return {a, b};
    }
    const auto d = lcm64(a.scale(), b.scale());
    return {a.rescaled(d), b.rescaled(d)};
}

// Exponent string for display: "q", "q^3", "q^(1/2)".
std::string q_power(const Coeff &e)
{
    if (e == 1) {
        return "q";
    }
    if (is_integer(e)) {
        return e.get_num() < 0 ? "q^(" + e.get_str() + ")" : "q^" + e.get_str();
    }
    return "q^(" + e.get_str() + ")";
}

} // namespace

Exp order_add(Exp a, Exp b)
{
    if (a == Series::kExact || b == Series::kExact) {
        return Series::kExact;
    }
    return a + b;
}

Exp scaled_floor(const Coeff &q_exponent, std::int64_t scale)
{
    const BigInt f = floor(Coeff(q_exponent * scale));
    if (!f.fits_slong_p()) {
        throw std::overflow_error("order out of range");
    }
    return f.get_si();
}

Series Series::zero_exact(std::int64_t scale)
{
    Series s;
    s.scale_ = scale;
    return s;
}

Series Series::zero(const Coeff &order)
{
    Series s;
    s.scale_ = den64(order);
    s.order_ = scaled_int(order, s.scale_);
    return s;
}

Series Series::constant(const Coeff &c)
{
    Series s;
    if (c != 0) {
        s.terms_.push_back({0, c});
    }
    return s;
}

Series Series::monomial(const Coeff &c, const Coeff &e)
{
    Series s;
    s.scale_ = den64(e);
    if (c != 0) {
        s.terms_.push_back({scaled_int(e, s.scale_), c});
    }
    return s;
}

Series Series::from_terms(std::int64_t scale, Exp order, std::vector<Term> terms)
{
    std::sort(terms.begin(), terms.end(), [](const Term &x, const Term &y) { return x.exp < y.exp; });
    Series s;
    s.scale_ = scale;
    s.order_ = order;
    for (auto &t : terms) {
        if (t.exp > order) {
            break;
        }
        if (!s.terms_.empty() && s.terms_.back().exp == t.exp) {
            s.terms_.back().coeff += t.coeff;
        } else {
            s.terms_.push_back(std::move(t));
        }
    }
    std::erase_if(s.terms_, [](const Term &t) { return t.coeff == 0; });
    return s;
}

Series Series::from_dense(std::int64_t scale, Exp order, Exp low, std::vector<Coeff> &&coeffs)
{
    Series s;
    s.scale_ = scale;
    s.order_ = order;
    for (std::size_t i = 0; i < coeffs.size(); ++i) {
        const Exp e = low + static_cast<Exp>(i);
        if (e > order) {
            break;
        }
        if (coeffs[i] != 0) {
            s.terms_.push_back({e, std::move(coeffs[i])});
        }
    }
    return s;
}

std::optional<Coeff> Series::order_q() const
{
    if (is_exact()) {
        return std::nullopt;
    }
    Coeff o(order_, scale_);
    o.canonicalize();
    return o;
}

Exp Series::low() const noexcept
{
    if (!terms_.empty()) {
        return terms_.front().exp;
    }
    return is_exact() ? kExact : order_ + 1;
}

Coeff Series::low_q() const
{
    if (terms_.empty()) {
        throw EmptySeries("low_q of an empty series");
    }
    Coeff e(terms_.front().exp, scale_);
    e.canonicalize();
    return e;
}

Series Series::rescaled(std::int64_t new_scale) const
{
    if (new_scale == scale_) {
        return *this;
    }
    assert(new_scale % scale_ == 0);
    const Exp f = new_scale / scale_;
    Series s;
    s.scale_ = new_scale;
    s.order_ = is_exact() ? kExact : order_ * f;
    check_range(s.order_);
    s.terms_.reserve(terms_.size());
    for (const auto &t : terms_) {
        s.terms_.push_back({t.exp * f, t.coeff});
    }
    return s;
}

Series Series::compacted() const
{
    Exp g = scale_;
    if (!is_exact()) {
        g = std::gcd(g, order_);
    }
    for (const auto &t : terms_) {
        g = std::gcd(g, t.exp);
    }
    if (g <= 1) {
        return *this;
    }
    Series s;
    s.scale_ = scale_ / g;
    s.order_ = is_exact() ? kExact : order_ / g;
    s.terms_.reserve(terms_.size());
    for (const auto &t : terms_) {
        s.terms_.push_back({t.exp / g, t.coeff});
    }
    return s;
}

Series Series::truncated(const Coeff &n) const
{
    const std::int64_t d = lcm64(scale_, den64(n));
    Series s = rescaled(d);
    const Exp cut = scaled_int(n, d);
    if (!s.is_exact() && s.order_ <= cut) {
        return s;
    }
    s.order_ = cut;
    while (!s.terms_.empty() && s.terms_.back().exp > cut) {
        s.terms_.pop_back();
    }
    return s;
}

Coeff Series::coeff_at(const Coeff &e) const
{
    const Coeff scaled = e * scale_;
    if (!is_exact() && scaled > order_) {
        throw BeyondTruncation("coefficient of q^" + e.get_str() + " requested beyond truncation order " +
                               order_q()->get_str());
    }
    if (!is_integer(scaled)) {
        return Coeff(0);
    }
    const Exp k = scaled.get_num().get_si();
    auto it = std::lower_bound(terms_.begin(), terms_.end(), k, [](const Term &t, Exp v) { return t.exp < v; });
    if (it != terms_.end() && it->exp == k) {
        return it->coeff;
    }
    return Coeff(0);
}

std::optional<std::string> Series::check_invariants() const
{
    if (scale_ <= 0) {
        return "non-positive scale";
    }
    for (std::size_t i = 0; i < terms_.size(); ++i) {
        if (terms_[i].coeff == 0) {
            return "stored zero coefficient at exponent " + std::to_string(terms_[i].exp);
        }
        if (terms_[i].exp > order_) {
            return "exponent " + std::to_string(terms_[i].exp) + " above order " + std::to_string(order_);
        }
        if (i > 0 && terms_[i - 1].exp >= terms_[i].exp) {
            return "terms not strictly increasing";
        }
    }
    return std::nullopt;
}

Series operator-(const Series &a)
{
    std::vector<Term> t = a.terms();
    for (auto &x : t) {
        x.coeff = -x.coeff;
    }
    return Series::from_terms(a.scale(), a.order(), std::move(t));
}

Series operator+(const Series &a0, const Series &b0)
{
    auto [a, b] = common(a0, b0);
    const Exp order = order_min(a.order(), b.order());
    std::vector<Term> out;
    out.reserve(a.terms().size() + b.terms().size());
    auto i = a.terms().begin(), ie = a.terms().end();
    auto j = b.terms().begin(), je = b.terms().end();
    while (i != ie || j != je) {
        if (j == je || (i != ie && i->exp < j->exp)) {
            if (i->exp <= order) {
                out.push_back(*i);
            }
            ++i;
        } else if (i == ie || j->exp < i->exp) {
            if (j->exp <= order) {
                out.push_back(*j);
            }
            ++j;
        } else {
            if (i->exp <= order) {
                Coeff c = i->coeff + j->coeff;
                if (c != 0) {
                    out.push_back({i->exp, std::move(c)});
                }
            }
            ++i;
            ++j;
        }
    }
    return Series::from_terms(a.scale(), order, std::move(out));
}

Series operator-(const Series &a, const Series &b)
{
    return a + (-b);
}

Series operator*(const Coeff &c, const Series &a)
{
    if (c == 0) {
        return Series::from_terms(a.scale(), a.order(), {});
    }
    std::vector<Term> t = a.terms();
    for (auto &x : t) {
        x.coeff *= c;
    }
    return Series::from_terms(a.scale(), a.order(), std::move(t));
}

Series mul_monomial(const Series &a0, const Coeff &c, const Coeff &e)
{
    if (c == 0) {
        return Series::zero_exact(a0.scale());
    }
    const std::int64_t d = lcm64(a0.scale(), den64(e));
    Series a = a0.rescaled(d);
    const Exp shift = scaled_int(e, d);
    std::vector<Term> t = a.terms();
    for (auto &x : t) {
        x.exp += shift;
        x.coeff *= c;
    }
    const Exp order = a.is_exact() ? Series::kExact : a.order() + shift;
    check_range(order);
    return Series::from_terms(d, order, std::move(t));
}

Series operator*(const Series &a0, const Series &b0)
{
    auto [a, b] = common(a0, b0);
    const std::int64_t d = a.scale();
    if ((a.is_exact() && a.empty()) || (b.is_exact() && b.empty())) {
        return Series::zero_exact(d);
    }
    const Exp la = a.low(), lb = b.low();
    const Exp order = order_min(order_add(a.order(), lb), order_add(b.order(), la));
    check_range(order);
    if (a.empty() || b.empty()) {
        return Series::from_terms(d, order, {});
    }
    // Iterate over the shorter operand on the outside.
    const Series &outer = a.terms().size() <= b.terms().size() ? a : b;
    const Series &inner = &outer == &a ? b : a;
    const Exp lo = la + lb;
    const Exp hi = std::min(order, a.terms().back().exp + b.terms().back().exp);
    if (hi < lo) {
        return Series::from_terms(d, order, {});
    }
    std::vector<Coeff> acc(static_cast<std::size_t>(hi - lo + 1));
    mpq_class tmp;
    for (const auto &x : outer.terms()) {
        for (const auto &y : inner.terms()) {
            const Exp e = x.exp + y.exp;
            if (e > hi) {
                break;
            }
            mpq_mul(tmp.get_mpq_t(), x.coeff.get_mpq_t(), y.coeff.get_mpq_t());
            auto &slot = acc[static_cast<std::size_t>(e - lo)];
            mpq_add(slot.get_mpq_t(), slot.get_mpq_t(), tmp.get_mpq_t());
        }
    }
    return Series::from_dense(d, order, lo, std::move(acc));
}

Series divide(const Series &a0, const Series &s0, const std::optional<Coeff> &cap)
{
    auto [a, s] = common(a0, s0);
    if (cap) {
        const std::int64_t d = lcm64(a.scale(), den64(*cap));
        a = a.rescaled(d);
        s = s.rescaled(d);
    }
    const std::int64_t d = a.scale();
    if (s.empty()) {
        throw EmptySeries("division by a series that vanishes through its truncation order");
    }
    const Exp ls = s.low();
    const Coeff &c0 = s.terms().front().coeff;
    if (a.is_exact() && a.empty()) {
        return Series::zero_exact(d);
    }
    const Exp la = a.low();
    Exp order = order_min(order_add(a.order(), -ls), order_add(order_add(s.order(), -2 * ls), la));
    if (cap) {
        order = std::min(order, scaled_floor(*cap, d));
    }
    const bool monomial_divisor = s.terms().size() == 1 && s.is_exact();
    if (order == Series::kExact && !monomial_divisor) {
        throw PrecisionError("division of exact series needs an order cap");
    }
    check_range(order);
    if (monomial_divisor) {
        Coeff inv = 1 / c0;
        std::vector<Term> t = a.terms();
        for (auto &x : t) {
            x.exp -= ls;
            x.coeff *= inv;
        }
        return Series::from_terms(d, order, std::move(t));
    }
    const Exp lo = la - ls;
    if (a.empty() || order < lo) {
        return Series::from_terms(d, order, {});
    }
    const auto n = static_cast<std::size_t>(order - lo + 1);
    std::vector<Coeff> out(n);
    // Dense copy of the dividend aligned with the quotient index.
    for (const auto &t : a.terms()) {
        const Exp k = t.exp - ls - lo;
        if (k >= 0 && static_cast<std::size_t>(k) < n) {
            out[static_cast<std::size_t>(k)] = t.coeff;
        }
    }
    const Coeff inv0 = 1 / c0;
    std::vector<std::pair<std::size_t, Coeff>> tail;
    for (std::size_t i = 1; i < s.terms().size(); ++i) {
        tail.emplace_back(static_cast<std::size_t>(s.terms()[i].exp - ls), s.terms()[i].coeff);
    }
    mpq_class tmp;
    for (std::size_t k = 0; k < n; ++k) {
        auto &slot = out[k];
        for (const auto &[off, c] : tail) {
            if (off > k) {
                break;
            }
            const auto &prev = out[k - off];
            if (prev == 0) {
                continue;
            }
            mpq_mul(tmp.get_mpq_t(), c.get_mpq_t(), prev.get_mpq_t());
            mpq_sub(slot.get_mpq_t(), slot.get_mpq_t(), tmp.get_mpq_t());
        }
        if (slot != 0) {
            mpq_mul(slot.get_mpq_t(), slot.get_mpq_t(), inv0.get_mpq_t());
        }
    }
    return Series::from_dense(d, order, lo, std::move(out));
}

Series invert(const Series &s, const std::optional<Coeff> &cap)
{
    return divide(Series::constant(1), s, cap);
}

Series geom_expand(const Coeff &c, const Coeff &d, const Coeff &n)
{
    if (d == 0) {
        if (c == 1) {
            throw PoleAtSpecialization("1/(1 - q^0) has a pole: the specialization hits an excluded point");
        }
        return Series::constant(1 / (1 - c));
    }
    const std::int64_t scale = lcm64(den64(d), den64(n));
    const Exp order = scaled_floor(n, scale);
    const Exp step = scaled_int(d < 0 ? Coeff(-d) : d, scale);
    std::vector<Term> terms;
    if (d > 0) {
        Coeff ck = 1;
        for (Exp e = 0; e <= order; e += step) {
            terms.push_back({e, ck});
            ck *= c;
        }
    } else {
        // 1/(1 - c q^d) = -c^-1 q^-d / (1 - c^-1 q^-d)
        const Coeff ci = 1 / c;
        Coeff ck = -ci;
        for (Exp e = step; e <= order; e += step) {
            terms.push_back({e, ck});
            ck *= ci;
        }
    }
    return Series::from_terms(scale, order, std::move(terms));
}

Series dilate(const Series &a, const Coeff &k)
{
    if (k <= 0) {
        throw std::invalid_argument("dilate factor must be positive");
    }
    const Exp kn = k.get_num().get_si();
    const Exp kd = k.get_den().get_si();
    std::vector<Term> t = a.terms();
    for (auto &x : t) {
        x.exp *= kn;
        check_range(x.exp);
    }
    const Exp order = a.is_exact() ? Series::kExact : a.order() * kn;
    check_range(order);
    return Series::from_terms(a.scale() * kd, order, std::move(t)).compacted();
}

DiffReport eq_upto(const Series &a0, const Series &b0, const Coeff &n)
{
    auto [a, b] = common(a0, b0);
    const std::int64_t d = lcm64(a.scale(), den64(n));
    a = a.rescaled(d);
    b = b.rescaled(d);
    const Exp cut = scaled_floor(n, d);
    if ((!a.is_exact() && cut > a.order()) || (!b.is_exact() && cut > b.order())) {
        throw BeyondTruncation("comparison bound q^" + n.get_str() + " exceeds a truncation order");
    }
    DiffReport r;
    r.scale = d;
    auto i = a.terms().begin(), ie = a.terms().end();
    auto j = b.terms().begin(), je = b.terms().end();
    auto mismatch = [&](Exp e, const Coeff &l, const Coeff &rr) {
        r.equal = false;
        r.exponent = Coeff(e, d);
        r.exponent.canonicalize();
        r.lhs = l;
        r.rhs = rr;
    };
    while (i != ie || j != je) {
        const Exp ei = i != ie ? i->exp : Series::kExact;
        const Exp ej = j != je ? j->exp : Series::kExact;
        const Exp e = std::min(ei, ej);
        if (e > cut) {
            break;
        }
        if (ei == ej) {
            if (i->coeff != j->coeff) {
                mismatch(e, i->coeff, j->coeff);
                return r;
            }
            ++i;
            ++j;
        } else if (ei < ej) {
            mismatch(e, i->coeff, Coeff(0));
            return r;
        } else {
            mismatch(e, Coeff(0), j->coeff);
            return r;
        }
    }
    return r;
}

Coeff evaluate_at(const Series &a, const Coeff &t)
{
    Coeff sum = 0;
    for (const auto &x : a.terms()) {
        sum += x.coeff * pow(t, x.exp);
    }
    return sum;
}

std::ostream &operator<<(std::ostream &os, const Series &s)
{
    bool first = true;
    for (const auto &t : s.terms()) {
        Coeff e(t.exp, s.scale());
        e.canonicalize();
        Coeff c = t.coeff;
        if (first) {
            if (c < 0) {
                os << "-";
                c = -c;
            }
        } else {
            os << (c < 0 ? " - " : " + ");
            c = abs(c);
        }
        first = false;
        if (e == 0) {
            os << c.get_str();
        } else {
            if (c != 1) {
                os << c.get_str() << "*";
            }
            os << q_power(e);
        }
    }
    if (!s.is_exact()) {
        Coeff next(s.order() + 1, s.scale());
        next.canonicalize();
        os << (first ? "" : " + ") << "O(" << q_power(next) << ")";
    } else if (first) {
        os << "0";
    }
    return os;
}

} // namespace qseries
