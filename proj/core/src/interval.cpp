#include "bovdyn/interval.hpp"

#include "bovdyn/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace bovdyn {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double down(double v, int ulps = 1)
{
    for (int i = 0; i < ulps; ++i)
        v = std::nextafter(v, -kInf);
    return v;
}

double up(double v, int ulps = 1)
{
    for (int i = 0; i < ulps; ++i)
        v = std::nextafter(v, kInf);
    return v;
}

Interval make_checked(double lo, double hi)
{
    if (!std::isfinite(lo) || !std::isfinite(hi))
        throw IntervalDomainError("interval endpoint overflow");
    return Interval(lo, hi);
}

// x^n for x >= 0 by repeated squaring; reports the multiplication count.
double power_count(double x, unsigned n, int& mults)
{
    double result = 1.0;
    bool first = true;
    mults = 0;
    while (n) {
        if (n & 1u) {
            if (first) {
                result = x;
                first = false;
            } else {
                result *= x;
                ++mults;
            }
        }
        n >>= 1u;
        if (n) {
            x *= x;
            ++mults;
        }
    }
    return result;
}

} // namespace

Interval::Interval(double lo, double hi) : lo_(lo), hi_(hi)
{
    if (!std::isfinite(lo) || !std::isfinite(hi))
        throw IntervalDomainError("interval endpoints must be finite");
    if (lo > hi)
        throw IntervalDomainError("interval lower bound exceeds upper bound");
}

Interval operator+(const Interval& a, const Interval& b)
{
    return make_checked(down(a.lo() + b.lo()), up(a.hi() + b.hi()));
}

Interval operator-(const Interval& a, const Interval& b)
{
    return make_checked(down(a.lo() - b.hi()), up(a.hi() - b.lo()));
}

Interval operator-(const Interval& a) { return Interval(-a.hi(), -a.lo()); }

Interval operator*(const Interval& a, const Interval& b)
{
    const double p[] = {a.lo() * b.lo(), a.lo() * b.hi(), a.hi() * b.lo(), a.hi() * b.hi()};
    const auto [mn, mx] = std::minmax_element(std::begin(p), std::end(p));
    return make_checked(down(*mn), up(*mx));
}

Interval operator/(const Interval& a, const Interval& b)
{
    if (b.contains_zero())
        throw IntervalDivisionByZero("divisor");
    const double q[] = {a.lo() / b.lo(), a.lo() / b.hi(), a.hi() / b.lo(), a.hi() / b.hi()};
    const auto [mn, mx] = std::minmax_element(std::begin(q), std::end(q));
    return make_checked(down(*mn), up(*mx));
}

Interval exp(const Interval& x)
{
    const double lo = std::max(0.0, down(std::exp(x.lo()), 2));
    return make_checked(lo, up(std::exp(x.hi()), 2));
}

Interval pow(const Interval& x, int exponent)
{
    if (exponent == 0)
        return Interval::point(1.0);
    if (exponent < 0) {
        if (x.contains_zero())
            throw IntervalDivisionByZero("negative power base");
        return Interval::point(1.0) / pow(x, -exponent);
    }
    const unsigned n = static_cast<unsigned>(exponent);
    auto mag = [n](double v, bool round_up) {
        int mults = 0;
        const double r = power_count(std::abs(v), n, mults);
        return round_up ? up(r, mults + 1) : std::max(0.0, down(r, mults + 1));
    };
    const bool odd = (n & 1u) != 0;
    if (x.lo() >= 0.0)
        return make_checked(mag(x.lo(), false), mag(x.hi(), true));
    if (x.hi() <= 0.0) {
        if (odd)
            return make_checked(-mag(x.lo(), true), -mag(x.hi(), false));
        return make_checked(mag(x.hi(), false), mag(x.lo(), true));
    }
    // Straddles zero.
    if (odd)
        return make_checked(-mag(x.lo(), true), mag(x.hi(), true));
    return make_checked(0.0, mag(std::max(-x.lo(), x.hi()), true));
}

namespace {

using namespace expr;

Interval real_constant(Complex c, const std::string& what)
{
    if (c.imag() != 0.0)
        throw IntervalDomainError(what + " has a nonzero imaginary part");
    return Interval::point(c.real());
}

Interval ieval_node(const Node& n, const Interval& x, const std::map<std::string, Complex>& params)
{
    return std::visit(
        overloaded{
            [&](const Const& c) { return real_constant(c.value, "constant"); },
            [&](const Var&) { return x; },
            [&](const Param& p) {
                auto it = params.find(p.name);
                if (it == params.end())
                    throw UnboundParameter(p.name);
                return real_constant(it->second, "parameter '" + p.name + "'");
            },
            [&](const Add& b) { return ieval_node(*b.lhs, x, params) + ieval_node(*b.rhs, x, params); },
            [&](const Sub& b) { return ieval_node(*b.lhs, x, params) - ieval_node(*b.rhs, x, params); },
            [&](const Mul& b) { return ieval_node(*b.lhs, x, params) * ieval_node(*b.rhs, x, params); },
            [&](const Div& b) {
                const Interval num = ieval_node(*b.lhs, x, params);
                const Interval den = ieval_node(*b.rhs, x, params);
                if (den.contains_zero())
                    throw IntervalDivisionByZero(to_string(*b.rhs));
                return num / den;
            },
            [&](const Neg& u) { return -ieval_node(*u.operand, x, params); },
            [&](const IntPow& p) {
                const Interval base = ieval_node(*p.base, x, params);
                if (p.exponent < 0 && base.contains_zero())
                    throw IntervalDivisionByZero(to_string(*p.base));
                return pow(base, p.exponent);
            },
            [&](const Exp& u) { return exp(ieval_node(*u.arg, x, params)); },
        },
        n.kind);
}

} // namespace

Interval ieval(const MapExpr& e, const Interval& x)
{
    return ieval_node(*e.root(), x, e.params());
}

const char* to_string(Sign s)
{
    switch (s) {
    case Sign::Positive:
        return "positive";
    case Sign::Negative:
        return "negative";
    case Sign::Indeterminate:
        break;
    }
    return "indeterminate";
}

} // namespace bovdyn
