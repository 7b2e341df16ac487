#include "bovdyn/dynamics.hpp"
#include "bovdyn/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace bovdyn {

MultiplierClass classify_multiplier(Complex m)
{
    const double a = std::abs(m);
    if (a <= kSuperattractingTol)
        return {MultiplierClass::Kind::Superattracting, 0};
    if (a < 1.0 - kUnitCircleTol)
        return {MultiplierClass::Kind::Attracting, 0};
    if (a > 1.0 + kUnitCircleTol)
        return {MultiplierClass::Kind::Repelling, 0};
    for (int q = 1; q <= kMaxRootOfUnityOrder; ++q)
        if (std::abs(ipow(m, q) - 1.0) < kUnitCircleTol)
            return {MultiplierClass::Kind::Parabolic, q};
    return {MultiplierClass::Kind::IrrationallyIndifferent, 0};
}

std::string to_string(const MultiplierClass& c)
{
    switch (c.kind) {
    case MultiplierClass::Kind::Superattracting:
        return "superattracting";
    case MultiplierClass::Kind::Attracting:
        return "attracting";
    case MultiplierClass::Kind::Repelling:
        return "repelling";
    case MultiplierClass::Kind::Parabolic:
        return "parabolic";
    case MultiplierClass::Kind::IrrationallyIndifferent:
        break;
    }
    return "irrationally-indifferent";
}

MultiplierClass::Kind multiplier_kind_from_string(const std::string& s)
{
    using K = MultiplierClass::Kind;
    for (K k : {K::Superattracting, K::Attracting, K::Repelling, K::Parabolic, K::IrrationallyIndifferent})
        if (to_string(MultiplierClass{k, 0}) == s)
            return k;
    throw SchemaError("unknown multiplier class '" + s + "'");
}

Complex cycle_multiplier(const Evaluator& f, const Evaluator& df, Complex z, int period)
{
    Complex m{1.0, 0.0};
    for (int i = 0; i < period; ++i) {
        const EvalOutcome d = df(z);
        const EvalOutcome next = f(z);
        if (!d.finite() || !next.finite())
            throw Error("cycle_multiplier: orbit meets a pole or overflows");
        m *= d.value;
        z = next.value;
    }
    return m;
}

namespace {

struct PeriodicResidual {
    Complex value;       // f^p(z) - z
    Complex derivative;  // (f^p)'(z) - 1
};

std::optional<PeriodicResidual> periodic_residual(const Evaluator& f, const Evaluator& df, Complex z,
                                                  int period)
{
    Complex w = z;
    Complex d{1.0, 0.0};
    for (int i = 0; i < period; ++i) {
        const EvalOutcome dv = df(w);
        const EvalOutcome next = f(w);
        if (!dv.finite() || !next.finite())
            return std::nullopt;
        d *= dv.value;
        w = next.value;
    }
    return PeriodicResidual{w - z, d - 1.0};
}

std::string describe(Complex z)
{
    std::ostringstream os;
    os.precision(17);
    os << "(" << z.real() << "," << z.imag() << ")";
    return os.str();
}

std::optional<Complex> newton(const Evaluator& f, const Evaluator& df, Complex z, int period,
                              Complex& best)
{
    double best_res = std::numeric_limits<double>::infinity();
    for (int it = 0; it < 100; ++it) {
        const auto r = periodic_residual(f, df, z, period);
        if (!r)
            return std::nullopt;
        const double res = std::abs(r->value);
        if (res < best_res) {
            best_res = res;
            best = z;
        }
        if (res == 0.0)
            return z;
        if (r->derivative == Complex(0.0, 0.0))
            return std::nullopt;
        const Complex step = r->value / r->derivative;
        z -= step;
        if (std::abs(step) <= 4e-16 * (1.0 + std::abs(z)))
            return z;
    }
    return std::nullopt;
}

std::optional<Complex> bisect_real(const Evaluator& f, const Evaluator& df, const Interval& bracket,
                                   int period)
{
    auto h = [&](double t) -> std::optional<double> {
        const auto r = periodic_residual(f, df, Complex(t, 0.0), period);
        if (!r)
            return std::nullopt;
        return r->value.real();
    };
    double a = bracket.lo(), b = bracket.hi();
    auto fa = h(a), fb = h(b);
    if (!fa || !fb || (*fa > 0.0) == (*fb > 0.0))
        return std::nullopt;
    while (b - a > 1e-15 * (1.0 + std::abs(a))) {
        const double m = a + 0.5 * (b - a);
        if (m <= a || m >= b)
            break;
        const auto fm = h(m);
        if (!fm)
            return std::nullopt;
        if ((*fm > 0.0) == (*fa > 0.0)) {
            a = m;
            fa = fm;
        } else {
            b = m;
        }
    }
    return Complex(a + 0.5 * (b - a), 0.0);
}

} // namespace

FixedPointRecord analyze_fixed_point(const MapExpr& f, Complex x0, int period,
                                     std::optional<Interval> bracket, std::string provenance)
{
    if (period < 1)
        throw Error("analyze_fixed_point: period must be at least 1");
    const Evaluator ev(f);
    const Evaluator dev(differentiate(f));

    Complex best = x0;
    std::optional<Complex> z = newton(ev, dev, x0, period, best);
    auto acceptable = [&](Complex w) {
        const auto r = periodic_residual(ev, dev, w, period);
        return r && std::abs(r->value) <= 1e-9 * (1.0 + std::abs(w));
    };
    if (z && !acceptable(*z))
        z.reset();
    if (!z && bracket) {
        z = bisect_real(ev, dev, *bracket, period);
        if (z) {
            Complex polished_best = *z;
            if (auto polished = newton(ev, dev, *z, period, polished_best);
                polished && bracket->contains(polished->real()))
                z = polished;
        }
        if (z && !acceptable(*z))
            z.reset();
    }
    if (!z)
        throw NewtonDivergence("no period-" + std::to_string(period) + " point found from seed " +
                                   describe(x0),
                               best);

    FixedPointRecord rec;
    rec.location = *z;
    rec.period = period;
    rec.multiplier = cycle_multiplier(ev, dev, *z, period);
    rec.cls = classify_multiplier(rec.multiplier);
    rec.residual = std::abs(periodic_residual(ev, dev, *z, period)->value);
    rec.provenance = provenance.empty() ? "newton seed " + describe(x0) : std::move(provenance);
    return rec;
}

std::vector<FixedPointRecord> real_fixed_points(const MapExpr& f, const Interval& x)
{
    const MapExpr g(expr::sub(f.root(), expr::variable()), f.params());
    std::vector<FixedPointRecord> out;
    for (double r : find_real_roots(g, x)) {
        std::ostringstream prov;
        prov.precision(17);
        prov << "root of f(x)-x on [" << x.lo() << "," << x.hi() << "]";
        out.push_back(analyze_fixed_point(f, Complex(r, 0.0), 1, std::nullopt, prov.str()));
    }
    return out;
}

std::optional<FixedPointRecord> find_two_cycle(const MapExpr& f, const Interval& x)
{
    const Evaluator ev(f);
    const MapExpr h(expr::sub(compose(f, f).root(), expr::variable()), f.params());
    for (double r : find_real_roots(h, x)) {
        const EvalOutcome fr = ev(Complex(r, 0.0));
        if (!fr.finite() || std::abs(fr.value.real() - r) < kFixedPointFilterTol)
            continue;
        std::ostringstream prov;
        prov.precision(17);
        prov << "root of f(f(x))-x on [" << x.lo() << "," << x.hi() << "]";
        const double pad = 1e-9;
        const Interval bracket(std::max(x.lo(), r - pad), std::min(x.hi(), r + pad));
        return analyze_fixed_point(f, Complex(r, 0.0), 2, bracket, prov.str());
    }
    return std::nullopt;
}

} // namespace bovdyn
