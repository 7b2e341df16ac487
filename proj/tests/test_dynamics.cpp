#include "support/oracle.hpp"

#include <bovdyn/dynamics.hpp>
#include <bovdyn/errors.hpp>
#include <bovdyn/evaluator.hpp>
#include <bovdyn/maps.hpp>

#include <doctest.h>

#include <cmath>
#include <numbers>

using namespace bovdyn;
using std::numbers::pi;

namespace {

double f_real(double lambda, double x) { return lambda / (std::exp(x) + x); }

void check_class_invariant(const FixedPointRecord& r)
{
    const double m = std::abs(r.multiplier);
    switch (r.cls.kind) {
    case MultiplierClass::Kind::Superattracting:
        CHECK(m < kSuperattractingTol);
        break;
    case MultiplierClass::Kind::Attracting:
        CHECK(m < 1.0 - kUnitCircleTol);
        break;
    case MultiplierClass::Kind::Repelling:
        CHECK(m > 1.0 + kUnitCircleTol);
        break;
    case MultiplierClass::Kind::Parabolic:
        CHECK(std::abs(m - 1.0) <= kUnitCircleTol);
        CHECK(std::abs(ipow(r.multiplier, r.cls.q) - 1.0) < 1e-6);
        break;
    case MultiplierClass::Kind::IrrationallyIndifferent:
        CHECK(std::abs(m - 1.0) <= kUnitCircleTol);
        break;
    }
}

} // namespace

TEST_CASE("real roots")
{
    const auto r0 = find_real_roots(parse("exp(z)+z"), Interval(-1.0, 0.0));
    REQUIRE(r0.size() == 1);
    const double x0 = oracle::bisect([](double x) { return std::exp(x) + x; }, -1.0, 0.0);
    CHECK(r0[0] == doctest::Approx(x0).epsilon(1e-12));
    // the pole as loosely quoted
    CHECK(std::abs(r0[0] - (-0.55)) < 0.05);

    const auto rp = find_real_roots(parse("1/(exp(z)+z)-z"), Interval(0.0, 1.0));
    REQUIRE(rp.size() == 1);
    CHECK(std::abs(rp[0] - 0.49) < 0.05);
    CHECK(rp[0] == doctest::Approx(0.4781724).epsilon(1e-6));

    CHECK(find_real_roots(parse("z"), Interval(1.0, 2.0)).empty());
}

TEST_CASE("sign changes across poles are not roots")
{
    // 1/(exp(z)+z) changes sign at the pole but has no root
    CHECK(find_real_roots(maps::f(), Interval(-1.0, 0.0)).empty());
    const auto roots = find_real_roots(parse("z^3-z"), Interval(-2.0, 2.0));
    REQUIRE(roots.size() == 3);
    CHECK(roots[0] == doctest::Approx(-1.0));
    CHECK(std::abs(roots[1]) < 1e-12);
    CHECK(roots[2] == doctest::Approx(1.0));
}

TEST_CASE("negative fixed point q of f")
{
    const auto fps = real_fixed_points(maps::f(), Interval(-2.0, -0.6));
    REQUIRE(fps.size() == 1);
    CHECK(std::abs(fps[0].location.real() - (-1.16)) < 0.05);
    const double q = oracle::bisect([](double x) { return f_real(1, x) - x; }, -2.0, -0.6);
    CHECK(fps[0].location.real() == doctest::Approx(q).epsilon(1e-9));
}

TEST_CASE("x_lambda for lambda = 0.04")
{
    const auto fps = real_fixed_points(maps::f_lambda(0.04), Interval(0.0, 1.0));
    REQUIRE(fps.size() == 1);
    const FixedPointRecord& r = fps[0];
    const double xl = oracle::bisect([](double x) { return f_real(0.04, x) - x; }, 0.0, 1.0);
    CHECK(r.location.real() == doctest::Approx(xl).epsilon(1e-10));
    // multiplier oracle: lambda f'(x) = -lambda (1+e^x)/(e^x+x)^2
    const double m = -0.04 * (1 + std::exp(xl)) / std::pow(std::exp(xl) + xl, 2);
    CHECK(r.multiplier.real() == doctest::Approx(m).epsilon(1e-8));
    CHECK(r.multiplier.real() == doctest::Approx(-0.0705).epsilon(1e-3));
    CHECK(r.cls.kind == MultiplierClass::Kind::Attracting);
    CHECK(r.residual < 1e-12);
    check_class_invariant(r);
}

TEST_CASE("parabolic and Siegel parameters of f4")
{
    const FixedPointRecord par = analyze_fixed_point(maps::f4(0.5), 0.0, 1);
    CHECK(par.multiplier == Complex(-1.0, 0.0));
    CHECK(par.cls.kind == MultiplierClass::Kind::Parabolic);
    CHECK(par.cls.q == 2);
    check_class_invariant(par);

    const double t = (std::sqrt(5.0) - 1.0) / 2.0;
    const Complex lambda = std::polar(1.0, 2 * pi * t) / -2.0;
    const FixedPointRecord sie = analyze_fixed_point(maps::f4(lambda), 0.0, 1);
    CHECK(std::abs(std::abs(sie.multiplier) - 1.0) < 1e-12);
    CHECK(sie.cls.kind == MultiplierClass::Kind::IrrationallyIndifferent);
    check_class_invariant(sie);
}

TEST_CASE("multiplier classification")
{
    CHECK(classify_multiplier(0.0).kind == MultiplierClass::Kind::Superattracting);
    CHECK(classify_multiplier(0.5).kind == MultiplierClass::Kind::Attracting);
    CHECK(classify_multiplier({0.0, -1.5}).kind == MultiplierClass::Kind::Repelling);
    const MultiplierClass c3 = classify_multiplier(std::polar(1.0, 2 * pi / 3));
    CHECK(c3.kind == MultiplierClass::Kind::Parabolic);
    CHECK(c3.q == 3);
    CHECK(classify_multiplier(1.0).q == 1);
    for (auto k : {MultiplierClass::Kind::Superattracting, MultiplierClass::Kind::Attracting,
                   MultiplierClass::Kind::Repelling, MultiplierClass::Kind::Parabolic,
                   MultiplierClass::Kind::IrrationallyIndifferent}) {
        MultiplierClass c{k, k == MultiplierClass::Kind::Parabolic ? 2 : 0};
        CHECK(multiplier_kind_from_string(to_string(c)) == k);
    }
}

TEST_CASE("Newton divergence carries the best iterate")
{
    try {
        // f(z) - z = 1 never vanishes
        analyze_fixed_point(parse("z+1"), {0.5, 0.25}, 1);
        FAIL("expected NewtonDivergence");
    } catch (const NewtonDivergence& e) {
        CHECK(e.best_iterate() == Complex(0.5, 0.25));
    }
}

TEST_CASE("f3 fixed points")
{
    const auto fps = real_fixed_points(maps::f3(), Interval(-4.0, 4.0));
    std::vector<FixedPointRecord> attracting;
    for (const auto& r : fps) {
        check_class_invariant(r);
        if (r.cls.kind == MultiplierClass::Kind::Attracting)
            attracting.push_back(r);
    }
    REQUIRE(attracting.size() == 2);
    const double a2 = attracting[0].location.real(), a1 = attracting[1].location.real();
    CHECK(a1 >= -0.904);
    CHECK(a1 <= -0.72);
    CHECK(a2 >= -1.069);
    CHECK(a2 <= -1.0);
    // scalar oracle on f3(x) - x
    const auto g = [](double x) { return 0.1 / (std::pow(x, 9) + std::exp(x)) - 0.99 - x; };
    CHECK(a1 == doctest::Approx(oracle::bisect(g, -0.85, -0.72)).epsilon(1e-10));
    CHECK(a2 == doctest::Approx(oracle::bisect(g, -1.069, -1.0)).epsilon(1e-10));

    const Evaluator h(maps::h());
    for (const auto& r : attracting) {
        const double hv = h(r.location).value.real();
        // the chain-rule multiplier is -h at the fixed point
        CHECK(std::abs(r.multiplier - Complex(-hv, 0.0)) < 1e-8);
        CHECK(hv > 0.0);
        CHECK(hv < 0.979 + 0.01);
    }
}

TEST_CASE("two-cycles")
{
    CHECK(!find_two_cycle(maps::f_lambda(0.04), Interval(0.0, 1.0)).has_value());

    // dense sampling: f^2(x) - x vanishes in (0,1) only at x_lambda
    int changes = 0;
    double prev = f_real(0.04, f_real(0.04, 1e-6)) - 1e-6;
    for (int i = 1; i <= 10000; ++i) {
        const double x = i / 10000.0;
        const double v = f_real(0.04, f_real(0.04, x)) - x;
        changes += (v < 0) != (prev < 0);
        prev = v;
    }
    CHECK(changes == 1);

    const auto c = find_two_cycle(maps::f_lambda(4.0), Interval(0.0, 1.0));
    REQUIRE(c.has_value());
    CHECK(c->period == 2);
    const double a1 = c->location.real();
    CHECK(f_real(4, 0) - 0 > 0);  // h(0) = f^2(0) > 0
    CHECK(a1 == doctest::Approx(oracle::bisect([](double x) { return f_real(4, f_real(4, x)) - x; }, 0.1, 0.5))
                    .epsilon(1e-9));
    CHECK(f_real(4, a1) > 1.0);
    CHECK(std::abs(c->multiplier) <= 1.0 + 1e-9);
    // (f^2)' as a product of f' along the cycle
    const auto df = [](double x) { return -4.0 * (1 + std::exp(x)) / std::pow(std::exp(x) + x, 2); };
    CHECK(c->multiplier.real() == doctest::Approx(df(a1) * df(f_real(4, a1))).epsilon(1e-8));

    // a map without 2-cycles on the interval
    CHECK(!find_two_cycle(parse("z/2"), Interval(0.5, 1.0)).has_value());
}

TEST_CASE("closed-form critical set")
{
    const CriticalSet s = critical_set_closed_form(0.3, -1, 0);
    REQUIRE(s.points.size() == 2);
    CHECK(s.points[0] == Complex(0.0, -pi));
    CHECK(s.points[1] == Complex(0.0, pi));
    CHECK(std::abs(s.values[1] - 0.3 / Complex(-1.0, pi)) < 1e-15);
    CHECK(std::abs(s.values[0]) == doctest::Approx(0.3 / std::sqrt(1 + pi * pi)));
    CHECK(std::abs(s.values[0]) == doctest::Approx(std::abs(s.values[1])));
    CHECK(s.max_residual < 1e-10);
    for (std::size_t i = 0; i < s.points.size(); ++i)
        CHECK(std::abs(s.values[i] - oracle::eval(maps::f_lambda(0.3), s.points[i])) < 1e-14);

    const CriticalSet wide = critical_set_closed_form(1.0, -100, 100);
    auto modulus_at = [&](int k) { return std::abs(wide.values.at(static_cast<std::size_t>(k + 100))); };
    CHECK(modulus_at(100) < modulus_at(10));
    // max modulus over |k| >= K strictly decreases in K
    double last = INFINITY;
    for (int K = 1; K <= 100; ++K) {
        double m = 0.0;
        for (int k = K; k <= 100; ++k)
            m = std::max({m, modulus_at(k), modulus_at(-k)});
        CHECK(m < last);
        last = m;
    }
}

TEST_CASE("Newton critical points")
{
    // 3*pi is about 9.42, so the window reaches past it
    const CriticalSet s = find_critical_points_newton(maps::f_lambda(1.0), {-1, 1, 0, 10}, 32);
    auto has = [&](Complex z) {
        for (Complex p : s.points)
            if (std::abs(p - z) < 1e-8)
                return true;
        return false;
    };
    CHECK(has({0.0, pi}));
    CHECK(has({0.0, 3 * pi}));
    CHECK(s.max_residual < 1e-10);

    const CriticalSet r = find_critical_points_newton(maps::quadratic_family(1.0), {-2, 0, -1, 1}, 32);
    REQUIRE(r.points.size() == 1);
    const double root = oracle::bisect([](double x) { return 2 * x + std::exp(x); }, -1.0, 0.0);
    CHECK(r.points[0].real() == doctest::Approx(root).epsilon(1e-10));
    CHECK(r.points[0].real() == doctest::Approx(-0.3517).epsilon(1e-3));
    CHECK(std::abs(r.points[0].imag()) < 1e-10);

    CHECK(find_critical_points_newton(parse("z"), {-1, 1, -1, 1}, 8).points.empty());
}

TEST_CASE("Newton critical search is ordered and unique")
{
    const CriticalSet s = find_critical_points_newton(maps::f_lambda(1.0), {-1, 1, -20, 20}, 24);
    for (std::size_t i = 1; i < s.points.size(); ++i) {
        const Complex a = s.points[i - 1], b = s.points[i];
        CHECK((a.real() < b.real() || (a.real() == b.real() && a.imag() < b.imag())));
        CHECK(std::abs(a - b) > 1e-8);
    }
    CHECK(s.values.size() == s.points.size());
}
