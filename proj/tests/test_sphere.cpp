#include "support/oracle.hpp"

#include <bovdyn/maps.hpp>
#include <bovdyn/sphere.hpp>

#include <doctest.h>

#include <cmath>

using namespace bovdyn;

namespace {

double x_lambda(double lambda)
{
    return oracle::bisect([&](double x) { return lambda / (std::exp(x) + x) - x; }, 0.0, 1.0);
}

double f_real(double lambda, double x) { return lambda / (std::exp(x) + x); }

} // namespace

TEST_CASE("chordal distance examples")
{
    CHECK(chordal_distance(0.0, kInfinity) == doctest::Approx(2.0).epsilon(1e-15));
    CHECK(chordal_distance(kInfinity, 0.0) == doctest::Approx(2.0).epsilon(1e-15));
    CHECK(chordal_distance(1.0, 1.0) == 0.0);
    CHECK(chordal_distance(kInfinity, kInfinity) == 0.0);
    CHECK(chordal_distance(1.0, {0.0, 1.0}) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-15));
    CHECK(is_infinite({0.0, -INFINITY}));
    CHECK(!is_infinite({1e300, 0.0}));
}

TEST_CASE("chordal distance is a bounded symmetric metric")
{
    oracle::ExprGen gen(7);
    for (int k = 0; k < 500; ++k) {
        const double s = std::pow(10.0, gen.uniform(-3.0, 6.0));
        const Complex a(s * gen.uniform(-1, 1), s * gen.uniform(-1, 1));
        const Complex b(gen.uniform(-3, 3), gen.uniform(-3, 3));
        const Complex c(gen.uniform(-3, 3), gen.uniform(-3, 3));
        const double ab = chordal_distance(a, b);
        CHECK(ab == chordal_distance(b, a));
        CHECK(ab >= 0.0);
        CHECK(ab <= 2.0);
        CHECK(ab <= chordal_distance(a, c) + chordal_distance(c, b) + 1e-12);
        // the point at infinity is the limit of large points
        CHECK(std::abs(chordal_distance(b, kInfinity) - chordal_distance(b, Complex(1e12, 0.0))) < 1e-9);
    }
}

TEST_CASE("lambda = 0.04 from 0.2 converges to x_lambda")
{
    const OrbitResult r = iterate_orbit(maps::f_lambda(0.04), 0.2);
    REQUIRE(r.fate == OrbitResult::Fate::ConvergedToCycle);
    CHECK(r.period == 1);
    CHECK(r.cycle.at(0).real() == doctest::Approx(x_lambda(0.04)).epsilon(1e-8));
    CHECK(std::abs(r.cycle.at(0).imag()) < 1e-12);
    CHECK(x_lambda(0.04) == doctest::Approx(0.0372).epsilon(1e-3));
}

TEST_CASE("lambda = 4 from 0.5 converges to a 2-cycle")
{
    const OrbitResult r = iterate_orbit(maps::f_lambda(4.0), 0.5);
    REQUIRE(r.fate == OrbitResult::Fate::ConvergedToCycle);
    CHECK(r.period == 2);
    // cycle point in (0,1) from bisection on f^2(x) - x
    const double a1 = oracle::bisect([](double x) { return f_real(4, f_real(4, x)) - x; }, 0.1, 0.5);
    CHECK(std::abs(f_real(4, a1) - a1) > 0.1);
    REQUIRE(r.cycle.size() == 2);
    const double lo = std::min(r.cycle[0].real(), r.cycle[1].real());
    const double hi = std::max(r.cycle[0].real(), r.cycle[1].real());
    CHECK(lo == doctest::Approx(a1).epsilon(1e-7));
    CHECK(hi == doctest::Approx(f_real(4, a1)).epsilon(1e-7));
    CHECK(hi > 1.0);
}

TEST_CASE("seed on the pole is a pole hit at index 0")
{
    const double x0 = oracle::bisect([](double x) { return std::exp(x) + x; }, -1.0, 0.0);
    const OrbitResult r = iterate_orbit(maps::f_lambda(0.04), x0);
    CHECK(r.fate == OrbitResult::Fate::PoleHit);
    CHECK(r.index == 0);
}

TEST_CASE("escape is detected")
{
    const OrbitResult r = iterate_orbit(parse("2*z"), 1.0);
    CHECK(r.fate == OrbitResult::Fate::Escaped);
    // 2^n has chordal distance about 2^(1-n) to infinity
    CHECK(r.index >= 20);
    CHECK(r.index <= 23);
}

TEST_CASE("slow orbits stay undecided")
{
    OrbitConfig cfg;
    cfg.max_iter = 50;
    const OrbitResult r = iterate_orbit(parse("z+1"), 0.0, cfg);
    CHECK(r.fate == OrbitResult::Fate::Undecided);
    CHECK(r.iterations_used < 50);
    CHECK(r.iterations_used >= 48);
}

TEST_CASE("orbits are deterministic")
{
    OrbitConfig cfg;
    cfg.record_prefix = 20;
    for (Complex seed : {Complex(0.2, 0.0), Complex(-1.0, 2.0), Complex(3.0, -0.5)}) {
        const OrbitResult a = iterate_orbit(maps::f_lambda(4.0), seed, cfg);
        const OrbitResult b = iterate_orbit(maps::f_lambda(4.0), seed, cfg);
        CHECK(a == b);
        CHECK(a.prefix.size() <= 20);
        CHECK(a.prefix.at(0) == seed);
    }
}

TEST_CASE("converged cycles close up")
{
    oracle::ExprGen gen(31);
    const MapExpr fs[] = {maps::f_lambda(0.04), maps::f_lambda(4.0), maps::f3()};
    const OrbitConfig cfg;
    for (const MapExpr& f : fs) {
        for (int k = 0; k < 30; ++k) {
            const Complex seed(gen.uniform(-3, 3), gen.uniform(-3, 3));
            const OrbitResult r = iterate_orbit(f, seed, cfg);
            if (r.fate != OrbitResult::Fate::ConvergedToCycle)
                continue;
            CHECK(r.period >= 1);
            CHECK(static_cast<int>(r.cycle.size()) == r.period);
            Complex z = r.cycle[0];
            for (int j = 0; j < r.period; ++j)
                z = oracle::eval(f, z);
            CHECK(chordal_distance(z, r.cycle[0]) < 10 * cfg.conv_eps);
        }
    }
}

TEST_CASE("even subsequence is increasing below x_lambda")
{
    const double xl = x_lambda(0.04);
    for (int s = 1; s <= 20; ++s) {
        const double seed = xl * s / 21.0;
        double x = seed;
        for (int n = 0; n < 6; ++n) {
            const double next = f_real(0.04, f_real(0.04, x));
            CHECK(next > x);
            CHECK(next < xl);
            x = next;
        }
        OrbitConfig cfg;
        cfg.record_prefix = 13;
        const OrbitResult r = iterate_orbit(maps::f_lambda(0.04), seed, cfg);
        for (std::size_t n = 2; n < r.prefix.size(); n += 2)
            CHECK(r.prefix[n].real() >= r.prefix[n - 2].real());
    }
}

TEST_CASE("distance estimate tracks preimages of infinity")
{
    OrbitConfig cfg;
    cfg.track_derivative = true;
    const MapExpr f = maps::f_lambda(0.04);
    const Evaluator ev(f), dev(differentiate(f));
    const double x0 = oracle::bisect([](double x) { return std::exp(x) + x; }, -1.0, 0.0);
    const OrbitResult near = iterate_orbit(ev, Complex(x0 + 1e-4, 0.0), cfg, &dev);
    const OrbitResult far = iterate_orbit(ev, Complex(0.2, 0.0), cfg, &dev);
    CHECK(near.min_distance_estimate < 1e-3);
    CHECK(far.min_distance_estimate > 0.1);
}
