#include "support/oracle.hpp"

#include <bovdyn/errors.hpp>
#include <bovdyn/evaluator.hpp>
#include <bovdyn/maps.hpp>

#include <doctest.h>

#include <cmath>
#include <numbers>

using namespace bovdyn;
namespace ex = bovdyn::expr;

TEST_CASE("parse builds the expected tree for the family lambda/(exp(z)+z)")
{
    const MapExpr e = parse("lambda/(exp(z)+z)");
    const auto want = ex::div(ex::param("lambda"), ex::add(ex::exp(ex::variable()), ex::variable()));
    CHECK(ex::structurally_equal(*e.root(), *want));
    CHECK(e.parameter_names() == std::set<std::string>{"lambda"});
}

TEST_CASE("identity and constant maps")
{
    const EvalOutcome r = eval(parse("z"), {3.0, 4.0});
    REQUIRE(r.finite());
    CHECK(r.value == Complex(3.0, 4.0));
    CHECK(eval(parse("5"), {7.0, -1.0}).value == Complex(5.0, 0.0));
    CHECK(eval(maps::f_lambda(1.0), 0.0).value == Complex(1.0, 0.0));
}

TEST_CASE("f3 at zero is 0.1 - 0.99")
{
    const EvalOutcome r = eval(maps::f3(), 0.0);
    REQUIRE(r.finite());
    CHECK(r.value.real() == doctest::Approx(-0.89).epsilon(1e-15));
    CHECK(r.value.imag() == 0.0);
}

TEST_CASE("grammar details")
{
    CHECK(eval(parse("2i"), 0.0).value == Complex(0.0, 2.0));
    CHECK(eval(parse("i"), 0.0).value == Complex(0.0, 1.0));
    CHECK(eval(parse("1.5e2"), 0.0).value == Complex(150.0, 0.0));
    CHECK(eval(parse("z^(-2)"), 2.0).value == Complex(0.25, 0.0));
    CHECK(eval(parse("z^-2"), 2.0).value == Complex(0.25, 0.0));
    // unary minus binds looser than ^
    CHECK(eval(parse("-z^2"), 3.0).value == Complex(-9.0, 0.0));
    CHECK(eval(parse("2*-z"), 3.0).value == Complex(-6.0, 0.0));
    CHECK(eval(parse("1-2-3"), 0.0).value == Complex(-4.0, 0.0));
    CHECK(eval(parse("8/4/2"), 0.0).value == Complex(1.0, 0.0));
    CHECK(eval(parse("  exp( 0 ) "), 0.0).value == Complex(1.0, 0.0));
}

TEST_CASE("parse errors carry byte offsets")
{
    auto offset_of = [](const char* s) -> std::size_t {
        try {
            parse(s);
        } catch (const ParseError& e) {
            return e.offset();
        }
        FAIL("no error for " << s);
        return 0;
    };
    CHECK(offset_of("1+") == 2);
    CHECK(offset_of("z^1.5") == 2);
    CHECK(offset_of("sin(z)") == 0);
    CHECK(offset_of("(z") == 2);
    CHECK(offset_of("z)") == 1);
    CHECK(offset_of("z^2^3") == 3);
    CHECK(offset_of("z $") == 2);
    CHECK(offset_of("") == 0);
    CHECK_THROWS_AS(parse("z^y"), ParseError);
}

TEST_CASE("printing round-trips structurally")
{
    oracle::ExprGen gen(11);
    for (int k = 0; k < 500; ++k) {
        const MapExpr e(gen.gen(5));
        const std::string s = e.to_string();
        const MapExpr back = parse(s);
        INFO(s);
        CHECK(ex::structurally_equal(*e.root(), *back.root()));
        CHECK(back.to_string() == s);
    }
    for (const char* s : {maps::kF3, maps::kF4, maps::kP, maps::kPhi, maps::kH, "-(-z)", "z^(-3)", "2.5i*z"}) {
        const MapExpr e = parse(s);
        CHECK(ex::structurally_equal(*parse(e.to_string()).root(), *e.root()));
    }
}

TEST_CASE("negative and complex constants print as value-equal text")
{
    const MapExpr e(ex::add(ex::constant({-1.25, 3.0}), ex::mul(ex::constant(-2.0), ex::variable())));
    const MapExpr back = parse(e.to_string());
    for (Complex z : {Complex(0.3, -0.2), Complex(-2.0, 1.0)})
        CHECK(eval(back, z).value == eval(e, z).value);
    CHECK(parse(back.to_string()).to_string() == back.to_string());
}

TEST_CASE("derivative of 1/(exp(z)+z) at 1")
{
    const MapExpr d = differentiate(maps::f());
    const double want = -1.0 / (1.0 + std::numbers::e);
    CHECK(eval(d, 1.0).value.real() == doctest::Approx(want).epsilon(1e-12));
    const double h = 1e-6;
    const double fd = (oracle::eval(maps::f(), 1.0 + h) - oracle::eval(maps::f(), 1.0 - h)).real() / (2 * h);
    CHECK(std::abs(eval(d, 1.0).value.real() - fd) / std::abs(fd) < 1e-6);
    CHECK(eval(d, 1.0).value.real() == doctest::Approx(-0.26894).epsilon(1e-4));
}

TEST_CASE("derivative of z is 1")
{
    const MapExpr d = differentiate(parse("z"));
    for (Complex z : {Complex(0, 0), Complex(5, -3), Complex(1e6, 1)})
        CHECK(eval(d, z).value == Complex(1.0, 0.0));
}

TEST_CASE("eighth derivative of p is 90*8! + 2 exp(x)")
{
    const MapExpr d8 = differentiate(maps::p(), 8);
    for (double x : {-0.792, -0.72, 0.0, 1.3}) {
        const double want = 90.0 * 40320.0 + 2.0 * std::exp(x);
        CHECK(eval(d8, x).value.real() == doctest::Approx(want).epsilon(1e-13));
    }
    // Folding keeps the tower small.
    CHECK(ex::node_count(*d8.root()) < 40);
}

TEST_CASE("symbolic derivative agrees with central differences")
{
    oracle::ExprGen gen(23);
    int compared = 0;
    for (int k = 0; k < 100; ++k) {
        const MapExpr e(gen.gen(4));
        const MapExpr d = differentiate(e);
        const Complex z(gen.uniform(-1.5, 1.5), gen.uniform(-1.5, 1.5));
        const double h = 1e-5;
        const Complex fd = (oracle::eval(e, z + h) - oracle::eval(e, z - h)) / (2.0 * h);
        const EvalOutcome s = eval(d, z);
        // stay away from poles: the two-sided quotient is meaningless there
        if (!s.finite() || !std::isfinite(std::abs(fd)) || std::abs(s.value) > 1e6)
            continue;
        ++compared;
        INFO(e.to_string(), " at ", z);
        CHECK(std::abs(s.value - fd) / (1.0 + std::abs(s.value)) < 1e-5);
    }
    CHECK(compared >= 90);
}

TEST_CASE("evaluator agrees with the recursive oracle")
{
    oracle::ExprGen gen(5);
    for (int k = 0; k < 300; ++k) {
        const MapExpr e(gen.gen(5));
        const Complex z(gen.uniform(-2, 2), gen.uniform(-2, 2));
        const EvalOutcome r = eval(e, z);
        const Complex o = oracle::eval(e, z);
        if (!r.finite() || !std::isfinite(std::abs(o)))
            continue;
        CHECK(std::abs(r.value - o) <= 1e-9 * (1.0 + std::abs(o)));
    }
}

TEST_CASE("pole of 1/(exp(z)+z) is reported as PoleHit")
{
    const double x0 = oracle::bisect([](double x) { return std::exp(x) + x; }, -1.0, 0.0);
    CHECK(x0 == doctest::Approx(-0.567143).epsilon(1e-6));
    const EvalOutcome r = eval(maps::f(), x0);
    CHECK(r.kind == EvalOutcome::Kind::PoleHit);
    CHECK(r.divisor_magnitude < kDefaultPoleEps);
}

TEST_CASE("overflow is reported, not leaked")
{
    CHECK(eval(parse("exp(z)"), 800.0).kind == EvalOutcome::Kind::Overflow);
    CHECK(eval(parse("z^40"), 1e5).kind == EvalOutcome::Kind::Overflow);
    CHECK(eval(parse("1/z"), 0.0).kind == EvalOutcome::Kind::PoleHit);
    CHECK(eval(parse("z^(-2)"), 0.0).kind == EvalOutcome::Kind::PoleHit);
}

TEST_CASE("unbound parameters are named")
{
    try {
        eval(parse("a*z+b"), 1.0);
        FAIL("expected UnboundParameter");
    } catch (const UnboundParameter& e) {
        CHECK(e.name() == "a");
    }
    CHECK(eval(parse("a*z+b").with_params({{"a", 2.0}, {"b", 1.0}}), 3.0).value == Complex(7.0, 0.0));
}

TEST_CASE("evaluation is bit-reproducible")
{
    const Evaluator f(maps::f3());
    for (Complex z : {Complex(-0.99, 0.0), Complex(0.3, 1.7), Complex(-2.0, -0.5)}) {
        const EvalOutcome a = f(z), b = f(z), c = eval(maps::f3(), z);
        CHECK(a.value == b.value);
        CHECK(a.value == c.value);
    }
}

TEST_CASE("compose and iterate")
{
    const MapExpr f = maps::f_lambda(4.0);
    const MapExpr f2 = compose(f, f);
    const MapExpr it2 = iterate(f, 2);
    const Complex z(0.3, 0.1);
    const Complex once = eval(f, z).value;
    CHECK(eval(f2, z).value == eval(f, once).value);
    CHECK(eval(it2, z).value == eval(f2, z).value);
    CHECK(f2.params().at("lambda") == Complex(4.0, 0.0));
}

TEST_CASE("integer powers by squaring")
{
    CHECK(ipow({0.0, 1.0}, 4) == Complex(1.0, 0.0));
    CHECK(ipow(2.0, 10) == Complex(1024.0, 0.0));
    CHECK(ipow(2.0, -3) == Complex(0.125, 0.0));
    CHECK(ipow({1.5, -0.5}, 0) == Complex(1.0, 0.0));
}
