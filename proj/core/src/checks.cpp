#include "bovdyn/checks.hpp"

#include "bovdyn/bundle.hpp"
#include "bovdyn/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace bovdyn {

const char* to_string(Verdict v)
{
    switch (v) {
    case Verdict::Pass:
        return "pass";
    case Verdict::Fail:
        return "fail";
    case Verdict::Uncertified:
        break;
    }
    return "uncertified";
}

Verdict verdict_from_string(const std::string& s)
{
    for (Verdict v : {Verdict::Pass, Verdict::Fail, Verdict::Uncertified})
        if (s == to_string(v))
            return v;
    throw SchemaError("unknown verdict '" + s + "'");
}

Verdict HypothesisReport::overall() const
{
    bool all_pass = true;
    for (const auto& c : clauses) {
        if (c.verdict == Verdict::Fail)
            return Verdict::Fail;
        all_pass = all_pass && c.verdict == Verdict::Pass;
    }
    return all_pass ? Verdict::Pass : Verdict::Uncertified;
}

std::optional<Complex> iterate_point(const Evaluator& f, Complex z, int n)
{
    for (int k = 0; k < n; ++k) {
        const EvalOutcome r = f(z);
        if (!r.finite())
            return std::nullopt;
        z = r.value;
    }
    return z;
}

namespace {

Verdict pass_if(bool ok)
{
    return ok ? Verdict::Pass : Verdict::Fail;
}

const char* kDiskSelfMap = "disk-self-map";
const char* kCriticalValues = "critical-values-in-disk";
const char* kBovRecipe = "bov-attracting-recipe";
const char* kF3Chain = "f3-basin-chain";
const char* kSiegel = "siegel-heuristic";

// Lower bound carried through the estimate: 0.106 rounded down.
constexpr double kDiskDenominator = 0.1;

} // namespace

HypothesisReport check_disk_self_map(double lambda)
{
    if (!(lambda > 0.0) || !std::isfinite(lambda))
        throw Error("check_disk_self_map: lambda must be positive");
    HypothesisReport rep;
    rep.name = kDiskSelfMap;
    rep.inputs = {{"lambda", lambda}};

    // (a) e^x - 0.5 on [-0.5, 0.5], certified above the constant.
    const Interval domain(-0.5, 0.5);
    const MapExpr g = parse("exp(z)-0.5");
    const Interval range = ieval(g, domain);
    const SignCertificate cert = certify_sign(parse("exp(z)-0.5-0.1"), domain);
    Clause a;
    a.description = "certified lower bound of exp(x)-0.5 on [-0.5,0.5] exceeds 0.1";
    a.verdict = pass_if(cert.verdict == Sign::Positive && range.lo() > kDiskDenominator);
    a.evidence = {{"enclosure", json::interval(range)}, {"lower_bound", range.lo()}};
    a.certificate = cert;
    rep.clauses.push_back(std::move(a));

    // (c) first: clause (b) falls back on it when the conservative bound is inconclusive.
    const Evaluator f(parse("lambda/(z+exp(z))").with_param("lambda", lambda));
    double max_mod = 0.0;
    Complex argmax{};
    for (int k = 0; k < kCircleSamples; ++k) {
        const double t = 2.0 * std::numbers::pi * k / kCircleSamples;
        const Complex z = std::polar(0.5, t);
        const EvalOutcome v = f(z);
        const double m = v.finite() ? std::abs(v.value) : std::numeric_limits<double>::infinity();
        if (m > max_mod) {
            max_mod = m;
            argmax = z;
        }
    }
    const bool sampled_ok = max_mod < 0.5;

    // (b) lambda / 0.1 < 0.5, evaluated with outward rounding.
    const double ratio_hi = (Interval::point(lambda) / Interval::point(kDiskDenominator)).hi();
    Clause b;
    b.description = "lambda / 0.1 < 0.5";
    if (ratio_hi < 0.5)
        b.verdict = Verdict::Pass;
    else
        b.verdict = sampled_ok ? Verdict::Uncertified : Verdict::Fail;
    b.evidence = {{"ratio_upper", ratio_hi},
                  {"denominator", kDiskDenominator},
                  {"ratio_with_certified_bound", lambda / range.lo()}};
    rep.clauses.push_back(std::move(b));

    Clause c;
    c.description = "sampled max of |f| on |z|=0.5 is below 0.5";
    c.verdict = pass_if(sampled_ok);
    c.sampled = true;
    c.evidence = {{"samples", kCircleSamples},
                  {"max_modulus", json::number(max_mod)},
                  {"argmax", json::complex(argmax)},
                  {"margin", json::number(0.5 - max_mod)}};
    rep.clauses.push_back(std::move(c));
    return rep;
}

HypothesisReport check_critical_values_in_disk(double lambda, double radius, int k_max)
{
    if (!(radius > 0.0) || !std::isfinite(radius))
        throw Error("check_critical_values_in_disk: radius must be positive and finite");
    if (k_max < 0)
        throw Error("check_critical_values_in_disk: k_max must be nonnegative");
    HypothesisReport rep;
    rep.name = kCriticalValues;
    rep.inputs = {{"lambda", lambda}, {"radius", radius}, {"k_max", k_max}};

    const double pi = std::numbers::pi;
    const double closed = std::abs(lambda) / std::sqrt(1.0 + pi * pi);
    Clause a;
    a.description = "max modulus lambda/sqrt(1+pi^2) is below the radius";
    a.verdict = pass_if(closed < radius);
    a.evidence = {{"max_modulus", closed}};
    rep.clauses.push_back(std::move(a));

    const CriticalSet cs = critical_set_closed_form(Complex(lambda, 0.0), -k_max, k_max);
    double max_enum = 0.0;
    Complex worst{};
    for (std::size_t i = 0; i < cs.values.size(); ++i) {
        if (std::abs(cs.values[i]) > max_enum) {
            max_enum = std::abs(cs.values[i]);
            worst = cs.points[i];
        }
    }
    Clause b;
    b.description = "enumerated critical values for |k| <= k_max lie in the disk";
    b.verdict = pass_if(max_enum < radius);
    b.evidence = {{"count", cs.values.size()},
                  {"max_modulus", max_enum},
                  {"at_point", json::complex(worst)},
                  {"max_residual", cs.max_residual}};
    rep.clauses.push_back(std::move(b));

    // |lambda/(-1 + i pi (2k+1))| depends on |2k+1| only and decreases in it.
    auto mod = [&](int k) { return std::abs(lambda) / std::hypot(1.0, pi * (2.0 * k + 1.0)); };
    const bool up = mod(k_max + 1) < mod(k_max) && mod(k_max) < radius;
    const bool down = mod(-k_max - 1) < mod(-k_max) && mod(-k_max) < radius;
    Clause c;
    c.description = "tail beyond k_max is dominated: modulus decreases in |2k+1|";
    c.verdict = pass_if(up && down);
    c.evidence = {{"modulus_at_k_max", mod(k_max)}, {"modulus_at_k_max_plus_1", mod(k_max + 1)}};
    rep.clauses.push_back(std::move(c));
    return rep;
}

HypothesisReport check_bov_attracting_recipe(const MapExpr& g, Complex b, double r, double epsilon)
{
    if (!(r > 0.0) || !(epsilon > 0.0))
        throw Error("check_bov_attracting_recipe: r and epsilon must be positive");
    g.require_bound();
    HypothesisReport rep;
    rep.name = kBovRecipe;
    rep.inputs = {{"g", json::expr(g)}, {"b", json::complex(b)}, {"r", r}, {"epsilon", epsilon}};

    const Evaluator ge(g);
    double min_mod = std::numeric_limits<double>::infinity();
    Complex witness = b;
    int points = 0;
    for (int j = 0; j < kDiskGrid; ++j) {
        for (int i = 0; i < kDiskGrid; ++i) {
            const double x = -r + 2.0 * r * i / (kDiskGrid - 1);
            const double y = -r + 2.0 * r * j / (kDiskGrid - 1);
            if (std::hypot(x, y) > r)
                continue;
            ++points;
            const Complex z = b + Complex(x, y);
            const EvalOutcome v = ge(z);
            // A pole of g makes epsilon/g vanish, which is harmless here.
            if (v.kind == EvalOutcome::Kind::PoleHit)
                continue;
            const double m = v.finite() ? std::abs(v.value) : std::numeric_limits<double>::infinity();
            if (m < min_mod) {
                min_mod = m;
                witness = z;
            }
        }
    }
    const double threshold = 2.0 * epsilon / r;
    Clause a;
    a.description = "sampled min of |g| on the closed disk exceeds 2*epsilon/r";
    a.verdict = pass_if(min_mod > threshold);
    a.sampled = true;
    a.evidence = {{"grid", kDiskGrid},
                  {"points", points},
                  {"min_modulus", json::number(min_mod)},
                  {"threshold", threshold},
                  {"witness", json::complex(witness)}};
    rep.clauses.push_back(std::move(a));

    const MapExpr f2(expr::add(expr::div(expr::constant(epsilon), g.root()), expr::constant(b)), g.params());
    Clause c;
    c.description = "fixed point of epsilon/g + b lies in the disk and is attracting";
    try {
        const FixedPointRecord rec = analyze_fixed_point(f2, b, 1, std::nullopt, "newton seed b");
        const bool inside = std::abs(rec.location - b) <= r;
        const bool attracting = rec.cls.kind == MultiplierClass::Kind::Attracting ||
                                rec.cls.kind == MultiplierClass::Kind::Superattracting;
        c.verdict = pass_if(inside && attracting);
        c.evidence = {{"fixed_point", json::record(rec)}, {"distance_to_b", std::abs(rec.location - b)}};
    } catch (const NewtonDivergence& e) {
        c.verdict = Verdict::Fail;
        c.evidence = {{"error", e.what()}, {"best_iterate", json::complex(e.best_iterate())}};
    } catch (const Error& e) {
        c.verdict = Verdict::Fail;
        c.evidence = {{"error", e.what()}};
    }
    rep.clauses.push_back(std::move(c));
    return rep;
}

HypothesisReport check_f3_basin_chain()
{
    return check_f3_basin_chain(parse("0.1/(z^9+exp(z))-0.99"));
}

HypothesisReport check_f3_basin_chain(const MapExpr& f3)
{
    f3.require_bound();
    HypothesisReport rep;
    rep.name = kF3Chain;
    rep.inputs = {{"map", json::expr(f3)}};

    const Evaluator f(f3);
    const Evaluator df(differentiate(f3));
    const Complex seed(-0.99, 0.0);
    const auto z7 = iterate_point(f, seed, 7);
    const auto z8 = iterate_point(f, seed, 8);

    auto near = [&](std::optional<Complex> v, double target, const std::string& what) {
        Clause c;
        c.description = what + " is within 0.02 of " + nlohmann::json(target).dump();
        if (!v) {
            c.verdict = Verdict::Fail;
            c.evidence = {{"error", "orbit meets a pole or overflows"}};
        } else {
            c.verdict = pass_if(std::abs(*v - target) < kQuotedTolerance);
            c.evidence = {{"value", json::complex(*v)}, {"target", target}, {"tolerance", kQuotedTolerance}};
        }
        return c;
    };
    auto deriv = [&](std::optional<Complex> z) -> std::optional<Complex> {
        if (!z)
            return std::nullopt;
        const EvalOutcome d = df(*z);
        if (!d.finite())
            return std::nullopt;
        return d.value;
    };
    rep.clauses.push_back(near(z7, -1.08, "f^7(-0.99)"));
    rep.clauses.push_back(near(z8, -1.05, "f^8(-0.99)"));
    rep.clauses.push_back(near(deriv(z7), -0.613, "f'(f^7(-0.99))"));
    rep.clauses.push_back(near(deriv(z8), -0.94, "f'(f^8(-0.99))"));

    Clause s;
    s.description = "f^7 maps I = (f(-0.99), -0.99) into I and |f'| < 1 on f^7(I)";
    s.sampled = true;
    const auto left = iterate_point(f, seed, 1);
    if (!left || std::abs(left->imag()) > 0.0 || !(left->real() < seed.real())) {
        s.verdict = Verdict::Fail;
        s.evidence = {{"error", "f(-0.99) is not a real point left of -0.99"}};
    } else {
        const double a = left->real(), b = seed.real();
        double img_lo = std::numeric_limits<double>::infinity();
        double img_hi = -img_lo;
        double max_dmod = 0.0;
        bool ok = true;
        for (int k = 0; k < kIntervalSamples; ++k) {
            const double t = a + (b - a) * (k + 0.5) / kIntervalSamples;
            const auto w = iterate_point(f, Complex(t, 0.0), 7);
            const auto d = deriv(w);
            if (!w || !d) {
                ok = false;
                break;
            }
            img_lo = std::min(img_lo, w->real());
            img_hi = std::max(img_hi, w->real());
            max_dmod = std::max(max_dmod, std::abs(*d));
        }
        ok = ok && a < img_lo && img_hi < b && max_dmod < 1.0;
        s.verdict = pass_if(ok);
        s.evidence = {{"interval", {a, b}},
                      {"samples", kIntervalSamples},
                      {"image", {json::number(img_lo), json::number(img_hi)}},
                      {"max_abs_derivative_on_image", json::number(max_dmod)}};
    }
    rep.clauses.push_back(std::move(s));
    return rep;
}

HypothesisReport check_siegel_heuristic(const MapExpr& f, Complex center, double r_in, double r_out,
                                        int seeds, int max_iter, double required)
{
    if (!(r_in > 0.0) || !(r_out > r_in) || seeds < 1 || max_iter < 1)
        throw Error("check_siegel_heuristic: bad sampling parameters");
    f.require_bound();
    HypothesisReport rep;
    rep.name = kSiegel;
    rep.inputs = {{"map", json::expr(f)}, {"center", json::complex(center)}, {"r_in", r_in},
                  {"r_out", r_out},       {"seeds", seeds},                  {"max_iter", max_iter},
                  {"required", required}};

    const Evaluator ev(f);
    OrbitConfig cfg;
    cfg.max_iter = max_iter;
    // Seeds on a sunflower spiral fill the disk evenly without a random source.
    const double golden_angle = std::numbers::pi * (3.0 - std::sqrt(5.0));
    int stayed = 0;
    double max_mod = 0.0;
    for (int k = 0; k < seeds; ++k) {
        const Complex z0 = center + std::polar(r_in * std::sqrt((k + 0.5) / seeds), k * golden_angle);
        Complex z = z0;
        bool inside = true;
        for (int n = 0; n < max_iter && inside; ++n) {
            const EvalOutcome v = ev(z);
            inside = v.finite() && std::abs(v.value - center) < r_out;
            if (inside) {
                z = v.value;
                max_mod = std::max(max_mod, std::abs(z - center));
            }
        }
        if (inside && iterate_orbit(ev, z0, cfg).fate != OrbitResult::Fate::ConvergedToCycle)
            ++stayed;
    }
    const double fraction = static_cast<double>(stayed) / seeds;
    Clause c;
    c.description = "seeds near the fixed point stay bounded without converging";
    c.sampled = true;
    c.verdict = pass_if(fraction >= required);
    c.evidence = {{"fraction", fraction}, {"stayed", stayed}, {"max_distance", max_mod}};
    rep.clauses.push_back(std::move(c));
    return rep;
}

HypothesisReport rerun(const HypothesisReport& report)
{
    const nlohmann::json& in = report.inputs;
    try {
        if (report.name == kDiskSelfMap)
            return check_disk_self_map(in.at("lambda").get<double>());
        if (report.name == kCriticalValues)
            return check_critical_values_in_disk(in.at("lambda").get<double>(), in.at("radius").get<double>(),
                                                 in.at("k_max").get<int>());
        if (report.name == kBovRecipe)
            return check_bov_attracting_recipe(json::to_expr(in.at("g")), json::to_complex(in.at("b")),
                                               in.at("r").get<double>(), in.at("epsilon").get<double>());
        if (report.name == kF3Chain)
            return check_f3_basin_chain(json::to_expr(in.at("map")));
        if (report.name == kSiegel)
            return check_siegel_heuristic(json::to_expr(in.at("map")), json::to_complex(in.at("center")),
                                          in.at("r_in").get<double>(), in.at("r_out").get<double>(),
                                          in.at("seeds").get<int>(), in.at("max_iter").get<int>(),
                                          in.at("required").get<double>());
    } catch (const nlohmann::json::exception& e) {
        throw SchemaError("report '" + report.name + "': bad inputs: " + e.what());
    }
    throw SchemaError("unknown report '" + report.name + "'");
}

bool replay(const HypothesisReport& report)
{
    return rerun(report) == report;
}

} // namespace bovdyn
