#include "bovdyn/repro.hpp"

#include "bovdyn/errors.hpp"
#include "bovdyn/maps.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

namespace bovdyn {

namespace {

const std::vector<std::pair<Example, std::string>>& table()
{
    static const std::vector<std::pair<Example, std::string>> t{
        {Example::Ex41Attracting, "ex41-attracting"}, {Example::Ex41TwoCycle, "ex41-2cycle"},
        {Example::Ex42, "ex42"},                      {Example::Ex43, "ex43"},
        {Example::Ex44Parabolic, "ex44-parabolic"},   {Example::Ex44Siegel, "ex44-siegel"},
    };
    return t;
}

std::string fmt(double x)
{
    std::ostringstream os;
    os.precision(10);
    os << x;
    return os.str();
}

class Pipeline {
public:
    Pipeline(const MapExpr& map, const ReproOptions& opts) : opts_(opts)
    {
        out_.bundle.tool_version = tool_version();
        out_.bundle.created = creation_timestamp();
        out_.bundle.map_source = map.to_string();
        out_.bundle.params = map.params();
    }

    void add(std::string name, ArtifactPayload payload)
    {
        out_.bundle.artifacts.push_back({std::move(name), std::move(payload)});
    }

    void check(std::string name, bool pass, std::string detail)
    {
        out_.checks.push_back({std::move(name), pass, std::move(detail)});
    }

    void check_report(const HypothesisReport& r)
    {
        add(r.name, r);
        check(r.name, r.overall() == Verdict::Pass, std::string("overall ") + to_string(r.overall()));
    }

    const BasinImage* render_basins(const MapExpr& f, const Window& w, std::vector<FixedPointRecord> attractors)
    {
        if (!opts_.render)
            return nullptr;
        RenderConfig cfg;
        cfg.orbit.max_iter = opts_.max_iter;
        const int n = opts_.render_resolution;
        out_.image = render(f, w, n, n, std::move(attractors), cfg);
        add("basins", summarize(*out_.image));
        return &*out_.image;
    }

    const ReproOptions& opts() const { return opts_; }
    ReproResult take() { return std::move(out_); }

private:
    ReproOptions opts_;
    ReproResult out_;
};

bool all_below(const std::vector<double>& v, double bound)
{
    for (double x : v)
        if (!(x < bound))
            return false;
    return !v.empty();
}

bool all_above(const std::vector<double>& v, double bound)
{
    for (double x : v)
        if (!(x > bound))
            return false;
    return !v.empty();
}

std::string join(const std::vector<double>& v)
{
    std::string s;
    for (double x : v)
        s += (s.empty() ? "" : ",") + fmt(x);
    return s;
}

ReproResult ex41_attracting(const ReproOptions& opts)
{
    const double lambda = 0.04;
    const MapExpr f = maps::f_lambda(lambda);
    Pipeline run(f, opts);

    const auto fps = real_fixed_points(f, Interval(0.0, 1.0));
    const bool found = fps.size() == 1;
    if (found) {
        const FixedPointRecord& x = fps.front();
        run.add("x_lambda", x);
        const double m = x.multiplier.real();
        run.check("x_lambda attracting in (0,1)",
                  x.location.real() > 0.0 && x.location.real() < 1.0 && m > -1.0 && m < 0.0 &&
                      x.cls.kind == MultiplierClass::Kind::Attracting,
                  "x = " + fmt(x.location.real()) + ", multiplier " + fmt(m));
    } else {
        run.check("x_lambda attracting in (0,1)", false, std::to_string(fps.size()) + " fixed points on [0,1]");
    }

    run.check_report(check_disk_self_map(lambda));
    run.check_report(check_critical_values_in_disk(lambda, 0.5, 50));

    const ConnectivityReport probe =
        connectivity_probe(f, {0.0, 0.0, 6.0, 6.0}, opts.probe_resolutions, ProbeConfig{}, fps);
    run.add("connectivity", probe);
    run.check("component diameter shrinks", all_below(probe.diameter_ratios(), 0.8),
              "ratios " + join(probe.diameter_ratios()));

    run.render_basins(f, {0.0, 0.0, 6.0, 6.0}, fps);
    return run.take();
}

ReproResult ex41_two_cycle(const ReproOptions& opts)
{
    const MapExpr f = maps::f_lambda(4.0);
    Pipeline run(f, opts);

    const auto cyc = find_two_cycle(f, Interval(0.0, 1.0));
    std::vector<FixedPointRecord> attractors;
    if (cyc) {
        run.add("two_cycle", *cyc);
        attractors.push_back(*cyc);
        const double a1 = cyc->location.real();
        const EvalOutcome partner = eval(f, cyc->location);
        const bool ok = a1 > 0.0 && a1 < 1.0 && cyc->residual < 1e-10 && partner.finite() &&
                        partner.value.real() > 1.0 && std::abs(cyc->multiplier) <= 1.0 + 1e-9;
        run.check("2-cycle with a1 in (0,1)", ok,
                  "a1 = " + fmt(a1) + ", partner " + fmt(partner.value.real()) + ", |(f^2)'| " +
                      fmt(std::abs(cyc->multiplier)));
    } else {
        run.check("2-cycle with a1 in (0,1)", false, "no 2-periodic point on [0,1]");
    }

    const ConnectivityReport probe =
        connectivity_probe(f, {0.0, 0.0, 6.0, 6.0}, opts.probe_resolutions, ProbeConfig{}, attractors);
    run.add("connectivity", probe);
    run.check("component diameter persists", all_above(probe.diameter_ratios(), 0.8),
              "ratios " + join(probe.diameter_ratios()));

    run.render_basins(f, {0.0, 0.0, 6.0, 6.0}, attractors);
    return run.take();
}

ReproResult ex42(const ReproOptions& opts)
{
    const MapExpr g = parse("exp(z)");
    const Complex b = 1.0;
    const double r = 0.5, eps = 0.05;
    const MapExpr f2(expr::add(expr::div(expr::constant(eps), g.root()), expr::constant(b)));
    Pipeline run(f2, opts);

    run.check_report(check_bov_attracting_recipe(g, b, r, eps));
    const FixedPointRecord fp = analyze_fixed_point(f2, b, 1, std::nullopt, "newton seed b");
    run.add("fixed_point", fp);
    run.render_basins(f2, {1.0, 0.0, 3.0, 3.0}, {fp});
    return run.take();
}

ReproResult ex43(const ReproOptions& opts)
{
    const MapExpr f3 = maps::f3();
    Pipeline run(f3, opts);

    std::vector<FixedPointRecord> attracting;
    for (const auto& r : real_fixed_points(f3, Interval(-4.0, 4.0)))
        if (r.cls.kind == MultiplierClass::Kind::Attracting)
            attracting.push_back(r);
    const bool two = attracting.size() == 2;
    bool placed = false;
    if (two) {
        // real_fixed_points is ascending, so a2 comes first.
        const double a2 = attracting[0].location.real();
        const double a1 = attracting[1].location.real();
        placed = a1 >= -0.904 && a1 <= -0.72 && a2 >= -1.069 && a2 <= -1.0;
        run.add("a1", attracting[1]);
        run.add("a2", attracting[0]);
    }
    run.check("two attracting real fixed points in the stated intervals", two && placed,
              std::to_string(attracting.size()) + " attracting real fixed points");

    const Evaluator h(maps::h());
    double worst = 0.0;
    for (const auto& r : attracting) {
        const EvalOutcome hv = h(r.location);
        worst = std::max(worst, hv.finite() ? std::abs(r.multiplier + hv.value) : std::numeric_limits<double>::infinity());
    }
    run.check("multiplier equals -h at each fixed point", two && worst < 1e-8, "max deviation " + fmt(worst));

    const double h1 = h(Complex(-0.72, 0.0)).value.real();
    const double h2 = h(Complex(-1.069, 0.0)).value.real();
    run.check("h(-0.72) = 0.828 +- 0.01", std::abs(h1 - 0.828) <= 0.01, "h(-0.72) = " + fmt(h1));
    run.check("h(-1.069) = 0.979 +- 0.01", std::abs(h2 - 0.979) <= 0.01, "h(-1.069) = " + fmt(h2));

    const double table[] = {0.3, -1.7, 123, -1800, 18000, -1.3e5, 6.8e5, -2.2e6};
    const MapExpr p = maps::p();
    MapExpr dk = p;
    double worst_rel = 0.0;
    std::string values;
    for (int k = 0; k < 8; ++k) {
        const double v = eval(dk, Complex(-0.72, 0.0)).value.real();
        worst_rel = std::max(worst_rel, std::abs(v - table[k]) / std::abs(table[k]));
        values += (k ? "," : "") + fmt(v);
        dk = differentiate(dk);
    }
    run.check("derivative table of p at -0.72 within 10%", worst_rel < 0.1,
              "values " + values + ", worst relative error " + fmt(worst_rel));

    const SignCertificate cert = cascade_sign(p, Interval(-0.792, -0.72), 8);
    run.add("p_positive", cert);
    run.check("cascade certifies p > 0 on [-0.792,-0.72]", cert.verdict == Sign::Positive,
              std::string("verdict ") + to_string(cert.verdict));

    run.check_report(check_f3_basin_chain(f3));

    if (const BasinImage* img = run.render_basins(f3, {-0.9, 0.0, 3.0, 3.0}, attracting)) {
        int dominant = 0;
        std::string detail;
        for (const auto& [code, frac] : img->stats) {
            if (code >= 0 && frac > 0.05)
                ++dominant;
            detail += fate_code_name(code) + "=" + fmt(frac) + " ";
        }
        run.check("two dominant basins", dominant == 2 && img->stats.count(0) && img->stats.count(1) &&
                                             img->stats.at(0) > 0.05 && img->stats.at(1) > 0.05,
                  detail);
    }
    return run.take();
}

ReproResult ex44_parabolic(const ReproOptions& opts)
{
    const MapExpr f = maps::f4(0.5);
    Pipeline run(f, opts);
    const FixedPointRecord fp = analyze_fixed_point(f, 0.0, 1, std::nullopt, "newton seed 0");
    run.add("fixed_point_0", fp);
    run.check("parabolic fixed point 0 with multiplier -1",
              fp.location == Complex(0.0, 0.0) && fp.multiplier == Complex(-1.0, 0.0) &&
                  fp.cls.kind == MultiplierClass::Kind::Parabolic && fp.cls.q == 2,
              "multiplier " + fmt(fp.multiplier.real()) + " " + to_string(fp.cls) + " q=" +
                  std::to_string(fp.cls.q));
    run.render_basins(f, {0.0, 0.0, 4.0, 4.0}, {});
    return run.take();
}

ReproResult ex44_siegel(const ReproOptions& opts)
{
    const double t = (std::sqrt(5.0) - 1.0) / 2.0;
    const Complex lambda = std::polar(1.0, 2.0 * std::numbers::pi * t) / -2.0;
    const MapExpr f = maps::f4(lambda);
    Pipeline run(f, opts);
    const FixedPointRecord fp = analyze_fixed_point(f, 0.0, 1, std::nullopt, "newton seed 0");
    run.add("fixed_point_0", fp);
    const double dev = std::abs(std::abs(fp.multiplier) - 1.0);
    run.check("irrationally indifferent fixed point 0",
              dev < 1e-12 && fp.cls.kind == MultiplierClass::Kind::IrrationallyIndifferent,
              "||m|-1| = " + fmt(dev) + ", " + to_string(fp.cls));
    run.check_report(check_siegel_heuristic(f, 0.0, 0.05, 0.5, 400, 10000, 0.95));
    run.render_basins(f, {0.0, 0.0, 4.0, 4.0}, {});
    return run.take();
}

} // namespace

const std::vector<std::string>& example_names()
{
    static const std::vector<std::string> names = [] {
        std::vector<std::string> v;
        for (const auto& [e, n] : table())
            v.push_back(n);
        return v;
    }();
    return names;
}

std::string to_string(Example e)
{
    for (const auto& [x, n] : table())
        if (x == e)
            return n;
    return "unknown";
}

Example example_from_string(const std::string& name)
{
    for (const auto& [x, n] : table())
        if (n == name)
            return x;
    throw Error("unknown example '" + name + "'");
}

bool ReproResult::pass() const
{
    for (const auto& c : checks)
        if (!c.pass)
            return false;
    return !checks.empty();
}

ReproResult repro(Example example, const ReproOptions& opts)
{
    try {
        switch (example) {
        case Example::Ex41Attracting:
            return ex41_attracting(opts);
        case Example::Ex41TwoCycle:
            return ex41_two_cycle(opts);
        case Example::Ex42:
            return ex42(opts);
        case Example::Ex43:
            return ex43(opts);
        case Example::Ex44Parabolic:
            return ex44_parabolic(opts);
        case Example::Ex44Siegel:
            return ex44_siegel(opts);
        }
    } catch (const NewtonDivergence& e) {
        throw NewtonDivergence(to_string(example) + ": " + e.what(), e.best_iterate());
    } catch (const Error& e) {
        throw Error(to_string(example) + ": " + e.what());
    }
    throw Error("unknown example");
}

} // namespace bovdyn
