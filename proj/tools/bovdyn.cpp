#include <bovdyn/bundle.hpp>
#include <bovdyn/errors.hpp>
#include <bovdyn/maps.hpp>
#include <bovdyn/repro.hpp>

#include <CLI11.hpp>

#include <charconv>
#include <cmath>
#include <iostream>
#include <sstream>

using namespace bovdyn;

namespace {

enum Exit { kOk = 0, kCheckFail = 1, kUsage = 2, kNumeric = 3 };

struct UsageError : Error {
    using Error::Error;
};

// Shell-safe rendering of one argument for the printed run line.
std::string quote(const std::string& s)
{
    if (!s.empty() && s.find_first_not_of("abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ0123456789.,_+-=/:") ==
                          std::string::npos)
        return s;
    std::string out = "'";
    for (char c : s)
        out += c == '\'' ? std::string("'\\''") : std::string(1, c);
    return out + "'";
}

// Shortest text that reads back to the same double.
std::string num(double x)
{
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, res.ptr);
}

std::string num(Complex z)
{
    if (z.imag() == 0.0)
        return num(z.real());
    return num(z.real()) + (std::signbit(z.imag()) ? "" : "+") + num(z.imag()) + "i";
}

/// Accumulates the resolved flag set and prints it as one reproducible command line.
class RunLine {
public:
    explicit RunLine(std::string sub) : text_("bovdyn " + std::move(sub)) {}
    RunLine& arg(const std::string& s)
    {
        text_ += " " + quote(s);
        return *this;
    }
    RunLine& flag(const std::string& name, const std::string& value)
    {
        text_ += " " + name + " " + quote(value);
        return *this;
    }
    RunLine& flag(const std::string& name) { return arg(name); }
    void print() const { std::cerr << "run: " << text_ << "\n"; }

private:
    std::string text_;
};

Complex parse_constant(const std::string& text)
{
    MapExpr e;
    try {
        e = parse(text);
    } catch (const ParseError& err) {
        throw UsageError("bad value '" + text + "': " + err.what());
    }
    if (!e.parameter_names().empty())
        throw UsageError("value '" + text + "' must be a constant");
    const EvalOutcome a = eval(e, 0.0), b = eval(e, 1.0);
    if (!a.finite() || !b.finite() || a.value != b.value)
        throw UsageError("value '" + text + "' must be a finite constant");
    return a.value;
}

std::vector<double> parse_list(const std::string& text, std::size_t n, const std::string& what)
{
    std::vector<double> v;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        const Complex c = parse_constant(item);
        if (c.imag() != 0.0)
            throw UsageError(what + ": components must be real");
        v.push_back(c.real());
    }
    if (v.size() != n)
        throw UsageError(what + ": expected " + std::to_string(n) + " comma-separated numbers");
    return v;
}

// "re" or "re,im"; each part may itself be a constant expression.
Complex parse_param_value(const std::string& text)
{
    if (text.find(',') == std::string::npos)
        return parse_constant(text);
    const auto v = parse_list(text, 2, "--param");
    return {v[0], v[1]};
}

std::string param_text(Complex v)
{
    return v.imag() == 0.0 ? num(v.real()) : num(v.real()) + "," + num(v.imag());
}

struct MapOptions {
    std::string source;
    std::vector<std::string> params;

    void attach(CLI::App* app, const std::string& default_source = "")
    {
        source = default_source;
        auto* opt = app->add_option("--map", source, "map expression in z");
        if (default_source.empty())
            opt->required();
        app->add_option("--param", params, "parameter binding name=value (repeatable)");
    }

    MapExpr resolve() const
    {
        MapExpr e;
        try {
            e = parse(source);
        } catch (const ParseError& err) {
            throw UsageError(std::string("--map: ") + err.what());
        }
        for (const auto& p : params) {
            const auto eq = p.find('=');
            if (eq == std::string::npos || eq == 0)
                throw UsageError("--param expects name=value, got '" + p + "'");
            e = e.with_param(p.substr(0, eq), parse_param_value(p.substr(eq + 1)));
        }
        try {
            e.require_bound();
        } catch (const UnboundParameter& err) {
            throw UsageError(err.what());
        }
        return e;
    }

    void print(RunLine& line, const MapExpr& e) const
    {
        line.flag("--map", source);
        for (const auto& [k, v] : e.params())
            line.flag("--param", k + "=" + param_text(v));
    }
};

void write_bundle_if(const std::string& path, const ExperimentBundle& b)
{
    if (!path.empty())
        save_bundle(b, path);
}

ExperimentBundle new_bundle(const MapExpr& e)
{
    ExperimentBundle b;
    b.tool_version = tool_version();
    b.created = creation_timestamp();
    b.map_source = e.to_string();
    b.params = e.params();
    return b;
}

OrbitConfig orbit_config(int max_iter, double tol, int period_max)
{
    if (max_iter < 1 || !(tol > 0.0) || period_max < 1)
        throw UsageError("--max-iter, --tol and --period-max must be positive");
    OrbitConfig c;
    c.max_iter = max_iter;
    c.conv_eps = tol;
    c.period_max = period_max;
    return c;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Dynamics of transcendental maps with an omitted value: analysis, certification and rendering"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(tool_version()));

    MapOptions map_opt;
    std::string out_path;
    int max_iter = 1000;
    double tol = 1e-9;
    int period_max = 4;

    // analyze
    auto* analyze = app.add_subcommand("analyze", "real fixed points, 2-cycles and critical points");
    map_opt.attach(analyze);
    std::string interval_text = "-4,4";
    bool two_cycle = false;
    std::string critical_text;
    int critical_grid = 64;
    analyze->add_option("--interval", interval_text, "real search interval lo,hi")->capture_default_str();
    analyze->add_flag("--two-cycle", two_cycle, "also search for a 2-cycle on the interval");
    analyze->add_option("--critical", critical_text, "Newton search for critical points in re_min,re_max,im_min,im_max");
    analyze->add_option("--grid", critical_grid, "seed grid for --critical")->capture_default_str();
    analyze->add_option("--out", out_path, "bundle path");

    // orbit
    auto* orbit = app.add_subcommand("orbit", "iterate one seed and report its fate");
    map_opt.attach(orbit);
    std::string seed_text = "0";
    int prefix = 0;
    orbit->add_option("--seed", seed_text, "seed value")->capture_default_str();
    orbit->add_option("--max-iter", max_iter)->capture_default_str();
    orbit->add_option("--tol", tol, "chordal convergence tolerance")->capture_default_str();
    orbit->add_option("--period-max", period_max)->capture_default_str();
    orbit->add_option("--prefix", prefix, "number of orbit points to print")->capture_default_str();

    // verify
    auto* verify = app.add_subcommand("verify", "certify the sign of a real map on an interval");
    map_opt.attach(verify);
    std::string verify_interval;
    int order = 0;
    int max_depth = kDefaultMaxDepth;
    std::string expect;
    verify->add_option("--interval", verify_interval, "lo,hi")->required();
    verify->add_option("--order", order, "cascade from this derivative order (0: bisection)")->capture_default_str();
    verify->add_option("--max-depth", max_depth)->capture_default_str();
    verify->add_option("--expect", expect, "positive or negative; exit 1 unless matched")
        ->check(CLI::IsMember({"positive", "negative"}));
    verify->add_option("--out", out_path, "bundle path");

    // check
    auto* check = app.add_subcommand("check", "run a hypothesis checker");
    std::string check_name;
    double lambda = 0.04, radius = 0.5, r = 0.5, epsilon = 0.05;
    int k_max = 50;
    std::string g_text = "exp(z)", b_text = "1";
    std::string replay_path;
    check->add_option("name", check_name, "disk-self-map | critical-values-in-disk | bov-attracting-recipe | f3-basin-chain")
        ->check(CLI::IsMember({"disk-self-map", "critical-values-in-disk", "bov-attracting-recipe", "f3-basin-chain"}));
    check->add_option("--lambda", lambda)->capture_default_str();
    check->add_option("--radius", radius)->capture_default_str();
    check->add_option("--k-max", k_max)->capture_default_str();
    check->add_option("--g", g_text)->capture_default_str();
    check->add_option("--b", b_text)->capture_default_str();
    check->add_option("--r", r)->capture_default_str();
    check->add_option("--epsilon", epsilon)->capture_default_str();
    MapOptions chain_map;
    chain_map.attach(check, maps::kF3);
    check->add_option("--replay", replay_path, "replay every report stored in a bundle");
    check->add_option("--out", out_path, "bundle path");

    // render
    auto* rend = app.add_subcommand("render", "fate image over a window");
    map_opt.attach(rend);
    std::string window_text = "0,0,4,4";
    int res = 256;
    std::string stats_path, bundle_path;
    rend->add_option("--window", window_text, "cx,cy,w,h")->capture_default_str();
    rend->add_option("--res", res, "pixels per side")->capture_default_str();
    rend->add_option("--max-iter", max_iter)->capture_default_str();
    rend->add_option("--tol", tol, "chordal convergence tolerance")->capture_default_str();
    rend->add_option("--out", out_path, "PPM path")->required();
    rend->add_option("--stats", stats_path, "CSV stats path");
    rend->add_option("--bundle", bundle_path, "bundle path");

    // probe
    auto* probe = app.add_subcommand("probe", "heuristic Julia connectivity probe");
    map_opt.attach(probe);
    int rungs = 3;
    probe->add_option("--window", window_text, "cx,cy,w,h")->capture_default_str();
    probe->add_option("--res", res, "resolution of the first rung; each rung doubles it")->capture_default_str();
    probe->add_option("--rungs", rungs)->capture_default_str();
    probe->add_option("--max-iter", max_iter)->capture_default_str();
    probe->add_option("--tol", tol)->capture_default_str();
    probe->add_option("--out", out_path, "bundle path");

    // repro
    auto* rep = app.add_subcommand("repro", "rerun a worked example into a bundle");
    std::string example;
    std::string ppm_path;
    bool no_render = false;
    rep->add_option("example", example)->required()->check(CLI::IsMember(example_names()));
    rep->add_option("--out", out_path, "bundle path");
    rep->add_option("--ppm", ppm_path, "write the rendered image here");
    rep->add_option("--res", res, "render resolution")->capture_default_str();
    rep->add_option("--max-iter", max_iter, "render orbit budget")->capture_default_str();
    rep->add_flag("--no-render", no_render);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kOk : kUsage;
    }

    try {
        if (*analyze) {
            const MapExpr f = map_opt.resolve();
            const auto iv = parse_list(interval_text, 2, "--interval");
            if (!(iv[0] < iv[1]))
                throw UsageError("--interval: lo must be below hi");
            RunLine line("analyze");
            map_opt.print(line, f);
            line.flag("--interval", num(iv[0]) + "," + num(iv[1]));
            if (two_cycle)
                line.flag("--two-cycle");
            if (!critical_text.empty())
                line.flag("--critical", critical_text).flag("--grid", std::to_string(critical_grid));
            if (!out_path.empty())
                line.flag("--out", out_path);
            line.print();

            ExperimentBundle b = new_bundle(f);
            nlohmann::json out = {{"fixed_points", nlohmann::json::array()}};
            const Interval x(iv[0], iv[1]);
            int k = 0;
            for (const auto& rec : real_fixed_points(f, x)) {
                out["fixed_points"].push_back(json::record(rec));
                b.artifacts.push_back({"fixed_point_" + std::to_string(k++), rec});
            }
            if (two_cycle) {
                const auto c = find_two_cycle(f, x);
                out["two_cycle"] = c ? json::record(*c) : nlohmann::json();
                if (c)
                    b.artifacts.push_back({"two_cycle", *c});
            }
            if (!critical_text.empty()) {
                const auto w = parse_list(critical_text, 4, "--critical");
                const CriticalSet cs = find_critical_points_newton(f, {w[0], w[1], w[2], w[3]}, critical_grid);
                nlohmann::json pts = nlohmann::json::array();
                for (std::size_t i = 0; i < cs.points.size(); ++i)
                    pts.push_back({{"point", json::complex(cs.points[i])}, {"value", json::complex(cs.values[i])}});
                out["critical"] = {{"window", cs.window}, {"max_residual", cs.max_residual}, {"points", pts}};
            }
            std::cout << out.dump(2) << "\n";
            write_bundle_if(out_path, b);
            return kOk;
        }

        if (*orbit) {
            const MapExpr f = map_opt.resolve();
            const Complex seed = parse_constant(seed_text);
            OrbitConfig cfg = orbit_config(max_iter, tol, period_max);
            cfg.record_prefix = std::max(0, prefix);
            RunLine line("orbit");
            map_opt.print(line, f);
            line.flag("--seed", num(seed))
                .flag("--max-iter", std::to_string(max_iter))
                .flag("--tol", num(tol))
                .flag("--period-max", std::to_string(period_max))
                .flag("--prefix", std::to_string(cfg.record_prefix));
            line.print();

            const OrbitResult r = iterate_orbit(f, seed, cfg);
            // one table: orbit prefix, cycle points, then a fate row
            std::cout << "kind,n,re,im,note\n";
            auto row = [](const char* kind, int n, Complex z, const std::string& note) {
                std::cout << kind << "," << n << "," << num(z.real()) << "," << num(z.imag()) << "," << note << "\n";
            };
            for (std::size_t n = 0; n < r.prefix.size(); ++n)
                row("orbit", static_cast<int>(n), r.prefix[n], "");
            for (std::size_t k = 0; k < r.cycle.size(); ++k)
                row("cycle", static_cast<int>(k), r.cycle[k], "");
            std::string note = to_string(r.fate);
            if (r.fate == OrbitResult::Fate::ConvergedToCycle)
                note += " period " + std::to_string(r.period);
            if (r.fate == OrbitResult::Fate::Escaped || r.fate == OrbitResult::Fate::PoleHit)
                note += " index " + std::to_string(r.index);
            row("fate", r.iterations_used, r.final_point, note);
            return kOk;
        }

        if (*verify) {
            const MapExpr f = map_opt.resolve();
            const auto iv = parse_list(verify_interval, 2, "--interval");
            if (!(iv[0] <= iv[1]))
                throw UsageError("--interval: lo must not exceed hi");
            if (order < 0 || max_depth < 0)
                throw UsageError("--order and --max-depth must be nonnegative");
            RunLine line("verify");
            map_opt.print(line, f);
            line.flag("--interval", num(iv[0]) + "," + num(iv[1]))
                .flag("--order", std::to_string(order))
                .flag("--max-depth", std::to_string(max_depth));
            if (!expect.empty())
                line.flag("--expect", expect);
            if (!out_path.empty())
                line.flag("--out", out_path);
            line.print();

            const Interval x(iv[0], iv[1]);
            const SignCertificate cert = order > 0 ? cascade_sign(f, x, order, max_depth) : certify_sign(f, x, max_depth);
            std::cout << json::certificate(cert).dump(2) << "\n";
            ExperimentBundle b = new_bundle(f);
            b.artifacts.push_back({"sign", cert});
            write_bundle_if(out_path, b);
            if (expect.empty())
                return cert.verdict == Sign::Indeterminate ? kCheckFail : kOk;
            return expect == to_string(cert.verdict) ? kOk : kCheckFail;
        }

        if (*check) {
            if (!replay_path.empty()) {
                RunLine line("check");
                line.flag("--replay", replay_path).print();
                const ExperimentBundle b = load_bundle(replay_path);
                bool ok = true;
                for (const auto& a : b.artifacts) {
                    if (const auto* r = std::get_if<HypothesisReport>(&a.payload)) {
                        const bool same = replay(*r);
                        std::cout << a.name << ": " << (same ? "reproduced" : "DIFFERS") << "\n";
                        ok = ok && same;
                    }
                }
                return ok ? kOk : kCheckFail;
            }
            if (check_name.empty())
                throw UsageError("check: a checker name or --replay is required");
            RunLine line("check");
            line.arg(check_name);
            HypothesisReport report;
            MapExpr subject = maps::f_lambda(lambda);
            if (check_name == "disk-self-map") {
                line.flag("--lambda", num(lambda));
                if (!(lambda > 0.0))
                    throw UsageError("--lambda must be positive");
                line.print();
                report = check_disk_self_map(lambda);
            } else if (check_name == "critical-values-in-disk") {
                line.flag("--lambda", num(lambda)).flag("--radius", num(radius)).flag("--k-max", std::to_string(k_max));
                if (!(radius > 0.0) || !std::isfinite(radius) || k_max < 0)
                    throw UsageError("--radius must be positive and finite, --k-max nonnegative");
                line.print();
                report = check_critical_values_in_disk(lambda, radius, k_max);
            } else if (check_name == "bov-attracting-recipe") {
                MapOptions g{g_text, chain_map.params};
                const MapExpr gm = g.resolve();
                const Complex b = parse_constant(b_text);
                if (!(r > 0.0) || !(epsilon > 0.0))
                    throw UsageError("--r and --epsilon must be positive");
                line.flag("--g", g_text);
                for (const auto& [k, v] : gm.params())
                    line.flag("--param", k + "=" + param_text(v));
                line.flag("--b", num(b)).flag("--r", num(r)).flag("--epsilon", num(epsilon));
                line.print();
                subject = gm;
                report = check_bov_attracting_recipe(gm, b, r, epsilon);
            } else {
                subject = chain_map.resolve();
                chain_map.print(line, subject);
                line.print();
                report = check_f3_basin_chain(subject);
            }
            std::cout << json::report(report).dump(2) << "\n";
            ExperimentBundle b = new_bundle(subject);
            b.artifacts.push_back({report.name, report});
            write_bundle_if(out_path, b);
            return report.overall() == Verdict::Pass ? kOk : kCheckFail;
        }

        if (*rend) {
            const MapExpr f = map_opt.resolve();
            Window w;
            try {
                w = parse_window(window_text);
            } catch (const Error& e) {
                throw UsageError(std::string("--window: ") + e.what());
            }
            if (res < 0 || res > kMaxResolution)
                throw UsageError("--res must lie in [0, " + std::to_string(kMaxResolution) + "]");
            RenderConfig cfg;
            cfg.orbit = orbit_config(max_iter, tol, cfg.orbit.period_max);
            RunLine line("render");
            map_opt.print(line, f);
            line.flag("--window", to_string(w))
                .flag("--res", std::to_string(res))
                .flag("--max-iter", std::to_string(max_iter))
                .flag("--tol", num(tol))
                .flag("--out", out_path);
            if (!stats_path.empty())
                line.flag("--stats", stats_path);
            if (!bundle_path.empty())
                line.flag("--bundle", bundle_path);
            line.print();

            const BasinImage img = render(f, w, res, res, {}, cfg);
            write_ppm(img, out_path);
            if (!stats_path.empty())
                write_stats_csv(img, stats_path);
            ExperimentBundle b = new_bundle(f);
            b.artifacts.push_back({"basins", summarize(img)});
            write_bundle_if(bundle_path, b);
            std::cout << stats_csv(img);
            return kOk;
        }

        if (*probe) {
            const MapExpr f = map_opt.resolve();
            Window w;
            try {
                w = parse_window(window_text);
            } catch (const Error& e) {
                throw UsageError(std::string("--window: ") + e.what());
            }
            if (rungs < 2 || res < 1 || (static_cast<long long>(res) << (rungs - 1)) > kMaxResolution)
                throw UsageError("probe needs at least two rungs within the resolution limit");
            ProbeConfig cfg;
            const bool track = cfg.render.orbit.track_derivative;
            cfg.render.orbit = orbit_config(max_iter, tol, cfg.render.orbit.period_max);
            cfg.render.orbit.track_derivative = track;
            std::vector<int> ladder;
            for (int k = 0; k < rungs; ++k)
                ladder.push_back(res << k);
            RunLine line("probe");
            map_opt.print(line, f);
            line.flag("--window", to_string(w))
                .flag("--res", std::to_string(res))
                .flag("--rungs", std::to_string(rungs))
                .flag("--max-iter", std::to_string(max_iter))
                .flag("--tol", num(tol));
            if (!out_path.empty())
                line.flag("--out", out_path);
            line.print();

            const ConnectivityReport rep_c = connectivity_probe(f, w, ladder, cfg);
            nlohmann::json out = json::connectivity(rep_c);
            out["diameter_ratios"] = nlohmann::json::array();
            for (double q : rep_c.diameter_ratios())
                out["diameter_ratios"].push_back(json::number(q));
            std::cout << out.dump(2) << "\n";
            ExperimentBundle b = new_bundle(f);
            b.artifacts.push_back({"connectivity", rep_c});
            write_bundle_if(out_path, b);
            return kOk;
        }

        if (*rep) {
            ReproOptions opts;
            opts.render = !no_render;
            if (res < 1 || res > kMaxResolution || max_iter < 1)
                throw UsageError("--res and --max-iter must be positive");
            opts.render_resolution = res;
            opts.max_iter = max_iter;
            RunLine line("repro");
            line.arg(example).flag("--res", std::to_string(res)).flag("--max-iter", std::to_string(max_iter));
            if (no_render)
                line.flag("--no-render");
            if (!out_path.empty())
                line.flag("--out", out_path);
            if (!ppm_path.empty())
                line.flag("--ppm", ppm_path);
            line.print();

            const ReproResult result = repro(example_from_string(example), opts);
            for (const auto& c : result.checks)
                std::cout << (c.pass ? "PASS " : "FAIL ") << c.name << ": " << c.detail << "\n";
            write_bundle_if(out_path, result.bundle);
            if (!ppm_path.empty() && result.image)
                write_ppm(*result.image, ppm_path);
            if (result.image)
                std::cout << "ppm fnv1a " << fnv1a_hex(encode_ppm(*result.image)) << "\n";
            return result.pass() ? kOk : kCheckFail;
        }
    } catch (const UsageError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return kUsage;
    } catch (const ParseError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return kUsage;
    } catch (const UnboundParameter& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return kUsage;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kNumeric;
    }
    return kUsage;
}
