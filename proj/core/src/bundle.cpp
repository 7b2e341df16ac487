#include "bovdyn/bundle.hpp"

#include "bovdyn/errors.hpp"

#include <charconv>
#include <cmath>
#include <cstdlib>
#include <cstring>
#include <ctime>
#include <fstream>
#include <limits>
#include <sstream>

namespace bovdyn {

const char* tool_version()
{
    return BOVDYN_VERSION;
}

std::string creation_timestamp()
{
    std::time_t t = std::time(nullptr);
    if (const char* env = std::getenv("SOURCE_DATE_EPOCH")) {
        long long v = 0;
        const char* end = env + std::strlen(env);
        const auto [ptr, ec] = std::from_chars(env, end, v);
        if (ec == std::errc() && ptr == end)
            t = static_cast<std::time_t>(v);
    }
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

BasinStats summarize(const BasinImage& img)
{
    return {img.window, img.nx, img.ny, img.stats, img.attractors, fnv1a_hex(encode_ppm(img))};
}

namespace json {

namespace {

template <class E>
E enum_from(const nlohmann::json& j, std::initializer_list<std::pair<E, const char*>> table)
{
    const std::string s = j.get<std::string>();
    for (const auto& [e, name] : table)
        if (s == name)
            return e;
    throw SchemaError("unknown enumerator '" + s + "'");
}

Sign to_sign(const nlohmann::json& j)
{
    return enum_from<Sign>(j, {{Sign::Positive, "positive"},
                               {Sign::Negative, "negative"},
                               {Sign::Indeterminate, "indeterminate"}});
}

nlohmann::json node(const expr::Node& n)
{
    using namespace expr;
    return std::visit(
        overloaded{
            [](const Const& c) { return nlohmann::json::array({"const", complex(c.value)}); },
            [](const Var&) { return nlohmann::json::array({"z"}); },
            [](const Param& p) { return nlohmann::json::array({"param", p.name}); },
            [](const Add& b) { return nlohmann::json::array({"add", node(*b.lhs), node(*b.rhs)}); },
            [](const Sub& b) { return nlohmann::json::array({"sub", node(*b.lhs), node(*b.rhs)}); },
            [](const Mul& b) { return nlohmann::json::array({"mul", node(*b.lhs), node(*b.rhs)}); },
            [](const Div& b) { return nlohmann::json::array({"div", node(*b.lhs), node(*b.rhs)}); },
            [](const Neg& u) { return nlohmann::json::array({"neg", node(*u.operand)}); },
            [](const IntPow& p) { return nlohmann::json::array({"pow", node(*p.base), p.exponent}); },
            [](const Exp& e) { return nlohmann::json::array({"exp", node(*e.arg)}); },
        },
        n.kind);
}

expr::NodePtr to_node(const nlohmann::json& j, int depth)
{
    if (depth > 100000)
        throw SchemaError("expression tree too deep");
    if (!j.is_array() || j.empty())
        throw SchemaError("expression node must be a non-empty array");
    const std::string op = j.at(0).get<std::string>();
    auto arity = [&](std::size_t n) {
        if (j.size() != n + 1)
            throw SchemaError("expression node '" + op + "' has the wrong arity");
    };
    auto child = [&](std::size_t k) { return to_node(j.at(k), depth + 1); };
    if (op == "const") {
        arity(1);
        return expr::constant(to_complex(j.at(1)));
    }
    if (op == "z") {
        arity(0);
        return expr::variable();
    }
    if (op == "param") {
        arity(1);
        return expr::param(j.at(1).get<std::string>());
    }
    if (op == "add" || op == "sub" || op == "mul" || op == "div") {
        arity(2);
        auto a = child(1), b = child(2);
        if (op == "add")
            return expr::add(a, b);
        if (op == "sub")
            return expr::sub(a, b);
        if (op == "mul")
            return expr::mul(a, b);
        return expr::div(a, b);
    }
    if (op == "neg") {
        arity(1);
        return expr::neg(child(1));
    }
    if (op == "pow") {
        arity(2);
        return expr::pow(child(1), j.at(2).get<int>());
    }
    if (op == "exp") {
        arity(1);
        return expr::exp(child(1));
    }
    throw SchemaError("unknown expression node '" + op + "'");
}

} // namespace

nlohmann::json number(double x)
{
    if (std::isnan(x))
        return "nan";
    if (std::isinf(x))
        return x > 0 ? "inf" : "-inf";
    return x;
}

double to_number(const nlohmann::json& j)
{
    if (j.is_string()) {
        const std::string s = j.get<std::string>();
        if (s == "nan")
            return std::numeric_limits<double>::quiet_NaN();
        if (s == "inf")
            return std::numeric_limits<double>::infinity();
        if (s == "-inf")
            return -std::numeric_limits<double>::infinity();
        throw SchemaError("bad number '" + s + "'");
    }
    if (!j.is_number())
        throw SchemaError("expected a number");
    return j.get<double>();
}

nlohmann::json complex(Complex z)
{
    return nlohmann::json::array({number(z.real()), number(z.imag())});
}

Complex to_complex(const nlohmann::json& j)
{
    if (!j.is_array() || j.size() != 2)
        throw SchemaError("complex number must be [re, im]");
    return {to_number(j[0]), to_number(j[1])};
}

nlohmann::json expr(const MapExpr& e)
{
    return {{"tree", node(*e.root())}, {"text", e.to_string()}, {"params", params(e.params())}};
}

MapExpr to_expr(const nlohmann::json& j)
{
    return MapExpr(to_node(j.at("tree"), 0), to_params(j.at("params")));
}

nlohmann::json params(const std::map<std::string, Complex>& p)
{
    nlohmann::json out = nlohmann::json::object();
    for (const auto& [k, v] : p)
        out[k] = complex(v);
    return out;
}

std::map<std::string, Complex> to_params(const nlohmann::json& j)
{
    if (!j.is_object())
        throw SchemaError("params must be an object");
    std::map<std::string, Complex> out;
    for (const auto& [k, v] : j.items())
        out[k] = to_complex(v);
    return out;
}

nlohmann::json interval(const Interval& x)
{
    return nlohmann::json::array({number(x.lo()), number(x.hi())});
}

Interval to_interval(const nlohmann::json& j)
{
    if (!j.is_array() || j.size() != 2)
        throw SchemaError("interval must be [lo, hi]");
    try {
        return Interval(to_number(j[0]), to_number(j[1]));
    } catch (const SchemaError&) {
        throw;
    } catch (const Error& e) {
        throw SchemaError(e.what());
    }
}

nlohmann::json certificate(const SignCertificate& c)
{
    nlohmann::json leaves = nlohmann::json::array();
    for (const auto& l : c.leaves)
        leaves.push_back(interval(l));
    nlohmann::json trace = nlohmann::json::array();
    for (const auto& s : c.cascade_trace)
        trace.push_back({{"order", s.order},
                         {"endpoint", number(s.endpoint)},
                         {"endpoint_sign", to_string(s.endpoint_sign)},
                         {"interval_sign", to_string(s.interval_sign)}});
    return {{"target", expr(c.target)},
            {"domain", interval(c.domain)},
            {"verdict", to_string(c.verdict)},
            {"method", c.method == SignCertificate::Method::Cascade ? "cascade" : "bisection"},
            {"max_depth", c.max_depth},
            {"order", c.order},
            {"subdivisions", c.subdivisions},
            {"max_depth_hit", c.max_depth_hit},
            {"leaves", leaves},
            {"cascade_trace", trace}};
}

SignCertificate to_certificate(const nlohmann::json& j)
{
    SignCertificate c;
    c.target = to_expr(j.at("target"));
    c.domain = to_interval(j.at("domain"));
    c.verdict = to_sign(j.at("verdict"));
    c.method = enum_from<SignCertificate::Method>(
        j.at("method"), {{SignCertificate::Method::Bisection, "bisection"},
                         {SignCertificate::Method::Cascade, "cascade"}});
    c.max_depth = j.at("max_depth").get<int>();
    c.order = j.at("order").get<int>();
    c.subdivisions = j.at("subdivisions").get<int>();
    c.max_depth_hit = j.at("max_depth_hit").get<bool>();
    for (const auto& l : j.at("leaves"))
        c.leaves.push_back(to_interval(l));
    for (const auto& s : j.at("cascade_trace"))
        c.cascade_trace.push_back({s.at("order").get<int>(), to_number(s.at("endpoint")),
                                   to_sign(s.at("endpoint_sign")), to_sign(s.at("interval_sign"))});
    return c;
}

nlohmann::json record(const FixedPointRecord& r)
{
    return {{"location", complex(r.location)},
            {"period", r.period},
            {"multiplier", complex(r.multiplier)},
            {"class", to_string(r.cls)},
            {"q", r.cls.q},
            {"residual", number(r.residual)},
            {"provenance", r.provenance}};
}

FixedPointRecord to_record(const nlohmann::json& j)
{
    FixedPointRecord r;
    r.location = to_complex(j.at("location"));
    r.period = j.at("period").get<int>();
    r.multiplier = to_complex(j.at("multiplier"));
    r.cls.kind = multiplier_kind_from_string(j.at("class").get<std::string>());
    r.cls.q = j.at("q").get<int>();
    r.residual = to_number(j.at("residual"));
    r.provenance = j.at("provenance").get<std::string>();
    return r;
}

nlohmann::json report(const HypothesisReport& r)
{
    nlohmann::json clauses = nlohmann::json::array();
    for (const auto& c : r.clauses) {
        nlohmann::json cj = {{"description", c.description},
                             {"verdict", to_string(c.verdict)},
                             {"evidence", c.evidence},
                             {"sampled", c.sampled}};
        if (c.certificate)
            cj["certificate"] = certificate(*c.certificate);
        clauses.push_back(std::move(cj));
    }
    return {{"name", r.name}, {"inputs", r.inputs}, {"clauses", clauses}, {"overall", to_string(r.overall())}};
}

HypothesisReport to_report(const nlohmann::json& j)
{
    HypothesisReport r;
    r.name = j.at("name").get<std::string>();
    r.inputs = j.at("inputs");
    for (const auto& cj : j.at("clauses")) {
        Clause c;
        c.description = cj.at("description").get<std::string>();
        c.verdict = verdict_from_string(cj.at("verdict").get<std::string>());
        c.evidence = cj.at("evidence");
        c.sampled = cj.at("sampled").get<bool>();
        if (cj.contains("certificate"))
            c.certificate = to_certificate(cj.at("certificate"));
        r.clauses.push_back(std::move(c));
    }
    if (verdict_from_string(j.at("overall").get<std::string>()) != r.overall())
        throw SchemaError("report '" + r.name + "': stored overall verdict disagrees with its clauses");
    return r;
}

nlohmann::json window(const Window& w)
{
    return nlohmann::json::array({number(w.cx), number(w.cy), number(w.w), number(w.h)});
}

Window to_window(const nlohmann::json& j)
{
    if (!j.is_array() || j.size() != 4)
        throw SchemaError("window must be [cx, cy, w, h]");
    return {to_number(j[0]), to_number(j[1]), to_number(j[2]), to_number(j[3])};
}

nlohmann::json connectivity(const ConnectivityReport& r)
{
    nlohmann::json rungs = nlohmann::json::array();
    for (const auto& g : r.rungs)
        rungs.push_back({{"resolution", g.resolution},
                         {"pixel_size", number(g.pixel_size)},
                         {"julia_pixels", g.julia_pixels},
                         {"components", g.components},
                         {"largest_diameter", number(g.largest_diameter)}});
    return {{"window", window(r.window)}, {"rungs", rungs}};
}

ConnectivityReport to_connectivity(const nlohmann::json& j)
{
    ConnectivityReport r;
    r.window = to_window(j.at("window"));
    for (const auto& g : j.at("rungs"))
        r.rungs.push_back({g.at("resolution").get<int>(), to_number(g.at("pixel_size")),
                           g.at("julia_pixels").get<long>(), g.at("components").get<long>(),
                           to_number(g.at("largest_diameter"))});
    return r;
}

nlohmann::json basin_stats(const BasinStats& s)
{
    // Codes are keyed as decimal strings; the object keeps them sorted as text.
    nlohmann::json stats = nlohmann::json::object();
    for (const auto& [code, frac] : s.stats)
        stats[std::to_string(code)] = number(frac);
    nlohmann::json attractors = nlohmann::json::array();
    for (const auto& a : s.attractors)
        attractors.push_back(record(a));
    return {{"window", window(s.window)}, {"nx", s.nx},       {"ny", s.ny},
            {"stats", stats},            {"attractors", attractors}, {"ppm_fnv1a", s.ppm_fnv1a}};
}

BasinStats to_basin_stats(const nlohmann::json& j)
{
    BasinStats s;
    s.window = to_window(j.at("window"));
    s.nx = j.at("nx").get<int>();
    s.ny = j.at("ny").get<int>();
    for (const auto& [k, v] : j.at("stats").items()) {
        int code = 0;
        const auto [ptr, ec] = std::from_chars(k.data(), k.data() + k.size(), code);
        if (ec != std::errc() || ptr != k.data() + k.size())
            throw SchemaError("bad fate code '" + k + "'");
        s.stats[code] = to_number(v);
    }
    for (const auto& a : j.at("attractors"))
        s.attractors.push_back(to_record(a));
    s.ppm_fnv1a = j.at("ppm_fnv1a").get<std::string>();
    return s;
}

} // namespace json

namespace {

nlohmann::json artifact(const Artifact& a)
{
    return std::visit(
        expr::overloaded{
            [&](const FixedPointRecord& r) -> nlohmann::json {
                return {{"name", a.name}, {"kind", "fixed_point"}, {"payload", json::record(r)}};
            },
            [&](const SignCertificate& c) -> nlohmann::json {
                return {{"name", a.name}, {"kind", "sign_certificate"}, {"payload", json::certificate(c)}};
            },
            [&](const HypothesisReport& r) -> nlohmann::json {
                return {{"name", a.name}, {"kind", "hypothesis_report"}, {"payload", json::report(r)}};
            },
            [&](const ConnectivityReport& r) -> nlohmann::json {
                return {{"name", a.name}, {"kind", "connectivity"}, {"payload", json::connectivity(r)}};
            },
            [&](const BasinStats& s) -> nlohmann::json {
                return {{"name", a.name}, {"kind", "basin_stats"}, {"payload", json::basin_stats(s)}};
            },
        },
        a.payload);
}

Artifact to_artifact(const nlohmann::json& j)
{
    Artifact a;
    a.name = j.at("name").get<std::string>();
    const std::string kind = j.at("kind").get<std::string>();
    const nlohmann::json& p = j.at("payload");
    if (kind == "fixed_point")
        a.payload = json::to_record(p);
    else if (kind == "sign_certificate")
        a.payload = json::to_certificate(p);
    else if (kind == "hypothesis_report")
        a.payload = json::to_report(p);
    else if (kind == "connectivity")
        a.payload = json::to_connectivity(p);
    else if (kind == "basin_stats")
        a.payload = json::to_basin_stats(p);
    else
        throw SchemaError("unknown artifact kind '" + kind + "'");
    return a;
}

} // namespace

std::string serialize_bundle(const ExperimentBundle& b)
{
    nlohmann::json artifacts = nlohmann::json::array();
    for (const auto& a : b.artifacts)
        artifacts.push_back(artifact(a));
    const nlohmann::json doc = {{"schema_version", b.schema_version},
                                {"tool_version", b.tool_version},
                                {"created", b.created},
                                {"map", {{"source", b.map_source}, {"params", json::params(b.params)}}},
                                {"artifacts", artifacts}};
    return doc.dump(2) + "\n";
}

ExperimentBundle parse_bundle(const std::string& text)
{
    try {
        const nlohmann::json doc = nlohmann::json::parse(text);
        const int version = doc.at("schema_version").get<int>();
        if (version != kBundleSchemaVersion)
            throw SchemaError("bundle schema version " + std::to_string(version) + " is not supported (expected " +
                              std::to_string(kBundleSchemaVersion) + ")");
        ExperimentBundle b;
        b.schema_version = version;
        b.tool_version = doc.at("tool_version").get<std::string>();
        b.created = doc.at("created").get<std::string>();
        b.map_source = doc.at("map").at("source").get<std::string>();
        b.params = json::to_params(doc.at("map").at("params"));
        for (const auto& a : doc.at("artifacts"))
            b.artifacts.push_back(to_artifact(a));
        return b;
    } catch (const nlohmann::json::exception& e) {
        throw SchemaError(std::string("malformed bundle: ") + e.what());
    } catch (const SchemaError&) {
        throw;
    } catch (const Error& e) {
        throw SchemaError(std::string("malformed bundle: ") + e.what());
    }
}

void save_bundle(const ExperimentBundle& b, const std::string& path)
{
    const std::string text = serialize_bundle(b);
    std::ofstream os(path, std::ios::binary | std::ios::trunc);
    if (!os)
        throw Error("cannot open '" + path + "' for writing");
    os << text;
    if (!os)
        throw Error("write to '" + path + "' failed");
}

ExperimentBundle load_bundle(const std::string& path)
{
    std::ifstream is(path, std::ios::binary);
    if (!is)
        throw Error("cannot open '" + path + "' for reading");
    std::ostringstream ss;
    ss << is.rdbuf();
    return parse_bundle(ss.str());
}

} // namespace bovdyn
