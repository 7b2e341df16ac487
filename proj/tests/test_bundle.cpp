#include <bovdyn/bundle.hpp>
#include <bovdyn/errors.hpp>
#include <bovdyn/maps.hpp>

#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <sstream>

using namespace bovdyn;
namespace fs = std::filesystem;

namespace {

fs::path temp_path(const std::string& name)
{
    return fs::temp_directory_path() / ("bovdyn_test_" + std::to_string(::getpid()) + "_" + name);
}

std::string slurp(const fs::path& p)
{
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

ExperimentBundle sample_bundle()
{
    ExperimentBundle b;
    b.tool_version = tool_version();
    b.created = "2020-01-01T00:00:00Z";
    b.map_source = maps::kFLambda;
    b.params = {{"lambda", 0.04}};
    const MapExpr f = maps::f_lambda(0.04);
    b.artifacts.push_back({"x_lambda", real_fixed_points(f, Interval(0.0, 1.0)).at(0)});
    b.artifacts.push_back({"cascade", cascade_sign(maps::p(), Interval(-0.792, -0.72), 8)});
    b.artifacts.push_back({"bisect", certify_sign(maps::phi(), Interval(0.0, 0.99))});
    b.artifacts.push_back({"disk", check_disk_self_map(0.052)});
    b.artifacts.push_back({"recipe", check_bov_attracting_recipe(parse("z"), 0.0, 0.5, 0.05)});
    b.artifacts.push_back({"probe", connectivity_probe(parse("0.3"), {0, 0, 4, 4}, {8, 16})});
    b.artifacts.push_back({"image", summarize(render(maps::f3(), {-0.9, 0, 3, 3}, 16, 16))});
    return b;
}

} // namespace

TEST_CASE("empty bundle round-trips")
{
    ExperimentBundle b;
    const ExperimentBundle back = parse_bundle(serialize_bundle(b));
    CHECK(back == b);
}

TEST_CASE("x_lambda record round-trips bit for bit")
{
    ExperimentBundle b;
    const FixedPointRecord r = real_fixed_points(maps::f_lambda(0.04), Interval(0.0, 1.0)).at(0);
    b.artifacts.push_back({"x_lambda", r});
    const fs::path p = temp_path("xl.bundle.json");
    save_bundle(b, p.string());
    const ExperimentBundle back = load_bundle(p.string());
    fs::remove(p);
    REQUIRE(back.artifacts.size() == 1);
    const auto& got = std::get<FixedPointRecord>(back.artifacts[0].payload);
    CHECK(std::memcmp(&got.multiplier, &r.multiplier, sizeof r.multiplier) == 0);
    CHECK(std::memcmp(&got.location, &r.location, sizeof r.location) == 0);
    CHECK(got == r);
}

TEST_CASE("every artifact kind round-trips")
{
    const ExperimentBundle b = sample_bundle();
    const std::string text = serialize_bundle(b);
    const ExperimentBundle back = parse_bundle(text);
    CHECK(back == b);
    // canonical: serialising again gives the same bytes
    CHECK(serialize_bundle(back) == text);
    CHECK(text.back() == '\n');
}

TEST_CASE("keys are sorted and the layout is documented")
{
    const nlohmann::json j = nlohmann::json::parse(serialize_bundle(sample_bundle()));
    CHECK(j.at("schema_version") == kBundleSchemaVersion);
    CHECK(j.at("map").at("source") == maps::kFLambda);
    CHECK(j.at("map").at("params").at("lambda") == nlohmann::json::array({0.04, 0.0}));
    std::vector<std::string> kinds;
    for (const auto& a : j.at("artifacts"))
        kinds.push_back(a.at("kind").get<std::string>());
    CHECK(kinds == std::vector<std::string>{"fixed_point", "sign_certificate", "sign_certificate",
                                            "hypothesis_report", "hypothesis_report", "connectivity",
                                            "basin_stats"});
    std::string prev;
    for (const auto& [k, v] : j.items()) {
        CHECK(prev < k);
        prev = k;
    }
}

TEST_CASE("non-finite numbers survive")
{
    CHECK(json::number(INFINITY) == "inf");
    CHECK(json::number(-INFINITY) == "-inf");
    CHECK(json::number(NAN) == "nan");
    CHECK(std::isinf(json::to_number("inf")));
    CHECK(json::to_number("-inf") < 0);
    CHECK(std::isnan(json::to_number("nan")));
    CHECK(json::to_number(0.1) == 0.1);
    CHECK_THROWS_AS(json::to_number("zero"), SchemaError);
    // shortest round-trip decimal
    CHECK(json::number(0.1).dump() == "0.1");
}

TEST_CASE("expressions are stored as trees")
{
    const MapExpr e = maps::f_lambda(0.04);
    const nlohmann::json j = json::expr(e);
    const MapExpr back = json::to_expr(j);
    CHECK(back == e);
    CHECK(back.params() == e.params());
}

TEST_CASE("truncated file is a schema error")
{
    const std::string text = serialize_bundle(sample_bundle());
    const fs::path p = temp_path("trunc.bundle.json");
    {
        std::ofstream out(p, std::ios::binary);
        out << text.substr(0, text.size() / 2);
    }
    CHECK_THROWS_AS(load_bundle(p.string()), SchemaError);
    fs::remove(p);
    CHECK_THROWS_AS(parse_bundle("{}"), SchemaError);
    CHECK_THROWS_AS(parse_bundle("[1,2]"), SchemaError);
}

TEST_CASE("schema version mismatch is reported")
{
    nlohmann::json j = nlohmann::json::parse(serialize_bundle(ExperimentBundle{}));
    j["schema_version"] = kBundleSchemaVersion + 1;
    try {
        parse_bundle(j.dump());
        FAIL("expected SchemaError");
    } catch (const SchemaError& e) {
        CHECK(std::string(e.what()).find("version") != std::string::npos);
    }
}

TEST_CASE("unknown artifact kind is rejected")
{
    nlohmann::json j = nlohmann::json::parse(serialize_bundle(ExperimentBundle{}));
    j["artifacts"] = nlohmann::json::array({{{"name", "x"}, {"kind", "mystery"}, {"payload", 1}}});
    CHECK_THROWS_AS(parse_bundle(j.dump()), SchemaError);
}

TEST_CASE("missing file is an I/O error")
{
    CHECK_THROWS_AS(load_bundle("/nonexistent/dir/x.bundle.json"), Error);
    CHECK_THROWS_AS(save_bundle(ExperimentBundle{}, "/nonexistent/dir/x.bundle.json"), Error);
}

TEST_CASE("timestamp honours SOURCE_DATE_EPOCH")
{
    ::setenv("SOURCE_DATE_EPOCH", "86400", 1);
    CHECK(creation_timestamp() == "1970-01-02T00:00:00Z");
    ::unsetenv("SOURCE_DATE_EPOCH");
    CHECK(creation_timestamp().size() == 20);
}

TEST_CASE("stored artifacts regenerate identically")
{
    const ExperimentBundle b = parse_bundle(serialize_bundle(sample_bundle()));
    for (const Artifact& a : b.artifacts) {
        INFO(a.name);
        if (const auto* c = std::get_if<SignCertificate>(&a.payload))
            CHECK(replay(*c));
        if (const auto* r = std::get_if<HypothesisReport>(&a.payload))
            CHECK(replay(*r));
    }
}
