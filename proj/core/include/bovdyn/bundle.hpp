#pragma once

// Experiment bundles: canonical JSON persistence of analysis artifacts.

#include "bovdyn/checks.hpp"
#include "bovdyn/render.hpp"

#include <json.hpp>

#include <string>
#include <variant>
#include <vector>

namespace bovdyn {

inline constexpr int kBundleSchemaVersion = 1;

/// Summary of a BasinImage kept in bundles (cells are not stored).
struct BasinStats {
    Window window;
    int nx = 0;
    int ny = 0;
    std::map<int, double> stats;
    std::vector<FixedPointRecord> attractors;
    std::string ppm_fnv1a;  ///< hash of encode_ppm(image)

    friend bool operator==(const BasinStats&, const BasinStats&) = default;
};

BasinStats summarize(const BasinImage& img);

using ArtifactPayload =
    std::variant<FixedPointRecord, SignCertificate, HypothesisReport, ConnectivityReport, BasinStats>;

struct Artifact {
    std::string name;
    ArtifactPayload payload;

    friend bool operator==(const Artifact&, const Artifact&) = default;
};

struct ExperimentBundle {
    int schema_version = kBundleSchemaVersion;
    std::string tool_version;
    std::string created;  ///< UTC, ISO 8601
    std::string map_source;
    std::map<std::string, Complex> params;
    std::vector<Artifact> artifacts;

    friend bool operator==(const ExperimentBundle&, const ExperimentBundle&) = default;
};

/// Library version string.
const char* tool_version();

/// SOURCE_DATE_EPOCH when set to an integer, otherwise the current time.
std::string creation_timestamp();

std::string serialize_bundle(const ExperimentBundle& b);
ExperimentBundle parse_bundle(const std::string& text);

/// Throws Error on I/O failure.
void save_bundle(const ExperimentBundle& b, const std::string& path);
/// Throws Error on I/O failure, SchemaError on malformed content or version mismatch.
ExperimentBundle load_bundle(const std::string& path);

// JSON converters. Doubles that are not finite are written as the strings
// "inf", "-inf" and "nan"; complex numbers as [re, im].
namespace json {

nlohmann::json number(double x);
double to_number(const nlohmann::json& j);
nlohmann::json complex(Complex z);
Complex to_complex(const nlohmann::json& j);

nlohmann::json expr(const MapExpr& e);
MapExpr to_expr(const nlohmann::json& j);

nlohmann::json params(const std::map<std::string, Complex>& p);
std::map<std::string, Complex> to_params(const nlohmann::json& j);

nlohmann::json interval(const Interval& x);
Interval to_interval(const nlohmann::json& j);

nlohmann::json certificate(const SignCertificate& c);
SignCertificate to_certificate(const nlohmann::json& j);

nlohmann::json record(const FixedPointRecord& r);
FixedPointRecord to_record(const nlohmann::json& j);

nlohmann::json report(const HypothesisReport& r);
HypothesisReport to_report(const nlohmann::json& j);

nlohmann::json connectivity(const ConnectivityReport& r);
ConnectivityReport to_connectivity(const nlohmann::json& j);

nlohmann::json basin_stats(const BasinStats& s);
BasinStats to_basin_stats(const nlohmann::json& j);

nlohmann::json window(const Window& w);
Window to_window(const nlohmann::json& j);

} // namespace json

} // namespace bovdyn
