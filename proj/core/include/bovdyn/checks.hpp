#pragma once

// Machine checks of the verifiable hypotheses behind the worked examples.
// Sampled clauses are marked as such and never count as certified.

#include "bovdyn/dynamics.hpp"

#include <json.hpp>

#include <optional>
#include <string>
#include <vector>

namespace bovdyn {

enum class Verdict { Pass, Fail, Uncertified };
const char* to_string(Verdict v);
Verdict verdict_from_string(const std::string& s);

struct Clause {
    std::string description;
    Verdict verdict = Verdict::Uncertified;
    nlohmann::json evidence = nlohmann::json::object();
    std::optional<SignCertificate> certificate;
    bool sampled = false;

    friend bool operator==(const Clause&, const Clause&) = default;
};

struct HypothesisReport {
    std::string name;
    nlohmann::json inputs = nlohmann::json::object();  ///< arguments that regenerate the report
    std::vector<Clause> clauses;

    /// Pass iff every clause passes; Fail if any clause fails; else Uncertified.
    Verdict overall() const;

    friend bool operator==(const HypothesisReport&, const HypothesisReport&) = default;
};

// Sampling densities.
inline constexpr int kCircleSamples = 4096;
inline constexpr int kDiskGrid = 128;
inline constexpr int kIntervalSamples = 256;
inline constexpr double kQuotedTolerance = 0.02;

/// f = lambda/(z+exp(z)) maps {|z| <= 0.5} strictly into itself.
HypothesisReport check_disk_self_map(double lambda);

/// Critical values lambda/(-1 + i pi (2k+1)) lie in {|z| < radius}.
HypothesisReport check_critical_values_in_disk(double lambda, double radius, int k_max);

/// f2 = epsilon/g + b has an attracting fixed point in D_r(b).
HypothesisReport check_bov_attracting_recipe(const MapExpr& g, Complex b, double r, double epsilon);

/// Orbit chain of -0.99 under 0.1/(z^9+exp(z)) - 0.99 (or a given map).
HypothesisReport check_f3_basin_chain();
HypothesisReport check_f3_basin_chain(const MapExpr& f3);

/// Seeds in D_{r_in}(center) stay in D_{r_out}(center) for max_iter steps
/// without converging, for at least `required` of them.
HypothesisReport check_siegel_heuristic(const MapExpr& f, Complex center, double r_in, double r_out,
                                        int seeds, int max_iter, double required);

/// f^n(z) by direct iteration; nullopt on a pole or overflow.
std::optional<Complex> iterate_point(const Evaluator& f, Complex z, int n);

/// Reruns the generating check from report.inputs.
HypothesisReport rerun(const HypothesisReport& report);
/// True when rerun(report) equals report.
bool replay(const HypothesisReport& report);

} // namespace bovdyn
