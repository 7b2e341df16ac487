#pragma once

// Scripted end-to-end pipelines for the worked examples.

#include "bovdyn/bundle.hpp"

#include <optional>
#include <string>
#include <vector>

namespace bovdyn {

enum class Example { Ex41Attracting, Ex41TwoCycle, Ex42, Ex43, Ex44Parabolic, Ex44Siegel };

const std::vector<std::string>& example_names();
std::string to_string(Example e);
/// Throws Error for unknown names.
Example example_from_string(const std::string& name);

struct ReproOptions {
    bool render = true;
    int render_resolution = 256;
    std::vector<int> probe_resolutions{128, 256, 512};
    int max_iter = 1000;  ///< orbit budget for renders
};

struct ReproCheck {
    std::string name;
    bool pass = false;
    std::string detail;
};

struct ReproResult {
    ExperimentBundle bundle;
    std::vector<ReproCheck> checks;
    std::optional<BasinImage> image;

    bool pass() const;
};

/// Runs the example's analysis, checks and optional render. Inner errors
/// propagate with the example name prefixed.
ReproResult repro(Example example, const ReproOptions& opts = {});

} // namespace bovdyn
