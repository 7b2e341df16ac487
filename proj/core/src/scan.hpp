#pragma once

#include "bovdyn/render.hpp"

namespace bovdyn::detail {

struct ScanOutput {
    std::vector<int> codes;    ///< attractor index or a negative fate code
    std::vector<int> phases;   ///< converged pixels: orbit phase relative to the attractor
    std::vector<double> dist;  ///< linearised distance to preimages of ∞ (if tracked)
    std::vector<FixedPointRecord> attractors;
};

ScanOutput scan(const MapExpr& f, const Window& window, int nx, int ny,
                std::vector<FixedPointRecord> attractors, const RenderConfig& cfg);

} // namespace bovdyn::detail
