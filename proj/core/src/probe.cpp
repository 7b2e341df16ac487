#include "bovdyn/errors.hpp"
#include "bovdyn/render.hpp"
#include "scan.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace bovdyn {

namespace {
constexpr int kPhaseStride = 64;
}

ProbeImage probe_codes(const MapExpr& f, const Window& window, int n,
                       std::vector<FixedPointRecord> attractors, const ProbeConfig& cfg)
{
    if (cfg.render.orbit.period_max >= kPhaseStride)
        throw Error("probe: period_max must be below " + std::to_string(kPhaseStride));
    detail::ScanOutput s = detail::scan(f, window, n, n, std::move(attractors), cfg.render);
    const double pixel = std::max(window.w, window.h) / n;
    const double near = cfg.near_infinity_pixels * pixel;

    ProbeImage out;
    out.n = n;
    out.codes.resize(s.codes.size());
    for (std::size_t k = 0; k < s.codes.size(); ++k) {
        const int c = s.codes[k];
        if (c == kEscaped || c == kPole || s.dist[k] < near)
            out.codes[k] = kEscaped;
        else if (c == kUndecided)
            out.codes[k] = kUndecided;
        else
            out.codes[k] = c * kPhaseStride + s.phases[k];
    }
    out.attractors = std::move(s.attractors);
    return out;
}

std::vector<char> julia_mask(const std::vector<int>& codes, int nx, int ny)
{
    std::vector<char> mask(codes.size(), 0);
    auto at = [&](int i, int j) { return codes[static_cast<std::size_t>(j) * nx + i]; };
    for (int j = 0; j < ny; ++j) {
        for (int i = 0; i < nx; ++i) {
            const int c = at(i, j);
            const bool edge = (i > 0 && at(i - 1, j) != c) || (i + 1 < nx && at(i + 1, j) != c) ||
                              (j > 0 && at(i, j - 1) != c) || (j + 1 < ny && at(i, j + 1) != c);
            mask[static_cast<std::size_t>(j) * nx + i] = edge ? 1 : 0;
        }
    }
    return mask;
}

ConnectivityRung measure_mask(const std::vector<char>& mask, int nx, int ny, double pixel_size)
{
    ConnectivityRung r;
    r.resolution = std::max(nx, ny);
    r.pixel_size = pixel_size;
    std::vector<char> seen(mask.size(), 0);
    std::vector<std::size_t> stack;
    long widest = 0;
    for (std::size_t start = 0; start < mask.size(); ++start) {
        if (!mask[start])
            continue;
        ++r.julia_pixels;
        if (seen[start])
            continue;
        ++r.components;
        int imin = nx, imax = -1, jmin = ny, jmax = -1;
        stack.push_back(start);
        seen[start] = 1;
        while (!stack.empty()) {
            const std::size_t k = stack.back();
            stack.pop_back();
            const int i = static_cast<int>(k % static_cast<std::size_t>(nx));
            const int j = static_cast<int>(k / static_cast<std::size_t>(nx));
            imin = std::min(imin, i);
            imax = std::max(imax, i);
            jmin = std::min(jmin, j);
            jmax = std::max(jmax, j);
            auto visit = [&](int a, int b) {
                const std::size_t q = static_cast<std::size_t>(b) * nx + a;
                if (mask[q] && !seen[q]) {
                    seen[q] = 1;
                    stack.push_back(q);
                }
            };
            if (i > 0)
                visit(i - 1, j);
            if (i + 1 < nx)
                visit(i + 1, j);
            if (j > 0)
                visit(i, j - 1);
            if (j + 1 < ny)
                visit(i, j + 1);
        }
        widest = std::max<long>(widest, std::max(imax - imin + 1, jmax - jmin + 1));
    }
    r.largest_diameter = static_cast<double>(widest) * pixel_size;
    return r;
}

std::vector<double> ConnectivityReport::diameter_ratios() const
{
    std::vector<double> out;
    for (std::size_t k = 1; k < rungs.size(); ++k) {
        const double d = rungs[k - 1].largest_diameter;
        out.push_back(d > 0.0 ? rungs[k].largest_diameter / d : std::numeric_limits<double>::quiet_NaN());
    }
    return out;
}

ConnectivityReport connectivity_probe(const MapExpr& f, const Window& window,
                                      const std::vector<int>& resolutions, const ProbeConfig& cfg,
                                      std::vector<FixedPointRecord> attractors)
{
    if (resolutions.size() < 2)
        throw Error("connectivity_probe: at least two resolutions are required");
    for (std::size_t k = 0; k < resolutions.size(); ++k)
        if (resolutions[k] < 1 || (k > 0 && resolutions[k] <= resolutions[k - 1]))
            throw Error("connectivity_probe: resolutions must be positive and increasing");

    ConnectivityReport rep;
    rep.window = window;
    for (int n : resolutions) {
        // Attractors found at coarser rungs seed the next so codes stay comparable.
        ProbeImage img = probe_codes(f, window, n, attractors, cfg);
        attractors = img.attractors;
        const double pixel = std::max(window.w, window.h) / n;
        rep.rungs.push_back(measure_mask(julia_mask(img.codes, n, n), n, n, pixel));
    }
    return rep;
}

} // namespace bovdyn
