#include "bovdyn/render.hpp"

#include "bovdyn/errors.hpp"
#include "bovdyn/parallel.hpp"
#include "scan.hpp"

#include <cmath>
#include <limits>
#include <sstream>

namespace bovdyn {

std::string fate_code_name(int code)
{
    switch (code) {
    case kEscaped:
        return "escaped";
    case kPole:
        return "pole";
    case kUndecided:
        return "undecided";
    default:
        return "attractor " + std::to_string(code);
    }
}

Window parse_window(const std::string& text)
{
    std::vector<double> v;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        std::size_t used = 0;
        double x = 0.0;
        try {
            x = std::stod(item, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (used == 0 || used != item.size() || !std::isfinite(x))
            throw Error("window: bad number '" + item + "'");
        v.push_back(x);
    }
    if (v.size() != 4)
        throw Error("window: expected cx,cy,w,h");
    if (!(v[2] > 0.0) || !(v[3] > 0.0))
        throw Error("window: width and height must be positive");
    return {v[0], v[1], v[2], v[3]};
}

std::string to_string(const Window& w)
{
    std::ostringstream os;
    os.precision(17);
    os << w.cx << "," << w.cy << "," << w.w << "," << w.h;
    return os.str();
}

std::map<int, double> compute_stats(const std::vector<int>& cells)
{
    std::map<int, long> counts;
    for (int c : cells)
        ++counts[c];
    std::map<int, double> out;
    const double total = static_cast<double>(cells.size());
    for (auto [code, n] : counts)
        out[code] = static_cast<double>(n) / total;
    return out;
}

namespace detail {
namespace {

constexpr int kPending = std::numeric_limits<int>::min();

struct Match {
    int index = -1;
    int anchor = 0;  ///< cycle position closest to the attractor's location
};

Match match_cycle(const std::vector<Complex>& cycle, const std::vector<FixedPointRecord>& attractors,
                  double eps)
{
    Match best;
    double best_d = eps;
    for (std::size_t a = 0; a < attractors.size(); ++a) {
        if (attractors[a].period != static_cast<int>(cycle.size()))
            continue;
        for (std::size_t j = 0; j < cycle.size(); ++j) {
            const double d = chordal_distance(cycle[j], attractors[a].location);
            if (d < best_d) {
                best_d = d;
                best = {static_cast<int>(a), static_cast<int>(j)};
            }
        }
    }
    return best;
}

FixedPointRecord new_attractor(const MapExpr& f, const Evaluator& ev, const Evaluator& dev,
                               const std::vector<Complex>& cycle, int i, int j, double eps)
{
    std::size_t lead = 0;
    for (std::size_t k = 1; k < cycle.size(); ++k) {
        const Complex a = cycle[k], b = cycle[lead];
        if (a.real() < b.real() || (a.real() == b.real() && a.imag() < b.imag()))
            lead = k;
    }
    const int period = static_cast<int>(cycle.size());
    std::ostringstream prov;
    prov << "orbit of pixel (" << i << "," << j << ")";
    try {
        FixedPointRecord rec = analyze_fixed_point(f, cycle[lead], period, std::nullopt, prov.str());
        if (chordal_distance(rec.location, cycle[lead]) < eps)
            return rec;
    } catch (const Error&) {
    }
    FixedPointRecord rec;
    rec.location = cycle[lead];
    rec.period = period;
    rec.multiplier = cycle_multiplier(ev, dev, rec.location, period);
    rec.cls = classify_multiplier(rec.multiplier);
    Complex w = rec.location;
    for (int k = 0; k < period; ++k)
        w = ev(w).value;
    rec.residual = std::abs(w - rec.location);
    rec.provenance = prov.str();
    return rec;
}

int phase_of(int final_index, int period, int anchor)
{
    // cycle[k] sits at orbit index final_index - period + 1 + k
    const int m = final_index - period + 1 + anchor;
    return ((m % period) + period) % period;
}

} // namespace

ScanOutput scan(const MapExpr& f, const Window& window, int nx, int ny,
                std::vector<FixedPointRecord> attractors, const RenderConfig& cfg)
{
    if (nx < 0 || ny < 0 || nx > kMaxResolution || ny > kMaxResolution)
        throw Error("render: resolution must lie in [0, " + std::to_string(kMaxResolution) + "]");
    if (!(window.w > 0.0) || !(window.h > 0.0))
        throw Error("render: window extent must be positive");

    const Evaluator ev(f, cfg.pole_eps);
    const Evaluator dev(differentiate(f), cfg.pole_eps);
    const std::size_t total = static_cast<std::size_t>(nx) * static_cast<std::size_t>(ny);

    ScanOutput out;
    out.codes.assign(total, kUndecided);
    out.phases.assign(total, 0);
    out.dist.assign(total, std::numeric_limits<double>::infinity());
    std::vector<std::vector<Complex>> pending(total);
    std::vector<int> final_index(total, 0);

    const std::vector<FixedPointRecord>& given = attractors;
    parallel_for(
        total,
        [&](std::size_t begin, std::size_t end) {
            for (std::size_t k = begin; k < end; ++k) {
                const int i = static_cast<int>(k % static_cast<std::size_t>(nx));
                const int j = static_cast<int>(k / static_cast<std::size_t>(nx));
                const OrbitResult r = iterate_orbit(ev, window.pixel_center(i, j, nx, ny), cfg.orbit,
                                                    cfg.orbit.track_derivative ? &dev : nullptr);
                out.dist[k] = r.min_distance_estimate;
                switch (r.fate) {
                case OrbitResult::Fate::Escaped:
                    out.codes[k] = kEscaped;
                    break;
                case OrbitResult::Fate::PoleHit:
                    out.codes[k] = kPole;
                    break;
                case OrbitResult::Fate::Undecided:
                    out.codes[k] = kUndecided;
                    break;
                case OrbitResult::Fate::ConvergedToCycle: {
                    final_index[k] = r.iterations_used;
                    const Match m = match_cycle(r.cycle, given, cfg.match_eps);
                    if (m.index >= 0) {
                        out.codes[k] = m.index;
                        out.phases[k] = phase_of(r.iterations_used, r.period, m.anchor);
                    } else {
                        out.codes[k] = kPending;
                        pending[k] = r.cycle;
                    }
                    break;
                }
                }
            }
        },
        cfg.threads);

    // Unmatched cycles, in scan order, so attractor numbering is deterministic.
    for (std::size_t k = 0; k < total; ++k) {
        if (out.codes[k] != kPending)
            continue;
        Match m = match_cycle(pending[k], attractors, cfg.match_eps);
        if (m.index < 0) {
            const int i = static_cast<int>(k % static_cast<std::size_t>(nx));
            const int j = static_cast<int>(k / static_cast<std::size_t>(nx));
            attractors.push_back(new_attractor(f, ev, dev, pending[k], i, j, cfg.match_eps));
            m = match_cycle(pending[k], attractors, cfg.match_eps);
            if (m.index < 0) {
                // The polished location drifted; anchor on the raw cycle instead.
                m.index = static_cast<int>(attractors.size()) - 1;
                m.anchor = 0;
            }
        }
        out.codes[k] = m.index;
        out.phases[k] = phase_of(final_index[k], static_cast<int>(pending[k].size()), m.anchor);
    }
    out.attractors = std::move(attractors);
    return out;
}

} // namespace detail

BasinImage render(const MapExpr& f, const Window& window, int nx, int ny,
                  std::vector<FixedPointRecord> attractors, const RenderConfig& cfg)
{
    detail::ScanOutput s = detail::scan(f, window, nx, ny, std::move(attractors), cfg);
    BasinImage img;
    img.window = window;
    img.nx = nx;
    img.ny = ny;
    img.cells = std::move(s.codes);
    img.attractors = std::move(s.attractors);
    img.stats = compute_stats(img.cells);
    return img;
}

} // namespace bovdyn
