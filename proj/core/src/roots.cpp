#include "bovdyn/dynamics.hpp"
#include "bovdyn/errors.hpp"

#include <algorithm>
#include <cmath>
#include <optional>

namespace bovdyn {

std::vector<double> find_real_roots(const MapExpr& e, const Interval& x, std::size_t max_roots,
                                    const RootScanConfig& cfg)
{
    if (cfg.cells < 1)
        throw Error("find_real_roots: cells must be positive");
    const Evaluator ev(e);
    auto g = [&](double t) -> std::optional<double> {
        const EvalOutcome r = ev(Complex(t, 0.0));
        if (!r.finite())
            return std::nullopt;
        return r.value.real();
    };

    const int n = cfg.cells;
    std::vector<double> ts(static_cast<std::size_t>(n) + 1);
    std::vector<std::optional<double>> vs(ts.size());
    for (int i = 0; i <= n; ++i) {
        const double t = i == n ? x.hi() : x.lo() + x.width() * (static_cast<double>(i) / n);
        ts[static_cast<std::size_t>(i)] = t;
        vs[static_cast<std::size_t>(i)] = g(t);
    }

    std::vector<double> roots;
    for (std::size_t i = 0; i < ts.size(); ++i) {
        if (vs[i] && *vs[i] == 0.0)
            roots.push_back(ts[i]);
        if (i + 1 == ts.size() || !vs[i] || !vs[i + 1])
            continue;
        const double fa0 = *vs[i];
        const double fb0 = *vs[i + 1];
        if (!((fa0 < 0.0 && fb0 > 0.0) || (fa0 > 0.0 && fb0 < 0.0)))
            continue;

        double a = ts[i], b = ts[i + 1], fa = fa0, fb = fb0;
        bool lost = false;
        while (b - a > cfg.abs_tol) {
            const double m = a + 0.5 * (b - a);
            if (m <= a || m >= b)
                break;
            const auto fm = g(m);
            if (!fm) {
                lost = true;
                break;
            }
            if (*fm == 0.0) {
                a = b = m;
                fa = fb = 0.0;
                break;
            }
            if ((*fm < 0.0) == (fa < 0.0)) {
                a = m;
                fa = *fm;
            } else {
                b = m;
                fb = *fm;
            }
        }
        if (lost)
            continue;
        // A genuine root shrinks |g| under refinement; a pole inflates it.
        if (std::min(std::abs(fa), std::abs(fb)) > std::min(std::abs(fa0), std::abs(fb0)))
            continue;
        roots.push_back(a + 0.5 * (b - a));
    }

    std::sort(roots.begin(), roots.end());
    std::vector<double> out;
    for (double r : roots) {
        if (!out.empty() && r - out.back() <= cfg.dedup_tol)
            continue;
        out.push_back(r);
        if (out.size() >= max_roots)
            break;
    }
    return out;
}

} // namespace bovdyn
