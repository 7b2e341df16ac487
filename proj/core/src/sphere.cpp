#include "bovdyn/sphere.hpp"

#include "bovdyn/errors.hpp"

#include <algorithm>
#include <cmath>

namespace bovdyn {

bool is_infinite(Complex z) noexcept
{
    return std::isinf(z.real()) || std::isinf(z.imag());
}

double chordal_distance(Complex a, Complex b) noexcept
{
    const bool ia = is_infinite(a);
    const bool ib = is_infinite(b);
    if (ia && ib)
        return 0.0;
    if (ia || ib) {
        const double r = std::abs(ia ? b : a);
        return std::min(2.0, 2.0 / std::hypot(1.0, r));
    }
    const double ra = std::abs(a);
    const double rb = std::abs(b);
    double d;
    if (ra > 1.0 && rb > 1.0) {
        // Work in the chart at ∞ to avoid overflow and cancellation.
        const Complex wa = 1.0 / a;
        const Complex wb = 1.0 / b;
        d = 2.0 * std::abs(wa - wb) / (std::hypot(1.0, 1.0 / ra) * std::hypot(1.0, 1.0 / rb));
    } else {
        d = 2.0 * std::abs(a - b) / (std::hypot(1.0, ra) * std::hypot(1.0, rb));
    }
    return std::min(2.0, d);
}

const char* to_string(OrbitResult::Fate f)
{
    switch (f) {
    case OrbitResult::Fate::ConvergedToCycle:
        return "converged";
    case OrbitResult::Fate::Escaped:
        return "escaped";
    case OrbitResult::Fate::PoleHit:
        return "pole";
    case OrbitResult::Fate::Undecided:
        break;
    }
    return "undecided";
}

OrbitResult iterate_orbit(const Evaluator& f, Complex seed, const OrbitConfig& cfg,
                          const Evaluator* derivative)
{
    if (cfg.max_iter < 1 || cfg.period_max < 1 || cfg.confirmations < 1 || !(cfg.conv_eps > 0.0) ||
        !(cfg.escape_eps > 0.0))
        throw Error("iterate_orbit: configuration values must be positive");
    if (cfg.track_derivative && !derivative)
        throw Error("iterate_orbit: derivative tracking needs a derivative evaluator");

    const int ring = cfg.period_max + 1;
    std::vector<Complex> history(static_cast<std::size_t>(ring));
    std::vector<int> agree(static_cast<std::size_t>(cfg.period_max + 1), 0);
    const double merge_eps = std::sqrt(cfg.conv_eps);
    auto past = [&](int n) -> Complex { return history[static_cast<std::size_t>(n % ring)]; };

    OrbitResult out;
    Complex z = seed;
    Complex dz{1.0, 0.0};

    for (int n = 0;; ++n) {
        if (static_cast<int>(out.prefix.size()) < cfg.record_prefix)
            out.prefix.push_back(z);

        if (is_infinite(z) || chordal_distance(z, kInfinity) < cfg.escape_eps) {
            out.fate = OrbitResult::Fate::Escaped;
            out.index = n;
            out.final_point = z;
            return out;
        }

        for (int p = 1; p <= cfg.period_max; ++p) {
            if (n >= p && chordal_distance(z, past(n - p)) < cfg.conv_eps)
                ++agree[static_cast<std::size_t>(p)];
            else
                agree[static_cast<std::size_t>(p)] = 0;
        }
        history[static_cast<std::size_t>(n % ring)] = z;

        for (int p = 1; p <= cfg.period_max; ++p) {
            if (agree[static_cast<std::size_t>(p)] < cfg.confirmations)
                continue;
            // A proper divisor still close to agreeing means the minimal
            // period is smaller; keep iterating until it confirms.
            bool smaller = false;
            for (int d = 1; d < p; ++d)
                if (p % d == 0 && chordal_distance(z, past(n - d)) < merge_eps)
                    smaller = true;
            if (smaller)
                break;
            out.fate = OrbitResult::Fate::ConvergedToCycle;
            out.period = p;
            for (int k = p - 1; k >= 0; --k)
                out.cycle.push_back(past(n - k));
            out.final_point = z;
            return out;
        }

        if (n + 1 >= cfg.max_iter)
            break;

        const EvalOutcome next = f(z);
        ++out.iterations_used;
        if (next.kind == EvalOutcome::Kind::PoleHit) {
            out.fate = OrbitResult::Fate::PoleHit;
            out.index = n;
            out.final_point = z;
            return out;
        }
        if (next.kind == EvalOutcome::Kind::Overflow) {
            out.fate = OrbitResult::Fate::Escaped;
            out.index = n + 1;
            out.final_point = kInfinity;
            return out;
        }
        if (cfg.track_derivative) {
            const EvalOutcome d = (*derivative)(z);
            dz = d.finite() ? dz * d.value : kInfinity;
            const double mag = std::abs(dz);
            const double est = std::isfinite(mag) ? std::hypot(1.0, std::abs(next.value)) / mag : 0.0;
            out.min_distance_estimate = std::min(out.min_distance_estimate, est);
        }
        z = next.value;
    }
    out.fate = OrbitResult::Fate::Undecided;
    out.final_point = z;
    return out;
}

OrbitResult iterate_orbit(const MapExpr& f, Complex seed, const OrbitConfig& cfg)
{
    const Evaluator ev(f);
    if (cfg.track_derivative) {
        const Evaluator d(differentiate(f));
        return iterate_orbit(ev, seed, cfg, &d);
    }
    return iterate_orbit(ev, seed, cfg);
}

} // namespace bovdyn
