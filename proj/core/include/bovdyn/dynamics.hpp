#pragma once

// Distinguished points of a map: real roots, fixed and periodic points with
// their multipliers, and critical points with their critical values.

#include "bovdyn/interval.hpp"
#include "bovdyn/sphere.hpp"

#include <optional>
#include <string>
#include <vector>

namespace bovdyn {

// ---------------------------------------------------------------------------
// Real roots

struct RootScanConfig {
    int cells = 1024;
    double abs_tol = 1e-13;
    double dedup_tol = 1e-10;
};

/// Roots of the real restriction of e on x, ascending. Sign changes found
/// on a uniform scan are refined by bisection; a sign change across a pole
/// is recognised by the values growing under refinement and is discarded.
/// Cells with an endpoint at a pole or overflow are skipped.
std::vector<double> find_real_roots(const MapExpr& e, const Interval& x, std::size_t max_roots = 64,
                                    const RootScanConfig& cfg = {});

// ---------------------------------------------------------------------------
// Multipliers and fixed points

struct MultiplierClass {
    enum class Kind { Superattracting, Attracting, Repelling, Parabolic, IrrationallyIndifferent };
    Kind kind = Kind::Attracting;
    int q = 0;  ///< Parabolic only: smallest q with multiplier^q = 1

    friend bool operator==(const MultiplierClass&, const MultiplierClass&) = default;
};

inline constexpr double kUnitCircleTol = 1e-6;
inline constexpr double kSuperattractingTol = 1e-12;
inline constexpr int kMaxRootOfUnityOrder = 64;

MultiplierClass classify_multiplier(Complex multiplier);
std::string to_string(const MultiplierClass& c);
MultiplierClass::Kind multiplier_kind_from_string(const std::string& s);

struct FixedPointRecord {
    Complex location{};
    int period = 1;
    Complex multiplier{};
    MultiplierClass cls;
    double residual = 0.0;       ///< |f^period(location) - location|
    std::string provenance;      ///< bracket or seed that produced the record

    friend bool operator==(const FixedPointRecord&, const FixedPointRecord&) = default;
};

/// Multiplier of the cycle through z: product of f' along period steps.
Complex cycle_multiplier(const Evaluator& f, const Evaluator& df, Complex z, int period);

/// Refines x0 by Newton on f^period(z) - z and classifies the cycle.
/// When `bracket` is given and Newton fails, bisection on the real line is
/// used instead. Throws NewtonDivergence carrying the best iterate.
FixedPointRecord analyze_fixed_point(const MapExpr& f, Complex x0, int period,
                                     std::optional<Interval> bracket = std::nullopt,
                                     std::string provenance = {});

/// Real fixed points of f on x (roots of f(x) - x), each analysed.
std::vector<FixedPointRecord> real_fixed_points(const MapExpr& f, const Interval& x);

inline constexpr double kFixedPointFilterTol = 1e-8;

/// Smallest genuine 2-periodic point on x: roots of f(f(x)) - x with fixed
/// points of f removed. Empty when there is none.
std::optional<FixedPointRecord> find_two_cycle(const MapExpr& f, const Interval& x);

// ---------------------------------------------------------------------------
// Critical points

struct Rect {
    double re_min = 0.0;
    double re_max = 0.0;
    double im_min = 0.0;
    double im_max = 0.0;

    bool contains(Complex z) const noexcept
    {
        return re_min <= z.real() && z.real() <= re_max && im_min <= z.imag() && z.imag() <= im_max;
    }
    friend bool operator==(const Rect&, const Rect&) = default;
};

struct CriticalSet {
    std::vector<Complex> points;
    std::vector<Complex> values;  ///< values[i] = f(points[i])
    std::string window;
    double max_residual = 0.0;    ///< max |f'(point)|

    friend bool operator==(const CriticalSet&, const CriticalSet&) = default;
};

/// Critical points i*pi*(2k+1) of lambda/(exp(z)+z) for k in [k_min, k_max],
/// values lambda/(-1 + i*pi*(2k+1)). Throws if a point fails |f'| < 1e-10.
CriticalSet critical_set_closed_form(Complex lambda, int k_min, int k_max);

/// Newton on f' from grid x grid seeds at cell centres of the window.
/// Roots are kept when Newton converges inside the window; merged within
/// 1e-8 after sorting by real then imaginary part.
CriticalSet find_critical_points_newton(const MapExpr& f, const Rect& window, int grid);

} // namespace bovdyn
