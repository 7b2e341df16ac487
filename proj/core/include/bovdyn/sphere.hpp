#pragma once

#include "bovdyn/evaluator.hpp"

#include <limits>
#include <vector>

namespace bovdyn {

/// The point at infinity. Any value with an infinite component is treated as ∞.
inline const Complex kInfinity{std::numeric_limits<double>::infinity(), 0.0};

bool is_infinite(Complex z) noexcept;

/// Chordal distance on the Riemann sphere, in [0, 2].
double chordal_distance(Complex a, Complex b) noexcept;

struct OrbitConfig {
    int max_iter = 10000;
    double conv_eps = 1e-9;    ///< chordal agreement for cycle detection
    double escape_eps = 1e-6;  ///< chordal distance to ∞ counted as escape
    int period_max = 4;
    int confirmations = 8;     ///< successive agreements required
    int record_prefix = 0;     ///< number of leading orbit points to keep
    bool track_derivative = false;
};

struct OrbitResult {
    enum class Fate { ConvergedToCycle, Escaped, PoleHit, Undecided };

    Fate fate = Fate::Undecided;
    int period = 0;              ///< ConvergedToCycle only
    std::vector<Complex> cycle;  ///< ConvergedToCycle only, in orbit order
    int index = 0;               ///< Escaped / PoleHit: orbit index of the event
    int iterations_used = 0;
    Complex final_point{};
    std::vector<Complex> prefix;
    /// With track_derivative: min over n of sqrt(1+|z_n|^2) / |(f^n)'(seed)|,
    /// a linearised distance from the seed to the preimages of ∞.
    double min_distance_estimate = std::numeric_limits<double>::infinity();

    friend bool operator==(const OrbitResult&, const OrbitResult&) = default;
};

const char* to_string(OrbitResult::Fate f);

/// Iterates f from seed. `derivative` is required when cfg.track_derivative.
OrbitResult iterate_orbit(const Evaluator& f, Complex seed, const OrbitConfig& cfg = {},
                          const Evaluator* derivative = nullptr);

OrbitResult iterate_orbit(const MapExpr& f, Complex seed, const OrbitConfig& cfg = {});

} // namespace bovdyn
