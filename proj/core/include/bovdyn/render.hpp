#pragma once

// Fate images over rectangular windows and the pixel connectivity probe.

#include "bovdyn/dynamics.hpp"

#include <map>
#include <string>
#include <vector>

namespace bovdyn {

inline constexpr int kEscaped = -1;
inline constexpr int kPole = -2;
inline constexpr int kUndecided = -3;

std::string fate_code_name(int code);

/// Center (cx, cy) and extent (w, h) in plane units.
struct Window {
    double cx = 0.0;
    double cy = 0.0;
    double w = 1.0;
    double h = 1.0;

    /// Seed for pixel column i, row j; row 0 is the top (largest imaginary part).
    Complex pixel_center(int i, int j, int nx, int ny) const noexcept
    {
        return {cx - 0.5 * w + (i + 0.5) * (w / nx), cy + 0.5 * h - (j + 0.5) * (h / ny)};
    }
    friend bool operator==(const Window&, const Window&) = default;
};

/// Parses "cx,cy,w,h".
Window parse_window(const std::string& text);
std::string to_string(const Window& w);

struct RenderConfig {
    OrbitConfig orbit{1000, 1e-9, 1e-6, 4, 8, 0, false};
    double match_eps = 1e-4;  ///< chordal distance for matching a cycle to an attractor
    double pole_eps = kDefaultPoleEps;
    std::size_t threads = 0;  ///< 0: worker_count()
};

inline constexpr int kMaxResolution = 8192;

struct BasinImage {
    Window window;
    int nx = 0;
    int ny = 0;
    std::vector<int> cells;  ///< row-major, row 0 at the top
    std::vector<FixedPointRecord> attractors;
    std::map<int, double> stats;  ///< code -> fraction of pixels

    int at(int i, int j) const { return cells[static_cast<std::size_t>(j) * nx + i]; }
};

/// Fraction of pixels per code, count / total.
std::map<int, double> compute_stats(const std::vector<int>& cells);

/// Per-pixel orbit classification. Converged cycles are matched to the given
/// attractors; unmatched cycles become new attractors in scan order.
BasinImage render(const MapExpr& f, const Window& window, int nx, int ny,
                  std::vector<FixedPointRecord> attractors = {}, const RenderConfig& cfg = {});

/// Palette used by write_ppm: RGB for a code.
struct Rgb {
    unsigned char r, g, b;
    friend bool operator==(const Rgb&, const Rgb&) = default;
};
Rgb palette_color(int code);

/// Binary P6 image, row 0 first. Throws Error on I/O failure.
void write_ppm(const BasinImage& img, const std::string& path);
std::string encode_ppm(const BasinImage& img);
/// CSV with header "code,fraction", codes ascending.
std::string stats_csv(const BasinImage& img);
void write_stats_csv(const BasinImage& img, const std::string& path);

/// FNV-1a 64-bit hash, printed as 16 hex digits.
std::string fnv1a_hex(const std::string& bytes);

// ---------------------------------------------------------------------------
// Connectivity probe (heuristic)

struct ConnectivityRung {
    int resolution = 0;
    double pixel_size = 0.0;
    long julia_pixels = 0;
    long components = 0;
    double largest_diameter = 0.0;

    friend bool operator==(const ConnectivityRung&, const ConnectivityRung&) = default;
};

struct ConnectivityReport {
    Window window;
    std::vector<ConnectivityRung> rungs;  ///< decreasing pixel size

    /// largest_diameter[k+1] / largest_diameter[k]; NaN when the denominator is 0.
    std::vector<double> diameter_ratios() const;

    friend bool operator==(const ConnectivityReport&, const ConnectivityReport&) = default;
};

struct ProbeConfig {
    RenderConfig render{{600, 1e-9, 1e-6, 4, 8, 0, true}, 1e-4, kDefaultPoleEps, 0};
    /// A pixel whose seed lies within this many pixels of a preimage of ∞
    /// (linearised estimate) is coded as escaping.
    double near_infinity_pixels = 1.0;
};

/// Pixel codes for the probe: cycles are split by phase so that the
/// immediate basins of a p-cycle are told apart.
struct ProbeImage {
    int n = 0;
    std::vector<int> codes;
    std::vector<FixedPointRecord> attractors;
};
ProbeImage probe_codes(const MapExpr& f, const Window& window, int n,
                       std::vector<FixedPointRecord> attractors, const ProbeConfig& cfg);

/// Julia pixels are those whose 4-neighbourhood holds at least two codes.
std::vector<char> julia_mask(const std::vector<int>& codes, int nx, int ny);

/// Rung statistics of a mask: 4-connected components and the largest
/// bounding-box extent (inclusive pixel count times pixel size).
ConnectivityRung measure_mask(const std::vector<char>& mask, int nx, int ny, double pixel_size);

/// Resolutions must number at least two and increase strictly.
ConnectivityReport connectivity_probe(const MapExpr& f, const Window& window,
                                      const std::vector<int>& resolutions,
                                      const ProbeConfig& cfg = {},
                                      std::vector<FixedPointRecord> attractors = {});

} // namespace bovdyn
