#pragma once

#include <functional>
#include <optional>

namespace hardy {

/// Log-spaced probe grid on a positive interval.
struct GridSpec {
    double lo = 1e-8;
    double hi = 1e8;
    int points = 4001;
};

struct ScanResult {
    double value = 0.0;   // extremum estimate; +/-inf on detected divergence
    double arg = 0.0;     // probe location realizing the estimate
    bool end_limit = false;       // extremum came from an end-limit extrapolation
    bool at_window_edge = false;  // best probe sits on the window boundary
    std::optional<double> singular_at;  // first probe where fn was NaN

    bool divergent() const;
};

/// Infimum estimate of fn over the grid: probe every point, refine the two
/// cells bracketing the best probe by golden-section search, and take
/// directional end limits by geometric-sequence extrapolation over the last
/// decade. Values below -1e12 with a decreasing trend are reported as -inf.
ScanResult scan_infimum(const std::function<double(double)>& fn, const GridSpec& grid);

/// Supremum counterpart; values above `divergence_threshold` with an
/// increasing trend are reported as +inf.
ScanResult scan_supremum(const std::function<double(double)>& fn, const GridSpec& grid,
                         double divergence_threshold = 1e12);

/// Golden-section search for a minimum of fn over [lo, hi] (direct argument
/// scale). Returns the argument; tol is relative to the bracket size.
double golden_minimize(const std::function<double(double)>& fn, double lo, double hi,
                       int iterations = 80);

}  // namespace hardy
