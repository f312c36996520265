#include "hardy/gridscan.hpp"

#include <cmath>
#include <limits>
#include <vector>

namespace hardy {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::vector<double> log_grid(const GridSpec& g) {
    std::vector<double> xs(static_cast<std::size_t>(g.points));
    double tlo = std::log(g.lo), thi = std::log(g.hi);
    for (int i = 0; i < g.points; ++i) {
        double t = tlo + (thi - tlo) * static_cast<double>(i) / static_cast<double>(g.points - 1);
        xs[static_cast<std::size_t>(i)] = std::exp(t);
    }
    xs.front() = g.lo;
    xs.back() = g.hi;
    return xs;
}

// Aitken delta-squared estimate of the limit of a geometric-like sequence.
// Returns nullopt when the differences do not contract.
std::optional<double> aitken_limit(const std::vector<double>& v) {
    if (v.size() < 3) return std::nullopt;
    double v1 = v[v.size() - 3], v2 = v[v.size() - 2], v3 = v[v.size() - 1];
    double d1 = v2 - v1, d2 = v3 - v2;
    double denom = d2 - d1;
    if (d1 == 0.0 && d2 == 0.0) return v3;
    if (denom == 0.0) return std::nullopt;
    double q = d2 / d1;
    if (!(std::fabs(q) < 0.999)) return std::nullopt;  // not contracting
    double est = v3 + d2 * q / (1.0 - q);
    if (!std::isfinite(est)) return std::nullopt;
    return est;
}

struct Scan {
    bool maximize;
    double div_threshold;

    double better(double a, double b) const { return maximize ? std::fmax(a, b) : std::fmin(a, b); }
    bool is_better(double a, double b) const { return maximize ? a > b : a < b; }

    ScanResult run(const std::function<double(double)>& fn, const GridSpec& grid) const {
        ScanResult res;
        res.value = maximize ? -kInf : kInf;

        auto xs = log_grid(grid);
        std::vector<double> vs(xs.size());
        std::size_t best = xs.size();
        for (std::size_t i = 0; i < xs.size(); ++i) {
            double v = fn(xs[i]);
            vs[i] = v;
            if (std::isnan(v)) {
                if (!res.singular_at) res.singular_at = xs[i];
                continue;
            }
            if (best == xs.size() || is_better(v, vs[best])) best = i;
        }
        if (best == xs.size()) {
            res.value = std::numeric_limits<double>::quiet_NaN();
            return res;
        }
        res.value = vs[best];
        res.arg = xs[best];
        // flag an edge extremum only when the boundary probe strictly beats
        // its interior neighbour (a constant profile is not edge-dominated)
        if (best == 0 || best + 1 == xs.size()) {
            std::size_t nb = best == 0 ? 1 : xs.size() - 2;
            double margin = 1e-12 * (1.0 + std::fabs(vs[best]));
            if (!std::isnan(vs[nb]) && is_better(vs[best], vs[nb]) &&
                std::fabs(vs[best] - vs[nb]) > margin)
                res.at_window_edge = true;
        }
        if (std::isinf(res.value)) return res;

        // golden-section refinement over the two cells around the best probe
        std::size_t ilo = best > 0 ? best - 1 : best;
        std::size_t ihi = best + 1 < xs.size() ? best + 1 : best;
        if (ilo < ihi) {
            double tlo = std::log(xs[ilo]), thi = std::log(xs[ihi]);
            auto g = [&](double t) {
                double v = fn(std::exp(t));
                if (std::isnan(v)) return maximize ? -kInf : kInf;  // keep search away
                return maximize ? -v : v;
            };
            double targ = golden_minimize(g, tlo, thi);
            double xarg = std::exp(targ);
            double v = fn(xarg);
            if (!std::isnan(v) && is_better(v, res.value)) {
                res.value = v;
                res.arg = xarg;
                res.at_window_edge = false;
            }
        }

        // directional end limits: 8 probes spanning the last decade at each
        // end, ordered toward the boundary, extrapolated geometrically
        double decades = (std::log(grid.hi) - std::log(grid.lo)) / std::log(10.0);
        std::size_t per_decade =
            static_cast<std::size_t>(std::fmax(7.0, static_cast<double>(grid.points - 1) / std::fmax(decades, 1.0)));
        std::size_t stride = std::max<std::size_t>(1, per_decade / 7);
        for (int side = 0; side < 2; ++side) {
            std::vector<double> tail;
            for (std::size_t k = 8; k-- > 0;) {
                std::size_t off = k * stride;
                if (off >= xs.size()) continue;
                std::size_t idx = side == 0 ? off : xs.size() - 1 - off;
                if (!std::isnan(vs[idx])) tail.push_back(vs[idx]);
            }
            if (tail.size() < 3) continue;
            // divergence trend
            bool monotone = true;
            for (std::size_t k = 1; k < tail.size(); ++k)
                if (maximize ? tail[k] < tail[k - 1] : tail[k] > tail[k - 1]) monotone = false;
            double last = tail.back();
            if (monotone && (maximize ? last > div_threshold : last < -div_threshold)) {
                res.value = maximize ? kInf : -kInf;
                res.arg = side == 0 ? grid.lo : grid.hi;
                res.end_limit = true;
                return res;
            }
            if (auto lim = aitken_limit(tail)) {
                if (is_better(*lim, res.value)) {
                    res.value = *lim;
                    res.arg = side == 0 ? grid.lo : grid.hi;
                    res.end_limit = true;
                }
            }
        }
        return res;
    }
};

}  // namespace

bool ScanResult::divergent() const { return std::isinf(value); }

ScanResult scan_infimum(const std::function<double(double)>& fn, const GridSpec& grid) {
    return Scan{false, 1e12}.run(fn, grid);
}

ScanResult scan_supremum(const std::function<double(double)>& fn, const GridSpec& grid,
                         double divergence_threshold) {
    return Scan{true, divergence_threshold}.run(fn, grid);
}

double golden_minimize(const std::function<double(double)>& fn, double lo, double hi, int iterations) {
    const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
    double a = lo, b = hi;
    double c = b - invphi * (b - a);
    double d = a + invphi * (b - a);
    double fc = fn(c), fd = fn(d);
    for (int i = 0; i < iterations && (b - a) > 1e-14 * (std::fabs(a) + std::fabs(b) + 1e-300); ++i) {
        if (fc < fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - invphi * (b - a);
            fc = fn(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + invphi * (b - a);
            fd = fn(d);
        }
    }
    return fc < fd ? c : d;
}

}  // namespace hardy
