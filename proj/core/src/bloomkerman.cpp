#include "hardy/bloomkerman.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace hardy {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

std::string to_string(BKStatus s) {
    switch (s) {
        case BKStatus::satisfied: return "satisfied";
        case BKStatus::violated_G_infinite: return "violated_G_infinite";
        case BKStatus::violated_no_B: return "violated_no_B";
        case BKStatus::undetermined: return "undetermined";
    }
    return "?";
}

std::vector<double> default_bk_grid() {
    std::vector<double> g;
    for (int i = 0; i < 7; ++i) g.push_back(std::pow(10.0, -2.0 + 4.0 * i / 6.0));
    return g;
}

ModularResult G_of(const WeightTriple& t, double eps, double y, const QuadOptions& opts) {
    if (!(eps > 0.0) || !(y > 0.0)) throw std::invalid_argument("G_of: eps and y must be positive");
    RealFn g = [&t, eps](double x) { return eps * t.omega(x); };
    RealFn phi = [&t](double x) { return t.phi(x); };
    return weighted_modular(g, t.M(), phi, y, kInf, opts);
}

namespace {

// integral over (0, y) of M*( G e^{phi(x)} / (B eps) ) e^{-phi(x)} dx
ModularResult bk_lhs(const WeightTriple& t, double G, double B, double eps, double y,
                     const QuadOptions& opts) {
    RealFn integrand = [&](double x) {
        double pv = t.phi(x);
        if (std::isnan(pv)) throw IntegrandError("weight exponent", x);
        double arg = G / (B * eps) * std::exp(pv);
        double mv = t.M().conjugate(arg);
        if (std::isnan(mv)) throw IntegrandError("conjugate function", x);
        if (mv == 0.0) return 0.0;
        double out = mv * std::exp(-pv);
        if (std::isnan(out)) throw IntegrandError("Bloom-Kerman integrand", x);
        return out;
    };
    return integrate_improper(integrand, 0.0, y, opts);
}

}  // namespace

BKVerdict bk_check(const WeightTriple& t, const BKOptions& bk, const QuadOptions& opts) {
    BKVerdict out;
    const std::vector<double>& eps_grid = bk.eps_grid;
    const std::vector<double>& y_grid = bk.y_grid;
    if (eps_grid.empty() || y_grid.empty())
        throw std::invalid_argument("bk_check: empty (eps, y) grid");

    struct Point {
        double eps, y, G;
    };
    std::vector<Point> pts;
    for (double eps : eps_grid) {
        for (double y : y_grid) {
            ModularResult G;
            try {
                G = G_of(t, eps, y, opts);
            } catch (const IntegrandError& e) {
                out.status = BKStatus::undetermined;
                out.note = std::string("G quadrature failed: ") + e.what();
                return out;
            }
            if (G.divergent()) {
                out.status = BKStatus::violated_G_infinite;
                out.witness = std::make_pair(eps, y);
                out.note = "G(eps, y) diverges";
                return out;
            }
            if (G.status == QuadStatus::tolerance_not_met) {
                out.status = BKStatus::undetermined;
                out.note = "G quadrature tolerance not met";
                return out;
            }
            pts.push_back({eps, y, G.value});
        }
    }

    // the left side decreases in B, so a doubling sweep is monotone
    for (double B = bk.B_lo; B <= bk.B_hi; B *= 2.0) {
        bool all_ok = true;
        for (const Point& p : pts) {
            if (p.G <= 0.0) continue;  // empty tail: condition trivial there
            ModularResult lhs;
            try {
                lhs = bk_lhs(t, p.G, B, p.eps, p.y, opts);
            } catch (const IntegrandError& e) {
                out.status = BKStatus::undetermined;
                out.note = std::string("left-side quadrature failed: ") + e.what();
                return out;
            }
            if (lhs.status == QuadStatus::tolerance_not_met) {
                out.status = BKStatus::undetermined;
                out.note = "left-side quadrature tolerance not met";
                return out;
            }
            if (lhs.divergent() || lhs.value > p.G * (1.0 + 1e-9)) {
                all_ok = false;
                break;
            }
        }
        if (all_ok) {
            out.status = BKStatus::satisfied;
            out.B_found = B;
            out.note = "grid-level screen passed (single global B)";
            return out;
        }
    }
    out.status = BKStatus::violated_no_B;
    out.note = "no admissible B up to the search cap (grid-level finding)";
    return out;
}

double muckenhoupt_b(double p, const WeightTriple& t, const QuadOptions& opts) {
    if (!(p > 1.0)) throw std::invalid_argument("muckenhoupt_b: requires p > 1");
    const GridSpec& w = t.window();
    const int n = w.points;
    std::vector<double> xs(static_cast<std::size_t>(n));
    double tlo = std::log(w.lo), thi = std::log(w.hi);
    for (int i = 0; i < n; ++i) xs[static_cast<std::size_t>(i)] = std::exp(tlo + (thi - tlo) * i / (n - 1));

    RealFn tail_fn = [&t, p](double x) {
        double wv = t.omega(x);
        if (std::isnan(wv)) throw IntegrandError("omega", x);
        if (wv == 0.0) return 0.0;
        double out = std::exp(p * std::log(wv) - t.phi(x));
        return out;
    };
    RealFn head_fn = [&t, p](double x) {
        double pv = t.phi(x);
        if (std::isnan(pv)) throw IntegrandError("weight exponent", x);
        return std::exp(pv / (p - 1.0));
    };

    // Cumulative panel sums: one pass gives every integral_r^inf and
    // integral_0^r on the probe grid. The sweep is truncated where a factor
    // leaves the double range (the product can stay finite while one factor
    // overflows); the truncation edge is then resolved by its trend.
    ModularResult head_zero = integrate_improper(head_fn, 0.0, xs.front(), opts);
    if (head_zero.divergent()) return kInf;
    if (head_zero.status == QuadStatus::tolerance_not_met) return std::nan("");

    std::size_t usable = static_cast<std::size_t>(n - 1);
    std::vector<double> panel_tail(static_cast<std::size_t>(n - 1)),
        panel_head(static_cast<std::size_t>(n - 1));
    for (std::size_t i = 0; i + 1 < static_cast<std::size_t>(n); ++i) {
        ModularResult pt = integrate_improper(tail_fn, xs[i], xs[i + 1], opts);
        if (pt.divergent()) return kInf;  // the tail factor overflows: B = inf
        ModularResult ph = integrate_improper(head_fn, xs[i], xs[i + 1], opts);
        if (ph.divergent() || !std::isfinite(pt.value + ph.value)) {
            usable = i;
            break;
        }
        panel_tail[i] = pt.value;
        panel_head[i] = ph.value;
    }
    ModularResult tail_rest = integrate_improper(tail_fn, xs[usable], kInf, opts);
    if (tail_rest.divergent()) return kInf;
    if (tail_rest.status == QuadStatus::tolerance_not_met) return std::nan("");

    std::vector<double> tails(usable + 1);
    tails[usable] = tail_rest.value;
    for (std::size_t i = usable; i-- > 0;) tails[i] = tails[i + 1] + panel_tail[i];

    double sup = 0.0;
    double head = head_zero.value;
    std::vector<double> vals(usable + 1);
    for (std::size_t i = 0; i <= usable; ++i) {
        if (i > 0) head += panel_head[i - 1];
        double v = tails[i] * std::pow(head, p - 1.0);
        if (std::isinf(v)) return kInf;
        vals[i] = v;
        sup = std::fmax(sup, v);
    }

    // trend at the edges: sustained growth into a window edge or the
    // truncation point is a divergence; contracting growth is extrapolated
    auto edge_limit = [&](bool at_hi) -> double {
        if (vals.size() < 5) return 0.0;
        double v[5];
        for (int k = 0; k < 5; ++k)
            v[k] = at_hi ? vals[vals.size() - 5 + k] : vals[static_cast<std::size_t>(4 - k)];
        double d1 = v[2] - v[1], d2 = v[3] - v[2], d3 = v[4] - v[3];
        bool rising = d1 > 0.0 && d2 > 0.0 && d3 > 0.0;
        if (!rising) return 0.0;
        if (d3 >= 1.3 * d2 && d2 >= 1.3 * d1) return kInf;  // accelerating growth
        if (v[4] > 1e12) return kInf;                       // already past the cap and rising
        if (d3 <= 0.9 * d2 && d2 <= 0.9 * d1) {
            double q = d3 / d2;
            return v[4] + d3 * q / (1.0 - q);  // geometric extrapolation
        }
        return 0.0;
    };
    for (bool at_hi : {true, false}) {
        double lim = edge_limit(at_hi);
        if (std::isinf(lim)) return kInf;
        sup = std::fmax(sup, lim);
    }
    return sup;
}

}  // namespace hardy
