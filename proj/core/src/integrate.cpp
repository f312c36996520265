#include "hardy/integrate.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <vector>

namespace hardy {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// 15-point Kronrod / 7-point Gauss pair (QUADPACK dqk15 abscissae/weights).
constexpr double kXgk[8] = {
    0.991455371120813, 0.949107912342759, 0.864864423359769, 0.741531185599394,
    0.586087235467691, 0.405845151377397, 0.207784955007898, 0.000000000000000,
};
constexpr double kWgk[8] = {
    0.022935322010529, 0.063092092629979, 0.104790010322250, 0.140653259715525,
    0.169004726639267, 0.190350578064785, 0.204432940075298, 0.209482141084728,
};
constexpr double kWg[4] = {
    0.129484966168870, 0.279705391489277, 0.381830050505119, 0.417959183673469,
};

struct PanelEval {
    double value = 0.0;
    double err = 0.0;
    bool infinite = false;
};

// One Gauss-Kronrod 7-15 panel over [a, b] in the transformed variable.
PanelEval gk15(const std::function<double(double)>& f, double a, double b, long& evals) {
    const double centr = 0.5 * (a + b);
    const double hlgth = 0.5 * (b - a);
    double fv1[7], fv2[7];
    const double fc = f(centr);
    evals += 15;

    double resg = fc * kWg[3];
    double resk = fc * kWgk[7];
    double resabs = std::fabs(resk);
    bool inf_seen = std::isinf(fc);
    for (int j = 0; j < 7; ++j) {
        const double absc = hlgth * kXgk[j];
        fv1[j] = f(centr - absc);
        fv2[j] = f(centr + absc);
        if (std::isinf(fv1[j]) || std::isinf(fv2[j])) inf_seen = true;
        const double fsum = fv1[j] + fv2[j];
        resk += kWgk[j] * fsum;
        resabs += kWgk[j] * (std::fabs(fv1[j]) + std::fabs(fv2[j]));
        if (j % 2 == 1) resg += kWg[j / 2] * fsum;
    }
    const double reskh = resk * 0.5;
    double resasc = kWgk[7] * std::fabs(fc - reskh);
    for (int j = 0; j < 7; ++j)
        resasc += kWgk[j] * (std::fabs(fv1[j] - reskh) + std::fabs(fv2[j] - reskh));

    PanelEval out;
    out.value = resk * hlgth;
    out.infinite = inf_seen || std::isinf(out.value);
    resabs *= std::fabs(hlgth);
    resasc *= std::fabs(hlgth);
    double abserr = std::fabs((resk - resg) * hlgth);
    if (resasc != 0.0 && abserr != 0.0)
        abserr = resasc * std::fmin(1.0, std::pow(200.0 * abserr / resasc, 1.5));
    const double eps50 = 50.0 * std::numeric_limits<double>::epsilon();
    if (resabs > std::numeric_limits<double>::min() / eps50)
        abserr = std::fmax(eps50 * resabs, abserr);
    out.err = abserr;
    return out;
}

struct Segment {
    double a, b, value, err;
};

struct SegWorse {
    bool operator()(const Segment& x, const Segment& y) const {
        if (x.err != y.err) return x.err < y.err;
        return x.a > y.a;  // deterministic tie-break: leftmost first
    }
};

struct ChunkResult {
    double value = 0.0;
    double err = 0.0;
    bool infinite = false;
    double inf_at = 0.0;  // t-position of the overflowing panel
    bool budget_hit = false;
};

// Globally adaptive rule over a finite window [a, b] of the transformed axis.
ChunkResult adapt_window(const std::function<double(double)>& f, double a, double b,
                         double rel_tol, long budget, long& evals) {
    ChunkResult out;
    if (!(b > a)) return out;
    std::priority_queue<Segment, std::vector<Segment>, SegWorse> heap;
    std::vector<Segment> done;
    const int seed = 8;
    double total = 0.0, toterr = 0.0;
    for (int i = 0; i < seed; ++i) {
        double sa = a + (b - a) * i / seed;
        double sb = a + (b - a) * (i + 1) / seed;
        PanelEval p = gk15(f, sa, sb, evals);
        if (p.infinite) {
            out.infinite = true;
            out.inf_at = 0.5 * (sa + sb);
            return out;
        }
        heap.push({sa, sb, p.value, p.err});
        total += p.value;
        toterr += p.err;
    }
    const double span = b - a;
    // segment cap: a noise-floored integrand (e.g. catastrophic cancellation
    // in the test function) otherwise splits forever without progress
    const std::size_t max_segments = 4000;
    while (toterr > rel_tol * std::fmax(std::fabs(total), 1e-300) && evals < budget &&
           heap.size() < max_segments) {
        Segment s = heap.top();
        if (s.b - s.a < 1e-13 * span) break;  // can't resolve further
        heap.pop();
        double mid = 0.5 * (s.a + s.b);
        PanelEval l = gk15(f, s.a, mid, evals);
        PanelEval r = gk15(f, mid, s.b, evals);
        if (l.infinite || r.infinite) {
            out.infinite = true;
            out.inf_at = l.infinite ? 0.5 * (s.a + mid) : 0.5 * (mid + s.b);
            return out;
        }
        total += l.value + r.value - s.value;
        toterr += l.err + r.err - s.err;
        heap.push({s.a, mid, l.value, l.err});
        heap.push({mid, s.b, r.value, r.err});
    }
    out.budget_hit = (evals >= budget || heap.size() >= max_segments) &&
                     toterr > rel_tol * std::fmax(std::fabs(total), 1e-300);

    // re-sum in position order for reproducible floating-point results
    while (!heap.empty()) {
        done.push_back(heap.top());
        heap.pop();
    }
    std::sort(done.begin(), done.end(), [](const Segment& x, const Segment& y) { return x.a < y.a; });
    out.value = 0.0;
    out.err = 0.0;
    for (const Segment& s : done) {
        out.value += s.value;
        out.err += s.err;
    }
    return out;
}

}  // namespace

ModularResult integrate_improper(const RealFn& f, double a, double b, const QuadOptions& opts) {
    if (!(a >= 0.0) || !(b > a)) throw std::invalid_argument("integrate_improper: need 0 <= a < b");
    ModularResult res;

    // transformed integrand on the t-axis, x = e^t
    auto g = [&f](double t) {
        double x = std::exp(t);
        double v = f(x);
        if (std::isnan(v)) throw IntegrandError("integrand", x);
        if (v == 0.0) return 0.0;
        return v * x;
    };

    const double t_lo = a == 0.0 ? -kInf : std::log(a);
    const double t_hi = std::isinf(b) ? kInf : std::log(b);
    // narrow core: the doubling extension does the real tail work, and a
    // small first edge leaves room for the full divergence streak within
    // the exp() range cap
    double start = std::isfinite(t_lo) ? t_lo : -1.0;
    double stop = std::isfinite(t_hi) ? t_hi : 1.0;
    if (start > stop) {
        if (std::isfinite(t_lo))
            stop = start + 2.0;
        else
            start = stop - 2.0;
    }

    long evals = 0;
    const long budget = opts.panel_budget;
    ChunkResult core = adapt_window(g, start, stop, opts.rel_tol, budget, evals);
    if (core.infinite) {
        res.value = kInf;
        res.status =
            core.inf_at < 0.0 ? QuadStatus::diverges_at_zero : QuadStatus::diverges_at_infinity;
        return res;
    }
    double total = core.value;
    double toterr = core.err;
    bool budget_hit = core.budget_hit;
    bool unresolved_tail = false;

    // Extend each open side by chunk doubling. A side stops once the
    // geometric tail estimate drops below tolerance; it diverges when the
    // chunks overflow or keep growing the total through successive doublings.
    // exp(t) stays within double range for |t| <= 700; an undecided tail at
    // the cap is reported as tolerance_not_met, never silently truncated.
    const double t_cap = 700.0;
    for (int side = 0; side < 2; ++side) {
        const bool right = side == 1;
        if (right && !std::isinf(t_hi)) continue;
        if (!right && std::isfinite(t_lo)) continue;
        const std::optional<double>& hint =
            right ? opts.tail_exponent_infinity : opts.tail_exponent_zero;
        if (hint) {
            // analytic tail f ~ x^eta: divergent at infinity iff eta >= -1,
            // divergent at zero iff eta <= -1
            if ((right && *hint >= -1.0) || (!right && *hint <= -1.0)) {
                res.value = kInf;
                res.status = right ? QuadStatus::diverges_at_infinity : QuadStatus::diverges_at_zero;
                return res;
            }
        }

        int grow_streak = 0;
        int negligible_streak = 0;
        double prev_total_mag = std::fabs(total);
        double prev_chunk = -1.0;
        double edge = right ? stop : start;
        bool resolved = false;
        // always look at least this far out: a zero stretch inside a
        // function's support must not truncate a later hump
        const double min_explore = 8.0;
        const double min_explore_empty = 64.0;  // when the running total is still zero
        while (evals < budget && std::fabs(edge) < t_cap) {
            double raw_next;
            if (right)
                raw_next = edge < 1.0 ? edge + 1.0 : edge * 2.0;
            else
                raw_next = edge > -1.0 ? edge - 1.0 : edge * 2.0;
            const bool partial = std::fabs(raw_next) > t_cap;
            double next = right ? std::fmin(raw_next, t_cap) : std::fmax(raw_next, -t_cap);
            ChunkResult c = right ? adapt_window(g, edge, next, opts.rel_tol, budget, evals)
                                  : adapt_window(g, next, edge, opts.rel_tol, budget, evals);
            if (c.infinite || std::fabs(total + c.value) > 1e290) {
                res.value = kInf;
                res.status = right ? QuadStatus::diverges_at_infinity : QuadStatus::diverges_at_zero;
                return res;
            }
            total += c.value;
            toterr += c.err;
            budget_hit = budget_hit || c.budget_hit;
            edge = next;

            const double mag = std::fabs(total);
            if (prev_total_mag > 0.0 && mag > opts.divergence_factor * prev_total_mag) {
                if (++grow_streak >= opts.divergence_doublings) {
                    res.value = kInf;
                    res.status =
                        right ? QuadStatus::diverges_at_infinity : QuadStatus::diverges_at_zero;
                    return res;
                }
            } else if (!partial) {
                // only a full doubling chunk is evidence against growth
                grow_streak = 0;
            }
            prev_total_mag = mag;

            const double cmag = std::fabs(c.value);
            double q = prev_chunk > 0.0 && cmag > 0.0 ? cmag / prev_chunk : 0.0;
            double tail_est = q > 0.0 && q < 0.95 ? cmag * q / (1.0 - q) : cmag * 20.0;
            prev_chunk = cmag;
            bool negligible = tail_est <= 0.5 * opts.rel_tol * std::fmax(mag, 1e-300);
            negligible_streak = negligible ? negligible_streak + 1 : 0;
            double explore = mag > 0.0 ? min_explore : min_explore_empty;
            if (negligible_streak >= 2 && std::fabs(edge) >= explore) {
                toterr += tail_est;
                resolved = true;
                break;
            }
        }
        if (!resolved) {
            if (hint) {
                // convergent by hypothesis: bound the cut tail pessimistically
                toterr += prev_chunk > 0.0 ? prev_chunk * 20.0 : 0.0;
            } else {
                unresolved_tail = true;
            }
        }
    }

    res.abs_error = toterr;
    bool tol_ok = !unresolved_tail && !(budget_hit && toterr > opts.rel_tol * std::fmax(std::fabs(total), 1e-300));
    res.status = tol_ok ? QuadStatus::converged : QuadStatus::tolerance_not_met;
    // the value is finite exactly when the status is converged; an
    // unresolved integral may well be infinite
    res.value = tol_ok ? total : kInf;
    return res;
}

namespace {

// M(|g(x)|) e^{-phi(x)} with overflow-aware product handling.
RealFn modular_integrand(const RealFn& g, const NFunction& M, const RealFn& phi) {
    return [&g, &M, &phi](double x) {
        double gv = g(x);
        if (std::isnan(gv)) throw IntegrandError("test function", x);
        double mv = M.m(std::fabs(gv));
        if (std::isnan(mv)) throw IntegrandError("N-function", x);
        if (mv == 0.0) return 0.0;
        double pv = phi(x);
        if (std::isnan(pv)) throw IntegrandError("weight exponent", x);
        double w = std::exp(-pv);
        double prod = mv * w;
        if (!std::isnan(prod)) return prod;
        // inf * 0 corner: resolve through logarithms when possible
        double lm = M.log_m(std::fabs(gv));
        double ls = lm - pv;
        if (std::isnan(ls)) throw IntegrandError("modular integrand", x);
        return std::exp(ls);
    };
}

}  // namespace

ModularResult weighted_modular(const RealFn& g, const NFunction& M, const RealFn& phi, double a,
                               double b, const QuadOptions& opts) {
    return integrate_improper(modular_integrand(g, M, phi), a, b, opts);
}

ModularResult weighted_modular(const Expression& g, const NFunction& M, const Expression& phi,
                               double a, double b, const QuadOptions& opts) {
    RealFn gf = [g](double x) { return g(x); };
    RealFn pf = [phi](double x) { return phi(x); };
    return weighted_modular(gf, M, pf, a, b, opts);
}

NormResult luxemburg_norm_phi(const RealFn& f, const RealFn& Phi, const RealFn& phi, double a,
                              double b, const QuadOptions& opts) {
    NormResult out;
    auto modular_at = [&](double K) -> ModularResult {
        RealFn integrand = [&](double x) {
            double fv = f(x);
            if (std::isnan(fv)) throw IntegrandError("test function", x);
            double arg = std::fabs(fv) / K;
            double mv = Phi(arg);
            if (std::isnan(mv)) throw IntegrandError("Young function", x);
            if (mv == 0.0) return 0.0;
            double pv = phi(x);
            if (std::isnan(pv)) throw IntegrandError("weight exponent", x);
            double w = std::exp(-pv);
            double prod = mv * w;
            if (std::isnan(prod)) throw IntegrandError("modular integrand", x);
            return prod;
        };
        return integrate_improper(integrand, a, b, opts);
    };

    // bracket K_lo (modular > 1) and K_hi (modular <= 1) by doubling
    double K = 1.0;
    ModularResult m = modular_at(K);
    if (m.status == QuadStatus::tolerance_not_met) {
        out.status = NormStatus::failed;
        return out;
    }
    double K_lo = 0.0, K_hi = 0.0;
    if (!m.finite() || m.value > 1.0) {
        K_lo = K;
        while (true) {
            K *= 2.0;
            if (K > 1e40) {
                out.status = NormStatus::infinite;
                out.value = kInf;
                return out;
            }
            m = modular_at(K);
            if (m.status == QuadStatus::tolerance_not_met) {
                out.status = NormStatus::failed;
                return out;
            }
            if (m.finite() && m.value <= 1.0) {
                K_hi = K;
                break;
            }
            K_lo = K;
        }
    } else {
        K_hi = K;
        while (true) {
            K *= 0.5;
            if (K < 1e-40) {
                // modular stays below 1 for arbitrarily small K: f vanishes a.e.
                out.status = NormStatus::zero;
                out.value = 0.0;
                return out;
            }
            m = modular_at(K);
            if (m.status == QuadStatus::tolerance_not_met) {
                out.status = NormStatus::failed;
                return out;
            }
            if (!m.finite() || m.value > 1.0) {
                K_lo = K;
                break;
            }
            K_hi = K;
        }
    }

    while (K_hi - K_lo > 1e-10 * K_lo) {
        double mid = std::sqrt(K_lo * K_hi);
        m = modular_at(mid);
        if (m.status == QuadStatus::tolerance_not_met) {
            out.status = NormStatus::failed;
            return out;
        }
        if (!m.finite() || m.value > 1.0)
            K_lo = mid;
        else
            K_hi = mid;
    }
    out.value = 0.5 * (K_lo + K_hi);
    out.status = NormStatus::ok;
    return out;
}

NormResult luxemburg_norm(const RealFn& f, const NFunction& M, const RealFn& phi, double a, double b,
                          const QuadOptions& opts) {
    RealFn Phi = [&M](double x) { return M.m(x); };
    return luxemburg_norm_phi(f, Phi, phi, a, b, opts);
}

NormResult luxemburg_norm(const Expression& f, const NFunction& M, const Expression& phi, double a,
                          double b, const QuadOptions& opts) {
    RealFn ff = [f](double x) { return f(x); };
    RealFn pf = [phi](double x) { return phi(x); };
    return luxemburg_norm(ff, M, pf, a, b, opts);
}

std::pair<double, double> dual_norm_bounds(const RealFn& f, const RealFn& mstar_of, double a,
                                           double b, const QuadOptions& opts) {
    RealFn zero_phi = [](double) { return 0.0; };
    NormResult lux = luxemburg_norm_phi(f, mstar_of, zero_phi, a, b, opts);
    if (lux.status == NormStatus::infinite) return {kInf, kInf};
    if (lux.status == NormStatus::failed) return {std::nan(""), std::nan("")};
    // the pairing (Orlicz) norm sits between the Luxemburg norm and twice it
    return {lux.value, 2.0 * lux.value};
}

}  // namespace hardy
