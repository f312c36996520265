#include "hardy/classify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace hardy {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr int kSeqTerms = 41;  // n = 0..40

double seq_s(int n) { return 1e-2 * std::pow(2.0, -n); }
double seq_R(int n) { return 1e2 * std::pow(2.0, n); }
}  // namespace

std::string to_string(FunctionKind k) {
    switch (k) {
        case FunctionKind::hardy_transform: return "hardy_transform";
        case FunctionKind::conjugate_hardy_transform: return "conjugate_hardy_transform";
        case FunctionKind::generic: return "generic";
    }
    return "?";
}

std::optional<FunctionKind> function_kind_from_string(const std::string& s) {
    if (s == "hardy_transform") return FunctionKind::hardy_transform;
    if (s == "conjugate_hardy_transform") return FunctionKind::conjugate_hardy_transform;
    if (s == "generic") return FunctionKind::generic;
    return std::nullopt;
}

std::string to_string(Tri t) {
    switch (t) {
        case Tri::yes: return "yes";
        case Tri::no: return "no";
        case Tri::undetermined: return "undetermined";
    }
    return "?";
}

std::string to_string(ClassifyMethod m) {
    switch (m) {
        case ClassifyMethod::direct_limit: return "direct_limit";
        case ClassifyMethod::prop51: return "prop51";
        case ClassifyMethod::lemma52: return "lemma52";
        case ClassifyMethod::lemma54: return "lemma54";
        case ClassifyMethod::compact_support: return "compact_support";
    }
    return "?";
}

std::string to_string(BoundCheck b) {
    switch (b) {
        case BoundCheck::bounded: return "bounded";
        case BoundCheck::unbounded: return "unbounded";
        case BoundCheck::undetermined: return "undetermined";
    }
    return "?";
}

TestFunction TestFunction::from_expression(std::string name, const Expression& u, FunctionKind kind,
                                           std::optional<std::pair<double, double>> support) {
    return from_expressions(std::move(name), u, u.derivative(), kind, support);
}

TestFunction TestFunction::from_expressions(std::string name, const Expression& u,
                                            const Expression& uprime, FunctionKind kind,
                                            std::optional<std::pair<double, double>> support) {
    TestFunction f;
    f.name = std::move(name);
    f.u = [u](double r) { return u(r); };
    f.uprime = [uprime](double r) { return uprime(r); };
    f.kind = kind;
    f.support = support;
    f.u_expr = u;
    f.uprime_expr = uprime;
    return f;
}

TestFunction TestFunction::laplace_function() {
    TestFunction f;
    f.name = "laplace";
    const double half_sqrt_pi = 0.5 * std::sqrt(std::acos(-1.0));
    f.u = [half_sqrt_pi](double r) { return half_sqrt_pi * std::erf(r); };
    f.uprime = [](double r) { return std::exp(-r * r); };
    f.kind = FunctionKind::hardy_transform;
    return f;
}

TestFunction TestFunction::dilated(double lambda) const {
    TestFunction f;
    f.name = name + "*dilated";
    RealFn u0 = u, u1 = uprime;
    f.u = [u0, lambda](double r) { return u0(lambda * r); };
    f.uprime = [u1, lambda](double r) { return lambda * u1(lambda * r); };
    f.kind = kind;
    if (support) f.support = std::make_pair(support->first / lambda, support->second / lambda);
    return f;
}

double h_value(const WeightTriple& t, const TestFunction& u, double r) {
    double p1 = t.phi1(r);
    if (std::isnan(p1) || p1 == 0.0) throw EvalDomainError("h-value with vanishing phi'", r);
    double uv = u.u(r);
    if (std::isnan(uv)) throw EvalDomainError("test function", r);
    return t.M().m(t.omega(r) * std::fabs(uv)) / p1;
}

double boundary_term(const WeightTriple& t, const TestFunction& u, double r) {
    double p1 = t.phi1(r);
    if (std::isnan(p1) || p1 == 0.0) return std::nan("");
    double uv = u.u(r);
    double w = t.omega(r);
    if (std::isnan(uv) || std::isnan(w)) return std::nan("");
    double arg = w * std::fabs(uv);
    if (arg == 0.0 || t.M().m(arg) == 0.0) return 0.0;
    double logmag = t.M().log_m(arg) - std::log(std::fabs(p1)) - t.phi(r);
    double mag = std::exp(logmag);  // may overflow to +inf: genuine blow-up
    return p1 > 0.0 ? mag : -mag;
}

namespace {

struct TrendLimit {
    enum Kind { finite, plus_inf, minus_inf, none } kind = none;
    double value = 0.0;
};

// Last-8-window trend fit: sign stability plus monotone magnitude. Geometric
// decay pins the limit to 0, sustained growth to a signed infinity, and a
// contracting tail goes through Aitken extrapolation.
TrendLimit trend_limit(const std::vector<double>& theta) {
    TrendLimit out;
    std::size_t n = theta.size();
    if (n < 8) return out;
    std::vector<double> tail(theta.end() - 8, theta.end());
    bool all_zero = true;
    for (double v : tail) {
        if (std::isnan(v)) return out;
        if (v != 0.0) all_zero = false;
    }
    if (all_zero) {
        out.kind = TrendLimit::finite;
        return out;
    }
    int sign = 0;
    for (double v : tail) {
        if (v == 0.0) continue;
        int s = v > 0.0 ? 1 : -1;
        if (sign == 0) sign = s;
        if (sign != s) return out;  // oscillating
    }
    for (double v : tail)
        if (std::isinf(v)) {
            out.kind = sign > 0 ? TrendLimit::plus_inf : TrendLimit::minus_inf;
            return out;
        }
    // magnitude ratios across the window
    double qmin = kInf, qmax = 0.0;
    bool ratios_ok = true;
    for (std::size_t i = 1; i < tail.size(); ++i) {
        double a = std::fabs(tail[i - 1]), b = std::fabs(tail[i]);
        if (a == 0.0 || b == 0.0) {
            ratios_ok = false;
            continue;
        }
        double q = b / a;
        qmin = std::fmin(qmin, q);
        qmax = std::fmax(qmax, q);
    }
    if (ratios_ok && qmin > 1.02) {
        out.kind = sign > 0 ? TrendLimit::plus_inf : TrendLimit::minus_inf;
        return out;
    }
    if (!ratios_ok || qmax < 0.9) {  // geometric decay (or exact zeros): limit 0
        out.kind = TrendLimit::finite;
        out.value = 0.0;
        return out;
    }
    if (qmax <= 1.0 + 1e-9) {
        // contracting or flat: Aitken on the last three values
        double v1 = tail[5], v2 = tail[6], v3 = tail[7];
        double d1 = v2 - v1, d2 = v3 - v2;
        double est = v3;
        if (d2 != d1 && d1 != 0.0) {
            double q = d2 / d1;
            if (std::fabs(q) < 0.95) est = v3 + d2 * q / (1.0 - q);
        }
        out.kind = TrendLimit::finite;
        // collapse to zero when the estimate is noise against the window scale
        double scale = 0.0;
        for (double v : tail) scale = std::fmax(scale, std::fabs(v));
        out.value = std::fabs(est) <= 1e-10 * scale ? 0.0 : est;
        return out;
    }
    return out;  // mixed expansion/contraction: no stable trend
}

// strict opposite-sign evidence: every probed theta from n=2 on keeps sign s
bool strict_sign_everywhere(const std::vector<double>& theta, int s) {
    for (std::size_t n = 2; n < theta.size(); ++n) {
        if (std::isnan(theta[n])) return false;
        if (s > 0 ? !(theta[n] > 0.0) : !(theta[n] < 0.0)) return false;
    }
    return true;
}

}  // namespace

MembershipVerdict classify_membership(const WeightTriple& t, const TestFunction& u) {
    MembershipVerdict v;
    std::vector<double> theta(kSeqTerms);
    v.theta_trace.reserve(kSeqTerms);
    for (int n = 0; n < kSeqTerms; ++n) {
        double s = seq_s(n), R = seq_R(n);
        double bR = boundary_term(t, u, R);
        double bs = boundary_term(t, u, s);
        double th;
        if (std::isinf(bR) && std::isinf(bs) && (bR > 0) == (bs > 0))
            th = std::nan("");  // inf - inf of the same sign: indeterminate
        else
            th = bR - bs;
        theta[static_cast<std::size_t>(n)] = th;
        v.theta_trace.push_back({s, R, th});
    }

    if (u.support && u.support->first > 0.0 && std::isfinite(u.support->second)) {
        v.in_Rplus = Tri::yes;
        v.in_Rminus = Tri::yes;
        v.method = ClassifyMethod::compact_support;
        v.note = "compactly supported: boundary terms vanish at both ends";
        return v;
    }

    TrendLimit lim = trend_limit(theta);
    switch (lim.kind) {
        case TrendLimit::none:
            v.note = "theta trend oscillates or overflows without a clear sign";
            return v;
        case TrendLimit::plus_inf:
            v.in_Rplus = Tri::yes;
            v.in_Rminus = strict_sign_everywhere(theta, +1) ? Tri::no : Tri::undetermined;
            v.note = "theta diverges to +infinity";
            return v;
        case TrendLimit::minus_inf:
            v.in_Rminus = Tri::yes;
            v.in_Rplus = strict_sign_everywhere(theta, -1) ? Tri::no : Tri::undetermined;
            v.note = "theta diverges to -infinity";
            return v;
        case TrendLimit::finite:
            if (lim.value == 0.0) {
                v.in_Rplus = Tri::yes;
                v.in_Rminus = Tri::yes;
                v.note = "theta converges to 0";
            } else if (lim.value > 0.0) {
                v.in_Rplus = Tri::yes;
                v.in_Rminus = strict_sign_everywhere(theta, +1) ? Tri::no : Tri::undetermined;
                v.note = "theta converges to a positive limit";
            } else {
                v.in_Rminus = Tri::yes;
                v.in_Rplus = strict_sign_everywhere(theta, -1) ? Tri::no : Tri::undetermined;
                v.note = "theta converges to a negative limit";
            }
            return v;
    }
    return v;
}

namespace {

// 1/f_phi as a callable, through logarithms so that huge weights survive.
RealFn inverse_f_phi(const WeightTriple& t) {
    return [&t](double rho) {
        double p = t.phi(rho);
        if (std::isnan(p)) return std::nan("");
        return std::exp(-t.M().log_comparison_inverse(-p));
    };
}

std::pair<double, double> phi_norm_bounds(const WeightTriple& t, double a, double b,
                                          const QuadOptions& opts) {
    RealFn inv_f = inverse_f_phi(t);
    RealFn mstar = [&t](double y) { return t.M().conjugate(y); };
    return dual_norm_bounds(inv_f, mstar, a, b, opts);
}

}  // namespace

std::pair<double, double> A_phi(const WeightTriple& t, double r, const QuadOptions& opts) {
    return phi_norm_bounds(t, 0.0, r, opts);
}

std::pair<double, double> B_phi(const WeightTriple& t, double r, const QuadOptions& opts) {
    return phi_norm_bounds(t, r, kInf, opts);
}

namespace {

BoundProfile bound_profile_impl(const WeightTriple& t, bool at_zero, const QuadOptions& opts) {
    BoundProfile out;
    const int kMax = 40;
    std::vector<double> vals;
    bool overflow_break = false;
    for (int k = 1; k <= kMax; ++k) {
        double r = at_zero ? std::pow(2.0, -k) : std::pow(2.0, k);
        std::pair<double, double> bounds;
        try {
            bounds = at_zero ? A_phi(t, r, opts) : B_phi(t, r, opts);
        } catch (const IntegrandError&) {
            overflow_break = true;  // probe left the evaluable range
            break;
        }
        double norm_upper = bounds.second;
        if (std::isnan(norm_upper)) return out;
        if (std::isinf(norm_upper)) {
            out.verdict = BoundCheck::unbounded;
            out.samples.emplace_back(r, norm_upper);
            return out;
        }
        if (norm_upper == 0.0) {
            overflow_break = true;  // norm underflowed: stop with the prefix
            break;
        }
        double arg = t.omega(r) * norm_upper;
        double logv = arg > 0.0 ? t.M().log_m(arg) : -kInf;
        logv -= std::log(std::fabs(t.phi1(r))) + t.phi(r);
        if (std::isnan(logv)) return out;
        if (logv > 700.0) {
            out.verdict = BoundCheck::unbounded;
            out.samples.emplace_back(r, std::numeric_limits<double>::infinity());
            return out;
        }
        vals.push_back(std::exp(logv));
        out.samples.emplace_back(r, vals.back());
    }
    if (vals.size() < 4) return out;

    std::size_t look = std::min<std::size_t>(8, vals.size());
    bool nonincreasing = true, increasing = true;
    for (std::size_t i = vals.size() - look + 1; i < vals.size(); ++i) {
        if (vals[i] > vals[i - 1] * 1.05) nonincreasing = false;
        if (vals[i] < vals[i - 1] * 0.999) increasing = false;
    }
    double vmax = *std::max_element(vals.begin(), vals.end());
    // a rising tail with contracting increments converges to a finite value
    double d1 = vals[vals.size() - 3] - vals[vals.size() - 4];
    double d2 = vals[vals.size() - 2] - vals[vals.size() - 3];
    double d3 = vals.back() - vals[vals.size() - 2];
    bool contracting = std::fabs(d3) <= 0.7 * std::fabs(d2) && std::fabs(d2) <= 0.7 * std::fabs(d1);
    bool flat = std::fabs(d3) <= 1e-9 * (1.0 + vmax) && std::fabs(d2) <= 1e-9 * (1.0 + vmax);
    if (vmax >= 1e6)
        out.verdict = increasing ? BoundCheck::unbounded : BoundCheck::undetermined;
    else if (nonincreasing || contracting || flat)
        out.verdict = BoundCheck::bounded;
    else
        out.verdict = BoundCheck::undetermined;
    (void)overflow_break;
    return out;
}

}  // namespace

BoundCheck K_bound_check(const WeightTriple& t, const QuadOptions& opts) {
    return bound_profile_impl(t, true, opts).verdict;
}

BoundProfile K_bound_profile(const WeightTriple& t, const QuadOptions& opts) {
    return bound_profile_impl(t, true, opts);
}

BoundCheck L_bound_check(const WeightTriple& t, const QuadOptions& opts) {
    return bound_profile_impl(t, false, opts).verdict;
}

BoundProfile L_bound_profile(const WeightTriple& t, const QuadOptions& opts) {
    return bound_profile_impl(t, false, opts);
}

namespace {

struct EndBehavior {
    bool phi1_to_zero = false;
    bool u_bounded = false;
    bool weighted_u_bounded = false;
};

EndBehavior end_behavior(const WeightTriple& t, const TestFunction& u, bool at_infinity) {
    EndBehavior out;
    std::vector<double> p1s, us, wus;
    for (int n = 0; n < kSeqTerms; ++n) {
        double r = at_infinity ? seq_R(n) : seq_s(n);
        double p1 = std::fabs(t.phi1(r));
        double uv = std::fabs(u.u(r));
        if (std::isnan(p1) || std::isnan(uv)) return out;
        p1s.push_back(p1);
        us.push_back(uv);
        wus.push_back(uv == 0.0 ? -kInf : std::log(uv) - t.phi(r));  // log of |u| e^{-phi}
    }
    bool decreasing = true;
    for (std::size_t i = p1s.size() - 8; i < p1s.size(); ++i)
        if (p1s[i] > p1s[i - 1] * (1.0 + 1e-9)) decreasing = false;
    out.phi1_to_zero = decreasing && p1s.back() <= 1e-10 * (1.0 + p1s.front());

    double u0 = 1.0 + us.front();
    bool u_ok = true, wu_ok = true;
    for (std::size_t i = 0; i < us.size(); ++i) {
        if (!(us[i] <= 1e6 * u0)) u_ok = false;
        if (!(wus[i] <= std::log(1e6 * u0) + std::fabs(wus.front()) + 1.0)) wu_ok = false;
    }
    // also demand a non-growing tail, not just a cap
    for (std::size_t i = us.size() - 4; i < us.size(); ++i) {
        if (us[i] > us[i - 1] * 1.01 + 1e-12) u_ok = false;
        if (wus[i] > wus[i - 1] + 1e-9 && std::isfinite(wus[i])) wu_ok = false;
    }
    out.u_bounded = u_ok;
    out.weighted_u_bounded = wu_ok;
    return out;
}

}  // namespace

std::optional<MembershipVerdict> quick_membership(const WeightTriple& t, const TestFunction& u) {
    ScanResult L = sup_L(t);
    if (!(L.value < kInf)) return std::nullopt;
    int sign = t.phi1_sign();

    MembershipVerdict v;
    v.method = ClassifyMethod::prop51;
    bool applied = false;

    EndBehavior at_inf = end_behavior(t, u, true);
    if (at_inf.phi1_to_zero && at_inf.u_bounded && at_inf.weighted_u_bounded) {
        // boundary term vanishes at infinity; the 0-end sign of h decides
        (sign < 0 ? v.in_Rplus : v.in_Rminus) = Tri::yes;
        v.note = "phi' decays at infinity with u bounded there";
        applied = true;
    }
    EndBehavior at_zero = end_behavior(t, u, false);
    if (at_zero.phi1_to_zero && at_zero.u_bounded && at_zero.weighted_u_bounded) {
        (sign > 0 ? v.in_Rplus : v.in_Rminus) = Tri::yes;
        v.note += std::string(applied ? "; " : "") + "phi' decays at zero with u bounded there";
        applied = true;
    }
    if (!applied) return std::nullopt;
    return v;
}

std::optional<MembershipVerdict> hardy_subset_conclusion(const WeightTriple& t,
                                                         const TestFunction& u, bool H_finite,
                                                         const QuadOptions& opts) {
    if (!H_finite) return std::nullopt;
    if (u.kind == FunctionKind::generic) return std::nullopt;
    int sign = t.phi1_sign();
    MembershipVerdict v;
    if (u.kind == FunctionKind::hardy_transform) {
        if (K_bound_check(t, opts) != BoundCheck::bounded) return std::nullopt;
        v.method = ClassifyMethod::lemma52;
        (sign > 0 ? v.in_Rplus : v.in_Rminus) = Tri::yes;
        v.note = "Hardy transform with finite energy; K bounded near 0";
    } else {
        if (L_bound_check(t, opts) != BoundCheck::bounded) return std::nullopt;
        v.method = ClassifyMethod::lemma54;
        (sign > 0 ? v.in_Rminus : v.in_Rplus) = Tri::yes;
        v.note = "conjugate Hardy transform with finite energy; L bounded near infinity";
    }
    return v;
}

}  // namespace hardy
