#include "hardy/verifier.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>

namespace hardy {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();

std::string fmt(double v) {
    char buf[40];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}
}  // namespace

std::string to_string(Holds h) {
    switch (h) {
        case Holds::yes: return "yes";
        case Holds::no: return "no";
        case Holds::vacuous: return "vacuous";
        case Holds::violated_divergence: return "violated_divergence";
        case Holds::undetermined: return "undetermined";
    }
    return "?";
}

namespace {

bool in_certified_class(const Certificate& cert, const MembershipVerdict& m) {
    if (cert.active_branch == Verdict::B1) return m.in_Rplus == Tri::yes;
    if (cert.active_branch == Verdict::B2) return m.in_Rminus == Tri::yes;
    return false;
}

}  // namespace

VerificationReport verify(const WeightTriple& t, const Certificate& cert, const TestFunction& u,
                          const VerifyOptions& opts) {
    VerificationReport rep;
    rep.function_name = u.name;
    rep.C = cert.C;
    try {
        RealFn g = [&t, &u](double x) {
            double uv = u.u(x);
            return std::isnan(uv) ? uv : t.omega(x) * std::fabs(uv);
        };
        RealFn up = [&u](double x) { return std::fabs(u.uprime(x)); };
        RealFn phi = [&t](double x) { return t.phi(x); };
        rep.J = weighted_modular(g, t.M(), phi, 0.0, kInf, opts.quad);
        rep.H = weighted_modular(up, t.M(), phi, 0.0, kInf, opts.quad);
        rep.membership = classify_membership(t, u);
        rep.in_certified_class = in_certified_class(cert, rep.membership);

        if (rep.J.status == QuadStatus::tolerance_not_met ||
            rep.H.status == QuadStatus::tolerance_not_met) {
            rep.holds = Holds::undetermined;
            rep.diagnostics = "quadrature tolerance not met";
            return rep;
        }
        if (rep.H.divergent()) {
            rep.holds = Holds::vacuous;
            rep.diagnostics = "energy side H is infinite; the inequality is vacuous";
            return rep;
        }
        if (rep.J.divergent()) {
            rep.holds = Holds::violated_divergence;
            rep.diagnostics = rep.in_certified_class
                                  ? "J infinite with H finite for an in-class function"
                                  : "J infinite with H finite; function is outside the certified class";
            return rep;
        }
        if (rep.H.value <= 0.0) {
            if (rep.J.value <= 0.0) {
                rep.holds = Holds::vacuous;
                rep.diagnostics = "both modulars vanish (zero function)";
                return rep;
            }
            rep.ratio = kInf;
        } else {
            rep.ratio = rep.J.value / rep.H.value;
        }
        if (!rep.C) {
            rep.holds = Holds::undetermined;
            rep.diagnostics = "no certified constant to compare against";
            return rep;
        }
        if (*rep.ratio <= *rep.C * (1.0 + opts.compare_slack)) {
            rep.holds = Holds::yes;
        } else if (rep.in_certified_class) {
            rep.holds = Holds::no;
            rep.diagnostics = "certified inequality violated: ratio " + fmt(*rep.ratio) +
                              " exceeds C = " + fmt(*rep.C);
        } else {
            rep.holds = Holds::undetermined;
            rep.out_of_class_excess = true;
            rep.diagnostics =
                "ratio exceeds C but the function is not certified in-class; no violation";
        }
    } catch (const IntegrandError& e) {
        rep.holds = Holds::undetermined;
        rep.diagnostics = std::string("quadrature failure: ") + e.what();
    } catch (const EvalDomainError& e) {
        rep.holds = Holds::undetermined;
        rep.diagnostics = std::string("evaluation failure: ") + e.what();
    }
    return rep;
}

NormReport norm_verify(const WeightTriple& t, const Certificate& cert, const TestFunction& u,
                       const VerifyOptions& opts) {
    NormReport rep;
    rep.function_name = u.name;
    if (cert.C_tilde) rep.C_tilde = cert.C_tilde;
    try {
        RealFn g = [&t, &u](double x) {
            double uv = u.u(x);
            return std::isnan(uv) ? uv : t.omega(x) * std::fabs(uv);
        };
        RealFn up = [&u](double x) { return std::fabs(u.uprime(x)); };
        RealFn phi = [&t](double x) { return t.phi(x); };
        rep.lhs = luxemburg_norm(g, t.M(), phi, 0.0, kInf, opts.quad);
        rep.rhs = luxemburg_norm(up, t.M(), phi, 0.0, kInf, opts.quad);
        if (rep.lhs.status == NormStatus::failed || rep.rhs.status == NormStatus::failed) {
            rep.holds = Holds::undetermined;
            rep.diagnostics = "norm computation failed";
            return rep;
        }
        if (rep.rhs.status == NormStatus::infinite) {
            rep.holds = Holds::vacuous;
            rep.diagnostics = "right-hand norm infinite";
            return rep;
        }
        if (rep.rhs.value <= 0.0) {
            if (rep.lhs.value <= 0.0) {
                rep.holds = Holds::vacuous;
                rep.diagnostics = "both norms vanish";
                return rep;
            }
            rep.ratio = kInf;
        } else if (rep.lhs.status == NormStatus::infinite) {
            rep.ratio = kInf;
        } else {
            rep.ratio = rep.lhs.value / rep.rhs.value;
        }
        if (!rep.C_tilde) {
            rep.holds = Holds::undetermined;
            rep.diagnostics = "no certified constant";
            return rep;
        }
        rep.holds = *rep.ratio <= *rep.C_tilde * (1.0 + opts.compare_slack) ? Holds::yes
                                                                            : Holds::undetermined;
        if (rep.holds != Holds::yes)
            rep.diagnostics = "norm ratio exceeds C~; membership not established here";
    } catch (const IntegrandError& e) {
        rep.holds = Holds::undetermined;
        rep.diagnostics = std::string("quadrature failure: ") + e.what();
    }
    return rep;
}

FamilySpec FamilySpec::from_template(std::string name, std::vector<ParamRange> params,
                                     std::string expr_template, FunctionKind kind) {
    FamilySpec spec;
    spec.name = std::move(name);
    spec.params = std::move(params);
    auto params_copy = spec.params;
    spec.make = [tpl = std::move(expr_template), params_copy, kind,
                 fname = spec.name](const std::vector<double>& vals) {
        std::string text = tpl;
        for (std::size_t i = 0; i < params_copy.size() && i < vals.size(); ++i) {
            std::string key = "%" + params_copy[i].name + "%";
            std::string rep = "(" + fmt(vals[i]) + ")";
            for (std::size_t pos = text.find(key); pos != std::string::npos;
                 pos = text.find(key, pos + rep.size()))
                text.replace(pos, key.size(), rep);
        }
        return TestFunction::from_expression(fname, Expression::parse(text));
    };
    return spec;
}

FamilySpec FamilySpec::classical_extremal(double p, double alpha) {
    double kappa0 = (p - 1.0 - alpha) / p;
    FamilySpec spec;
    spec.name = "classical_extremal";
    spec.params = {
        {"eps", 0.02, 0.5, false},
        {"a", 1e-8, 1e-2, true},
        {"b", 1e2, 1e8, true},
    };
    spec.make = [kappa0](const std::vector<double>& v) {
        double eps = v.at(0), a = v.at(1), b = v.at(2);
        std::string text = "r^(" + fmt(kappa0 + eps) + ")*exp(-" + fmt(a) + "/r-r/" + fmt(b) + ")";
        return TestFunction::from_expression("extremal[eps=" + fmt(eps) + "]",
                                             Expression::parse(text));
    };
    return spec;
}

namespace {

struct RatioProbe {
    const WeightTriple& t;
    const Certificate& cert;
    const VerifyOptions& opts;
    long evaluations = 0;
    long skipped = 0;

    double operator()(const TestFunction& u) {
        ++evaluations;
        MembershipVerdict m = classify_membership(t, u);
        if (!in_certified_class(cert, m)) {
            ++skipped;
            return -kInf;
        }
        try {
            RealFn g = [this, &u](double x) {
                double uv = u.u(x);
                return std::isnan(uv) ? uv : t.omega(x) * std::fabs(uv);
            };
            RealFn up = [&u](double x) { return std::fabs(u.uprime(x)); };
            RealFn phi = [this](double x) { return t.phi(x); };
            ModularResult J = weighted_modular(g, t.M(), phi, 0.0, kInf, opts.quad);
            ModularResult H = weighted_modular(up, t.M(), phi, 0.0, kInf, opts.quad);
            if (!J.finite() || !H.finite() || H.value <= 0.0) return -kInf;
            return J.value / H.value;
        } catch (const IntegrandError&) {
            return -kInf;
        } catch (const EvalDomainError&) {
            return -kInf;
        }
    }
};

}  // namespace

SharpnessResult sharpness_search(const WeightTriple& t, const Certificate& cert,
                                 const FamilySpec& family, long budget, const VerifyOptions& opts) {
    SharpnessResult out;
    if (family.params.empty() || !family.make) return out;
    RatioProbe probe{t, cert, opts};

    const std::size_t dim = family.params.size();
    std::vector<double> x(dim);
    for (std::size_t i = 0; i < dim; ++i) {
        const ParamRange& p = family.params[i];
        x[i] = p.log_scale ? std::sqrt(p.lo * p.hi) : 0.5 * (p.lo + p.hi);
    }
    auto eval_at = [&](const std::vector<double>& params) { return probe(family.make(params)); };

    double best = eval_at(x);
    out.best_params = x;

    // coordinate sweeps, golden-section line search per parameter
    const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
    for (int sweep = 0; sweep < 6 && probe.evaluations < budget; ++sweep) {
        double sweep_start = best;
        for (std::size_t i = 0; i < dim && probe.evaluations < budget; ++i) {
            const ParamRange& p = family.params[i];
            auto coord = [&](double v) {
                std::vector<double> y = x;
                y[i] = p.log_scale ? std::exp(v) : v;
                double r = eval_at(y);
                return r;
            };
            double a = p.log_scale ? std::log(p.lo) : p.lo;
            double b = p.log_scale ? std::log(p.hi) : p.hi;
            double c = b - invphi * (b - a), d = a + invphi * (b - a);
            double fc = coord(c), fd = coord(d);
            for (int it = 0; it < 12 && probe.evaluations < budget; ++it) {
                if (fc > fd) {
                    b = d;
                    d = c;
                    fd = fc;
                    c = b - invphi * (b - a);
                    fc = coord(c);
                } else {
                    a = c;
                    c = d;
                    fc = fd;
                    d = a + invphi * (b - a);
                    fd = coord(d);
                }
            }
            double vbest = fc > fd ? c : d;
            double fbest = std::fmax(fc, fd);
            if (fbest > best) {
                best = fbest;
                x[i] = p.log_scale ? std::exp(vbest) : vbest;
                out.best_params = x;
            }
        }
        if (best <= sweep_start * (1.0 + 1e-4)) break;
    }

    out.best_ratio = best;
    out.evaluations = probe.evaluations;
    out.skipped_out_of_class = probe.skipped;
    out.budget_exhausted = probe.evaluations >= budget;
    out.violation_found = cert.C && best > *cert.C * (1.0 + opts.compare_slack);
    return out;
}

std::vector<TestFunction> stock_test_functions() {
    std::vector<TestFunction> fns;
    auto expr = [](const char* s) { return Expression::parse(s); };

    fns.push_back(TestFunction::from_expression(
        "trapezoid_1_3", expr("max(0,min(min(r-1,1),3-r))"), FunctionKind::generic,
        std::make_pair(1.0, 3.0)));
    fns.push_back(TestFunction::from_expression(
        "trapezoid_half_2", expr("max(0,min(min(4*r-2,1),2-r))"), FunctionKind::generic,
        std::make_pair(0.5, 2.0)));
    fns.push_back(TestFunction::from_expression(
        "trapezoid_wide", expr("max(0,min(min(r/0.1-1,1),(100-r)/50))"), FunctionKind::generic,
        std::make_pair(0.1, 100.0)));
    fns.push_back(
        TestFunction::from_expression("power_ramp", expr("r*exp(-0.01/r-r/100)")));
    fns.push_back(
        TestFunction::from_expression("root_decay", expr("r^(-0.5)*exp(-0.01/r-r/100)")));
    fns.push_back(
        TestFunction::from_expression("quadratic_bump", expr("r^2*exp(-0.01/r-r/100)")));
    fns.push_back(TestFunction::from_expression("exp_tail_ramp", expr("min(1,r)*exp(-r)"),
                                                FunctionKind::conjugate_hardy_transform));
    fns.push_back(TestFunction::from_expression("smooth_ramp", expr("r/(1+r)*exp(-r)"),
                                                FunctionKind::conjugate_hardy_transform));
    fns.push_back(TestFunction::from_expression("rational_decay", expr("1/(1+r)"),
                                                FunctionKind::conjugate_hardy_transform));
    fns.push_back(TestFunction::laplace_function());
    fns.push_back(
        TestFunction::from_expression("near_extremal", expr("r^(-1.4)*exp(-0.01/r-r/100)")));
    fns.push_back(
        TestFunction::from_expression("sqrt_growth", expr("r^(0.5)*exp(-0.01/r-r/100)")));
    return fns;
}

}  // namespace hardy
