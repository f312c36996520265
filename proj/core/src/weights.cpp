#include "hardy/weights.hpp"

#include <cmath>
#include <limits>

namespace hardy {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::string fmt(double v) { return std::to_string(v); }

}  // namespace

WeightTriple::WeightTriple(NFunction M, Expression phi, Expression omega, GridSpec window)
    : M_(std::move(M)),
      phi_(std::move(phi)),
      phi1_(phi_.derivative()),
      phi2_(phi1_.derivative()),
      omega_(std::move(omega)),
      omega1_(omega_.derivative()),
      window_(window) {
    // validate (mu): phi' finite, nonzero, constant sign on the probe grid
    const int n = 512;
    double tlo = std::log(window_.lo), thi = std::log(window_.hi);
    for (int i = 0; i < n; ++i) {
        double r = std::exp(tlo + (thi - tlo) * i / (n - 1));
        double p1 = phi1_(r);
        if (std::isnan(p1)) throw AssumptionError("mu", "phi' is not defined at r=" + fmt(r), r);
        if (p1 == 0.0) throw AssumptionError("mu", "phi' vanishes at r=" + fmt(r), r);
        int s = p1 > 0.0 ? 1 : -1;
        if (phi1_sign_ == 0)
            phi1_sign_ = s;
        else if (phi1_sign_ != s)
            throw AssumptionError("mu", "phi' changes sign near r=" + fmt(r), r);
        double w = omega_(r);
        if (std::isnan(w)) throw AssumptionError("omega", "omega is not defined at r=" + fmt(r), r);
        if (w < 0.0) throw AssumptionError("omega", "omega is negative at r=" + fmt(r), r);
    }
}

WeightTriple WeightTriple::from_spec(const TripleSpec& spec) {
    NFunction M = NFunction::from_spec(spec.m);
    Expression phi = Expression::parse(spec.phi);
    Expression omega = Expression::parse(spec.omega);
    return WeightTriple(std::move(M), std::move(phi), std::move(omega),
                        spec.window.value_or(GridSpec{}));
}

std::string to_string(Verdict v) {
    switch (v) {
        case Verdict::B1: return "B1";
        case Verdict::B2: return "B2";
        case Verdict::both: return "both";
        case Verdict::neither: return "neither";
    }
    return "?";
}

namespace {

// Shared core of b1/b2: evaluates the curvature term and the F/G cross term.
// `swap_roles` exchanges which index multiplies the F and G indicators and
// flips all signs (the b2 form).
double b_at(const WeightTriple& t, double r, bool swap_roles) noexcept {
    double p1 = t.phi1(r);
    if (std::isnan(p1) || p1 == 0.0) return std::nan("");
    double p2 = t.phi2(r);
    double w = t.omega(r);
    double w1 = t.omega1(r);
    if (std::isnan(p2) || std::isnan(w)) return std::nan("");

    double base = 1.0 + p2 / (p1 * p1);
    double cross = 0.0;
    if (w != 0.0 && !std::isnan(w1)) {
        double sign_product = w1 * p1;
        if (sign_product > 0.0) {  // r in F
            double idx = swap_roles ? t.M().d_index() : t.M().D_index();
            cross = w1 / (w * p1) * idx;
        } else if (sign_product < 0.0) {  // r in G
            double idx = swap_roles ? t.M().D_index() : t.M().d_index();
            cross = w1 / (w * p1) * idx;
        }
    }
    double b1v = base - cross;
    return swap_roles ? -b1v : b1v;
}

}  // namespace

double b1_at(const WeightTriple& t, double r) noexcept { return b_at(t, r, false); }
double b2_at(const WeightTriple& t, double r) noexcept { return b_at(t, r, true); }

ScanResult infimum_b(const WeightTriple& t, BFunction which) {
    auto fn = [&t, which](double r) {
        return which == BFunction::b1 ? b1_at(t, r) : b2_at(t, r);
    };
    return scan_infimum(fn, t.window());
}

ScanResult sup_L(const WeightTriple& t) {
    auto fn = [&t](double r) {
        double p1 = t.phi1(r);
        if (std::isnan(p1) || p1 == 0.0) return std::nan("");
        double w = t.omega(r);
        if (std::isnan(w)) return std::nan("");
        return w / std::fabs(p1);
    };
    return scan_supremum(fn, t.window(), 1e12);
}

Certificate certify(const WeightTriple& t, const CertifyOptions& opts) {
    Certificate cert;
    cert.d_M = t.M().d_index();
    cert.D_M = t.M().D_index();
    cert.indices_certified = t.M().indices_certified();

    ScanResult rb1 = infimum_b(t, BFunction::b1);
    ScanResult rb2 = infimum_b(t, BFunction::b2);
    ScanResult rL = sup_L(t);

    cert.b1 = rb1.value;
    cert.b2 = rb2.value;
    cert.L = rL.value;
    cert.b1_at_r = rb1.arg;
    cert.b2_at_r = rb2.arg;
    cert.L_at_r = rL.arg;

    bool irregular = false;
    for (const auto* sr : {&rb1, &rb2, &rL}) {
        if (sr->singular_at) {
            cert.flags.push_back("singular_probe_at_r=" + std::to_string(*sr->singular_at));
            irregular = true;
        }
    }
    if (rb1.end_limit || rb2.end_limit || rL.end_limit) cert.flags.push_back("end_limit_extrapolated");
    // a finite extremum sitting on the window boundary may undershoot the
    // true inf/sup; a divergence concluded at the boundary is definitive
    bool edge_finite = (rb1.at_window_edge && std::isfinite(rb1.value)) ||
                       (rb2.at_window_edge && std::isfinite(rb2.value)) ||
                       (rL.at_window_edge && std::isfinite(rL.value));
    if (edge_finite) {
        cert.flags.push_back("extremum_at_window_edge");
        irregular = true;
    }

    const double tol = opts.tol_pos;
    bool cond1 = cert.b1 > tol && cert.L < kInf && !std::isnan(cert.b1) && !std::isnan(cert.L);
    bool cond2 = cert.b2 > tol && cert.L < kInf && !std::isnan(cert.b2) && !std::isnan(cert.L);
    cert.verdict = cond1 && cond2 ? Verdict::both
                   : cond1        ? Verdict::B1
                   : cond2        ? Verdict::B2
                                  : Verdict::neither;

    auto constant_for = [&](double b) {
        double x = cert.L * cert.D_M * cert.D_M / (b * cert.d_M);
        return t.M().comparison(x);
    };
    if (cond1 || cond2) {
        double C1 = cond1 ? constant_for(cert.b1) : kInf;
        double C2 = cond2 ? constant_for(cert.b2) : kInf;
        if (C1 <= C2) {
            cert.C = C1;
            cert.active_branch = Verdict::B1;
        } else {
            cert.C = C2;
            cert.active_branch = Verdict::B2;
        }
        cert.C_tilde = *cert.C + 1.0;
        if (cond1 && cond2) cert.flags.push_back("both_conditions_hold_smaller_C_chosen");
    }

    cert.certified = cert.indices_certified && !irregular;
    cert.notes.push_back("phi' sign constancy verified on a 512-point grid only");
    cert.notes.push_back("extrema are grid estimates refined by golden section and end limits");
    return cert;
}

}  // namespace hardy
