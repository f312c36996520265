#include "hardy/report.hpp"

#include <cmath>

namespace hardy {

json jnum(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    return v;
}

json to_json(const Config& cfg) {
    json j;
    j["quad.rel_tol"] = cfg.quad.rel_tol;
    j["quad.panel_budget"] = cfg.quad.panel_budget;
    j["quad.divergence_factor"] = cfg.quad.divergence_factor;
    j["quad.divergence_doublings"] = cfg.quad.divergence_doublings;
    j["probe.lo"] = cfg.probe.lo;
    j["probe.hi"] = cfg.probe.hi;
    j["probe.points"] = cfg.probe.points;
    j["certify.tol_pos"] = cfg.certify.tol_pos;
    json eps = json::array(), ys = json::array();
    for (double e : cfg.bk.eps_grid) eps.push_back(e);
    for (double y : cfg.bk.y_grid) ys.push_back(y);
    j["bk.eps_grid"] = eps;
    j["bk.y_grid"] = ys;
    j["bk.B_lo"] = cfg.bk.B_lo;
    j["bk.B_hi"] = cfg.bk.B_hi;
    j["verify.compare_slack"] = cfg.compare_slack;
    j["jobs"] = cfg.jobs;
    return j;
}

json to_json(const Certificate& cert) {
    json j;
    j["b1"] = jnum(cert.b1);
    j["b2"] = jnum(cert.b2);
    j["L"] = jnum(cert.L);
    j["verdict"] = to_string(cert.verdict);
    j["C"] = cert.C ? jnum(*cert.C) : json(nullptr);
    j["C_tilde"] = cert.C_tilde ? jnum(*cert.C_tilde) : json(nullptr);
    j["active_branch"] = to_string(cert.active_branch);
    j["d_M"] = jnum(cert.d_M);
    j["D_M"] = jnum(cert.D_M);
    j["indices_certified"] = cert.indices_certified;
    j["certified"] = cert.certified;
    j["flags"] = cert.flags;
    j["notes"] = cert.notes;
    j["b1_at_r"] = jnum(cert.b1_at_r);
    j["b2_at_r"] = jnum(cert.b2_at_r);
    j["L_at_r"] = jnum(cert.L_at_r);
    return j;
}

json to_json(const ModularResult& m) {
    json j;
    j["value"] = jnum(m.value);
    switch (m.status) {
        case QuadStatus::converged: j["status"] = "converged"; break;
        case QuadStatus::diverges_at_zero: j["status"] = "diverges_at_zero"; break;
        case QuadStatus::diverges_at_infinity: j["status"] = "diverges_at_infinity"; break;
        case QuadStatus::tolerance_not_met: j["status"] = "tolerance_not_met"; break;
    }
    j["abs_error_estimate"] = jnum(m.abs_error);
    return j;
}

json to_json(const MembershipVerdict& m, bool include_trace) {
    json j;
    j["in_Rplus"] = to_string(m.in_Rplus);
    j["in_Rminus"] = to_string(m.in_Rminus);
    j["method"] = to_string(m.method);
    j["note"] = m.note;
    if (include_trace) {
        json trace = json::array();
        for (const auto& s : m.theta_trace)
            trace.push_back({{"s", jnum(s.s)}, {"R", jnum(s.R)}, {"theta", jnum(s.theta)}});
        j["theta_trace"] = trace;
    }
    return j;
}

json to_json(const VerificationReport& r) {
    json j;
    j["function"] = r.function_name;
    j["J"] = to_json(r.J);
    j["H"] = to_json(r.H);
    j["ratio"] = r.ratio ? jnum(*r.ratio) : json(nullptr);
    j["C"] = r.C ? jnum(*r.C) : json(nullptr);
    j["holds"] = to_string(r.holds);
    j["membership"] = to_json(r.membership, false);
    j["in_certified_class"] = r.in_certified_class;
    j["out_of_class_excess"] = r.out_of_class_excess;
    j["diagnostics"] = r.diagnostics;
    return j;
}

json to_json(const NormReport& r) {
    auto norm_json = [](const NormResult& n) {
        json j;
        j["value"] = jnum(n.value);
        switch (n.status) {
            case NormStatus::ok: j["status"] = "ok"; break;
            case NormStatus::zero: j["status"] = "zero"; break;
            case NormStatus::infinite: j["status"] = "infinite"; break;
            case NormStatus::failed: j["status"] = "failed"; break;
        }
        return j;
    };
    json j;
    j["function"] = r.function_name;
    j["lhs_norm"] = norm_json(r.lhs);
    j["rhs_norm"] = norm_json(r.rhs);
    j["ratio"] = r.ratio ? jnum(*r.ratio) : json(nullptr);
    j["C_tilde"] = r.C_tilde ? jnum(*r.C_tilde) : json(nullptr);
    j["holds"] = to_string(r.holds);
    j["diagnostics"] = r.diagnostics;
    return j;
}

json to_json(const BKVerdict& v) {
    json j;
    j["status"] = to_string(v.status);
    if (v.witness)
        j["witness"] = {{"eps", jnum(v.witness->first)}, {"y", jnum(v.witness->second)}};
    else
        j["witness"] = nullptr;
    j["B_found"] = v.B_found ? jnum(*v.B_found) : json(nullptr);
    j["certified"] = v.certified;
    j["note"] = v.note;
    return j;
}

json to_json(const SharpnessResult& s) {
    json j;
    j["best_ratio"] = jnum(s.best_ratio);
    json params = json::array();
    for (double p : s.best_params) params.push_back(jnum(p));
    j["best_params"] = params;
    j["evaluations"] = s.evaluations;
    j["skipped_out_of_class"] = s.skipped_out_of_class;
    j["budget_exhausted"] = s.budget_exhausted;
    j["violation_found"] = s.violation_found;
    return j;
}

json report_envelope(const std::string& command, json input_echo, const Config& cfg) {
    json j;
    j["schema_version"] = kReportSchemaVersion;
    j["tool"] = {{"name", kToolName}, {"version", kToolVersion}};
    j["command"] = command;
    j["input"] = std::move(input_echo);
    j["config"] = to_json(cfg);
    return j;
}

}  // namespace hardy
