#include <CLI11.hpp>
#include <json.hpp>

#include <atomic>
#include <chrono>
#include <cmath>
#include <fstream>
#include <iostream>
#include <thread>

#include "hardy/catalog.hpp"
#include "hardy/classify.hpp"
#include "hardy/config.hpp"
#include "hardy/report.hpp"
#include "hardy/verifier.hpp"

namespace {

using hardy::json;

constexpr int kExitOk = 0;
constexpr int kExitConditionNotMet = 1;
constexpr int kExitInputError = 2;
constexpr int kExitNumericFailure = 3;

struct CommonArgs {
    std::string triple_file;
    std::string catalog_name;
    std::string m_expr, phi_expr, omega_expr;
    std::string out_file;
    std::string config_file;
    std::string traces_dir;
    int jobs = 1;
    bool timing = false;
};

void add_common(CLI::App* cmd, CommonArgs& args, bool with_triple = true) {
    if (with_triple) {
        cmd->add_option("--triple", args.triple_file, "triple spec file (JSON)");
        cmd->add_option("--catalog", args.catalog_name, "catalog entry name");
        cmd->add_option("--M", args.m_expr, "N-function: catalog string or expression in r");
        cmd->add_option("--phi", args.phi_expr, "weight exponent phi(r)");
        cmd->add_option("--omega", args.omega_expr, "multiplier omega(r)");
    }
    cmd->add_option("--out", args.out_file, "write the JSON report to this file");
    cmd->add_option("--config", args.config_file, "key=value config file");
    cmd->add_option("--traces", args.traces_dir, "directory for CSV plot traces");
    cmd->add_option("--jobs", args.jobs, "worker threads for batch items");
    cmd->add_flag("--timing", args.timing, "include wall-clock timing in the report");
}

hardy::Config load_config(const CommonArgs& args) {
    hardy::Config cfg =
        args.config_file.empty() ? hardy::Config{} : hardy::Config::from_file(args.config_file);
    if (args.jobs > 1) cfg.jobs = args.jobs;
    cfg.timing = args.timing;
    return cfg;
}

json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open file: " + path);
    json j;
    in >> j;
    return j;
}

hardy::TripleSpec triple_spec_from(const CommonArgs& args, const hardy::Config& cfg,
                                   json& input_echo) {
    hardy::TripleSpec spec;
    if (!args.catalog_name.empty()) {
        hardy::CatalogEntry entry = hardy::catalog_load(args.catalog_name);
        spec = entry.triple;
        input_echo["catalog"] = args.catalog_name;
    } else if (!args.triple_file.empty()) {
        json j = read_json_file(args.triple_file);
        spec.m = j.at("M").get<std::string>();
        spec.phi = j.at("phi").get<std::string>();
        spec.omega = j.at("omega").get<std::string>();
        if (j.contains("window")) {
            hardy::GridSpec w = cfg.probe;
            if (j["window"].contains("lo")) w.lo = j["window"]["lo"].get<double>();
            if (j["window"].contains("hi")) w.hi = j["window"]["hi"].get<double>();
            if (j["window"].contains("points")) w.points = j["window"]["points"].get<int>();
            spec.window = w;
        }
        input_echo["triple_file"] = args.triple_file;
    } else if (!args.m_expr.empty() || !args.phi_expr.empty() || !args.omega_expr.empty()) {
        if (args.m_expr.empty() || args.phi_expr.empty() || args.omega_expr.empty())
            throw std::runtime_error("inline triples need all of --M, --phi, --omega");
        spec = {args.m_expr, args.phi_expr, args.omega_expr, std::nullopt};
    } else {
        throw std::runtime_error("no triple given: use --triple, --catalog, or --M/--phi/--omega");
    }
    if (!spec.window) spec.window = cfg.probe;
    input_echo["M"] = spec.m;
    input_echo["phi"] = spec.phi;
    input_echo["omega"] = spec.omega;
    input_echo["window"] = {{"lo", spec.window->lo},
                            {"hi", spec.window->hi},
                            {"points", spec.window->points}};
    return spec;
}

void emit(const json& report, const CommonArgs& args) {
    std::string text = report.dump(2);
    text += '\n';
    if (args.out_file.empty()) {
        std::cout << text;
    } else {
        std::ofstream out(args.out_file, std::ios::binary);
        if (!out) throw std::runtime_error("cannot write to " + args.out_file);
        out << text;
    }
}

void write_csv(const std::string& dir, const std::string& name, const std::string& header,
               const std::vector<std::array<double, 2>>& rows) {
    std::ofstream out(dir + "/" + name, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write trace " + dir + "/" + name);
    out << header << "\n";
    char buf[80];
    for (const auto& row : rows) {
        std::snprintf(buf, sizeof(buf), "%.17g,%.17g\n", row[0], row[1]);
        out << buf;
    }
}

void write_curve(const std::string& dir, const std::string& name,
                 const std::function<double(double)>& fn, const hardy::GridSpec& grid) {
    std::vector<std::array<double, 2>> rows;
    double tlo = std::log(grid.lo), thi = std::log(grid.hi);
    const int n = 401;
    for (int i = 0; i < n; ++i) {
        double r = std::exp(tlo + (thi - tlo) * i / (n - 1));
        rows.push_back({r, fn(r)});
    }
    write_csv(dir, name, "r,value", rows);
}

struct Timer {
    std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
    double ms() const {
        return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start)
            .count();
    }
};

void attach_timing(json& report, const hardy::Config& cfg, const Timer& timer) {
    if (cfg.timing) report["timing_ms"] = timer.ms();
}

// ---------------------------------------------------------------------------

int cmd_analyze(const CommonArgs& args) {
    Timer timer;
    hardy::Config cfg = load_config(args);
    json echo;
    hardy::TripleSpec spec = triple_spec_from(args, cfg, echo);
    hardy::WeightTriple triple = hardy::WeightTriple::from_spec(spec);
    hardy::Certificate cert = hardy::certify(triple, cfg.certify);

    json report = hardy::report_envelope("analyze", echo, cfg);
    report["certificate"] = hardy::to_json(cert);
    json diag = json::array();
    for (const auto& d : triple.M().check_assumptions())
        diag.push_back({{"check", d.check}, {"passed", d.passed}, {"detail", d.detail}});
    report["assumption_M_diagnostics"] = diag;

    if (!args.traces_dir.empty()) {
        write_curve(args.traces_dir, "b1.csv", [&](double r) { return hardy::b1_at(triple, r); },
                    triple.window());
        write_curve(args.traces_dir, "b2.csv", [&](double r) { return hardy::b2_at(triple, r); },
                    triple.window());
        write_curve(args.traces_dir, "L_ratio.csv",
                    [&](double r) { return triple.omega(r) / std::fabs(triple.phi1(r)); },
                    triple.window());
    }

    bool ok = cert.verdict != hardy::Verdict::neither;
    report["exit_code"] = ok ? kExitOk : kExitConditionNotMet;
    attach_timing(report, cfg, timer);
    emit(report, args);
    return ok ? kExitOk : kExitConditionNotMet;
}

std::vector<hardy::TestFunction> load_functions(const std::string& path) {
    json j = read_json_file(path);
    std::vector<hardy::TestFunction> fns;
    if (!j.contains("functions") || !j["functions"].is_array() || j["functions"].empty())
        throw std::runtime_error("functions file must contain a non-empty 'functions' array");
    for (const json& f : j["functions"]) {
        if (f.contains("stock") && f["stock"].get<bool>()) {
            for (auto& s : hardy::stock_test_functions()) fns.push_back(std::move(s));
            continue;
        }
        if (f.contains("builtin")) {
            std::string b = f["builtin"].get<std::string>();
            if (b != "laplace") throw std::runtime_error("unknown builtin function: " + b);
            fns.push_back(hardy::TestFunction::laplace_function());
            continue;
        }
        std::string name = f.value("name", "fn" + std::to_string(fns.size()));
        hardy::Expression u = hardy::Expression::parse(f.at("u").get<std::string>());
        hardy::FunctionKind kind = hardy::FunctionKind::generic;
        if (f.contains("kind")) {
            auto k = hardy::function_kind_from_string(f["kind"].get<std::string>());
            if (!k) throw std::runtime_error("unknown function kind: " + f["kind"].dump());
            kind = *k;
        }
        std::optional<std::pair<double, double>> support;
        if (f.contains("support"))
            support = std::make_pair(f["support"][0].get<double>(), f["support"][1].get<double>());
        if (f.contains("uprime")) {
            hardy::Expression up = hardy::Expression::parse(f["uprime"].get<std::string>());
            fns.push_back(hardy::TestFunction::from_expressions(name, u, up, kind, support));
        } else {
            fns.push_back(hardy::TestFunction::from_expression(name, u, kind, support));
        }
    }
    return fns;
}

int cmd_verify(const CommonArgs& args, const std::string& functions_file, bool use_stock,
               double constant_override, bool with_norms) {
    Timer timer;
    hardy::Config cfg = load_config(args);
    json echo;
    hardy::TripleSpec spec = triple_spec_from(args, cfg, echo);
    hardy::WeightTriple triple = hardy::WeightTriple::from_spec(spec);

    std::vector<hardy::TestFunction> fns;
    if (use_stock) {
        fns = hardy::stock_test_functions();
        echo["functions"] = "stock";
    } else {
        if (functions_file.empty())
            throw std::runtime_error("verify needs --functions <file> or --stock");
        fns = load_functions(functions_file);
        echo["functions"] = functions_file;
    }

    hardy::Certificate cert = hardy::certify(triple, cfg.certify);
    if (constant_override > 0.0) {
        cert.C = constant_override;
        cert.C_tilde = constant_override + 1.0;
        if (cert.verdict == hardy::Verdict::neither) {
            cert.verdict = hardy::Verdict::B1;
            cert.active_branch = hardy::Verdict::B1;
        }
        echo["constant_override"] = constant_override;
    } else if (cert.verdict == hardy::Verdict::neither) {
        throw std::runtime_error(
            "certificate verdict is 'neither'; pass --constant to verify against a supplied C");
    }

    hardy::VerifyOptions vopts = cfg.verify_options();
    std::vector<hardy::VerificationReport> reports(fns.size());
    std::vector<hardy::NormReport> norm_reports(with_norms ? fns.size() : 0);
    int jobs = std::max(1, cfg.jobs);
    std::atomic<std::size_t> next{0};
    auto worker = [&]() {
        for (;;) {
            std::size_t i = next.fetch_add(1);
            if (i >= fns.size()) return;
            reports[i] = hardy::verify(triple, cert, fns[i], vopts);
            if (with_norms) norm_reports[i] = hardy::norm_verify(triple, cert, fns[i], vopts);
        }
    };
    if (jobs == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (int k = 0; k < jobs; ++k) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }

    json report = hardy::report_envelope("verify", echo, cfg);
    report["certificate"] = hardy::to_json(cert);
    json items = json::array();
    bool any_violation = false;
    for (std::size_t i = 0; i < fns.size(); ++i) {
        json item = hardy::to_json(reports[i]);
        if (with_norms) item["norm_form"] = hardy::to_json(norm_reports[i]);
        items.push_back(std::move(item));
        if (reports[i].holds == hardy::Holds::no) any_violation = true;
    }
    report["reports"] = items;
    report["exit_code"] = any_violation ? kExitConditionNotMet : kExitOk;
    attach_timing(report, cfg, timer);
    emit(report, args);
    return any_violation ? kExitConditionNotMet : kExitOk;
}

int cmd_classify(const CommonArgs& args, const std::string& u_expr, const std::string& builtin,
                 const std::string& kind_str, bool with_checks) {
    Timer timer;
    hardy::Config cfg = load_config(args);
    json echo;
    hardy::TripleSpec spec = triple_spec_from(args, cfg, echo);
    hardy::WeightTriple triple = hardy::WeightTriple::from_spec(spec);

    hardy::TestFunction u = [&]() {
        if (!builtin.empty()) {
            if (builtin != "laplace") throw std::runtime_error("unknown builtin: " + builtin);
            return hardy::TestFunction::laplace_function();
        }
        if (u_expr.empty())
            throw std::runtime_error("classify needs --u <expr> or --builtin laplace");
        hardy::FunctionKind kind = hardy::FunctionKind::generic;
        if (!kind_str.empty()) {
            auto k = hardy::function_kind_from_string(kind_str);
            if (!k) throw std::runtime_error("unknown kind: " + kind_str);
            kind = *k;
        }
        return hardy::TestFunction::from_expression("cli_function",
                                                    hardy::Expression::parse(u_expr), kind);
    }();
    echo["u"] = u.u_expr ? u.u_expr->str() : u.name;
    echo["kind"] = hardy::to_string(u.kind);

    hardy::MembershipVerdict direct = hardy::classify_membership(triple, u);
    json report = hardy::report_envelope("classify", echo, cfg);
    report["membership"] = hardy::to_json(direct, true);

    auto quick = hardy::quick_membership(triple, u);
    report["quick_membership"] = quick ? hardy::to_json(*quick, false) : json(nullptr);

    if (with_checks) {
        hardy::RealFn up = [&u](double x) { return std::fabs(u.uprime(x)); };
        hardy::RealFn phi = [&triple](double x) { return triple.phi(x); };
        hardy::ModularResult H = hardy::weighted_modular(
            up, triple.M(), phi, 0.0, std::numeric_limits<double>::infinity(), cfg.quad);
        report["energy_H"] = hardy::to_json(H);
        auto subset = hardy::hardy_subset_conclusion(triple, u, H.finite(), cfg.quad);
        report["hardy_subset"] = subset ? hardy::to_json(*subset, false) : json(nullptr);
        hardy::BoundProfile kprof = hardy::K_bound_profile(triple, cfg.quad);
        hardy::BoundProfile lprof = hardy::L_bound_profile(triple, cfg.quad);
        report["K_bound_check"] = hardy::to_string(kprof.verdict);
        report["L_bound_check"] = hardy::to_string(lprof.verdict);
        if (!args.traces_dir.empty()) {
            std::vector<std::array<double, 2>> krows, lrows;
            for (const auto& [r, v] : kprof.samples) krows.push_back({r, v});
            for (const auto& [r, v] : lprof.samples) lrows.push_back({r, v});
            write_csv(args.traces_dir, "K.csv", "r,value", krows);
            write_csv(args.traces_dir, "L.csv", "r,value", lrows);
        }
    }

    if (!args.traces_dir.empty()) {
        std::vector<std::array<double, 2>> rows;
        for (const auto& s : direct.theta_trace) rows.push_back({s.R, s.theta});
        write_csv(args.traces_dir, "theta.csv", "R,theta", rows);
    }

    report["exit_code"] = kExitOk;
    attach_timing(report, cfg, timer);
    emit(report, args);
    return kExitOk;
}

int cmd_bk(const CommonArgs& args) {
    Timer timer;
    hardy::Config cfg = load_config(args);
    json echo;
    hardy::TripleSpec spec = triple_spec_from(args, cfg, echo);
    hardy::WeightTriple triple = hardy::WeightTriple::from_spec(spec);
    hardy::BKVerdict verdict = hardy::bk_check(triple, cfg.bk, cfg.quad);

    json report = hardy::report_envelope("bk", echo, cfg);
    report["bk"] = hardy::to_json(verdict);
    int rc = verdict.status == hardy::BKStatus::satisfied      ? kExitOk
             : verdict.status == hardy::BKStatus::undetermined ? kExitNumericFailure
                                                               : kExitConditionNotMet;
    report["exit_code"] = rc;
    attach_timing(report, cfg, timer);
    emit(report, args);
    return rc;
}

int cmd_muckenhoupt(const CommonArgs& args, double p) {
    Timer timer;
    hardy::Config cfg = load_config(args);
    json echo;
    hardy::TripleSpec spec = triple_spec_from(args, cfg, echo);
    hardy::WeightTriple triple = hardy::WeightTriple::from_spec(spec);
    if (p <= 1.0) {
        // default to the power index of the triple when --p is omitted
        if (!triple.M().indices_certified() || triple.M().d_index() != triple.M().D_index())
            throw std::runtime_error("muckenhoupt needs --p (triple M is not a plain power)");
        p = triple.M().d_index();
    }
    echo["p"] = p;
    double B = hardy::muckenhoupt_b(p, triple, cfg.quad);

    json report = hardy::report_envelope("muckenhoupt", echo, cfg);
    report["B"] = hardy::jnum(B);
    int rc = std::isnan(B) ? kExitNumericFailure : std::isinf(B) ? kExitConditionNotMet : kExitOk;
    report["exit_code"] = rc;
    attach_timing(report, cfg, timer);
    emit(report, args);
    return rc;
}

int cmd_sharpness(const CommonArgs& args, const std::string& family_arg, long budget) {
    Timer timer;
    hardy::Config cfg = load_config(args);
    json echo;
    hardy::TripleSpec spec = triple_spec_from(args, cfg, echo);
    hardy::WeightTriple triple = hardy::WeightTriple::from_spec(spec);
    hardy::Certificate cert = hardy::certify(triple, cfg.certify);
    if (cert.verdict == hardy::Verdict::neither)
        throw std::runtime_error("sharpness needs a certified triple (verdict B1/B2)");

    hardy::FamilySpec family;
    if (family_arg == "classical_extremal") {
        if (args.catalog_name.rfind("classical:", 0) != 0)
            throw std::runtime_error(
                "--family classical_extremal requires --catalog classical:p=..,alpha=..");
        double p = triple.M().d_index();
        auto pos = args.catalog_name.find("alpha=");
        double alpha = std::stod(args.catalog_name.substr(pos + 6));
        family = hardy::FamilySpec::classical_extremal(p, alpha);
    } else {
        json j = read_json_file(family_arg);
        std::vector<hardy::ParamRange> params;
        for (const json& pj : j.at("params"))
            params.push_back({pj.at("name").get<std::string>(), pj.at("lo").get<double>(),
                              pj.at("hi").get<double>(), pj.value("log", false)});
        family = hardy::FamilySpec::from_template(j.value("name", "family"), params,
                                                  j.at("template").get<std::string>());
    }
    echo["family"] = family.name;
    echo["budget"] = budget;

    hardy::SharpnessResult result =
        hardy::sharpness_search(triple, cert, family, budget, cfg.verify_options());

    json report = hardy::report_envelope("sharpness", echo, cfg);
    report["certificate"] = hardy::to_json(cert);
    report["sharpness"] = hardy::to_json(result);
    int rc = result.violation_found ? kExitConditionNotMet : kExitOk;
    report["exit_code"] = rc;
    attach_timing(report, cfg, timer);
    emit(report, args);
    return rc;
}

int cmd_catalog(const CommonArgs& args, const std::string& action, const std::string& name) {
    hardy::Config cfg = load_config(args);
    if (action == "list") {
        json report = hardy::report_envelope("catalog list", json::object(), cfg);
        report["templates"] = hardy::catalog_templates();
        report["canonical_entries"] = hardy::canonical_entries();
        emit(report, args);
        return kExitOk;
    }
    if (action == "show") {
        if (name.empty()) throw std::runtime_error("catalog show needs an entry name");
        hardy::CatalogEntry entry = hardy::catalog_load(name);
        json echo;
        echo["name"] = entry.name;
        json report = hardy::report_envelope("catalog show", echo, cfg);
        report["description"] = entry.description;
        report["triple"] = {{"M", entry.triple.m},
                            {"phi", entry.triple.phi},
                            {"omega", entry.triple.omega}};
        json expected;
        for (const auto& [key, val] : entry.expected.values)
            expected[key] = {{"value", hardy::jnum(val.value)},
                             {"tol", val.tol},
                             {"source", val.source}};
        if (entry.expected.verdict) expected["verdict"] = hardy::to_string(*entry.expected.verdict);
        if (entry.expected.bk) expected["bk"] = hardy::to_string(*entry.expected.bk);
        report["expected"] = expected;
        emit(report, args);
        return kExitOk;
    }
    throw std::runtime_error("catalog action must be 'list' or 'show'");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"certify and verify weighted Hardy-type inequalities in Orlicz spaces"};
    app.require_subcommand(1);

    CommonArgs args;

    auto* analyze = app.add_subcommand("analyze", "compute b1, b2, L and the certified constant");
    add_common(analyze, args);

    auto* verify = app.add_subcommand("verify", "check the inequality on test functions");
    add_common(verify, args);
    std::string functions_file;
    bool use_stock = false, with_norms = false;
    double constant_override = 0.0;
    verify->add_option("--functions", functions_file, "functions file (JSON)");
    verify->add_flag("--stock", use_stock, "use the built-in stock test set");
    verify->add_option("--constant", constant_override, "override the certified constant C");
    verify->add_flag("--norms", with_norms, "also verify the Luxemburg-norm form");

    auto* classify = app.add_subcommand("classify", "decide membership in R+/R-");
    add_common(classify, args);
    std::string u_expr, builtin, kind_str;
    bool with_checks = false;
    classify->add_option("--u", u_expr, "test function u(r)");
    classify->add_option("--builtin", builtin, "built-in test function (laplace)");
    classify->add_option("--kind", kind_str,
                         "hardy_transform | conjugate_hardy_transform | generic");
    classify->add_flag("--checks", with_checks, "run the K/L boundedness and subset criteria");

    auto* bk = app.add_subcommand("bk", "screen the Bloom-Kerman condition");
    add_common(bk, args);

    auto* muck = app.add_subcommand("muckenhoupt", "L^p Muckenhoupt-type constant");
    add_common(muck, args);
    double p_arg = 0.0;
    muck->add_option("--p", p_arg, "exponent p > 1 (defaults to the triple's power index)");

    auto* sharp = app.add_subcommand("sharpness", "search a family for the best ratio");
    add_common(sharp, args);
    std::string family_arg = "classical_extremal";
    long budget = 10000;
    sharp->add_option("--family", family_arg, "family spec file or 'classical_extremal'");
    sharp->add_option("--budget", budget, "candidate evaluation budget");

    auto* cat = app.add_subcommand("catalog", "list or show built-in triples");
    add_common(cat, args, false);
    std::string cat_action, cat_name;
    cat->add_option("action", cat_action, "list | show")->required();
    cat->add_option("name", cat_name, "entry name for 'show'");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? kExitOk : kExitInputError;
    }

    try {
        if (app.got_subcommand(analyze)) return cmd_analyze(args);
        if (app.got_subcommand(verify))
            return cmd_verify(args, functions_file, use_stock, constant_override, with_norms);
        if (app.got_subcommand(classify))
            return cmd_classify(args, u_expr, builtin, kind_str, with_checks);
        if (app.got_subcommand(bk)) return cmd_bk(args);
        if (app.got_subcommand(muck)) return cmd_muckenhoupt(args, p_arg);
        if (app.got_subcommand(sharp)) return cmd_sharpness(args, family_arg, budget);
        if (app.got_subcommand(cat)) return cmd_catalog(args, cat_action, cat_name);
    } catch (const hardy::IntegrandError& e) {
        std::cerr << "numeric failure: " << e.what() << "\n";
        return kExitNumericFailure;
    } catch (const std::exception& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return kExitInputError;
    }
    return kExitInputError;
}
