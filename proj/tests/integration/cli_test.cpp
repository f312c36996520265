#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <json.hpp>

#include <array>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <string>

using json = nlohmann::ordered_json;

namespace {

std::string cli_path() {
    const char* p = std::getenv("HARDYCT_BIN");
    REQUIRE_MESSAGE(p != nullptr, "HARDYCT_BIN must point at the hardyct binary");
    return p;
}

struct RunResult {
    int exit_code;
    std::string output;
};

RunResult run(const std::string& args) {
    std::string cmd = cli_path() + " " + args + " 2>/dev/null";
    std::array<char, 4096> buf{};
    std::string out;
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    while (std::size_t n = std::fread(buf.data(), 1, buf.size(), pipe)) out.append(buf.data(), n);
    int rc = pclose(pipe);
    return {WEXITSTATUS(rc), out};
}

void write_file(const std::string& path, const std::string& text) {
    std::ofstream f(path, std::ios::binary);
    f << text;
}

}  // namespace

TEST_SUITE("cli") {
    TEST_CASE("analyze emits the classical certificate with exit 0") {
        RunResult r = run("analyze --catalog classical:p=2,alpha=4");
        CHECK(r.exit_code == 0);
        json j = json::parse(r.output);
        CHECK(j["schema_version"] == 1);
        CHECK(j["certificate"]["verdict"] == "B1");
        CHECK(std::fabs(j["certificate"]["C"].get<double>() - 4.0 / 9.0) < 1e-9);
        CHECK(j["certificate"]["b1"].get<double>() == doctest::Approx(0.75));
        CHECK(j["config"].contains("quad.rel_tol"));
    }

    TEST_CASE("analyze accepts inline triples") {
        RunResult r = run("analyze --M power:p=2 --phi \"-4*ln(r)\" --omega 1/r");
        CHECK(r.exit_code == 0);
        json j = json::parse(r.output);
        CHECK(std::fabs(j["certificate"]["C"].get<double>() - 4.0 / 9.0) < 1e-9);
    }

    TEST_CASE("grammar violations exit with the input-error code") {
        CHECK(run("analyze --M power:p=2 --phi \"sin(r)\" --omega 1/r").exit_code == 2);
        CHECK(run("analyze --M power:p=0.5 --phi \"-ln(r)\" --omega 1/r").exit_code == 2);
        CHECK(run("analyze --M power:p=2 --phi \"1\" --omega 1/r").exit_code == 2);
        CHECK(run("analyze").exit_code == 2);
        CHECK(run("frobnicate").exit_code == 2);
    }

    TEST_CASE("boundary case with no verdict exits 1") {
        RunResult r = run("analyze --catalog classical:p=2,alpha=1");
        CHECK(r.exit_code == 1);
        json j = json::parse(r.output);
        CHECK(j["certificate"]["verdict"] == "neither");
    }

    TEST_CASE("verify without a verdict requires the --constant override") {
        CHECK(run("verify --catalog classical:p=2,alpha=1 --stock").exit_code == 2);
        RunResult r = run("verify --catalog classical:p=2,alpha=1 --stock --constant 100");
        CHECK(r.exit_code == 0);
        json j = json::parse(r.output);
        CHECK(j["input"]["constant_override"].get<double>() == doctest::Approx(100.0));
        CHECK(j["certificate"]["C"].get<double>() == doctest::Approx(100.0));
    }

    TEST_CASE("verify on the stock set records divergences without failing") {
        RunResult r = run("verify --catalog gaussian_counterexample:p=2 --stock");
        CHECK(r.exit_code == 0);
        json j = json::parse(r.output);
        bool laplace_divergence = false;
        for (const auto& rep : j["reports"]) {
            CHECK(rep["holds"] != "no");
            if (rep["function"] == "laplace" && rep["holds"] == "violated_divergence")
                laplace_divergence = true;
        }
        CHECK(laplace_divergence);
    }

    TEST_CASE("verify reads a functions file and rejects an empty one") {
        write_file("/tmp/hardyct_fns.json", R"json({"functions": [
            {"name": "bump", "u": "max(0,min(min(r-1,1),3-r))", "support": [1,3]},
            {"builtin": "laplace"}
        ]})json");
        RunResult r = run("verify --catalog classical:p=2,alpha=4 --functions /tmp/hardyct_fns.json");
        CHECK(r.exit_code == 0);
        json j = json::parse(r.output);
        CHECK(j["reports"].size() == 2);
        CHECK(j["reports"][0]["holds"] == "yes");

        write_file("/tmp/hardyct_empty.json", R"json({"functions": []})json");
        CHECK(run("verify --catalog classical:p=2,alpha=4 --functions /tmp/hardyct_empty.json")
                  .exit_code == 2);
        CHECK(run("verify --catalog classical:p=2,alpha=4 --functions /nonexistent.json")
                  .exit_code == 2);
    }

    TEST_CASE("verify --jobs changes nothing but the echoed ledger entry") {
        RunResult a = run("verify --catalog classical:p=2,alpha=4 --stock --jobs 1");
        RunResult b = run("verify --catalog classical:p=2,alpha=4 --stock --jobs 4");
        CHECK(a.exit_code == 0);
        json ja = json::parse(a.output), jb = json::parse(b.output);
        CHECK(ja["config"]["jobs"] == 1);
        CHECK(jb["config"]["jobs"] == 4);
        ja["config"].erase("jobs");
        jb["config"].erase("jobs");
        CHECK(ja.dump() == jb.dump());
    }

    TEST_CASE("classify reports membership with the theta trace") {
        RunResult r = run("classify --catalog classical:p=2,alpha=4 --u \"max(0,min(min(r-1,1),3-r))\"");
        CHECK(r.exit_code == 0);
        json j = json::parse(r.output);
        CHECK(j["membership"]["in_Rplus"] == "yes");
        CHECK(j["membership"]["in_Rminus"] == "yes");
        CHECK(j["membership"]["theta_trace"].size() == 41);

        RunResult rl = run("classify --catalog gaussian_counterexample:p=2 --builtin laplace");
        json jl = json::parse(rl.output);
        CHECK(jl["membership"]["in_Rminus"] == "yes");
        CHECK(jl["membership"]["in_Rplus"] == "no");
    }

    TEST_CASE("bk screens the catalog entries") {
        RunResult g = run("bk --catalog gaussian_counterexample:p=2");
        CHECK(g.exit_code == 1);
        json jg = json::parse(g.output);
        CHECK(jg["bk"]["status"] == "violated_G_infinite");
        CHECK(jg["bk"]["witness"]["eps"].get<double>() == doctest::Approx(0.01));

        RunResult c = run("bk --catalog classical:p=2,alpha=-1");
        CHECK(c.exit_code == 0);
        CHECK(json::parse(c.output)["bk"]["status"] == "satisfied");
    }

    TEST_CASE("muckenhoupt uses the triple power index by default") {
        RunResult r = run("muckenhoupt --catalog classical:p=2,alpha=0.5");
        CHECK(r.exit_code == 0);
        json j = json::parse(r.output);
        CHECK(j["B"].get<double>() == doctest::Approx(4.0).epsilon(1e-5));

        CHECK(run("muckenhoupt --catalog gaussian_counterexample:p=2").exit_code == 1);
    }

    TEST_CASE("sharpness reaches most of the classical constant") {
        RunResult r =
            run("sharpness --catalog classical:p=2,alpha=4 --family classical_extremal --budget 2000");
        CHECK(r.exit_code == 0);
        json j = json::parse(r.output);
        double best = j["sharpness"]["best_ratio"].get<double>();
        CHECK(best >= 0.4);
        CHECK(best <= 4.0 / 9.0 * (1.0 + 1e-6));
        CHECK_FALSE(j["sharpness"]["violation_found"].get<bool>());
    }

    TEST_CASE("sharpness accepts a family template file") {
        write_file("/tmp/hardyct_family.json", R"json({
            "name": "bumps",
            "params": [{"name": "c", "lo": 0.5, "hi": 4.0},
                       {"name": "w", "lo": 1.5, "hi": 8.0}],
            "template": "max(0,min(min(r-%c%,1),%c%*%w%-r))"
        })json");
        RunResult r = run(
            "sharpness --catalog classical:p=2,alpha=4 --family /tmp/hardyct_family.json --budget 500");
        CHECK(r.exit_code == 0);
        json j = json::parse(r.output);
        CHECK(j["sharpness"]["best_ratio"].get<double>() > 0.0);
    }

    TEST_CASE("catalog list and show") {
        RunResult l = run("catalog list");
        CHECK(l.exit_code == 0);
        json jl = json::parse(l.output);
        CHECK(jl["templates"].size() == 4);

        RunResult s = run("catalog show classical:p=2,alpha=4");
        CHECK(s.exit_code == 0);
        json js = json::parse(s.output);
        CHECK(js["triple"]["phi"] == "-4*ln(r)");
        CHECK(js["expected"]["verdict"] == "B1");

        CHECK(run("catalog show mystery:p=1").exit_code == 2);
    }

    TEST_CASE("config file overrides land in the tolerance ledger") {
        write_file("/tmp/hardyct_cfg.txt", "quad.rel_tol = 1e-6\nprobe.points = 801\n");
        RunResult r = run("analyze --catalog classical:p=2,alpha=4 --config /tmp/hardyct_cfg.txt");
        CHECK(r.exit_code == 0);
        json j = json::parse(r.output);
        CHECK(j["config"]["quad.rel_tol"].get<double>() == doctest::Approx(1e-6));
        CHECK(j["config"]["probe.points"] == 801);

        write_file("/tmp/hardyct_bad.txt", "nonsense.key = 3\n");
        CHECK(run("analyze --catalog classical:p=2,alpha=4 --config /tmp/hardyct_bad.txt")
                  .exit_code == 2);
    }

    TEST_CASE("triple spec files with window overrides") {
        write_file("/tmp/hardyct_triple.json", R"json({
            "M": "power:p=2", "phi": "-4*ln(r)", "omega": "1/r",
            "window": {"lo": 1e-6, "hi": 1e6, "points": 2001}
        })json");
        RunResult r = run("analyze --triple /tmp/hardyct_triple.json");
        CHECK(r.exit_code == 0);
        json j = json::parse(r.output);
        CHECK(j["input"]["window"]["points"] == 2001);
        CHECK(std::fabs(j["certificate"]["C"].get<double>() - 4.0 / 9.0) < 1e-9);
    }

    TEST_CASE("traces are written as CSV curves") {
        std::system("mkdir -p /tmp/hardyct_traces && rm -f /tmp/hardyct_traces/*.csv");
        RunResult r = run("analyze --catalog classical:p=2,alpha=4 --traces /tmp/hardyct_traces");
        CHECK(r.exit_code == 0);
        std::ifstream b1("/tmp/hardyct_traces/b1.csv");
        REQUIRE(b1.good());
        std::string header;
        std::getline(b1, header);
        CHECK(header == "r,value");
        std::string first;
        std::getline(b1, first);
        CHECK(first.find(',') != std::string::npos);

        RunResult c = run(
            "classify --catalog classical:p=2,alpha=4 --u r --traces /tmp/hardyct_traces");
        CHECK(c.exit_code == 0);
        std::ifstream th("/tmp/hardyct_traces/theta.csv");
        CHECK(th.good());
    }

    TEST_CASE("reports are byte-identical across repeated runs") {
        const char* cmds[] = {
            "analyze --catalog classical:p=2,alpha=4",
            "verify --catalog classical:p=2,alpha=4 --stock",
            "classify --catalog classical:p=2,alpha=4 --u r",
            "bk --catalog classical:p=2,alpha=-1",
        };
        for (const char* cmd : cmds) {
            RunResult a = run(cmd);
            RunResult b = run(cmd);
            CHECK_MESSAGE(a.output == b.output, "nondeterministic output for: ", cmd);
            CHECK(a.exit_code == b.exit_code);
        }
    }

    TEST_CASE("timing is opt-in so default reports stay deterministic") {
        RunResult r = run("analyze --catalog classical:p=2,alpha=4 --timing");
        json j = json::parse(r.output);
        CHECK(j.contains("timing_ms"));
        RunResult plain = run("analyze --catalog classical:p=2,alpha=4");
        CHECK_FALSE(json::parse(plain.output).contains("timing_ms"));
    }
}
