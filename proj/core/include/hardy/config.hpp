#pragma once

#include <string>

#include "hardy/bloomkerman.hpp"
#include "hardy/gridscan.hpp"
#include "hardy/integrate.hpp"
#include "hardy/verifier.hpp"
#include "hardy/weights.hpp"

namespace hardy {

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Tolerance ledger: every knob a run actually uses. Reports embed the full
/// ledger so no default is silent.
struct Config {
    QuadOptions quad;
    GridSpec probe;
    CertifyOptions certify;
    BKOptions bk;
    double compare_slack = 1e-6;
    int jobs = 1;
    bool timing = false;

    VerifyOptions verify_options() const { return {quad, compare_slack}; }

    /// key=value lines; '#' starts a comment. Grid lists are comma-separated.
    static Config from_file(const std::string& path);
    void apply_line(const std::string& line);
};

}  // namespace hardy
