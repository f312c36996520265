#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "hardy/classify.hpp"
#include "hardy/integrate.hpp"
#include "hardy/weights.hpp"

namespace hardy {

enum class Holds { yes, no, vacuous, violated_divergence, undetermined };

std::string to_string(Holds h);

struct VerificationReport {
    std::string function_name;
    ModularResult J;  // modular of omega |u|
    ModularResult H;  // modular of |u'|
    std::optional<double> ratio;
    std::optional<double> C;
    Holds holds = Holds::undetermined;
    MembershipVerdict membership;
    bool in_certified_class = false;
    bool out_of_class_excess = false;  // ratio above C but u outside the class
    std::string diagnostics;
};

struct VerifyOptions {
    QuadOptions quad;
    double compare_slack = 1e-6;  // relative slack separating noise from violations
};

/// Evaluate both sides of the modular inequality for one test function and
/// compare against the certified constant. `holds = no` requires membership
/// in the certified class; a ratio excess for an out-of-class function is
/// reported as information, not as a violation.
VerificationReport verify(const WeightTriple& t, const Certificate& cert, const TestFunction& u,
                          const VerifyOptions& opts = {});

struct NormReport {
    std::string function_name;
    NormResult lhs;  // Luxemburg norm of omega u
    NormResult rhs;  // Luxemburg norm of u'
    std::optional<double> ratio;
    std::optional<double> C_tilde;
    Holds holds = Holds::undetermined;
    std::string diagnostics;
};

/// Norm form of the inequality with constant C~ = C + 1.
NormReport norm_verify(const WeightTriple& t, const Certificate& cert, const TestFunction& u,
                       const VerifyOptions& opts = {});

struct ParamRange {
    std::string name;
    double lo = 0.0;
    double hi = 1.0;
    bool log_scale = false;
};

/// A parametrized family of test functions for the sharpness probe. `make`
/// receives one value per parameter, in order.
struct FamilySpec {
    std::string name;
    std::vector<ParamRange> params;
    std::function<TestFunction(const std::vector<double>&)> make;

    /// Template with %name% placeholders substituted by decimal literals,
    /// e.g. "r^(-1.5+%eps%)*exp(-%a%/r-r/%b%)".
    static FamilySpec from_template(std::string name, std::vector<ParamRange> params,
                                    std::string expr_template,
                                    FunctionKind kind = FunctionKind::generic);

    /// The truncated power family that realizes the classical constant:
    /// u = r^(kappa0 + eps) exp(-a/r - r/b) with kappa0 = (p-1-alpha)/p.
    static FamilySpec classical_extremal(double p, double alpha);
};

struct SharpnessResult {
    double best_ratio = 0.0;
    std::vector<double> best_params;
    long evaluations = 0;
    long skipped_out_of_class = 0;
    bool budget_exhausted = false;
    bool violation_found = false;  // best ratio exceeded C beyond slack
};

/// Coordinate search over the family parameters maximizing the modular
/// ratio J/H among members of the certified class.
SharpnessResult sharpness_search(const WeightTriple& t, const Certificate& cert,
                                 const FamilySpec& family, long budget,
                                 const VerifyOptions& opts = {});

/// The documented stock set: compact trapezoids, powers with two-sided
/// smooth cutoffs, exponential-tail ramps, the Laplace function, and a
/// near-extremal truncated power.
std::vector<TestFunction> stock_test_functions();

}  // namespace hardy
