#pragma once

#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "hardy/integrate.hpp"
#include "hardy/weights.hpp"

namespace hardy {

enum class FunctionKind { hardy_transform, conjugate_hardy_transform, generic };

std::string to_string(FunctionKind k);
std::optional<FunctionKind> function_kind_from_string(const std::string& s);

/// A test function u with its derivative. Most functions come from grammar
/// expressions; a few built-ins (the error-function primitive) are supplied
/// as native evaluators. `kind` records the declared vanishing end:
/// hardy_transform for u(0+) = 0, conjugate_hardy_transform for u(inf) = 0.
struct TestFunction {
    std::string name;
    RealFn u;
    RealFn uprime;
    FunctionKind kind = FunctionKind::generic;
    std::optional<std::pair<double, double>> support;  // declared compact support
    std::optional<Expression> u_expr, uprime_expr;

    static TestFunction from_expression(std::string name, const Expression& u,
                                        FunctionKind kind = FunctionKind::generic,
                                        std::optional<std::pair<double, double>> support = {});
    static TestFunction from_expressions(std::string name, const Expression& u,
                                         const Expression& uprime,
                                         FunctionKind kind = FunctionKind::generic,
                                         std::optional<std::pair<double, double>> support = {});

    /// u(r) = integral of exp(-tau^2) from 0 to r; u' = exp(-r^2).
    static TestFunction laplace_function();

    /// u(lambda r) with the chain-rule derivative.
    TestFunction dilated(double lambda) const;
};

enum class Tri { yes, no, undetermined };

std::string to_string(Tri t);

enum class ClassifyMethod { direct_limit, prop51, lemma52, lemma54, compact_support };

std::string to_string(ClassifyMethod m);

struct ThetaSample {
    double s;      // s_n -> 0
    double R;      // R_n -> infinity
    double theta;  // boundary difference h(R)e^{-phi(R)} - h(s)e^{-phi(s)}
};

struct MembershipVerdict {
    Tri in_Rplus = Tri::undetermined;
    Tri in_Rminus = Tri::undetermined;
    std::vector<ThetaSample> theta_trace;
    ClassifyMethod method = ClassifyMethod::direct_limit;
    std::string note;
};

/// The boundary function h(r) = M(omega(r)|u(r)|) / phi'(r).
double h_value(const WeightTriple& t, const TestFunction& u, double r);

/// h(r) e^{-phi(r)} evaluated through logarithms (robust to weight overflow).
double boundary_term(const WeightTriple& t, const TestFunction& u, double r);

/// Direct limit test along s_n = 1e-2 * 2^-n, R_n = 1e2 * 2^n, n = 0..40.
/// A convergent theta trend with limit >= 0 (resp. <= 0) certifies R+ (resp.
/// R-); a trend to 0 certifies both; `no` is declared only when every probed
/// tail keeps the strict opposite sign; anything else is undetermined.
MembershipVerdict classify_membership(const WeightTriple& t, const TestFunction& u);

/// Dual-space norm bounds of 1/f_phi on (0, r) (lower, upper); f_phi is the
/// inverse comparison function of the weight. (+inf, +inf) when divergent.
std::pair<double, double> A_phi(const WeightTriple& t, double r, const QuadOptions& opts = {});

/// Mirror of A_phi on (r, infinity).
std::pair<double, double> B_phi(const WeightTriple& t, double r, const QuadOptions& opts = {});

enum class BoundCheck { bounded, unbounded, undetermined };

std::string to_string(BoundCheck b);

struct BoundProfile {
    BoundCheck verdict = BoundCheck::undetermined;
    std::vector<std::pair<double, double>> samples;  // (r, value) along the probes
};

/// Boundedness of K(r) = M(omega(r) A_phi(r)) e^{-phi(r)} / |phi'(r)| along
/// r = 2^-k, k = 1..40 (upper A_phi bound; threshold 1e6, non-increasing tail).
BoundCheck K_bound_check(const WeightTriple& t, const QuadOptions& opts = {});
BoundProfile K_bound_profile(const WeightTriple& t, const QuadOptions& opts = {});

/// Mirror along R = 2^k for L(R) built from B_phi.
BoundCheck L_bound_check(const WeightTriple& t, const QuadOptions& opts = {});
BoundProfile L_bound_profile(const WeightTriple& t, const QuadOptions& opts = {});

/// Limit-based shortcut: when phi' decays to zero at one end and u together
/// with u e^{-phi} stay bounded there, the sign of phi' settles membership at
/// that end. Returns nothing when the hypotheses fail numerically.
std::optional<MembershipVerdict> quick_membership(const WeightTriple& t, const TestFunction& u);

/// Subset conclusions for (conjugate) Hardy transforms with finite energy
/// integral: the K-check (for u(0+)=0) or L-check (for u(inf)=0) plus the
/// sign of phi' yields the membership. H_finite is the caller's finding that
/// the energy integral of M(|u'|) e^{-phi} converges.
std::optional<MembershipVerdict> hardy_subset_conclusion(const WeightTriple& t,
                                                         const TestFunction& u, bool H_finite,
                                                         const QuadOptions& opts = {});

}  // namespace hardy
