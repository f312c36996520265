#pragma once

#include <cstdio>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>

#include "hardy/nfunction.hpp"

namespace hardy {

using RealFn = std::function<double(double)>;

/// The integrand (or one of its ingredients) evaluated to NaN at an
/// interior point: a genuine domain error, not a convergence issue.
struct IntegrandError : std::runtime_error {
    IntegrandError(const std::string& what_part, double at)
        : std::runtime_error(what_part + " not defined at x=" + format_at(at)), x(at) {}
    double x;

  private:
    static std::string format_at(double v) {
        char buf[32];
        std::snprintf(buf, sizeof(buf), "%.6g", v);
        return buf;
    }
};

struct QuadOptions {
    double rel_tol = 1e-10;          // relative tolerance target
    long panel_budget = 1'000'000;   // max integrand evaluations per call
    double divergence_factor = 1.5;  // growth factor per tail doubling
    int divergence_doublings = 8;    // successive growths before declaring divergence
    // Optional analytic tail exponents: f(x) ~ x^eta at the given end. When
    // supplied they settle the finite/infinite call that no quadrature can
    // prove (divergent immediately, or trusted-convergent at the range cap).
    std::optional<double> tail_exponent_zero;
    std::optional<double> tail_exponent_infinity;
};

enum class QuadStatus {
    converged,
    diverges_at_zero,
    diverges_at_infinity,
    tolerance_not_met,
};

struct ModularResult {
    double value = 0.0;
    QuadStatus status = QuadStatus::converged;
    double abs_error = 0.0;

    bool finite() const { return status == QuadStatus::converged; }
    bool divergent() const {
        return status == QuadStatus::diverges_at_zero || status == QuadStatus::diverges_at_infinity;
    }
};

/// Integrate f over (a, b) with 0 <= a < b <= +inf. The substitution x = e^t
/// maps the half line to the real line; adaptive Gauss-Kronrod panels cover a
/// core window and the tails are extended by doubling until the running tail
/// contribution drops below tolerance. A tail whose doublings keep growing
/// the total by more than `divergence_factor` (for `divergence_doublings`
/// successive steps), or that overflows, is declared divergent.
ModularResult integrate_improper(const RealFn& f, double a, double b, const QuadOptions& opts = {});

/// The weighted modular  integral of M(|g(x)|) e^{-phi(x)} dx over (a, b).
ModularResult weighted_modular(const RealFn& g, const NFunction& M, const RealFn& phi, double a,
                               double b, const QuadOptions& opts = {});
ModularResult weighted_modular(const Expression& g, const NFunction& M, const Expression& phi,
                               double a, double b, const QuadOptions& opts = {});

enum class NormStatus { ok, zero, infinite, failed };

struct NormResult {
    double value = 0.0;
    NormStatus status = NormStatus::ok;

    bool finite() const { return status == NormStatus::ok || status == NormStatus::zero; }
};

/// Luxemburg norm: the unique K > 0 with  integral of M(|f|/K) e^{-phi} dx = 1,
/// found by a doubling bracket and bisection to 1e-10 relative. Returns 0 for
/// f identically zero and signals an infinite norm when no scaling makes the
/// modular finite.
NormResult luxemburg_norm(const RealFn& f, const NFunction& M, const RealFn& phi, double a, double b,
                          const QuadOptions& opts = {});
NormResult luxemburg_norm(const Expression& f, const NFunction& M, const Expression& phi, double a,
                          double b, const QuadOptions& opts = {});

/// Two-sided bracket for the dual (pairing) norm of f in the M*-space over
/// (a, b) with Lebesgue measure: the dual norm lies in [Lux, 2 Lux] where Lux
/// is the Luxemburg norm computed in M*. `mstar_of` evaluates M*.
std::pair<double, double> dual_norm_bounds(const RealFn& f, const RealFn& mstar_of, double a,
                                           double b, const QuadOptions& opts = {});

/// Luxemburg norm for an arbitrary Young-type integrand Phi (used for the
/// conjugate-space norms where no NFunction object exists).
NormResult luxemburg_norm_phi(const RealFn& f, const RealFn& Phi, const RealFn& phi, double a,
                              double b, const QuadOptions& opts = {});

}  // namespace hardy
