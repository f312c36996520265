#pragma once

#include <optional>
#include <string>
#include <vector>

#include "hardy/expr.hpp"
#include "hardy/gridscan.hpp"

namespace hardy {

/// Raised when a candidate M fails a structural requirement (not convex,
/// growth ratio below 1, unbounded growth ratio, ...).
struct NFunctionError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Diagnostic {
    std::string check;
    bool passed;
    std::string detail;
};

struct IndexEstimate {
    double d_M = 1.0;
    double D_M = 1.0;
    bool certified = false;     // true only for closed forms with analytic indices
    bool delta2_failed = false; // growth ratio exceeded the cap
};

/// Estimate the Simonenko indices of M as inf/sup of lambda*M'(lambda)/M(lambda)
/// over a log grid with golden-section refinement and end-limit extrapolation.
/// D estimates are capped at 1e3; beyond the cap the Delta2 condition is
/// declared failed. Throws NFunctionError when the ratio dips below 1 or M is
/// not positive on the grid.
IndexEstimate simonenko_indices(const Expression& M, const GridSpec& grid = {1e-8, 1e8, 2001});

/// An N-function M with its growth indices, comparison function and Young
/// conjugate. Immutable and safe to share across threads.
class NFunction {
  public:
    /// M(x) = x^p, p > 1. Exact indices (p, p) and closed-form conjugate.
    static NFunction make_power(double p);

    /// M(x) = x^p + x^q, p,q > 1. Exact indices (min, max); numeric conjugate.
    static NFunction make_power_sum(double p, double q);

    /// Any grammar expression in r (read as M(r)). Indices come from the grid
    /// estimator and are flagged non-certified.
    static NFunction from_expression(Expression M, const GridSpec& grid = {1e-8, 1e8, 2001});

    /// Accepts catalog names "power:p=<real>" and "power_sum:p=<real>,q=<real>",
    /// else falls back to parsing the string as an expression.
    static NFunction from_spec(const std::string& spec);

    double m(double x) const noexcept { return m_(x); }
    double mprime(double x) const noexcept { return mprime_(x); }

    /// ln M(x) computed stably even where M itself overflows (closed forms).
    double log_m(double x) const noexcept;

    double d_index() const { return d_; }
    double D_index() const { return D_; }
    bool indices_certified() const { return certified_; }

    /// Comparison function c(t) = max(t^d, t^D). Strictly increasing, c(1)=1;
    /// overflow is signaled as +inf.
    double comparison(double t) const noexcept;

    /// Inverse of the comparison function: t^(1/d) below 1, t^(1/D) above.
    double comparison_inverse(double t) const noexcept;
    double log_comparison_inverse(double log_t) const noexcept;

    /// Young conjugate M*(y) = sup_x (x y - M(x)). Closed form when the
    /// catalog provides one, else solved numerically via M'(x) = y.
    double conjugate(double y) const;

    /// Pass/fail diagnostics for the structural assumptions on M: convexity,
    /// M(0)=0, superlinearity, the index inequality with the stored (d, D),
    /// Delta2, and the d>1 flag (conjugate Delta2).
    std::vector<Diagnostic> check_assumptions() const;

    const std::string& name() const { return name_; }
    const Expression& expr() const { return m_; }
    const Expression& prime_expr() const { return mprime_; }
    const std::optional<Expression>& conjugate_expr() const { return conjugate_; }

  private:
    NFunction(Expression m, Expression mp, std::optional<Expression> conj, double d, double D,
              bool certified, std::string name)
        : m_(std::move(m)),
          mprime_(std::move(mp)),
          conjugate_(std::move(conj)),
          d_(d),
          D_(D),
          certified_(certified),
          name_(std::move(name)) {}

    Expression m_;
    Expression mprime_;
    std::optional<Expression> conjugate_;
    double d_;
    double D_;
    bool certified_;
    std::string name_;
    // closed-form log evaluation for powers: log M = p log x (+ sum handling)
    double power_p_ = 0.0;
    double power_q_ = 0.0;
    enum class Form { power, power_sum, generic } form_ = Form::generic;
};

}  // namespace hardy
