#pragma once

#include <optional>
#include <string>
#include <vector>

#include "hardy/expr.hpp"
#include "hardy/gridscan.hpp"
#include "hardy/nfunction.hpp"

namespace hardy {

/// An assumption on the weight triple failed; `which` names it ("mu" for the
/// measure exponent, "omega" for the multiplier), `where` the offending r.
struct AssumptionError : std::runtime_error {
    AssumptionError(std::string which_, const std::string& detail, double where_)
        : std::runtime_error("assumption (" + which_ + ") violated: " + detail),
          which(std::move(which_)),
          where(where_) {}
    std::string which;
    double where;
};

/// Plain-text specification of a triple, as read from a spec file or CLI
/// flags. `m` is a catalog string ("power:p=2") or a grammar expression.
struct TripleSpec {
    std::string m;
    std::string phi;
    std::string omega;
    std::optional<GridSpec> window;
};

/// The bundle (M, phi, omega) together with the derived derivatives and the
/// numeric probe window. Construction validates that phi' keeps one sign and
/// never vanishes on the probe grid and that omega is nonnegative there.
/// Immutable afterwards; all member evaluation is pure.
class WeightTriple {
  public:
    WeightTriple(NFunction M, Expression phi, Expression omega, GridSpec window = {});

    static WeightTriple from_spec(const TripleSpec& spec);

    const NFunction& M() const { return M_; }
    double phi(double r) const noexcept { return phi_(r); }
    double phi1(double r) const noexcept { return phi1_(r); }
    double phi2(double r) const noexcept { return phi2_(r); }
    double omega(double r) const noexcept { return omega_(r); }
    double omega1(double r) const noexcept { return omega1_(r); }

    const Expression& phi_expr() const { return phi_; }
    const Expression& phi1_expr() const { return phi1_; }
    const Expression& phi2_expr() const { return phi2_; }
    const Expression& omega_expr() const { return omega_; }
    const Expression& omega1_expr() const { return omega1_; }

    const GridSpec& window() const { return window_; }
    int phi1_sign() const { return phi1_sign_; }

  private:
    NFunction M_;
    Expression phi_, phi1_, phi2_;
    Expression omega_, omega1_;
    GridSpec window_;
    int phi1_sign_ = 0;
};

enum class Verdict { B1, B2, both, neither };

std::string to_string(Verdict v);

struct Certificate {
    double b1 = 0.0;  // inf of b1(r); +inf for an empty defining set
    double b2 = 0.0;
    double L = 0.0;  // sup of omega/|phi'|; +inf on divergence
    Verdict verdict = Verdict::neither;
    std::optional<double> C;        // present iff verdict != neither
    std::optional<double> C_tilde;  // C + 1
    Verdict active_branch = Verdict::neither;  // branch that produced C
    double d_M = 1.0;
    double D_M = 1.0;
    bool indices_certified = false;
    bool certified = false;  // indices certified and no probe irregularities
    std::vector<std::string> flags;
    std::vector<std::string> notes;  // standing limitations of the numeric scheme
    double b1_at_r = 0.0;  // probe location realizing each extremum
    double b2_at_r = 0.0;
    double L_at_r = 0.0;
};

struct CertifyOptions {
    double tol_pos = 1e-10;  // strict-positivity threshold for b1/b2
};

/// Pointwise b1(r): 1 + phi''/phi'^2 - (omega'/(omega phi')) [d 1_G + D 1_F],
/// with the cross term dropped outside F and G (omega = 0 or omega' phi' = 0).
/// NaN when phi'(r) = 0.
double b1_at(const WeightTriple& t, double r) noexcept;

/// Mirror of b1_at with swapped index roles and flipped signs.
double b2_at(const WeightTriple& t, double r) noexcept;

enum class BFunction { b1, b2 };

/// Infimum of b1 or b2 over the probe window (grid + golden refinement +
/// directional end limits).
ScanResult infimum_b(const WeightTriple& t, BFunction which);

/// Supremum of omega(r)/|phi'(r)| over the probe window; values running past
/// 1e12 with an increasing trend are reported as +inf.
ScanResult sup_L(const WeightTriple& t);

/// Decide (B1)/(B2) and assemble the certified constants
///   C = c(L D^2 / (b d)),  C~ = C + 1,
/// taking the branch with the smaller C when both conditions hold.
Certificate certify(const WeightTriple& t, const CertifyOptions& opts = {});

}  // namespace hardy
