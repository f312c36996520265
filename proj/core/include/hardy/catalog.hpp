#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "hardy/bloomkerman.hpp"
#include "hardy/weights.hpp"

namespace hardy {

struct CatalogError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// An analytic fact attached to a catalog entry. `source` records how the
/// number was obtained: a closed form or a frozen numeric fixture.
struct ExpectedValue {
    double value = 0.0;
    double tol = 1e-8;
    std::string source;
};

struct ExpectedFacts {
    std::map<std::string, ExpectedValue> values;  // keys: b1, b2, L, C, s_sup
    std::optional<Verdict> verdict;
    std::optional<BKStatus> bk;
};

struct CatalogEntry {
    std::string name;
    std::string description;
    TripleSpec triple;
    ExpectedFacts expected;

    WeightTriple instantiate() const { return WeightTriple::from_spec(triple); }
};

/// Entry name templates understood by load():
///   classical:p=<real>,alpha=<real>
///   omega_phi_prime:p=<real>,alpha=<real>
///   log_weights:alpha=<real>,beta=<real>,p=<real>
///   gaussian_counterexample:p=<real>
std::vector<std::string> catalog_templates();

/// Canonical parameterizations used as fixtures across the test suites.
std::vector<std::string> canonical_entries();

/// Load a fully populated entry. Unknown names raise CatalogError listing
/// the available templates.
CatalogEntry catalog_load(const std::string& name);

/// sup over r > 0 of phi''/(phi')^2 for the logarithmic weight
/// phi(r) = -alpha ln r - beta ln ln(1+r), via the standard probe scheme.
double s_log_weight_sup(double alpha, double beta);

/// Frozen estimator output for s_log_weight_sup(1, 1) (regression fixture).
double s_log_weight_sup_11_fixture();

}  // namespace hardy
