#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "hardy/integrate.hpp"
#include "hardy/weights.hpp"

namespace hardy {

enum class BKStatus { satisfied, violated_G_infinite, violated_no_B, undetermined };

std::string to_string(BKStatus s);

struct BKVerdict {
    BKStatus status = BKStatus::undetermined;
    std::optional<std::pair<double, double>> witness;  // (eps, y) with G divergent
    std::optional<double> B_found;
    bool certified = false;  // grid-level screens are never certified
    std::string note;
};

std::vector<double> default_bk_grid();  // 7 log-spaced points in [1e-2, 1e2]

struct BKOptions {
    std::vector<double> eps_grid = default_bk_grid();
    std::vector<double> y_grid = default_bk_grid();
    double B_lo = 1e-6;
    double B_hi = 1e6;
};

/// G(eps, y) = integral over (y, inf) of M(eps omega(x)) e^{-phi(x)} dx.
ModularResult G_of(const WeightTriple& t, double eps, double y, const QuadOptions& opts = {});

/// Screen the specialized Bloom-Kerman condition on an (eps, y) grid:
/// a divergent G anywhere refutes it with a witness; otherwise a constant B
/// is searched by doubling so that the conjugate-modular integral stays
/// below G at every grid point.
BKVerdict bk_check(const WeightTriple& t, const BKOptions& bk = {}, const QuadOptions& opts = {});

/// The L^p Muckenhoupt-type constant
///   B = sup_r ( integral_r^inf omega^p e^{-phi} ) ( integral_0^r e^{phi/(p-1)} )^{p-1},
/// evaluated over the probe window via cumulative panel sums; +inf on
/// divergence of either factor.
double muckenhoupt_b(double p, const WeightTriple& t, const QuadOptions& opts = {});

}  // namespace hardy
