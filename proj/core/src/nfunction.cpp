#include "hardy/nfunction.hpp"

#include <charconv>
#include <cmath>
#include <limits>

namespace hardy {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kDeltaCap = 1e3;

std::string fmt(double v) {
    char buf[40];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

double parse_param(const std::string& spec, const std::string& key) {
    auto pos = spec.find(key + "=");
    if (pos == std::string::npos) throw NFunctionError("missing parameter '" + key + "' in '" + spec + "'");
    pos += key.size() + 1;
    auto end = spec.find(',', pos);
    std::string val = spec.substr(pos, end == std::string::npos ? std::string::npos : end - pos);
    double out = 0.0;
    auto res = std::from_chars(val.data(), val.data() + val.size(), out);
    if (res.ec != std::errc()) throw NFunctionError("malformed value for '" + key + "' in '" + spec + "'");
    return out;
}

}  // namespace

IndexEstimate simonenko_indices(const Expression& M, const GridSpec& grid) {
    Expression Mp = M.derivative();
    // Growth ratio with cancellation screening: probes where M loses its
    // leading digits (erratic relative variation under a 1e-7 nudge) are
    // treated as undefined rather than poisoning the infimum.
    auto ratio = [&](double x) {
        double mv = M(x);
        double mp = Mp(x);
        if (std::isnan(mv) || std::isnan(mp) || !(mv > 0.0)) return std::nan("");
        if (std::isinf(mv) || std::isinf(mp)) return std::nan("");
        double rho = x * mp / mv;
        if (rho < 1.0 - 1e-9) {
            double m1 = M(x * (1.0 + 1e-7));
            if (!(m1 > 0.0) || std::fabs(m1 - mv) > 1e-3 * mv) return std::nan("");
        }
        return rho;
    };

    // pre-pass over the grid: definedness, sub-1 evidence, overflow edge
    double tlo = std::log(grid.lo), thi = std::log(grid.hi);
    int defined = 0, sub_one = 0;
    double sub_one_at = 0.0;
    bool overflow_rising = false;
    std::vector<double> recent;
    for (int i = 0; i < grid.points; ++i) {
        double x = std::exp(tlo + (thi - tlo) * i / (grid.points - 1));
        double mv = M(x);
        if (std::isinf(mv)) {
            // the ratio climbs into the overflow wall: growth is unbounded
            bool rising = recent.size() >= 4;
            for (std::size_t k = 1; k < recent.size(); ++k)
                if (recent[k] <= recent[k - 1] * 1.0001) rising = false;
            if (rising && recent.back() > 10.0) overflow_rising = true;
            break;
        }
        double rho = ratio(x);
        if (std::isnan(rho)) continue;
        ++defined;
        if (rho < 1.0 - 1e-9) {
            ++sub_one;
            sub_one_at = x;
        }
        recent.push_back(rho);
        if (recent.size() > 6) recent.erase(recent.begin());
    }
    if (defined < grid.points / 20)
        throw NFunctionError("growth ratio r*M'(r)/M(r) is undefined on most of the probe grid");
    if (sub_one >= 2)
        throw NFunctionError("growth ratio drops below 1 (at r=" + fmt(sub_one_at) +
                             "): not an admissible N-function");

    ScanResult lo = scan_infimum(ratio, grid);
    ScanResult hi = scan_supremum(ratio, grid, kDeltaCap);
    IndexEstimate est;
    est.d_M = std::fmax(1.0, lo.value);
    est.certified = false;
    if (overflow_rising || !std::isfinite(hi.value) || hi.value > kDeltaCap) {
        est.D_M = kDeltaCap;
        est.delta2_failed = true;
    } else {
        est.D_M = std::fmax(est.d_M, hi.value);
    }
    return est;
}

NFunction NFunction::make_power(double p) {
    if (!(p > 1.0)) throw NFunctionError("power N-function requires p > 1, got p=" + fmt(p));
    using namespace ast;
    Expression m = Expression::from_tree(pow(variable(), p));
    Expression mp = Expression::from_tree(mul(constant(p), pow(variable(), p - 1.0)));
    // sup_x (x y - x^p) = (p-1) * (y/p)^(p/(p-1))
    double pc = p / (p - 1.0);
    Expression conj = Expression::from_tree(mul(constant(p - 1.0), pow(div(variable(), constant(p)), pc)));
    NFunction f(std::move(m), std::move(mp), std::move(conj), p, p, true, "power:p=" + fmt(p));
    f.form_ = Form::power;
    f.power_p_ = p;
    return f;
}

NFunction NFunction::make_power_sum(double p, double q) {
    if (!(p > 1.0) || !(q > 1.0)) throw NFunctionError("power_sum N-function requires p, q > 1");
    if (p > q) std::swap(p, q);
    using namespace ast;
    Expression m = Expression::from_tree(add(pow(variable(), p), pow(variable(), q)));
    Expression mp = Expression::from_tree(
        add(mul(constant(p), pow(variable(), p - 1.0)), mul(constant(q), pow(variable(), q - 1.0))));
    NFunction f(std::move(m), std::move(mp), std::nullopt, p, q, true,
                "power_sum:p=" + fmt(p) + ",q=" + fmt(q));
    f.form_ = Form::power_sum;
    f.power_p_ = p;
    f.power_q_ = q;
    return f;
}

NFunction NFunction::from_expression(Expression M, const GridSpec& grid) {
    IndexEstimate est = simonenko_indices(M, grid);
    if (est.delta2_failed)
        throw NFunctionError("growth ratio exceeds the cap " + fmt(kDeltaCap) +
                             ": Delta2 condition fails, M is outside scope");
    Expression mp = M.derivative();
    std::string name = M.str();
    return NFunction(std::move(M), std::move(mp), std::nullopt, est.d_M, est.D_M, false, name);
}

NFunction NFunction::from_spec(const std::string& spec) {
    if (spec.rfind("power:", 0) == 0) return make_power(parse_param(spec, "p"));
    if (spec.rfind("power_sum:", 0) == 0)
        return make_power_sum(parse_param(spec, "p"), parse_param(spec, "q"));
    return from_expression(Expression::parse(spec));
}

double NFunction::log_m(double x) const noexcept {
    if (!(x > 0.0)) return -kInf;
    double lx = std::log(x);
    switch (form_) {
        case Form::power:
            return power_p_ * lx;
        case Form::power_sum: {
            double a = power_p_ * lx, b = power_q_ * lx;
            double hi = std::fmax(a, b), lo2 = std::fmin(a, b);
            return hi + std::log1p(std::exp(lo2 - hi));
        }
        case Form::generic: {
            double v = m_(x);
            if (std::isnan(v)) return std::nan("");
            if (v <= 0.0) return -kInf;
            return std::log(v);  // +inf when m overflowed
        }
    }
    return std::nan("");
}

double NFunction::comparison(double t) const noexcept {
    if (t < 0.0) return std::nan("");
    if (t == 0.0) return 0.0;
    double lt = std::log(t);
    return std::exp(std::fmax(d_ * lt, D_ * lt));
}

double NFunction::comparison_inverse(double t) const noexcept {
    if (t < 0.0) return std::nan("");
    if (t == 0.0) return 0.0;
    return t <= 1.0 ? std::pow(t, 1.0 / d_) : std::pow(t, 1.0 / D_);
}

double NFunction::log_comparison_inverse(double log_t) const noexcept {
    return log_t <= 0.0 ? log_t / d_ : log_t / D_;
}

double NFunction::conjugate(double y) const {
    if (y < 0.0) throw NFunctionError("conjugate argument must be nonnegative");
    if (y == 0.0) return 0.0;
    if (conjugate_) return (*conjugate_)(y);
    // sup_x (x y - M(x)) is attained where M'(x) = y; M' is nondecreasing.
    double hi = 1.0;
    int guard = 0;
    while (mprime_(hi) < y) {
        hi *= 2.0;
        if (++guard > 2100 || !std::isfinite(hi))
            throw NFunctionError("conjugate maximization failed to bracket: M is not superlinear");
    }
    double lo = hi * 0.5;
    if (guard == 0) {
        lo = 1.0;
        while (mprime_(lo) > y && lo > 1e-300) lo *= 0.5;
    }
    for (int i = 0; i < 200 && (hi - lo) > 1e-14 * hi; ++i) {
        double mid = 0.5 * (lo + hi);
        (mprime_(mid) < y ? lo : hi) = mid;
    }
    double x = 0.5 * (lo + hi);
    return std::fmax(0.0, x * y - m_(x));
}

std::vector<Diagnostic> NFunction::check_assumptions() const {
    std::vector<Diagnostic> out;
    GridSpec grid{1e-8, 1e8, 641};
    double tlo = std::log(grid.lo), thi = std::log(grid.hi);

    bool convex = true;
    double prev = -kInf;
    double convex_at = 0.0;
    bool zero_at_zero = true;
    bool eq24 = true;
    double eq24_at = 0.0;
    bool delta2 = true;
    double delta2_at = 0.0;
    for (int i = 0; i < grid.points; ++i) {
        double x = std::exp(tlo + (thi - tlo) * i / (grid.points - 1));
        double mp = mprime_(x);
        double mv = m_(x);
        if (std::isnan(mp) || std::isnan(mv)) continue;
        if (mp < prev * (1.0 - 1e-9)) {
            convex = false;
            convex_at = x;
        }
        prev = mp;
        double bound = mv / x;
        if (mp < d_ * bound * (1.0 - 1e-9) || mp > D_ * bound * (1.0 + 1e-9)) {
            eq24 = false;
            eq24_at = x;
        }
        double m2 = m_(2.0 * x);
        if (std::isfinite(m2) && m2 > std::pow(2.0, D_) * mv * (1.0 + 1e-9)) {
            delta2 = false;
            delta2_at = x;
        }
    }
    double m_small = m_(1e-8);
    zero_at_zero = std::isfinite(m_small) && std::fabs(m_small) <= 1e-6 && m_small >= 0.0 &&
                   std::fabs(m_small / 1e-8) <= 1e-2;

    bool superlinear = true;
    double last_ratio = 0.0;
    for (int k = 0; k <= 8; ++k) {
        double x = std::pow(10.0, k);
        double ratio = m_(x) / x;
        if (k > 0 && std::isfinite(ratio) && std::isfinite(last_ratio) && ratio <= last_ratio) superlinear = false;
        last_ratio = ratio;
    }
    if (std::isfinite(last_ratio) && last_ratio < 1e2) superlinear = false;

    out.push_back({"convexity", convex,
                   convex ? "M' nondecreasing on the probe grid"
                          : "M' decreases near r=" + fmt(convex_at)});
    out.push_back({"zero_at_zero", zero_at_zero,
                   zero_at_zero ? "M(r) -> 0 and M(r)/r -> 0 at the lower probe bound"
                                : "M does not vanish at 0 (M(1e-8)=" + fmt(m_small) + ")"});
    out.push_back({"superlinear", superlinear,
                   superlinear ? "M(r)/r increases through r=10^k, k<=8"
                               : "M(r)/r fails to grow without bound"});
    out.push_back({"index_inequality", eq24,
                   eq24 ? "d*M(r)/r <= M'(r) <= D*M(r)/r holds on the grid"
                        : "index inequality fails near r=" + fmt(eq24_at)});
    out.push_back({"delta2", delta2 && D_ < kDeltaCap,
                   delta2 && D_ < kDeltaCap ? "M(2r) <= 2^D M(r) on the grid"
                                            : (D_ >= kDeltaCap ? "growth ratio capped at " + fmt(kDeltaCap)
                                                               : "doubling bound fails near r=" + fmt(delta2_at))});
    out.push_back({"conjugate_delta2", d_ > 1.0 + 1e-12,
                   d_ > 1.0 + 1e-12 ? "d > 1, so the conjugate satisfies Delta2"
                                    : "d = 1: the conjugate need not satisfy Delta2"});
    return out;
}

}  // namespace hardy
