#include <doctest.h>

#include <cmath>
#include <random>

#include "hardy/nfunction.hpp"

using hardy::Expression;
using hardy::NFunction;
using hardy::NFunctionError;

namespace {

// independent 1-D maximization oracle for sup_x (x y - M(x))
double conjugate_oracle(const std::function<double(double)>& m, double y) {
    double lo = 0.0, hi = 1.0;
    while (hi * y - m(hi) < (2.0 * hi) * y - m(2.0 * hi)) hi *= 2.0;
    hi *= 2.0;  // the maximizer lies at or below the first non-improving double
    const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
    double a = lo, b = hi;
    double c = b - invphi * (b - a), d = a + invphi * (b - a);
    auto f = [&](double x) { return x * y - m(x); };
    double fc = f(c), fd = f(d);
    for (int i = 0; i < 200; ++i) {
        if (fc > fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - invphi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + invphi * (b - a);
            fd = f(d);
        }
    }
    return std::fmax(fc, fd);
}

std::vector<NFunction> catalog_nfunctions() {
    std::vector<NFunction> out;
    out.push_back(NFunction::make_power(2.0));
    out.push_back(NFunction::make_power(3.0));
    out.push_back(NFunction::make_power(1.5));
    out.push_back(NFunction::make_power_sum(2.0, 3.0));
    return out;
}

}  // namespace

TEST_SUITE("nfunction") {
    TEST_CASE("make_power sets exact indices and conjugate") {
        NFunction M = NFunction::make_power(2.0);
        CHECK(M.d_index() == 2.0);
        CHECK(M.D_index() == 2.0);
        CHECK(M.indices_certified());

        NFunction M3 = NFunction::make_power(3.0);
        const double expected = 2.0 / (3.0 * std::sqrt(3.0));  // sup_x (x - x^3)
        CHECK(M3.conjugate(1.0) == doctest::Approx(expected).epsilon(1e-12));
        CHECK(conjugate_oracle([&](double x) { return M3.m(x); }, 1.0) ==
              doctest::Approx(expected).epsilon(1e-9));

        CHECK_THROWS_AS(NFunction::make_power(1.0), NFunctionError);
        CHECK_THROWS_AS(NFunction::make_power(0.5), NFunctionError);
    }

    TEST_CASE("simonenko index estimator") {
        hardy::IndexEstimate sq = hardy::simonenko_indices(Expression::parse("r^2"));
        CHECK(sq.d_M == doctest::Approx(2.0).epsilon(1e-9));
        CHECK(sq.D_M == doctest::Approx(2.0).epsilon(1e-9));

        // ratio (2+3r)/(1+r) rises monotonically from 2 to 3
        hardy::IndexEstimate mix = hardy::simonenko_indices(Expression::parse("r^2+r^3"));
        CHECK(mix.d_M == doctest::Approx(2.0).epsilon(1e-4));
        CHECK(mix.D_M == doctest::Approx(3.0).epsilon(1e-4));
        CHECK_FALSE(mix.certified);

        CHECK_THROWS_AS(hardy::simonenko_indices(Expression::parse("r^(0.5)")), NFunctionError);

        hardy::IndexEstimate expm = hardy::simonenko_indices(Expression::parse("exp(r)-r-1"));
        CHECK(expm.delta2_failed);
        CHECK_THROWS_AS(NFunction::from_expression(Expression::parse("exp(r)-r-1")),
                        NFunctionError);
    }

    TEST_CASE("comparison function and its inverse") {
        NFunction p2 = NFunction::make_power(2.0);
        CHECK(p2.comparison(0.5) == doctest::Approx(0.25));
        CHECK(p2.comparison(3.0) == doctest::Approx(9.0));
        CHECK(p2.comparison(1.0) == doctest::Approx(1.0));
        CHECK(p2.comparison_inverse(0.25) == doctest::Approx(0.5));

        NFunction mix = NFunction::make_power_sum(2.0, 3.0);
        CHECK(mix.comparison(0.5) == doctest::Approx(0.25));  // lower exponent wins below 1
        CHECK(mix.comparison(2.0) == doctest::Approx(8.0));
        CHECK(mix.comparison_inverse(8.0) == doctest::Approx(2.0));

        for (const NFunction& M : catalog_nfunctions()) {
            for (int k = -6; k <= 6; ++k) {
                double t = std::pow(10.0, k);
                double round = M.comparison(M.comparison_inverse(t));
                CHECK(round == doctest::Approx(t).epsilon(1e-12));
            }
        }
    }

    TEST_CASE("classical inverse-comparison weight reduces to r^(alpha/p)") {
        NFunction p2 = NFunction::make_power(2.0);
        const double alpha = 4.0;
        for (double r : {0.3, 1.0, 2.5}) {
            double f_phi = p2.comparison_inverse(std::pow(r, alpha));
            CHECK(f_phi == doctest::Approx(std::pow(r, alpha / 2.0)).epsilon(1e-12));
        }
    }

    TEST_CASE("conjugate values") {
        NFunction p2 = NFunction::make_power(2.0);
        CHECK(p2.conjugate(3.0) == doctest::Approx(2.25));
        CHECK(p2.conjugate(0.0) == doctest::Approx(0.0));

        NFunction p3 = NFunction::make_power(3.0);
        CHECK(p3.conjugate(1.0) == doctest::Approx(2.0 / (3.0 * std::sqrt(3.0))).epsilon(1e-12));

        // numeric conjugate (no closed form) against the maximization oracle
        NFunction mix = NFunction::make_power_sum(2.0, 3.0);
        for (double y : {0.5, 1.0, 4.0, 20.0}) {
            double oracle = conjugate_oracle([&](double x) { return mix.m(x); }, y);
            CHECK(mix.conjugate(y) == doctest::Approx(oracle).epsilon(1e-7));
        }
    }

    TEST_CASE("Young inequality on random samples") {
        std::mt19937_64 rng(7);
        std::uniform_real_distribution<double> dist(-3.0, 3.0);
        for (const NFunction& M : catalog_nfunctions()) {
            for (int i = 0; i < 10000; ++i) {
                double x = std::pow(10.0, dist(rng));
                double y = std::pow(10.0, dist(rng));
                double lhs = x * y;
                double rhs = M.m(x) + M.conjugate(y);
                CHECK_MESSAGE(lhs <= rhs * (1.0 + 1e-9) + 1e-12,
                              M.name(), ": Young fails at x=", x, " y=", y);
            }
        }
    }

    TEST_CASE("scaling bound M(tr) <= c(t) M(r) on random samples") {
        std::mt19937_64 rng(11);
        std::uniform_real_distribution<double> dist(-3.0, 3.0);
        for (const NFunction& M : catalog_nfunctions()) {
            for (int i = 0; i < 10000; ++i) {
                double t = std::pow(10.0, dist(rng));
                double r = std::pow(10.0, dist(rng));
                double lhs = M.m(t * r);
                double rhs = M.comparison(t) * M.m(r);
                CHECK_MESSAGE(lhs <= rhs * (1.0 + 1e-9),
                              M.name(), ": scaling bound fails at t=", t, " r=", r);
            }
        }
    }

    TEST_CASE("slope bound (M(r)/r) s <= ((D-1)/d) M(r) + M(s)/d on random samples") {
        std::mt19937_64 rng(13);
        std::uniform_real_distribution<double> dist(-3.0, 3.0);
        for (const NFunction& M : catalog_nfunctions()) {
            double d = M.d_index(), D = M.D_index();
            for (int i = 0; i < 10000; ++i) {
                double r = std::pow(10.0, dist(rng));
                double s = std::pow(10.0, dist(rng));
                double lhs = M.m(r) / r * s;
                double rhs = (D - 1.0) / d * M.m(r) + M.m(s) / d;
                CHECK_MESSAGE(lhs <= rhs * (1.0 + 1e-9) + 1e-12,
                              M.name(), ": slope bound fails at r=", r, " s=", s);
            }
        }
    }

    TEST_CASE("assumption diagnostics") {
        auto all_pass = [](const std::vector<hardy::Diagnostic>& ds) {
            for (const auto& d : ds)
                if (!d.passed) return false;
            return true;
        };
        CHECK(all_pass(NFunction::make_power(2.0).check_assumptions()));
        CHECK(all_pass(NFunction::make_power_sum(2.0, 3.0).check_assumptions()));
    }

    TEST_CASE("catalog spec strings") {
        NFunction a = NFunction::from_spec("power:p=2");
        CHECK(a.d_index() == 2.0);
        NFunction b = NFunction::from_spec("power_sum:p=2,q=3");
        CHECK(b.d_index() == 2.0);
        CHECK(b.D_index() == 3.0);
        NFunction c = NFunction::from_spec("r^2+r^3");
        CHECK(c.d_index() == doctest::Approx(2.0).epsilon(1e-4));
        CHECK_FALSE(c.indices_certified());
        CHECK_THROWS(NFunction::from_spec("power:p=abc"));
    }
}
