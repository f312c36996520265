#include <doctest.h>

#include <cmath>

#include "hardy/catalog.hpp"
#include "hardy/verifier.hpp"

using namespace hardy;

namespace {

WeightTriple classical(double p, double alpha) {
    char phi[64];
    std::snprintf(phi, sizeof(phi), "%.17g*ln(r)", -alpha);
    return WeightTriple(NFunction::make_power(p), Expression::parse(phi),
                        Expression::parse("1/r"));
}

TestFunction trapezoid() {
    return TestFunction::from_expression("trapezoid", Expression::parse("max(0,min(min(r-1,1),3-r))"),
                                         FunctionKind::generic, std::make_pair(1.0, 3.0));
}

}  // namespace

TEST_SUITE("verifier") {
    TEST_CASE("compact function verifies against the classical certificate") {
        WeightTriple t = classical(2.0, 4.0);
        Certificate cert = certify(t);
        VerificationReport rep = verify(t, cert, trapezoid());
        CHECK(rep.holds == Holds::yes);
        REQUIRE(rep.ratio);
        CHECK(*rep.ratio <= 4.0 / 9.0 * (1.0 + 1e-6));
        CHECK(rep.in_certified_class);
    }

    TEST_CASE("Laplace function on the gaussian triple: divergence, not violation") {
        WeightTriple t(NFunction::make_power(2.0), Expression::parse("-0.5*r^2"),
                       Expression::parse("r"));
        Certificate cert = certify(t);
        VerificationReport rep = verify(t, cert, TestFunction::laplace_function());
        CHECK(rep.holds == Holds::violated_divergence);
        CHECK(rep.J.divergent());
        CHECK(rep.H.status == QuadStatus::converged);
        // analytic energy: integral of e^{-3 r^2 / 2} = sqrt(2 pi / 3) / 2
        CHECK(rep.H.value ==
              doctest::Approx(0.5 * std::sqrt(2.0 * std::acos(-1.0) / 3.0)).epsilon(1e-8));
        CHECK_FALSE(rep.in_certified_class);
    }

    TEST_CASE("zero function is vacuous") {
        WeightTriple t = classical(2.0, 4.0);
        Certificate cert = certify(t);
        TestFunction zero = TestFunction::from_expression("zero", Expression::parse("0"));
        VerificationReport rep = verify(t, cert, zero);
        CHECK(rep.holds == Holds::vacuous);
        CHECK_FALSE(rep.ratio);
    }

    TEST_CASE("norm form stays below C-tilde whenever the modular form holds") {
        WeightTriple t = classical(2.0, 4.0);
        Certificate cert = certify(t);
        for (TestFunction& u : std::vector<TestFunction>{
                 trapezoid(),
                 TestFunction::from_expression("ramp", Expression::parse("min(1,r)*exp(-r)"),
                                               FunctionKind::conjugate_hardy_transform)}) {
            VerificationReport rep = verify(t, cert, u);
            REQUIRE(rep.holds == Holds::yes);
            NormReport nrep = norm_verify(t, cert, u);
            CHECK(nrep.holds == Holds::yes);
            REQUIRE(nrep.ratio);
            CHECK(*nrep.ratio <= *cert.C_tilde * (1.0 + 1e-6));
        }
    }

    TEST_CASE("norm ratio is invariant under scaling the function") {
        WeightTriple t = classical(2.0, 4.0);
        Certificate cert = certify(t);
        TestFunction u = trapezoid();
        NormReport one = norm_verify(t, cert, u);
        TestFunction doubled = u;
        RealFn u0 = u.u, u1 = u.uprime;
        doubled.u = [u0](double x) { return 2.0 * u0(x); };
        doubled.uprime = [u1](double x) { return 2.0 * u1(x); };
        NormReport two = norm_verify(t, cert, doubled);
        REQUIRE(one.ratio);
        REQUIRE(two.ratio);
        CHECK(*two.ratio == doctest::Approx(*one.ratio).epsilon(1e-9));
        CHECK(two.lhs.value == doctest::Approx(2.0 * one.lhs.value).epsilon(1e-9));
    }

    TEST_CASE("zero function in the norm form") {
        WeightTriple t = classical(2.0, 4.0);
        Certificate cert = certify(t);
        TestFunction zero = TestFunction::from_expression("zero", Expression::parse("0"));
        NormReport rep = norm_verify(t, cert, zero);
        CHECK(rep.holds == Holds::vacuous);
    }

    TEST_CASE("modular ratio is dilation invariant on the classical triple") {
        WeightTriple t = classical(2.0, 4.0);
        Certificate cert = certify(t);
        VerificationReport base = verify(t, cert, trapezoid());
        REQUIRE(base.ratio);
        for (double lam : {0.5, 2.0}) {
            VerificationReport rep = verify(t, cert, trapezoid().dilated(lam));
            REQUIRE(rep.ratio);
            CHECK(*rep.ratio == doctest::Approx(*base.ratio).epsilon(1e-6));
        }
    }

    TEST_CASE("soundness: stock set never produces a violation on catalog triples") {
        for (const std::string& name :
             {std::string("classical:p=2,alpha=4"), std::string("classical:p=3,alpha=0.5"),
              std::string("gaussian_counterexample:p=2")}) {
            WeightTriple t = catalog_load(name).instantiate();
            Certificate cert = certify(t);
            for (const TestFunction& u : stock_test_functions()) {
                VerificationReport rep = verify(t, cert, u);
                CHECK_MESSAGE(rep.holds != Holds::no, name, " x ", u.name, ": false violation");
                bool ok = rep.holds == Holds::yes || rep.holds == Holds::vacuous;
                if (rep.in_certified_class)
                    CHECK_MESSAGE(ok, name, " x ", u.name, ": in-class function must verify");
            }
        }
    }

    TEST_CASE("stock set has the documented size and members") {
        auto fns = stock_test_functions();
        CHECK(fns.size() == 12);
        bool has_laplace = false;
        for (const auto& f : fns) has_laplace = has_laplace || f.name == "laplace";
        CHECK(has_laplace);
    }

    TEST_CASE("template families substitute parameters") {
        FamilySpec fam = FamilySpec::from_template(
            "powers", {{"k", 0.5, 2.0, false}}, "r^(%k%)*exp(-r)");
        TestFunction u = fam.make({1.0});
        CHECK(u.u(1.0) == doctest::Approx(std::exp(-1.0)));
        CHECK(u.u(2.0) == doctest::Approx(2.0 * std::exp(-2.0)));
    }

    TEST_CASE("single-member family returns that member's ratio") {
        WeightTriple t = classical(2.0, 4.0);
        Certificate cert = certify(t);
        FamilySpec fam;
        fam.name = "singleton";
        fam.params = {{"dummy", 1.0, 1.0, false}};
        fam.make = [](const std::vector<double>&) { return trapezoid(); };
        SharpnessResult res = sharpness_search(t, cert, fam, 100);
        VerificationReport rep = verify(t, cert, trapezoid());
        REQUIRE(rep.ratio);
        CHECK(res.best_ratio == doctest::Approx(*rep.ratio).epsilon(1e-9));
        CHECK_FALSE(res.violation_found);
    }

    TEST_CASE("extremal family approaches the classical constant from below") {
        WeightTriple t = classical(2.0, 4.0);
        Certificate cert = certify(t);
        FamilySpec fam = FamilySpec::classical_extremal(2.0, 4.0);
        SharpnessResult res = sharpness_search(t, cert, fam, 500);
        REQUIRE(cert.C);
        CHECK(res.best_ratio >= 0.9 * *cert.C);
        CHECK(res.best_ratio <= *cert.C * (1.0 + 1e-6));
        CHECK_FALSE(res.violation_found);
        CHECK(res.evaluations <= 500);
    }

    TEST_CASE("compact bumps on the gaussian triple stay under the constant") {
        WeightTriple t(NFunction::make_power(2.0), Expression::parse("-0.5*r^2"),
                       Expression::parse("r"));
        Certificate cert = certify(t);
        FamilySpec fam = FamilySpec::from_template(
            "bumps", {{"c", 0.5, 4.0, false}, {"w", 1.2, 8.0, false}},
            "max(0,min(min(r-%c%,1),%c%*%w%-r))");
        SharpnessResult res = sharpness_search(t, cert, fam, 300);
        CHECK(res.best_ratio <= 4.0 * (1.0 + 1e-6));
        CHECK_FALSE(res.violation_found);
    }
}
