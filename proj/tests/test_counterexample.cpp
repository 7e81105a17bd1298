#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <complex>

#include "fock/counterexample.hpp"
#include "fock/diagnostics.hpp"

using fock::cplx;
using fock::DivergenceDiagnostic;
using fock::FittedModel;
using fock::GaussWeight;
using fock::Membership;
using fock::Verdict;

TEST_CASE("series diagnosis recognizes a convergent p-series and estimates its limit") {
    auto term = [](long n) { return 1.0 / (double(n + 1) * double(n + 1)); };
    const auto d = fock::diagnose_series(term, 100000, "basel");
    REQUIRE(d.verdict == Verdict::Converges);
    REQUIRE(d.model.kind == FittedModel::Kind::Convergent);
    const double basel = 3.14159265358979323846 * 3.14159265358979323846 / 6.0;
    REQUIRE_THAT(d.model.parameter, Catch::Matchers::WithinAbs(basel, 1e-6));
}

TEST_CASE("series diagnosis recognizes logarithmic divergence with unit slope") {
    auto term = [](long n) { return 1.0 / double(n + 1); };
    const auto d = fock::diagnose_series(term, 1000000, "harmonic");
    REQUIRE(d.verdict == Verdict::Diverges);
    REQUIRE(d.model.kind == FittedModel::Kind::Logarithmic);
    REQUIRE_THAT(d.model.parameter, Catch::Matchers::WithinRel(1.0, 0.01));
}

TEST_CASE("series diagnosis recognizes power-law divergence") {
    auto term = [](long n) { return 1.0 / std::sqrt(double(n + 1)); };
    const auto d = fock::diagnose_series(term, 1000000, "sqrt");
    REQUIRE(d.verdict == Verdict::Diverges);
    REQUIRE(d.model.kind == FittedModel::Kind::Power);
    REQUIRE_THAT(d.model.parameter, Catch::Matchers::WithinAbs(0.5, 0.05));
}

TEST_CASE("annulus diagnosis separates bounded, logarithmic, and power growth") {
    const std::vector<double> radii{2.0, 4.0, 8.0};
    const auto conv = fock::diagnose_annulus(radii, {0.9, 0.99, 0.999}, "bounded");
    REQUIRE(conv.verdict == Verdict::Converges);

    const auto logd = fock::diagnose_annulus(radii, {std::log(2.0), std::log(4.0), std::log(8.0)}, "log");
    REQUIRE(logd.verdict == Verdict::Diverges);
    REQUIRE(logd.model.kind == FittedModel::Kind::Logarithmic);

    const auto pow = fock::diagnose_annulus(radii, {4.0, 16.0, 64.0}, "square");
    REQUIRE(pow.verdict == Verdict::Diverges);
    REQUIRE(pow.model.kind == FittedModel::Kind::Power);
    REQUIRE_THAT(pow.model.parameter, Catch::Matchers::WithinAbs(2.0, 0.05));

    REQUIRE_THROWS_AS(fock::diagnose_annulus({2.0, 4.0}, {1.0, 2.0}, "short"), std::invalid_argument);
    REQUIRE_THROWS_AS(fock::diagnose_annulus({4.0, 2.0, 8.0}, {1.0, 2.0, 3.0}, "disorder"), std::invalid_argument);
}

TEST_CASE("borderline coefficients keep the function in the space but push zf out") {
    for (double r : {0.5, 1.0, 2.0}) {
        const GaussWeight gw{r};
        const auto rep = fock::borderline_norms(gw, 1000000);
        REQUIRE(rep.norm_f.verdict == Verdict::Converges);
        const double basel = 3.14159265358979323846 * 3.14159265358979323846 / 6.0;
        REQUIRE_THAT(rep.norm_f.model.parameter, Catch::Matchers::WithinAbs(basel, 1e-4));
        REQUIRE(rep.norm_zf.verdict == Verdict::Diverges);
        REQUIRE(rep.norm_zf.model.kind == FittedModel::Kind::Logarithmic);
        REQUIRE_THAT(rep.norm_zf.model.parameter, Catch::Matchers::WithinRel(1.0 / r, 0.02));
    }
}

TEST_CASE("shifted monomial norms converge exactly when j <= k") {
    const GaussWeight gw{1.0};
    for (long k = 0; k <= 3; ++k)
        for (long j = 0; j <= 3; ++j) {
            const auto d = fock::shifted_monomial_norms(k, j, gw, 200000);
            const bool expect_conv = (j <= k);
            INFO("k=" << k << " j=" << j);
            REQUIRE((d.verdict == Verdict::Converges) == expect_conv);
            if (j == k + 1) REQUIRE(d.model.kind == FittedModel::Kind::Logarithmic);
        }
}

TEST_CASE("splitting a Gaussian factor lands both halves inside the space") {
    const GaussWeight gw{1.0};
    const auto rep = fock::gaussian_domain_demo(cplx{0.8, 0.0}, 0.5, gw);
    REQUIRE(rep.factor1.membership == Membership::In);
    REQUIRE(rep.factor2.membership == Membership::In);
    REQUIRE(rep.whole.membership == Membership::NotIn);
    REQUIRE(rep.whole.diag.verdict == Verdict::Diverges);
    REQUIRE_THAT(rep.interval_lo, Catch::Matchers::WithinAbs(0.375, 1e-12));
    REQUIRE_THAT(rep.interval_hi, Catch::Matchers::WithinAbs(0.625, 1e-12));
    REQUIRE(rep.interval_nonempty);
    // |exp(-0.4 z^2)|^2 sums to the binomial series value 1/sqrt(1-0.64)
    REQUIRE_THAT(rep.factor1.diag.model.parameter, Catch::Matchers::WithinAbs(5.0 / 3.0, 1e-6));
}

TEST_CASE("the Gaussian split interval empties exactly at |w| = r") {
    const GaussWeight gw{1.0};
    const auto tight = fock::gaussian_domain_demo(cplx{1.5, 0.0}, 0.5, gw);
    REQUIRE_FALSE(tight.interval_nonempty);
    const auto origin = fock::gaussian_domain_demo(cplx{0.0, 0.0}, 0.5, gw);
    REQUIRE(origin.interval_nonempty);
    REQUIRE(origin.whole.membership == Membership::In);
}

TEST_CASE("lattice data reproduces the square-lattice constants") {
    const GaussWeight gw{1.0};
    const auto s = fock::make_lattice_sigma(gw);
    REQUIRE_THAT(s.a, Catch::Matchers::WithinRel(std::sqrt(3.14159265358979323846), 1e-14));
    REQUIRE_THAT(s.eta1, Catch::Matchers::WithinRel(gw.r * s.a, 1e-14));
    REQUIRE(s.points.size() == 112);
}

TEST_CASE("sigma behaves like z at the origin and vanishes on the lattice") {
    const GaussWeight gw{1.0};
    const auto s = fock::make_lattice_sigma(gw);
    for (double t : {1e-3, 1e-4}) {
        const cplx z{t, 0.5 * t};
        REQUIRE_THAT(std::abs(fock::sigma_eval(s, z) / z - 1.0), Catch::Matchers::WithinAbs(0.0, 1e-5));
    }
    REQUIRE(std::abs(fock::sigma_eval(s, cplx{s.a, 0.0})) == 0.0);
    REQUIRE(std::abs(fock::sigma_eval(s, cplx{2.0 * s.a, -s.a})) == 0.0);
}

TEST_CASE("sigma satisfies the quasi-periodicity law across one period") {
    const GaussWeight gw{1.0};
    const auto s = fock::make_lattice_sigma(gw);
    const cplx z{0.31, -0.22};
    const cplx lhs = fock::sigma_eval(s, z + cplx{s.a, 0.0});
    const cplx rhs = -fock::sigma_eval(s, z) * std::exp(s.eta1 * (z + cplx{s.a / 2.0, 0.0}));
    REQUIRE_THAT(std::abs(lhs - rhs) / std::abs(rhs), Catch::Matchers::WithinAbs(0.0, 1e-12));
}

TEST_CASE("the Gaussian-normalized sigma modulus is lattice periodic") {
    const GaussWeight gw{1.0};
    const auto s = fock::make_lattice_sigma(gw);
    const cplx z{0.4, 0.13};
    const double base = std::abs(fock::sigma_gauss_normalized(s, z));
    for (int m = -2; m <= 2; ++m)
        for (int n = -2; n <= 2; ++n) {
            const cplx shifted = z + cplx{double(m) * s.a, double(n) * s.a};
            REQUIRE_THAT(std::abs(fock::sigma_gauss_normalized(s, shifted)),
                         Catch::Matchers::WithinRel(base, 1e-12));
        }
}

TEST_CASE("lattice point validation snaps and rejects") {
    const GaussWeight gw{1.0};
    const auto s = fock::make_lattice_sigma(gw);
    const cplx snapped = fock::require_lattice_point(s, cplx{2.0 * s.a + 1e-12, -s.a}, "test");
    REQUIRE(snapped == cplx{2.0 * s.a, -s.a});
    REQUIRE_THROWS_AS(fock::require_lattice_point(s, cplx{0.5 * s.a, 0.0}, "test"), std::invalid_argument);
}

TEST_CASE("nearest lattice zeros enumerate deterministically from the origin") {
    const GaussWeight gw{1.0};
    const auto s = fock::make_lattice_sigma(gw);
    const auto zeros = fock::nearest_lattice_zeros(s, 5);
    REQUIRE(zeros.size() == 5);
    REQUIRE(zeros[0] == cplx{0.0, 0.0});
    REQUIRE(zeros[1] == cplx{s.a, 0.0});  // ties break by angle from the positive axis
    REQUIRE(zeros[2] == cplx{0.0, s.a});
    const auto again = fock::nearest_lattice_zeros(s, 5);
    REQUIRE(zeros == again);
}

TEST_CASE("sigma norms over growing annuli diverge while a cubic control stays put") {
    const GaussWeight gw{1.0};
    const auto s = fock::make_lattice_sigma(gw);
    const auto rule = fock::make_quadrature(gw, 40, 128);
    const auto rep = fock::sigma_domain_collapse(s, {2.0, 4.0, 8.0}, rule);
    REQUIRE(rep.sigma_diag.verdict == Verdict::Diverges);
    REQUIRE(rep.sigma_diag.model.kind == FittedModel::Kind::Power);
    REQUIRE_THAT(rep.sigma_diag.model.parameter, Catch::Matchers::WithinAbs(2.0, 0.25));
    REQUIRE(rep.control_diag.verdict == Verdict::Converges);
    REQUIRE_THROWS_AS(fock::sigma_domain_collapse(s, {2.0}, rule), std::invalid_argument);
}

TEST_CASE("dividing sigma by matched zero factors controls the growth order") {
    const GaussWeight gw{1.0};
    const auto s = fock::make_lattice_sigma(gw);
    const auto rule = fock::make_quadrature(gw, 40, 128);
    const std::vector<double> radii{2.0, 4.0, 8.0, 16.0};

    const auto balanced = fock::sigma_over_p_domain(s, 0, 0, radii, rule);
    REQUIRE(balanced.diag.verdict == Verdict::Converges);

    const auto log_case = fock::sigma_over_p_domain(s, 0, 1, radii, rule);
    REQUIRE(log_case.diag.verdict == Verdict::Diverges);
    REQUIRE(log_case.diag.model.kind == FittedModel::Kind::Logarithmic);

    const auto power_case = fock::sigma_over_p_domain(s, 1, 3, radii, rule);
    REQUIRE(power_case.diag.verdict == Verdict::Diverges);
    REQUIRE(power_case.diag.model.kind == FittedModel::Kind::Power);
    REQUIRE_THAT(power_case.diag.model.parameter, Catch::Matchers::WithinAbs(2.0, 0.5));
}

TEST_CASE("explicit zero lists are validated against the lattice") {
    const GaussWeight gw{1.0};
    const auto s = fock::make_lattice_sigma(gw);
    const auto rule = fock::make_quadrature(gw, 20, 64);
    REQUIRE_THROWS_AS(
        fock::sigma_over_p_domain(s, std::vector<cplx>{{0.0, 0.0}, {0.3, 0.0}}, 0, {2.0, 4.0, 8.0}, rule),
        std::invalid_argument);
    REQUIRE_THROWS_AS(
        fock::sigma_over_p_domain(s, std::vector<cplx>{{0.0, 0.0}, {0.0, 0.0}}, 0, {2.0, 4.0, 8.0}, rule),
        std::invalid_argument);
}
