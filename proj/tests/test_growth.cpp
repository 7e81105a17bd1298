#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <complex>

#include "fock/growth.hpp"

using fock::cplx;
using fock::EntireSymbol;
using fock::GaussWeight;
using fock::Membership;

TEST_CASE("polynomials classify as admissible multipliers via closed form") {
    const GaussWeight gw{1.0};
    const auto z2 = EntireSymbol::polynomial({cplx{0.0, 0.0}, cplx{0.0, 0.0}, cplx{1.0, 0.0}});
    const auto rep = fock::classify_growth(z2, gw);
    REQUIRE(rep.lambda_verdict == Membership::In);
    REQUIRE(rep.fock_verdict == Membership::In);
    REQUIRE(rep.rule_used == "closed_form");

    const auto cubic = EntireSymbol::polynomial({cplx{1.0, 0.0}, cplx{0.0, 0.0}, cplx{0.0, 0.0}, cplx{1.0, 0.0}});
    REQUIRE(fock::classify_growth(cubic, gw).lambda_verdict == Membership::In);
}

TEST_CASE("Gaussian factors split at |alpha| = r/2") {
    const GaussWeight gw{1.0};
    const auto in = fock::classify_growth(EntireSymbol::exp_quadratic(cplx{0.4, 0.0}), gw);
    REQUIRE(in.lambda_verdict == Membership::In);
    REQUIRE(in.fock_verdict == Membership::In);
    REQUIRE_THAT(in.order_estimate, Catch::Matchers::WithinAbs(2.0, 0.1));

    const auto border = fock::classify_growth(EntireSymbol::exp_quadratic(cplx{0.5, 0.0}), gw);
    REQUIRE(border.lambda_verdict == Membership::NotIn);
    REQUIRE(border.fock_verdict == Membership::NotIn);

    const auto out = fock::classify_growth(EntireSymbol::exp_quadratic(cplx{0.6, 0.0}), gw);
    REQUIRE(out.lambda_verdict == Membership::NotIn);

    // the same |alpha| is admissible under a wider Gaussian
    const GaussWeight wide{2.0};
    const auto rescued = fock::classify_growth(EntireSymbol::exp_quadratic(cplx{0.6, 0.0}), wide);
    REQUIRE(rescued.lambda_verdict == Membership::In);
}

TEST_CASE("kernel symbols are order-one and classify as admissible") {
    const GaussWeight gw{1.0};
    const auto rep = fock::classify_growth(EntireSymbol::kernel(cplx{1.0, 0.0}, gw), gw);
    REQUIRE(rep.lambda_verdict == Membership::In);
    REQUIRE(rep.order_estimate < 1.5);
}

TEST_CASE("an opaque symbol sitting exactly on the boundary stays undecided") {
    const GaussWeight gw{1.0};
    // log|a_n| = (n/2)(log(e r) - log n) has order 2 and type exactly r/2
    const auto phi = EntireSymbol::custom("boundary-type", [](long n) {
        if (n == 0) return std::pair<double, double>{0.0, 0.0};
        const double la = 0.5 * double(n) * (1.0 - std::log(double(n)));
        return std::pair<double, double>{la, 0.0};
    });
    const auto rep = fock::classify_growth(phi, gw);
    REQUIRE(rep.lambda_verdict == Membership::BoundaryUnknown);
    REQUIRE(rep.fock_verdict == Membership::BoundaryUnknown);
    REQUIRE(rep.rule_used == "none");
    REQUIRE_THAT(rep.type_estimate, Catch::Matchers::WithinAbs(0.5, 1e-9));
}

TEST_CASE("classify_growth rejects a window too small to fit") {
    const GaussWeight gw{1.0};
    REQUIRE_THROWS_AS(fock::classify_growth(EntireSymbol::polynomial({cplx{1.0, 0.0}}), gw, 10),
                      std::invalid_argument);
}

TEST_CASE("converged squared norm of a Gaussian factor matches the binomial series") {
    const GaussWeight gw{1.0};
    // sum_m C(2m, m) c^{2m} r^{-2m} = (1 - 4 c^2 / r^2)^{-1/2} at c = 0.4: 1/0.6
    const double got = fock::converged_fock_norm_sq(EntireSymbol::exp_quadratic(cplx{0.4, 0.0}), gw);
    REQUIRE_THAT(got, Catch::Matchers::WithinRel(5.0 / 3.0, 1e-9));

    REQUIRE_THROWS_AS(fock::converged_fock_norm_sq(EntireSymbol::exp_quadratic(cplx{0.5, 0.0}), gw),
                      std::runtime_error);
}

TEST_CASE("partial norm sums are nondecreasing and saturate for polynomials") {
    const GaussWeight gw{1.0};
    const auto f = EntireSymbol::polynomial({cplx{1.0, 0.0}, cplx{1.0, 0.0}});  // 1 + z
    const auto s = fock::fock_norm_partial(f, gw, 50);
    REQUIRE(s.size() == 50);
    for (std::size_t i = 1; i < s.size(); ++i) REQUIRE(s[i] >= s[i - 1]);
    REQUIRE_THAT(s.back(), Catch::Matchers::WithinRel(2.0, 1e-14));
    REQUIRE_THROWS_AS(fock::fock_norm_partial(f, gw, 0), std::invalid_argument);
}

TEST_CASE("witness kernels certify the pointwise growth bound for phi = 1") {
    const GaussWeight gw{1.0};
    std::vector<cplx> samples;
    for (int i = -5; i <= 5; ++i)
        for (int j = -5; j <= 5; ++j) {
            const cplx z{double(i), double(j)};
            if (std::abs(z) <= 5.0) samples.push_back(z);
        }
    const auto rep = fock::lambda_bound_witness(EntireSymbol::polynomial({cplx{1.0, 0.0}}), 1.0, gw, samples);
    // || e_w || = e^{r |w|^2 / 2} at |w| = sqrt(2): the constant is e
    REQUIRE_THAT(rep.bound_constant, Catch::Matchers::WithinRel(std::exp(1.0), 1e-10));
    REQUIRE(rep.max_violation < 0.0);
    REQUIRE(rep.max_violation <= 1e-9 * rep.bound_constant);
    for (const auto& w : rep.witness_points) REQUIRE_THAT(std::abs(w), Catch::Matchers::WithinRel(std::sqrt(2.0), 1e-12));
}

TEST_CASE("witness construction refuses symbols outside the multiplier class") {
    const GaussWeight gw{1.0};
    const std::vector<cplx> samples{{0.0, 0.0}};
    REQUIRE_THROWS_AS(fock::lambda_bound_witness(EntireSymbol::exp_quadratic(cplx{0.5, 0.0}), 1.0, gw, samples),
                      std::runtime_error);
    REQUIRE_THROWS_AS(fock::lambda_bound_witness(EntireSymbol::polynomial({cplx{1.0, 0.0}}), 0.0, gw, samples),
                      std::invalid_argument);
}

TEST_CASE("membership names render for reports") {
    REQUIRE(std::string(fock::membership_name(Membership::In)) == "In");
    REQUIRE(std::string(fock::membership_name(Membership::NotIn)) == "NotIn");
    REQUIRE(std::string(fock::membership_name(Membership::BoundaryUnknown)) == "BoundaryUnknown");
}
