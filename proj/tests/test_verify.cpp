#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <complex>
#include <vector>

#include "fock/verify.hpp"

using fock::cplx;
using fock::EntireSymbol;
using fock::GaussWeight;

namespace {

EntireSymbol monomial(int k) {
    std::vector<cplx> c(std::size_t(k) + 1, cplx{0.0, 0.0});
    c.back() = cplx{1.0, 0.0};
    return EntireSymbol::polynomial(std::move(c));
}

const std::vector<cplx> kGrid{{0.0, 0.0}, {0.5, 0.0}, {-0.5, 0.0}, {0.0, 0.5}, {0.0, -0.5}, {0.7, 0.3}};

}  // namespace

TEST_CASE("kernel tail norm matches the analytic remainder of e^{r|w|^2}") {
    const GaussWeight gw{1.0};
    const cplx w{1.0, 0.0};
    const long N = 8;
    double partial = 0.0, term = 1.0;
    for (long n = 0; n <= N; ++n) {
        partial += term;
        term /= double(n + 1);
    }
    const double expected = std::sqrt(std::exp(1.0) - partial);
    REQUIRE_THAT(fock::detail::kernel_tail_norm(w, N, gw), Catch::Matchers::WithinRel(expected, 1e-10));
    // tails shrink rapidly in N
    REQUIRE(fock::detail::kernel_tail_norm(w, 32, gw) < 1e-15);
}

TEST_CASE("kernel families carry normalized members with certified tails") {
    const GaussWeight gw{1.0};
    const auto fam = fock::make_kernel_family(kGrid, 32, gw);
    REQUIRE(fam.kind == fock::TestFamily::Kind::K);
    REQUIRE(fam.members.size() == kGrid.size());
    for (const auto& m : fam.members) {
        REQUIRE(m.v.c.size() == 33);
        REQUIRE(m.tail >= 0.0);
        REQUIRE(std::isfinite(m.tail));
    }
    REQUIRE_THROWS_AS(fock::make_kernel_family({}, 32, gw), std::invalid_argument);
}

TEST_CASE("shifted kernel families multiply members by powers of z") {
    const GaussWeight gw{1.0};
    const auto fam = fock::make_shifted_kernel_family(kGrid, 3, 32, gw);
    REQUIRE(fam.kind == fock::TestFamily::Kind::PK);
    REQUIRE(fam.members.size() == kGrid.size() * 4);
    // the j = 0 slice reproduces the plain kernels
    const auto plain = fock::make_kernel_family(kGrid, 32, gw);
    double diff = 0.0;
    for (std::size_t i = 0; i < kGrid.size(); ++i)
        for (std::size_t n = 0; n < 33; ++n) diff = std::max(diff, std::abs(fam.members[i * 4].v.c[n] - plain.members[i].v.c[n]));
    REQUIRE(diff < 1e-15);
}

TEST_CASE("commuting multipliers pass the pairing check with tiny residuals") {
    const GaussWeight gw{1.0};
    const long N = 32;
    const auto rep = fock::check_kernel_family_commutation(monomial(2), kGrid, kGrid, N, gw, 1e-10);
    REQUIRE(rep.pass);
    REQUIRE(rep.max_residual < 1e-14);
    REQUIRE(rep.condition_id == "kernel-commute");
    REQUIRE(rep.residuals.size() == kGrid.size() * kGrid.size() * kGrid.size());
}

TEST_CASE("the annihilation operator fails the kernel commutation check decisively") {
    const GaussWeight gw{1.0};
    const long N = 32;
    const auto rep =
        fock::check_kernel_family_commutation(fock::annihilation_matrix(N, gw), kGrid, kGrid, 1e-8);
    REQUIRE_FALSE(rep.pass);
    REQUIRE(rep.max_residual >= 1e-3);
}

TEST_CASE("pairing residuals are symmetric in the roles of the two operators") {
    const GaussWeight gw{1.0};
    const long N = 24;
    const auto fam = fock::make_kernel_family(kGrid, N, gw);
    const auto a = fock::mult_matrix(monomial(2), N, gw);
    const auto b = fock::mult_matrix(EntireSymbol::polynomial({cplx{1.0, 0.0}, cplx{0.0, 0.0}, cplx{0.0, 0.0},
                                                               cplx{1.0, 0.0}}),
                                     N, gw);
    const auto r1 = fock::check_commute_rel(a, b, fam, 1e-9, "def3");
    const auto r2 = fock::check_commute_rel(b, a, fam, 1e-9, "def3");
    REQUIRE(r1.pass);
    REQUIRE(r2.pass);
    REQUIRE_THAT(r1.max_residual, Catch::Matchers::WithinAbs(r2.max_residual, 1e-15));
}

TEST_CASE("adjoint action on kernels converges monotonically with N") {
    const GaussWeight gw{1.0};
    const auto cubic = EntireSymbol::polynomial({cplx{1.0, 0.0}, cplx{0.0, 0.0}, cplx{0.0, 0.0}, cplx{1.0, 0.0}});
    const auto rep = fock::check_adjoint_kernel_action(cubic, kGrid, {8, 16, 32}, gw, 1e-8);
    REQUIRE(rep.pass);
    REQUIRE(rep.N == 32);
    REQUIRE(rep.max_residual < 1e-12);

    const auto gauss = EntireSymbol::exp_quadratic(cplx{0.2, 0.0});
    const auto rep2 = fock::check_adjoint_kernel_action(gauss, kGrid, {16, 32, 64}, gw, 1e-8);
    REQUIRE(rep2.pass);
}

TEST_CASE("adjoint kernel action validates its inputs") {
    const GaussWeight gw{1.0};
    REQUIRE_THROWS_AS(fock::check_adjoint_kernel_action(monomial(1), kGrid, {16, 16}, gw, 1e-8),
                      std::invalid_argument);
    REQUIRE_THROWS_AS(fock::check_adjoint_kernel_action(monomial(1), {}, {16}, gw, 1e-8), std::invalid_argument);
    // symbols outside the growth class are refused up front
    REQUIRE_THROWS_AS(
        fock::check_adjoint_kernel_action(EntireSymbol::exp_quadratic(cplx{0.5, 0.0}), kGrid, {16, 32}, gw, 1e-8),
        std::invalid_argument);
}

TEST_CASE("derivative pairing commutes for analytic multipliers") {
    const GaussWeight gw{1.0};
    const auto rep = fock::check_derivative_commutation(monomial(2), kGrid, 32, gw, 1e-10);
    REQUIRE(rep.pass);
    REQUIRE(rep.condition_id == "derivative-commute");
    REQUIRE(rep.max_residual < 1e-14);
}

TEST_CASE("kernel difference quotients converge first-order to monomial vectors") {
    const GaussWeight gw{1.0};
    const long N = 32;
    for (long n : {1L, 2L, 3L}) {
        const auto target = fock::monomial_target(n, N, gw);
        double prev_err = 0.0;
        std::vector<double> errs;
        for (double h : {1e-2, 1e-3}) {
            const auto fh = fock::kernel_difference_quotient(n, h, N, gw);
            fock::FockVector diff(gw, fh.c.size());
            for (std::size_t i = 0; i < fh.c.size(); ++i) diff.c[i] = fh.c[i] - target.c[i];
            errs.push_back(diff.norm());
            prev_err = diff.norm();
        }
        (void)prev_err;
        const double ratio = errs[1] / errs[0];
        REQUIRE(ratio > 0.05);
        REQUIRE(ratio < 0.2);  // first order in h
    }
    // n = 0 is the kernel at the origin itself: exact at every h
    const auto f0 = fock::kernel_difference_quotient(0, 1e-2, N, gw);
    const auto t0 = fock::monomial_target(0, N, gw);
    double d0 = 0.0;
    for (std::size_t i = 0; i < f0.c.size(); ++i) d0 = std::max(d0, std::abs(f0.c[i] - t0.c[i]));
    REQUIRE(d0 <= 1e-14);
}

TEST_CASE("monomial target encodes the coefficients of (rz)^n") {
    const GaussWeight gw{2.0};
    const auto t = fock::monomial_target(3, 8, gw);
    // (rz)^3 in the orthonormal basis: r^3 sqrt(3!/r^3) = sqrt(6 r^3)
    REQUIRE_THAT(t.c[3].real(), Catch::Matchers::WithinRel(std::sqrt(6.0 * 8.0), 1e-13));
    REQUIRE_THROWS_AS(fock::monomial_target(9, 8, gw), std::invalid_argument);
}

TEST_CASE("ladder commutator identities hold entrywise for polynomial symbols") {
    const GaussWeight gw{1.0};
    for (int k : {2, 3}) {
        const auto rep = fock::check_qp_commutator_identities(monomial(k), 64, gw, 1e-12);
        REQUIRE(rep.pass);
        REQUIRE(rep.max_residual < 1e-13);
        REQUIRE(rep.residuals.size() == 2);
    }
}

TEST_CASE("ladder identities hold for a Gaussian multiplier once columns certify") {
    const GaussWeight gw{1.0};
    const auto phi = EntireSymbol::exp_quadratic(cplx{0.2, 0.0});
    const auto rep = fock::check_qp_commutator_identities(phi, 96, gw, 1e-8);
    REQUIRE(rep.pass);
    // scaled residuals sit near the double roundoff floor for this truncation
    REQUIRE(rep.max_residual < 1e-9);
}

TEST_CASE("the ladder check refuses to certify an empty window") {
    const GaussWeight gw{1.0};
    const auto phi = EntireSymbol::exp_quadratic(cplx{0.2, 0.0});
    REQUIRE_THROWS_AS(fock::check_qp_commutator_identities(phi, 6, gw, 1e-12), fock::EmptyWindowError);
}

TEST_CASE("harmonic-symbol operators satisfy both bracket levels on kernels") {
    const GaussWeight gw{1.0};
    const std::vector<cplx> vGrid{{0.0, 0.0}, {0.5, 0.0}, {-0.5, 0.0}, {0.0, 0.5}, {0.0, -0.5}};
    const auto rep = fock::check_harmonic_commutation(monomial(2), monomial(3), vGrid, 64, gw, 1e-8);
    REQUIRE(rep.pass);
    REQUIRE(rep.condition_id == "harmonic");
    REQUIRE(rep.max_residual < 1e-10);
}

TEST_CASE("rayleigh quotients of multiplication operators evaluate the symbol") {
    const GaussWeight gw{1.0};
    const long N = 48;
    const cplx v{0.7, 0.3};
    const auto m = fock::mult_matrix(monomial(2), N, gw);
    const cplx direct = v * v;
    REQUIRE_THAT(std::abs(fock::rayleigh_value(m, v) - direct), Catch::Matchers::WithinAbs(0.0, 1e-12));
    // the adjoint sees the conjugate value
    REQUIRE_THAT(std::abs(fock::rayleigh_value(fock::adjoint(m), v) - std::conj(direct)),
                 Catch::Matchers::WithinAbs(0.0, 1e-12));
}
