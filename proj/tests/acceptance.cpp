// Acceptance gate: fourteen numbered end-to-end checks, one PASS/FAIL line
// each.  Exit code is the number of failing checks, so 0 means the gate is
// green.  Check 14 drives the installed CLI binary (path via --cli).

#include <cmath>
#include <complex>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <sys/wait.h>

#include "fock/counterexample.hpp"
#include "fock/verify.hpp"

using fock::cplx;
using fock::EntireSymbol;
using fock::GaussWeight;
using fock::Membership;
using fock::Verdict;

namespace {

std::string g_cli;

struct Outcome {
    bool ok = false;
    std::string detail;
};

EntireSymbol monomial(int k) {
    std::vector<cplx> c(std::size_t(k) + 1, cplx{0.0, 0.0});
    c.back() = cplx{1.0, 0.0};
    return EntireSymbol::polynomial(std::move(c));
}

const std::vector<cplx> kGrid{{0.0, 0.0}, {0.5, 0.0}, {-0.5, 0.0}, {0.0, 0.5}, {0.0, -0.5}, {0.7, 0.3}};

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.3g", v);
    return buf;
}

// --- 1: quadrature orthonormality of the monomial basis -------------------

Outcome check_orthonormality() {
    double worst = 0.0;
    for (double r : {0.5, 1.0, 2.0}) {
        const GaussWeight gw{r};
        const auto rule = fock::make_quadrature(gw, 40, 128);
        const auto nodes = fock::quadrature_nodes(rule);
        const int n_max = 30;
        std::vector<std::vector<cplx>> samples(std::size_t(n_max) + 1,
                                               std::vector<cplx>(nodes.size()));
        for (int n = 0; n <= n_max; ++n) {
            const double scale = std::exp(-0.5 * fock::log_basis_norm_sq(n, gw));
            for (std::size_t i = 0; i < nodes.size(); ++i)
                samples[std::size_t(n)][i] = scale * std::pow(nodes[i], n);
        }
        for (int n = 0; n <= n_max; ++n)
            for (int m = n; m <= n_max; ++m) {
                const cplx v = fock::gauss_inner_sampled(samples[std::size_t(n)], samples[std::size_t(m)], rule);
                const double target = (n == m) ? 1.0 : 0.0;
                worst = std::max(worst, std::abs(v - target));
            }
    }
    return {worst <= 1e-10, "max |<u_n,u_m> - delta| = " + fmt(worst) + " over n,m <= 30, r in {0.5,1,2}"};
}

// --- 2: reproducing property for random polynomials -----------------------

Outcome check_reproducing() {
    const GaussWeight gw{1.0};
    std::mt19937 rng(12345);
    std::uniform_real_distribution<double> coeff(-1.0, 1.0);
    double worst = 0.0;
    for (int trial = 0; trial < 20; ++trial) {
        const int deg = int(rng() % 11);
        std::vector<cplx> a(std::size_t(deg) + 1);
        for (auto& v : a) v = cplx{coeff(rng), coeff(rng)};
        cplx w{0.0, 0.0};
        do {
            w = cplx{2.0 * coeff(rng), 2.0 * coeff(rng)};
        } while (std::abs(w) > 2.0);

        fock::FockVector f(gw, a.size());
        for (std::size_t n = 0; n < a.size(); ++n)
            f.c[n] = a[n] * std::sqrt(fock::basis_norm_sq(long(n), gw));
        cplx direct{0.0, 0.0};
        for (std::size_t n = a.size(); n-- > 0;) direct = direct * w + a[n];

        const cplx via_kernel = fock::inner(f, fock::kernel_vector(w, 64, gw));
        worst = std::max(worst, std::abs(via_kernel - direct) / (1.0 + std::abs(direct)));
    }
    return {worst <= 1e-10, "max relative reproducing error = " + fmt(worst) + " over 20 random polynomials"};
}

// --- 3: ladder adjointness and canonical commutator -----------------------

Outcome check_ladder_adjoint() {
    const long N = 64;
    for (double r : {0.5, 1.0, 2.0}) {
        const GaussWeight gw{r};
        const auto up = fock::creation_matrix(N, gw);
        const auto down = fock::annihilation_matrix(N, gw);
        const auto adj = fock::adjoint(up);
        if ((adj.mat - down.mat).norm() != 0.0)
            return {false, "adjoint(creation) differs from annihilation at r = " + fmt(r)};
        if (adj.col_tail != down.col_tail || adj.row_tail != down.row_tail)
            return {false, "adjoint metadata mismatch at r = " + fmt(r)};
        const auto c = fock::commutator(down, up);
        double worst = 0.0;
        for (long n = 0; n < N; ++n)
            for (long m = 0; m < N; ++m) {
                const cplx target = (n == m) ? cplx{1.0 / r, 0.0} : cplx{0.0, 0.0};
                worst = std::max(worst, std::abs(c.mat(n, m) - target));
            }
        if (worst > 1e-12)
            return {false, "[ann, cre] interior deviates from (1/r) I by " + fmt(worst) + " at r = " + fmt(r)};
    }
    return {true, "adjoint exact and [ann, cre] = (1/r) I to 1e-12 on the interior block, r in {0.5,1,2}"};
}

// --- 4: adjoint action on kernels, residual shrinking in N ----------------

Outcome check_adjoint_kernel() {
    const GaussWeight gw{1.0};
    const std::vector<EntireSymbol> symbols{
        monomial(1), monomial(2),
        EntireSymbol::polynomial({cplx{1.0, 0.0}, cplx{0.0, 0.0}, cplx{0.0, 0.0}, cplx{1.0, 0.0}}),
        EntireSymbol::exp_quadratic(cplx{0.2, 0.0})};
    const char* names[] = {"z", "z^2", "z^3+1", "exp(0.2 z^2)"};
    double worst = 0.0;
    for (std::size_t i = 0; i < symbols.size(); ++i) {
        const auto rep = fock::check_adjoint_kernel_action(symbols[i], kGrid, {16, 32, 64}, gw, 1e-8);
        if (!rep.pass)
            return {false, std::string("adjoint-kernel check failed for ") + names[i] +
                               " (max residual " + fmt(rep.max_residual) + ")"};
        worst = std::max(worst, rep.max_residual);
    }
    return {true, "residuals monotone in N in {16,32,64} and final <= 1e-8 for all four symbols (worst " +
                      fmt(worst) + ")"};
}

// --- 5: full condition chain for z^2 plus a negative control --------------

Outcome check_condition_chain() {
    const GaussWeight gw{1.0};
    const long N = 64;
    const double tol = 1e-8;
    const auto z2 = monomial(2);

    const auto kc = fock::check_kernel_family_commutation(z2, kGrid, kGrid, N, gw, tol);
    if (!kc.pass) return {false, "kernel-commute failed (residual " + fmt(kc.max_residual) + ")"};

    const auto fam = fock::make_shifted_kernel_family(kGrid, 3, N, gw);
    const auto zc = fock::check_commute_rel(fock::mult_matrix(z2, N, gw), fock::creation_matrix(N, gw), fam, tol,
                                            "z-commute");
    if (!zc.pass) return {false, "z-commute failed (residual " + fmt(zc.max_residual) + ")"};

    const auto ak = fock::check_adjoint_kernel_action(z2, kGrid, {16, 32, 64}, gw, tol);
    if (!ak.pass) return {false, "adjoint-kernel failed (residual " + fmt(ak.max_residual) + ")"};

    const auto dc = fock::check_derivative_commutation(z2, kGrid, N, gw, tol);
    if (!dc.pass) return {false, "derivative-commute failed (residual " + fmt(dc.max_residual) + ")"};

    const auto neg = fock::check_kernel_family_commutation(fock::annihilation_matrix(N, gw), kGrid, kGrid, tol);
    if (neg.pass) return {false, "negative control (annihilation) unexpectedly passed"};
    if (neg.max_residual < 1e-3)
        return {false, "negative control residual too small: " + fmt(neg.max_residual)};

    return {true, "kernel/z/adjoint/derivative conditions pass for z^2; annihilation control fails at residual " +
                      fmt(neg.max_residual)};
}

// --- 6: ladder commutator identities --------------------------------------

Outcome check_qp_identities() {
    const GaussWeight gw{1.0};
    double worst = 0.0;
    for (int k : {2, 3}) {
        const auto rep = fock::check_qp_commutator_identities(monomial(k), 64, gw, 1e-12);
        if (!rep.pass)
            return {false, "ladder identities failed for z^" + std::to_string(k) + " (residual " +
                               fmt(rep.max_residual) + ")"};
        worst = std::max(worst, rep.max_residual);
    }
    return {true, "[rQ,M] = M' and [-rP,M] = M_{i phi'} entrywise at N = 64, worst scaled residual " + fmt(worst)};
}

// --- 7: harmonic-symbol operator brackets ----------------------------------

Outcome check_harmonic() {
    const GaussWeight gw{1.0};
    const std::vector<cplx> vGrid{{0.0, 0.0}, {0.5, 0.0}, {-0.5, 0.0}, {0.0, 0.5}, {0.0, -0.5}};
    const auto rep = fock::check_harmonic_commutation(monomial(2), monomial(3), vGrid, 64, gw, 1e-8);
    if (!rep.pass) return {false, "harmonic bracket check failed (residual " + fmt(rep.max_residual) + ")"};
    return {true, "both bracket levels hold on 5 kernel points at N = 64 (residual " + fmt(rep.max_residual) + ")"};
}

// --- 8: difference quotients of kernels converge first order ---------------

Outcome check_difference_quotient() {
    const GaussWeight gw{1.0};
    const long N = 32;
    const std::vector<double> hs{1e-2, 1e-3, 1e-4};
    double worst_order = std::numeric_limits<double>::infinity();
    for (long n = 0; n <= 3; ++n) {
        const auto target = fock::monomial_target(n, N, gw);
        std::vector<double> errs;
        for (double h : hs) {
            const auto fh = fock::kernel_difference_quotient(n, h, N, gw);
            double e2 = 0.0;
            for (std::size_t i = 0; i < fh.c.size(); ++i) e2 += std::norm(fh.c[i] - target.c[i]);
            errs.push_back(std::sqrt(e2));
        }
        if (n == 0) {
            for (double e : errs)
                if (e > 1e-14) return {false, "degree-0 quotient not exact: error " + fmt(e)};
            continue;
        }
        // least-squares slope of log err against log h
        double sx = 0, sy = 0, sxx = 0, sxy = 0;
        for (std::size_t i = 0; i < hs.size(); ++i) {
            const double x = std::log(hs[i]);
            const double y = std::log(errs[i]);
            sx += x;
            sy += y;
            sxx += x * x;
            sxy += x * y;
        }
        const double cnt = double(hs.size());
        const double slope = (cnt * sxy - sx * sy) / (cnt * sxx - sx * sx);
        worst_order = std::min(worst_order, slope);
        if (slope < 0.9)
            return {false, "fitted order " + fmt(slope) + " < 0.9 for degree " + std::to_string(n)};
    }
    return {true, "first-order convergence confirmed (worst fitted order " + fmt(worst_order) +
                      "), degree-0 case exact"};
}

// --- 9: borderline coefficients: f stays in, zf leaves ---------------------

Outcome check_borderline() {
    const double basel = 3.14159265358979323846 * 3.14159265358979323846 / 6.0;
    for (double r : {0.5, 1.0, 2.0}) {
        const GaussWeight gw{r};
        const auto small = fock::borderline_norms(gw, 10000);
        const double deficit = std::abs(small.norm_f.values.back() - basel);
        if (deficit > 1e-4)
            return {false, "partial ||f||^2 misses pi^2/6 by " + fmt(deficit) + " at M = 1e4, r = " + fmt(r)};
        const auto big = fock::borderline_norms(gw, 1000000);
        if (big.norm_zf.verdict != Verdict::Diverges ||
            big.norm_zf.model.kind != fock::FittedModel::Kind::Logarithmic)
            return {false, "||zf||^2 did not diverge logarithmically at r = " + fmt(r)};
        const double slope = big.norm_zf.model.parameter;
        if (std::abs(slope - 1.0 / r) > 0.02 * (1.0 / r))
            return {false, "log slope " + fmt(slope) + " vs 1/r = " + fmt(1.0 / r) + " off by more than 2%"};
    }
    return {true, "||f||^2 -> pi^2/6 and ||zf||^2 ~ (1/r) log M within 2% for r in {0.5,1,2}"};
}

// --- 10: shifted-monomial norm verdict table -------------------------------

Outcome check_shifted_table() {
    const GaussWeight gw{1.0};
    for (long k = 0; k <= 4; ++k)
        for (long j = 0; j <= 4; ++j) {
            const auto d = fock::shifted_monomial_norms(k, j, gw, 2000000);
            const bool expect_conv = (j <= k);
            if ((d.verdict == Verdict::Converges) != expect_conv)
                return {false, "verdict mismatch at k = " + std::to_string(k) + ", j = " + std::to_string(j)};
        }
    return {true, "all 25 (k, j) verdicts equal [j <= k] at M = 2e6"};
}

// --- 11: Gaussian factor membership splits at |c| = r/2 --------------------

Outcome check_gaussian_membership() {
    const GaussWeight gw{1.0};
    const auto in = fock::classify_growth(EntireSymbol::exp_quadratic(cplx{0.4, 0.0}), gw);
    if (in.lambda_verdict != Membership::In || in.fock_verdict != Membership::In)
        return {false, "exp(0.4 z^2) not recognized as inside"};
    for (double c : {0.5, 0.6}) {
        const auto rep = fock::classify_growth(EntireSymbol::exp_quadratic(cplx{c, 0.0}), gw);
        if (rep.lambda_verdict != Membership::NotIn || rep.fock_verdict != Membership::NotIn)
            return {false, "exp(" + fmt(c) + " z^2) not recognized as outside"};
    }
    return {true, "exp(c z^2) at r = 1: c = 0.4 inside, c in {0.5, 0.6} outside"};
}

// --- 12: constructive pointwise growth bounds ------------------------------

Outcome check_witness_bounds() {
    const GaussWeight gw{1.0};
    std::vector<cplx> samples;
    for (int i = -10; i <= 10; ++i)
        for (int j = -10; j <= 10; ++j) {
            const cplx z{0.5 * i, 0.5 * j};
            if (std::abs(z) <= 5.0) samples.push_back(z);
        }
    const std::vector<EntireSymbol> phis{EntireSymbol::polynomial({cplx{1.0, 0.0}}), monomial(1),
                                         EntireSymbol::kernel(cplx{1.0, 0.0}, gw)};
    const char* names[] = {"1", "z", "e_1"};
    double worst = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < phis.size(); ++i)
        for (double decay : {1.0, 2.0}) {
            const auto rep = fock::lambda_bound_witness(phis[i], decay, gw, samples);
            const double rel = rep.max_violation / rep.bound_constant;
            worst = std::max(worst, rel);
            if (rep.max_violation > 1e-9 * rep.bound_constant)
                return {false, std::string("bound violated for phi = ") + names[i] + ", decay " + fmt(decay) +
                                   ": excess " + fmt(rep.max_violation)};
        }
    return {true, "pointwise bounds hold on the |z| <= 5 grid for {1, z, e_1} x decay {1, 2} (worst margin " +
                      fmt(worst) + ")"};
}

// --- 13: lattice sigma: periodic modulus and controlled quotients ----------

Outcome check_lattice_sigma() {
    const GaussWeight gw{1.0};
    const auto s = fock::make_lattice_sigma(gw);
    const cplx z0{0.23 * s.a, 0.41 * s.a};
    const double base = std::abs(fock::sigma_gauss_normalized(s, z0));
    double worst = 0.0;
    for (int m = -5; m <= 4; ++m)
        for (int n = -5; n <= 4; ++n) {
            const cplx z = z0 + cplx{double(m) * s.a, double(n) * s.a};
            worst = std::max(worst, std::abs(std::abs(fock::sigma_gauss_normalized(s, z)) - base));
        }
    if (worst > 1e-8) return {false, "normalized sigma modulus drifts by " + fmt(worst) + " across 10x10 cells"};

    const auto rule = fock::make_quadrature(gw, 40, 128);
    const std::vector<double> radii{2.0, 4.0, 8.0, 16.0};
    const auto balanced = fock::sigma_over_p_domain(s, 0, 0, radii, rule);
    if (balanced.diag.verdict != Verdict::Converges) return {false, "(k,j) = (0,0) quotient did not stay bounded"};
    const auto logc = fock::sigma_over_p_domain(s, 0, 1, radii, rule);
    if (logc.diag.model.kind != fock::FittedModel::Kind::Logarithmic)
        return {false, "(k,j) = (0,1) quotient did not grow logarithmically"};
    const auto pow = fock::sigma_over_p_domain(s, 1, 3, radii, rule);
    if (pow.diag.model.kind != fock::FittedModel::Kind::Power)
        return {false, "(k,j) = (1,3) quotient did not grow like a power"};
    return {true, "periodic modulus drift " + fmt(worst) + "; quotient growth bounded/log/power as predicted"};
}

// --- 14: byte-identical reports from identical CLI invocations -------------

Outcome check_cli_determinism() {
    if (g_cli.empty()) return {false, "no --cli path supplied"};
    const std::string out_path = "acceptance_det.json";
    const std::string cmd = g_cli + " verify qp poly:0,0,1 --N 32 --tol 1e-10 --out " + out_path +
                            " > acceptance_det_stdout.tmp 2>&1";
    auto slurp = [](const std::string& p) {
        std::ifstream f(p, std::ios::binary);
        return std::string((std::istreambuf_iterator<char>(f)), std::istreambuf_iterator<char>());
    };
    auto run_once = [&]() -> int {
        const int status = std::system(cmd.c_str());
        return (status >= 0 && WIFEXITED(status)) ? WEXITSTATUS(status) : -1;
    };
    const int rc1 = run_once();
    const std::string bytes1 = slurp(out_path);
    const int rc2 = run_once();
    const std::string bytes2 = slurp(out_path);
    std::remove(out_path.c_str());
    std::remove("acceptance_det_stdout.tmp");
    if (rc1 != 0 || rc2 != 0)
        return {false, "CLI exited with " + std::to_string(rc1) + " / " + std::to_string(rc2)};
    if (bytes1.empty()) return {false, "CLI produced an empty report"};
    if (bytes1 != bytes2) return {false, "reports differ between identical invocations"};
    return {true, "two identical invocations wrote byte-identical reports (" + std::to_string(bytes1.size()) +
                      " bytes)"};
}

}  // namespace

int main(int argc, char** argv) {
    for (int i = 1; i + 1 < argc; ++i)
        if (std::string(argv[i]) == "--cli") g_cli = argv[i + 1];

    struct Criterion {
        const char* name;
        std::function<Outcome()> run;
    };
    const std::vector<Criterion> criteria{
        {"quadrature orthonormality", check_orthonormality},
        {"kernel reproducing property", check_reproducing},
        {"ladder adjointness and commutator", check_ladder_adjoint},
        {"adjoint kernel action", check_adjoint_kernel},
        {"condition chain with negative control", check_condition_chain},
        {"ladder commutator identities", check_qp_identities},
        {"harmonic-symbol brackets", check_harmonic},
        {"kernel difference quotients", check_difference_quotient},
        {"borderline coefficient norms", check_borderline},
        {"shifted-monomial verdict table", check_shifted_table},
        {"Gaussian membership boundary", check_gaussian_membership},
        {"pointwise growth witnesses", check_witness_bounds},
        {"lattice sigma growth control", check_lattice_sigma},
        {"CLI report determinism", check_cli_determinism},
    };

    int failures = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        Outcome o;
        try {
            o = criteria[i].run();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        if (!o.ok) ++failures;
        std::printf("%s criterion %2zu (%s): %s\n", o.ok ? "PASS" : "FAIL", i + 1, criteria[i].name,
                    o.detail.c_str());
    }
    std::fflush(stdout);
    return failures;
}
