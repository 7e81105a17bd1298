#pragma once

// Commutation-relative-to-a-family checks.  The central pairing test: A and B
// commute relative to a family E when <A eta, B* xi> = <B eta, A* xi> for all
// eta, xi in E.  Every check reports scale-free residuals together with an a
// priori truncation_tail, and passes only when max_residual <= tol +
// truncation_tail with a finite tail — truncation loss can widen the bar, but
// an unbounded or uncertified tail never lets a check pass.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdio>
#include <limits>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "growth.hpp"
#include "operator.hpp"
#include "symbol.hpp"
#include "vector.hpp"
#include "weight.hpp"

namespace fock {

// ---------------------------------------------------------------------------
// Test families.  Each member carries the truncated vector, its tail norm
// ||(I - P_N) v_infinity||, and a human-readable label.
// ---------------------------------------------------------------------------

// Thrown when a check has no certified entries at the requested truncation
// degree; the fix is a larger N, not a different tolerance.
struct EmptyWindowError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct TestVectorEntry {
    FockVector v;
    double tail = 0.0;
    std::string label;
};

struct TestFamily {
    enum class Kind { K, PK };
    Kind kind = Kind::K;
    long N = 0;
    GaussWeight weight;
    std::vector<TestVectorEntry> members;
};

namespace detail {

inline std::string format_point(cplx w) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6g%+.6gi", w.real(), w.imag());
    return buf;
}

// tail^2 = sum_{n>N} (r|w|^2)^n / n!
inline double kernel_tail_norm(cplx w, long N, const GaussWeight& gw) {
    const double t = gw.r * std::norm(w);
    if (t == 0.0) return 0.0;
    const double lt = std::log(t);
    double acc = 0.0;
    for (long n = N + 1; n <= N + 600; ++n) {
        const double l = double(n) * lt - log_factorial(n);
        const double term = std::exp(l);
        acc += term;
        if (term < 1e-320 || (acc > 0.0 && term <= 1e-20 * acc)) break;
    }
    return std::sqrt(acc);
}

// Orthonormal coefficients of z^j e_w: c_n = sqrt(n!/r^n) (r conj(w))^{n-j} / (n-j)!
inline ScaledComplex shifted_kernel_coeff(cplx w, long j, long n, const GaussWeight& gw) {
    if (n < j) return ScaledComplex{};
    const long k = n - j;
    const cplx rw = gw.r * std::conj(w);
    if (rw == cplx{0.0, 0.0} && k > 0) return ScaledComplex{};
    const double lmag = 0.5 * (log_factorial(n) - double(n) * std::log(gw.r)) +
                        (k > 0 ? double(k) * std::log(std::abs(rw)) : 0.0) - log_factorial(k);
    const double ph = (k > 0) ? double(k) * std::arg(rw) : 0.0;
    return ScaledComplex::from_log_polar(lmag, ph);
}

inline double shifted_kernel_tail_norm(cplx w, long j, long N, const GaussWeight& gw) {
    double acc = 0.0;
    for (long n = std::max(N + 1, j); n <= N + 700; ++n) {
        const ScaledComplex c = shifted_kernel_coeff(w, j, n, gw);
        const double l = 2.0 * c.log_abs();
        if (!std::isfinite(l)) break;  // w == 0: single coefficient, no tail
        const double term = std::exp(l);
        acc += term;
        if (term < 1e-320 || (acc > 0.0 && term <= 1e-20 * acc)) break;
    }
    return std::sqrt(acc);
}

}  // namespace detail

inline TestFamily make_kernel_family(const std::vector<cplx>& points, long N, const GaussWeight& gw) {
    if (points.empty()) throw std::invalid_argument("test family needs at least one point");
    TestFamily fam;
    fam.kind = TestFamily::Kind::K;
    fam.N = N;
    fam.weight = gw;
    for (cplx w : points) {
        TestVectorEntry e{kernel_vector(w, N, gw), detail::kernel_tail_norm(w, N, gw),
                          "e(" + detail::format_point(w) + ")"};
        fam.members.push_back(std::move(e));
    }
    return fam;
}

// Members z^j e_w for j = 0..J over the grid (exact coefficients of the
// shifted kernel series, truncated at N).
inline TestFamily make_shifted_kernel_family(const std::vector<cplx>& points, long J, long N,
                                             const GaussWeight& gw) {
    if (points.empty()) throw std::invalid_argument("test family needs at least one point");
    if (J < 0 || J > N) throw std::invalid_argument("shifted family: need 0 <= J <= N");
    TestFamily fam;
    fam.kind = TestFamily::Kind::PK;
    fam.N = N;
    fam.weight = gw;
    for (cplx w : points)
        for (long j = 0; j <= J; ++j) {
            FockVector v(gw, std::size_t(N) + 1);
            for (long n = j; n <= N; ++n) v.c[std::size_t(n)] = detail::shifted_kernel_coeff(w, j, n, gw).value();
            TestVectorEntry e{std::move(v), detail::shifted_kernel_tail_norm(w, j, N, gw),
                              "z^" + std::to_string(j) + ".e(" + detail::format_point(w) + ")"};
            fam.members.push_back(std::move(e));
        }
    return fam;
}

// ---------------------------------------------------------------------------
// Reports
// ---------------------------------------------------------------------------

struct PairResidual {
    std::string label;
    double value = 0.0;
};

struct CommutationReport {
    std::string condition_id;
    double r = 1.0;
    long N = 0;
    std::string grid;
    std::vector<PairResidual> residuals;
    double max_residual = 0.0;
    double truncation_tail = 0.0;
    double tol = 0.0;
    bool pass = false;
    std::string details;

    void finalize() {
        max_residual = 0.0;
        for (const auto& p : residuals) max_residual = std::max(max_residual, p.value);
        pass = std::isfinite(truncation_tail) && std::isfinite(max_residual) &&
               max_residual <= tol + truncation_tail;
    }
};

namespace detail {

inline double cut_forward(const TruncatedOperator& op, const FockVector& v) {
    double s = 0.0;
    for (long m = 0; m <= op.N && m < long(v.c.size()); ++m)
        s += std::abs(v.c[std::size_t(m)]) * op.col_tail[std::size_t(m)];
    return s;
}

inline double cut_adjoint(const TruncatedOperator& op, const FockVector& v) {
    double s = 0.0;
    for (long n = 0; n <= op.N && n < long(v.c.size()); ++n)
        s += std::abs(v.c[std::size_t(n)]) * op.row_tail[std::size_t(n)];
    return s;
}

inline std::string grid_string(const TestFamily& fam) {
    std::string g = (fam.kind == TestFamily::Kind::K) ? "K{" : "PK{";
    for (std::size_t i = 0; i < fam.members.size(); ++i) {
        if (i) g += ", ";
        g += fam.members[i].label;
    }
    g += "}";
    return g;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Core pairing check: <A eta, B* xi> vs <B eta, A* xi> over E x E.
// ---------------------------------------------------------------------------

inline CommutationReport check_commute_rel(const TruncatedOperator& A, const TruncatedOperator& B,
                                           const TestFamily& E, double tol,
                                           std::string condition_id = "def3") {
    require_same_weight(A.weight, B.weight, "check_commute_rel");
    require_same_weight(A.weight, E.weight, "check_commute_rel family");
    if (A.N != B.N || A.N != E.N)
        throw std::invalid_argument("check_commute_rel: operator/family truncation degrees differ");

    CommutationReport rep;
    rep.condition_id = std::move(condition_id);
    rep.r = A.weight.r;
    rep.N = A.N;
    rep.grid = detail::grid_string(E);
    rep.tol = tol;

    const TruncatedOperator Astar = adjoint(A);
    const TruncatedOperator Bstar = adjoint(B);
    const double na = op_norm_estimate(A);
    const double nb = op_norm_estimate(B);
    const double scale_ops = (1.0 + na) * (1.0 + nb);

    // Precompute images once per member.
    std::vector<FockVector> Av, Bv, Asv, Bsv;
    for (const auto& m : E.members) {
        Av.push_back(apply(A, m.v));
        Bv.push_back(apply(B, m.v));
        Asv.push_back(apply(Astar, m.v));
        Bsv.push_back(apply(Bstar, m.v));
    }

    double worst_tail = 0.0;
    for (std::size_t i = 0; i < E.members.size(); ++i) {
        const auto& eta = E.members[i];
        const double neta = eta.v.norm();
        for (std::size_t j = 0; j < E.members.size(); ++j) {
            const auto& xi = E.members[j];
            const double nxi = xi.v.norm();
            const cplx lhs = inner(Av[i], Bsv[j]);
            const cplx rhs = inner(Bv[i], Asv[j]);
            const double den = neta * nxi * scale_ops;
            const double res = std::abs(lhs - rhs) / den;
            rep.residuals.push_back({eta.label + " | " + xi.label, res});

            // a) loss above degree N inside each computed pairing, b) the
            // family members themselves are truncations (first-order terms).
            const double cut_pair = (detail::cut_forward(A, eta.v) * detail::cut_adjoint(B, xi.v) +
                                     detail::cut_forward(B, eta.v) * detail::cut_adjoint(A, xi.v)) /
                                    den;
            const double fam_tail = eta.tail / neta + xi.tail / nxi;
            worst_tail = std::max(worst_tail, cut_pair + fam_tail);
        }
    }
    rep.truncation_tail = worst_tail;
    rep.details = "pairing residual |<A eta, B* xi> - <B eta, A* xi>| / (|eta||xi|(1+|A|)(1+|B|)); A=" +
                  A.provenance + ", B=" + B.provenance;
    rep.finalize();
    return rep;
}

// ---------------------------------------------------------------------------
// Adjoint action on kernels: adjoint(M_phi) e_w = conj(phi(w)) e_w, with
// residuals tracked along an increasing truncation sequence.  Monotone
// decrease is required up to a rounding floor: once a residual sits at the
// floor, later values may fluctuate within it.
// ---------------------------------------------------------------------------

inline CommutationReport check_adjoint_kernel_action(const EntireSymbol& phi, const std::vector<cplx>& w_grid,
                                                     const std::vector<long>& N_sequence, const GaussWeight& gw,
                                                     double tol, double noise_floor = 1e-13) {
    if (w_grid.empty() || N_sequence.empty())
        throw std::invalid_argument("check_adjoint_kernel_action: empty grid or truncation sequence");
    for (std::size_t i = 1; i < N_sequence.size(); ++i)
        if (N_sequence[i] <= N_sequence[i - 1])
            throw std::invalid_argument("check_adjoint_kernel_action: truncation sequence must increase");
    {
        const GrowthReport g = classify_growth(phi, gw);
        if (g.lambda_verdict == Membership::NotIn)
            throw std::invalid_argument("check_adjoint_kernel_action: symbol fails the growth test");
    }

    CommutationReport rep;
    rep.condition_id = "adjoint-kernel";
    rep.r = gw.r;
    rep.N = N_sequence.back();
    rep.tol = tol;
    {
        std::string g = "K{";
        for (std::size_t i = 0; i < w_grid.size(); ++i) {
            if (i) g += ", ";
            g += detail::format_point(w_grid[i]);
        }
        rep.grid = g + "}";
    }

    bool monotone = true;
    double final_tail = 0.0;
    double final_max = 0.0;
    for (cplx w : w_grid) {
        const cplx pw = eval_symbol(phi, w);
        double prev = std::numeric_limits<double>::infinity();
        for (std::size_t s = 0; s < N_sequence.size(); ++s) {
            const long N = N_sequence[s];
            const TruncatedOperator Astar = adjoint(mult_matrix(phi, N, gw));
            const FockVector ew = kernel_vector(w, N, gw);
            FockVector diff = apply(Astar, ew);
            for (std::size_t n = 0; n < diff.c.size(); ++n) diff.c[n] -= std::conj(pw) * ew.c[n];
            const double nw = ew.norm();
            const double res = diff.norm() / nw;
            rep.residuals.push_back(
                {"w=" + detail::format_point(w) + " N=" + std::to_string(N), res});
            if (!(res <= prev || res <= noise_floor)) monotone = false;
            prev = res;
            if (s + 1 == N_sequence.size()) {
                // contamination from the kernel tail: the adjoint can fold
                // degrees > N back down, bounded per column by col_tail, plus
                // the subtracted conj(phi(w)) part of the tail itself
                const TruncatedOperator A = mult_matrix(phi, N, gw);
                double colsq = 0.0;
                for (double c : A.col_tail) colsq += c * c;
                const double ktail = detail::kernel_tail_norm(w, N, gw);
                final_tail = std::max(final_tail, ktail * (std::sqrt(colsq) + std::abs(pw)) / nw);
                final_max = std::max(final_max, res);
            }
        }
    }
    rep.truncation_tail = final_tail;
    rep.details = monotone ? "residuals decrease along the truncation sequence (floor " +
                                 std::to_string(noise_floor) + ")"
                           : "residuals FAILED to decrease along the truncation sequence";
    // finalize() would use the max over all N; the verdict belongs to the
    // largest truncation plus the monotonicity requirement.
    rep.max_residual = final_max;
    rep.pass = monotone && std::isfinite(final_tail) && final_max <= tol + final_tail;
    return rep;
}

// ---------------------------------------------------------------------------
// Kernel-family commutation: [A, M_{e_w}] = 0 relative to K, sampled over w
// in w_grid with the pairing family K(v_grid).
// ---------------------------------------------------------------------------

inline CommutationReport check_kernel_family_commutation(const TruncatedOperator& A,
                                                         const std::vector<cplx>& w_grid,
                                                         const std::vector<cplx>& v_grid, double tol) {
    if (w_grid.empty()) throw std::invalid_argument("kernel-family check: empty w grid");
    const TestFamily E = make_kernel_family(v_grid, A.N, A.weight);
    CommutationReport rep;
    rep.condition_id = "kernel-commute";
    rep.r = A.weight.r;
    rep.N = A.N;
    rep.tol = tol;
    rep.grid = detail::grid_string(E);
    double tail = 0.0;
    for (cplx w : w_grid) {
        const TruncatedOperator Mw = mult_matrix(EntireSymbol::kernel(w, A.weight), A.N, A.weight);
        CommutationReport sub = check_commute_rel(A, Mw, E, tol, "kernel-commute");
        for (auto& pr : sub.residuals)
            rep.residuals.push_back({"w=" + detail::format_point(w) + " " + pr.label, pr.value});
        tail = std::max(tail, sub.truncation_tail);
    }
    rep.truncation_tail = tail;
    rep.details = "A against multiplication by kernel symbols; A=" + A.provenance;
    rep.finalize();
    return rep;
}

inline CommutationReport check_kernel_family_commutation(const EntireSymbol& phi, const std::vector<cplx>& w_grid,
                                                         const std::vector<cplx>& v_grid, long N,
                                                         const GaussWeight& gw, double tol) {
    return check_kernel_family_commutation(mult_matrix(phi, N, gw), w_grid, v_grid, tol);
}

// ---------------------------------------------------------------------------
// Derivative commutation: [d/dz, A*] = 0 relative to K, realized as the
// pairing check with B = r * annihilation (= d/dz) against A* in the B*-slot.
// ---------------------------------------------------------------------------

inline CommutationReport check_derivative_commutation(const TruncatedOperator& A, const std::vector<cplx>& w_grid,
                                                      double tol) {
    const TestFamily E = make_kernel_family(w_grid, A.N, A.weight);
    TruncatedOperator D = scale(annihilation_matrix(A.N, A.weight), A.weight.r);
    D.provenance = "d/dz";
    CommutationReport rep = check_commute_rel(adjoint(A), D, E, tol, "derivative-commute");
    rep.details = "pairing of A* against d/dz over kernel family; A=" + A.provenance;
    return rep;
}

inline CommutationReport check_derivative_commutation(const EntireSymbol& phi, const std::vector<cplx>& w_grid,
                                                      long N, const GaussWeight& gw, double tol) {
    return check_derivative_commutation(mult_matrix(phi, N, gw), w_grid, tol);
}

// ---------------------------------------------------------------------------
// Difference quotient of kernels along the real axis:
//   f_h = h^{-n} sum_{k=0}^{n} (-1)^{n-k} C(n,k) e_{kh},
// which converges in norm, first order in h, to the vector with the
// coefficients of (rz)^n.  The k = 0 term is required; without it the h -> 0
// limit diverges.
// ---------------------------------------------------------------------------

inline FockVector kernel_difference_quotient(long n, double h, long N, const GaussWeight& gw) {
    if (h <= 0.0) throw std::invalid_argument("kernel_difference_quotient: h must be positive");
    if (n < 0) throw std::invalid_argument("kernel_difference_quotient: order must be >= 0");
    if (n == 0) return kernel_vector(0.0, N, gw);
    FockVector acc(gw, std::size_t(N) + 1);
    double binom = 1.0;  // C(n,0)
    for (long k = 0; k <= n; ++k) {
        const double sign = ((n - k) % 2 == 0) ? 1.0 : -1.0;
        const FockVector ek = kernel_vector(cplx(double(k) * h, 0.0), N, gw);
        for (std::size_t m = 0; m < acc.c.size(); ++m) acc.c[m] += sign * binom * ek.c[m];
        binom = binom * double(n - k) / double(k + 1);
    }
    const double scale = std::pow(h, double(-n));
    for (auto& c : acc.c) c *= scale;
    return acc;
}

// Target of the difference quotient: coefficients of (r z)^n.
inline FockVector monomial_target(long n, long N, const GaussWeight& gw) {
    if (n > N) throw std::invalid_argument("monomial_target: degree exceeds truncation");
    FockVector v(gw, std::size_t(N) + 1);
    // (rz)^n = r^n z^n; orthonormal coefficient sqrt(n!/r^n) * r^n
    v.c[std::size_t(n)] = std::exp(0.5 * (log_factorial(n) - double(n) * std::log(gw.r)) +
                                   double(n) * std::log(gw.r));
    return v;
}

// ---------------------------------------------------------------------------
// Ladder commutator identities: [rQ, M_phi] = M_{phi'} and [-rP, M_phi] =
// M_{i phi'}, compared entrywise on the window of columns both sides
// represent exactly (strict window for polynomials; tail-bounded window for
// symbols with certified column tails).
// ---------------------------------------------------------------------------

inline CommutationReport check_qp_commutator_identities(const EntireSymbol& phi, long N, const GaussWeight& gw,
                                                        double tol) {
    const EntireSymbol dphi = derivative(phi);
    const TruncatedOperator M = mult_matrix(phi, N, gw);
    const TruncatedOperator Md = mult_matrix(dphi, N, gw);
    const TruncatedOperator rQ = scale(q_matrix(N, gw), gw.r);
    const TruncatedOperator rP = scale(p_matrix(N, gw), -gw.r);
    const TruncatedOperator CQ = commutator(rQ, M);
    const TruncatedOperator CP = commutator(rP, M);

    // window: columns where the commutator columns and the reference columns
    // are certified; strict zeros for polynomials, entry bound <= tol/10 else
    long window = -1;
    const double amp = std::sqrt(double(N + 1) / gw.r);
    const bool poly = polynomial_degree(phi).has_value();
    double window_tail = 0.0;
    for (long m = 0; m <= N; ++m) {
        const double bound =
            amp * (M.col_tail[std::size_t(m)] + Md.col_tail[std::size_t(m)]) +
            CQ.col_tail[std::size_t(m)] + CP.col_tail[std::size_t(m)] + Md.col_tail[std::size_t(m)];
        const bool ok = poly ? (bound == 0.0) : (std::isfinite(bound) && bound <= 0.1 * tol);
        if (!ok) break;
        window = m;
        window_tail = std::max(window_tail, bound);
    }
    if (window < 0)
        throw EmptyWindowError(
            "qp-commutator check: no certified columns at truncation degree " + std::to_string(N) +
            "; increase N");

    CommutationReport rep;
    rep.condition_id = "qp";
    rep.r = gw.r;
    rep.N = N;
    rep.tol = tol;
    rep.grid = "columns 0.." + std::to_string(window);
    // Entry residuals are scaled by the accumulated product magnitude: the
    // commutator entry (n, m) is a signed sum of products whose absolute sum
    // sets the roundoff floor, so the scaled residual measures the identity
    // itself instead of the truncation degree.
    const Eigen::MatrixXd Qa = rQ.mat.cwiseAbs();
    const Eigen::MatrixXd Pa = rP.mat.cwiseAbs();
    const Eigen::MatrixXd Ma = M.mat.cwiseAbs();
    const Eigen::MatrixXd denQ = Qa * Ma + Ma * Qa;
    const Eigen::MatrixXd denP = Pa * Ma + Ma * Pa;
    double rq = 0.0, rp = 0.0;
    for (long m = 0; m <= window; ++m)
        for (long n = 0; n <= N; ++n) {
            rq = std::max(rq, std::abs(CQ.mat(n, m) - Md.mat(n, m)) /
                                  (1.0 + denQ(n, m) + std::abs(Md.mat(n, m))));
            rp = std::max(rp, std::abs(CP.mat(n, m) - cplx(0.0, 1.0) * Md.mat(n, m)) /
                                  (1.0 + denP(n, m) + std::abs(Md.mat(n, m))));
        }
    rep.residuals.push_back({"[rQ, M] - M_deriv", rq});
    rep.residuals.push_back({"[-rP, M] - M_{i.deriv}", rp});
    rep.truncation_tail = window_tail;
    rep.details = "entrywise ladder identities on shared exactness window, scaled by product magnitude";
    rep.finalize();
    return rep;
}

// ---------------------------------------------------------------------------
// Mixed-symbol operator A = M_Phi + (M_Psi)^*:
//   level 1: M_z^*(A e_v) - A(M_z^* e_v) = (1/r) M_{Phi'} e_v
//   level 2: [M_z, [M_z^*, A]] e_v = 0
// ---------------------------------------------------------------------------

inline CommutationReport check_harmonic_commutation(const EntireSymbol& Phi, const EntireSymbol& Psi,
                                                    const std::vector<cplx>& v_grid, long N,
                                                    const GaussWeight& gw, double tol) {
    if (v_grid.empty()) throw std::invalid_argument("harmonic check: empty grid");
    const TruncatedOperator A = harmonic_operator(Phi, Psi, N, gw);
    const TruncatedOperator Czs = adjoint(creation_matrix(N, gw));  // M_z^*
    const TruncatedOperator Cz = creation_matrix(N, gw);
    const TruncatedOperator Ref = scale(mult_matrix(derivative(Phi), N, gw), 1.0 / gw.r);

    TruncatedOperator D1 = commutator(Czs, A);  // [M_z^*, A]
    TruncatedOperator L1 = add(D1, scale(Ref, -1.0));
    TruncatedOperator D2 = commutator(Cz, D1);  // [M_z, [M_z^*, A]]

    CommutationReport rep;
    rep.condition_id = "harmonic";
    rep.r = gw.r;
    rep.N = N;
    rep.tol = tol;
    {
        std::string g = "K{";
        for (std::size_t i = 0; i < v_grid.size(); ++i) {
            if (i) g += ", ";
            g += detail::format_point(v_grid[i]);
        }
        rep.grid = g + "}";
    }
    const double n1 = op_norm_estimate(L1);
    const double n2 = op_norm_estimate(D2);
    double tail = 0.0;
    for (cplx v : v_grid) {
        const FockVector ev = kernel_vector(v, N, gw);
        const double nv = ev.norm();
        const double r1 = apply(L1, ev).norm() / nv;
        const double r2 = apply(D2, ev).norm() / nv;
        rep.residuals.push_back({"level1 v=" + detail::format_point(v), r1});
        rep.residuals.push_back({"level2 v=" + detail::format_point(v), r2});
        const double ktail = detail::kernel_tail_norm(v, N, gw);
        tail = std::max(tail, (detail::cut_forward(L1, ev) + detail::cut_forward(D2, ev) +
                               ktail * (2.0 + n1 + n2)) /
                                  nv);
    }
    rep.truncation_tail = tail;
    rep.details = "first- and second-level ladder commutators of the mixed-symbol operator";
    rep.finalize();
    return rep;
}

// ---------------------------------------------------------------------------
// Rayleigh eigenvalue extraction: <A* e_v, e_v> / |e_v|^2 approximates
// conj(phi(v)) for A = M_phi.
// ---------------------------------------------------------------------------

inline cplx rayleigh_value(const TruncatedOperator& A, cplx v) {
    const FockVector ev = kernel_vector(v, A.N, A.weight);
    return inner(apply(A, ev), ev) / ev.norm_sq();
}

}  // namespace fock
