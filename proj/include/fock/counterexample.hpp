#pragma once

// Domain pathologies of unbounded multiplication operators, each realized as
// a concrete nonnegative series or annulus integral with a fitted verdict.

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "diagnostics.hpp"
#include "growth.hpp"
#include "lattice_sigma.hpp"
#include "quadrature.hpp"
#include "weight.hpp"

namespace fock {

// ---------------------------------------------------------------------------
// The borderline vector f with normalized-basis coefficients c_n = 1/(n+1):
// |f|^2 = sum (n+1)^{-2} converges (Basel), while |z f|^2 = (1/r) sum
// (n+1)^{-1} diverges logarithmically — f is in the space but not in the
// domain of multiplication by z.
// ---------------------------------------------------------------------------

struct BorderlineReport {
    GaussWeight weight;
    DivergenceDiagnostic norm_f;
    DivergenceDiagnostic norm_zf;
};

inline BorderlineReport borderline_norms(const GaussWeight& gw, long M = 1000000L) {
    if (M < 100) throw std::invalid_argument("borderline_norms: M must be >= 100");
    BorderlineReport rep;
    rep.weight = gw;
    rep.norm_f = diagnose_series([](long n) { const double d = double(n) + 1.0; return 1.0 / (d * d); }, M,
                                 "|f|^2 partial sums, c_n = 1/(n+1)");
    const double invr = 1.0 / gw.r;
    rep.norm_zf = diagnose_series([invr](long n) { return invr / (double(n) + 1.0); }, M,
                                  "|z f|^2 partial sums = (1/r) harmonic sums");
    return rep;
}

// ---------------------------------------------------------------------------
// The k-shifted vector g (coefficients of f moved down k slots): z^j g stays
// in the space exactly for j <= k.  The squared-norm terms are
//   t_n = r^{k-j} (n+j)! / ((n+k)! (n+k+1)^2)  ~  n^{j-k-2}.
// ---------------------------------------------------------------------------

inline DivergenceDiagnostic shifted_monomial_norms(long k, long j, const GaussWeight& gw, long M = 2000000L) {
    if (k < 0 || j < 0) throw std::invalid_argument("shifted_monomial_norms: need k >= 0 and j >= 0");
    if (M < 100) throw std::invalid_argument("shifted_monomial_norms: M must be >= 100");
    const double lr = std::log(gw.r);
    auto term = [k, j, lr](long n) {
        const double lt = double(k - j) * lr + log_factorial(n + j) - log_factorial(n + k) -
                          2.0 * std::log(double(n + k) + 1.0);
        return std::exp(lt);
    };
    return diagnose_series(term, M,
                           "|z^" + std::to_string(j) + " g|^2 partial sums, k = " + std::to_string(k));
}

// ---------------------------------------------------------------------------
// Gaussian symbols e^{c z^2}: membership in the space holds iff |c| < r/2.
// For the factor pair e^{-a w z^2}, e^{(1-a) w z^2} the admissible interval
// of a is (1 - r/(2|w|), r/(2|w|)), nonempty iff |w| < r.
// ---------------------------------------------------------------------------

struct GaussianFactorEvidence {
    cplx c;                      // quadratic exponent
    Membership membership;       // analytic rule |c| < r/2 (equality NotIn)
    DivergenceDiagnostic diag;   // numeric partial-sum evidence
};

struct GaussianDomainReport {
    GaussWeight weight;
    cplx w;
    double a = 0.0;
    GaussianFactorEvidence factor1;   // e^{-a w z^2}
    GaussianFactorEvidence factor2;   // e^{(1-a) w z^2}
    GaussianFactorEvidence whole;     // e^{w z^2}
    double interval_lo = 0.0;         // admissible a interval under the r-general rule
    double interval_hi = 0.0;
    bool interval_nonempty = false;
    bool r_general_form = false;      // true when r != 1 (interval formula rescaled)
};

namespace detail {
inline GaussianFactorEvidence gaussian_factor_evidence(cplx c, const GaussWeight& gw, long M) {
    GaussianFactorEvidence ev;
    ev.c = c;
    ev.membership = (std::abs(c) < gw.r / 2.0) ? Membership::In : Membership::NotIn;
    const double x = std::norm(c) / (gw.r * gw.r);  // |c|^2 / r^2
    if (x == 0.0) {
        ev.diag = diagnose_series([](long n) { return n == 0 ? 1.0 : 0.0; }, M, "|e^{0}|^2 terms");
        return ev;
    }
    const double lx = std::log(x);
    ev.diag = diagnose_series(
        [lx](long m) { return std::exp(double(m) * lx + log_factorial(2 * m) - 2.0 * log_factorial(m)); }, M,
        "|e^{c z^2}|^2 terms C(2m,m) (|c|/r)^{2m}");
    return ev;
}
}  // namespace detail

inline GaussianDomainReport gaussian_domain_demo(cplx w, double a, const GaussWeight& gw, long M = 4000) {
    GaussianDomainReport rep;
    rep.weight = gw;
    rep.w = w;
    rep.a = a;
    rep.factor1 = detail::gaussian_factor_evidence(-a * w, gw, M);
    rep.factor2 = detail::gaussian_factor_evidence((1.0 - a) * w, gw, M);
    rep.whole = detail::gaussian_factor_evidence(w, gw, M);
    const double aw = std::abs(w);
    if (aw > 0.0) {
        rep.interval_lo = 1.0 - gw.r / (2.0 * aw);
        rep.interval_hi = gw.r / (2.0 * aw);
        rep.interval_nonempty = rep.interval_lo < rep.interval_hi;  // iff |w| < r
    } else {
        rep.interval_lo = -std::numeric_limits<double>::infinity();
        rep.interval_hi = std::numeric_limits<double>::infinity();
        rep.interval_nonempty = true;
    }
    rep.r_general_form = (gw.r != 1.0);
    return rep;
}

// ---------------------------------------------------------------------------
// Sigma domain collapse: |sigma|^2 d(mu) has lattice-periodic density, so the
// annulus integrals over 1 < |z| < R grow like the area (~ R^2) — sigma
// multiplies nothing (not even constants) back into the space.  A cubic
// polynomial control stays bounded.
// ---------------------------------------------------------------------------

struct SigmaCollapseReport {
    std::vector<double> radii;
    DivergenceDiagnostic sigma_diag;
    DivergenceDiagnostic control_diag;
};

inline SigmaCollapseReport sigma_domain_collapse(const LatticeSigma& s, std::vector<double> radii,
                                                 const QuadratureRule& rule) {
    if (radii.size() < 3) throw std::invalid_argument("sigma_domain_collapse: need >= 3 radii");
    for (std::size_t i = 1; i < radii.size(); ++i)
        if (!(radii[i] > radii[i - 1]))
            throw std::invalid_argument("sigma_domain_collapse: radii must increase");
    if (!(radii.front() > 1.0)) throw std::invalid_argument("sigma_domain_collapse: radii must exceed 1");
    SigmaCollapseReport rep;
    rep.radii = radii;
    std::vector<double> vs, vc;
    for (double R : radii) {
        // Gaussian-normalized sigma carries e^{-r|z|^2/2} itself
        vs.push_back(gauss_norm_over_annulus([&](cplx z) { return sigma_gauss_normalized(s, z); }, 1.0, R, rule,
                                             0, 0.25, false));
        vc.push_back(gauss_norm_over_annulus([](cplx z) { return z * z * z; }, 1.0, R, rule));
    }
    rep.sigma_diag = diagnose_annulus(radii, vs, "annulus integrals of |sigma|^2 d(mu)");
    rep.control_diag = diagnose_annulus(radii, vc, "annulus integrals of |z^3|^2 d(mu) (control)");
    return rep;
}

// ---------------------------------------------------------------------------
// Sigma over a monic polynomial p with k+2 simple lattice zeros nearest the
// origin: the annulus integrals of |sigma/p|^2 |z|^{2j} d(mu) are bounded for
// j <= k, grow logarithmically at j = k+1, and grow like a power beyond.
// ---------------------------------------------------------------------------

struct SigmaOverPReport {
    long k = 0, j = 0;
    std::vector<cplx> zeros;
    std::vector<double> radii;
    std::vector<double> values;
    DivergenceDiagnostic diag;
};

// The k+2 lattice points nearest the origin in deterministic order: sort by
// (|w|^2, arg in [0, 2pi)).
inline std::vector<cplx> nearest_lattice_zeros(const LatticeSigma& s, long count) {
    if (count < 1) throw std::invalid_argument("nearest_lattice_zeros: count must be >= 1");
    struct Key {
        long norm2;
        double ang;
        cplx pt;
    };
    std::vector<Key> keys;
    const long B = long(std::ceil(std::sqrt(double(count)))) + 2;
    for (long m = -B; m <= B; ++m)
        for (long n = -B; n <= B; ++n) {
            double ang = std::atan2(double(n), double(m));
            if (ang < 0.0) ang += 2.0 * 3.14159265358979323846;
            if (m == 0 && n == 0) ang = 0.0;
            keys.push_back({m * m + n * n, ang, s.a * cplx(double(m), double(n))});
        }
    std::sort(keys.begin(), keys.end(), [](const Key& x, const Key& y) {
        if (x.norm2 != y.norm2) return x.norm2 < y.norm2;
        return x.ang < y.ang;
    });
    std::vector<cplx> out;
    for (long i = 0; i < count; ++i) out.push_back(keys[std::size_t(i)].pt);
    return out;
}

inline SigmaOverPReport sigma_over_p_domain(const LatticeSigma& s, std::vector<cplx> zeros, long j,
                                            std::vector<double> radii, const QuadratureRule& rule) {
    if (zeros.size() < 2) throw std::invalid_argument("sigma_over_p_domain: need at least 2 zeros (k >= 0)");
    if (j < 0) throw std::invalid_argument("sigma_over_p_domain: j must be >= 0");
    if (radii.size() < 3) throw std::invalid_argument("sigma_over_p_domain: need >= 3 radii");
    if (!(radii.front() > 1.0)) throw std::invalid_argument("sigma_over_p_domain: radii must exceed 1");
    for (std::size_t i = 1; i < radii.size(); ++i)
        if (!(radii[i] > radii[i - 1])) throw std::invalid_argument("sigma_over_p_domain: radii must increase");
    for (std::size_t i = 0; i < zeros.size(); ++i) {
        zeros[i] = require_lattice_point(s, zeros[i], "sigma_over_p_domain");
        for (std::size_t l = 0; l < i; ++l)
            if (zeros[i] == zeros[l]) throw std::invalid_argument("sigma_over_p_domain: zeros must be distinct");
    }
    SigmaOverPReport rep;
    rep.k = long(zeros.size()) - 2;
    rep.j = j;
    rep.zeros = zeros;
    rep.radii = radii;
    auto f = [&](cplx z) {
        cplx p{1.0, 0.0};
        for (const cplx& w : zeros) p *= (z - w);
        return sigma_gauss_normalized(s, z) / p;
    };
    for (double R : radii)
        rep.values.push_back(gauss_norm_over_annulus(f, 1.0, R, rule, int(j), 0.25, false));
    rep.diag = diagnose_annulus(radii, rep.values,
                                "annulus integrals of |sigma/p|^2 |z|^{2j} d(mu), k = " +
                                    std::to_string(rep.k) + ", j = " + std::to_string(j));
    return rep;
}

inline SigmaOverPReport sigma_over_p_domain(const LatticeSigma& s, long k, long j, std::vector<double> radii,
                                            const QuadratureRule& rule) {
    if (k < 0) throw std::invalid_argument("sigma_over_p_domain: k must be >= 0");
    return sigma_over_p_domain(s, nearest_lattice_zeros(s, k + 2), j, std::move(radii), rule);
}

}  // namespace fock
