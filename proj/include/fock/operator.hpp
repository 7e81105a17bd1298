#pragma once

// Compressions P_N T P_N of operators on the weighted space, acting on
// degrees 0..N in the orthonormal basis, together with honest bookkeeping of
// what the compression cut off:
//
//   col_tail[m] >= || (I - P_N) T u_m ||   (loss in column m)
//   row_tail[n] >= || (I - P_N) T* u_n ||  (loss in column n of the adjoint)
//
// For the primitive constructors these hold with equality; for composed
// operators col_tail[m] upper-bounds the total column-m error (mass lost
// above degree N plus contamination re-entering below it through the
// intermediate cut).  A column with col_tail == 0 is represented exactly.
// exact_cols() is the largest prefix of exact columns; multiplication by a
// polynomial of degree d gives exact_cols == N - d, the shift-up ladder
// gives N - 1.

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdio>
#include <limits>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "symbol.hpp"
#include "vector.hpp"
#include "weight.hpp"

namespace fock {

struct TruncatedOperator {
    GaussWeight weight;
    long N = 0;
    Eigen::MatrixXcd mat;
    std::vector<double> col_tail;
    std::vector<double> row_tail;
    std::string provenance;

    long size() const { return N + 1; }

    // largest m with columns 0..m free of truncation loss; -1 when none are
    long exact_cols() const {
        long m = -1;
        while (m + 1 <= N && col_tail[std::size_t(m + 1)] == 0.0) ++m;
        return m;
    }

    long exact_cols_adjoint() const {
        long m = -1;
        while (m + 1 <= N && row_tail[std::size_t(m + 1)] == 0.0) ++m;
        return m;
    }
};

namespace detail {
inline TruncatedOperator make_blank(const GaussWeight& gw, long N, std::string prov) {
    if (N < 0) throw std::invalid_argument("operator truncation degree must be >= 0");
    TruncatedOperator t;
    t.weight = gw;
    t.N = N;
    t.mat = Eigen::MatrixXcd::Zero(N + 1, N + 1);
    t.col_tail.assign(std::size_t(N) + 1, 0.0);
    t.row_tail.assign(std::size_t(N) + 1, 0.0);
    t.provenance = std::move(prov);
    return t;
}
}  // namespace detail

inline TruncatedOperator identity_matrix(long N, const GaussWeight& gw) {
    TruncatedOperator t = detail::make_blank(gw, N, "identity");
    t.mat.setIdentity();
    return t;
}

// Multiplication by z: u_n -> sqrt((n+1)/r) u_{n+1}.  Column N loses its
// entire image, norm sqrt((N+1)/r).
inline TruncatedOperator creation_matrix(long N, const GaussWeight& gw) {
    TruncatedOperator t = detail::make_blank(gw, N, "creation");
    for (long n = 0; n + 1 <= N; ++n) t.mat(n + 1, n) = std::sqrt(double(n + 1) / gw.r);
    t.col_tail[std::size_t(N)] = std::sqrt(double(N + 1) / gw.r);
    return t;
}

// (1/r) d/dz: u_n -> sqrt(n/r) u_{n-1}.  No column loses anything; row N of
// the infinite matrix reaches column N+1, so the adjoint loses there.
inline TruncatedOperator annihilation_matrix(long N, const GaussWeight& gw) {
    TruncatedOperator t = detail::make_blank(gw, N, "annihilation");
    for (long n = 1; n <= N; ++n) t.mat(n - 1, n) = std::sqrt(double(n) / gw.r);
    t.row_tail[std::size_t(N)] = std::sqrt(double(N + 1) / gw.r);
    return t;
}

// Compression of multiplication by the symbol phi:
//   entry (n, m) = a_{n-m} sqrt(n! / (m! r^{n-m})),  n >= m.
// Column tails sum the lost weights |a_k|^2 (m+k)!/(m! r^k) over m+k > N;
// a tail with no summable certificate is reported as +inf.
inline TruncatedOperator mult_matrix(const EntireSymbol& phi, long N, const GaussWeight& gw) {
    require_kernel_scale(phi, gw);
    TruncatedOperator t = detail::make_blank(gw, N, "mult");
    const double lr = std::log(gw.r);
    for (long m = 0; m <= N; ++m)
        for (long n = m; n <= N; ++n) {
            const ScaledComplex a = phi.coefficient(n - m);
            if (a.is_zero()) continue;
            const double lscale = 0.5 * (log_factorial(n) - log_factorial(m) - double(n - m) * lr);
            t.mat(n, m) = (a * ScaledComplex::from_log_polar(lscale, 0.0)).value();
        }
    const auto deg = polynomial_degree(phi);
    for (long m = 0; m <= N; ++m) {
        if (deg && N - m >= *deg) continue;  // whole image fits: tail stays 0
        double acc = 0.0;
        double prev = std::numeric_limits<double>::infinity();
        int rising = 0;
        bool settled = false;
        const long kmax = deg ? *deg : (N - m) + 800;
        long zero_run = 0;
        for (long k = N - m + 1; k <= kmax; ++k) {
            const double lt = 2.0 * log_abs_taylor(phi, k) + log_factorial(m + k) - log_factorial(m) - double(k) * lr;
            const double term = std::exp(lt);
            if (term == 0.0) {
                // an exactly-zero coefficient says nothing about the rest of
                // the tail; skip it, and give up (conservatively) on a symbol
                // whose nonzero coefficients are too sparse to sample
                if (++zero_run > 400) break;
                continue;
            }
            zero_run = 0;
            acc += term;
            if (!std::isfinite(acc)) break;
            if (term > prev) {
                if (++rising > 60) break;  // no decay in sight: declare unbounded
            } else {
                rising = 0;
                if (term < 1e-300 || (acc > 0.0 && term <= 1e-18 * acc)) {
                    settled = true;
                    break;
                }
            }
            prev = term;
        }
        if (deg) settled = true;
        t.col_tail[std::size_t(m)] =
            (settled && std::isfinite(acc)) ? std::sqrt(acc) : std::numeric_limits<double>::infinity();
    }
    // rows of a multiplication compression are complete: row_tail stays 0
    return t;
}

inline TruncatedOperator adjoint(const TruncatedOperator& t) {
    TruncatedOperator a;
    a.weight = t.weight;
    a.N = t.N;
    a.mat = t.mat.adjoint();
    a.col_tail = t.row_tail;
    a.row_tail = t.col_tail;
    a.provenance = "adj(" + t.provenance + ")";
    return a;
}

inline TruncatedOperator scale(const TruncatedOperator& t, cplx c) {
    TruncatedOperator s = t;
    s.mat *= c;
    const double ac = std::abs(c);
    for (double& x : s.col_tail) x *= ac;
    for (double& x : s.row_tail) x *= ac;
    s.provenance = "scale(" + t.provenance + ")";
    return s;
}

inline TruncatedOperator add(const TruncatedOperator& a, const TruncatedOperator& b) {
    require_same_weight(a.weight, b.weight, "operator add");
    if (a.N != b.N) throw std::invalid_argument("operator add: truncation degrees differ");
    TruncatedOperator s = a;
    s.mat += b.mat;
    for (std::size_t i = 0; i < s.col_tail.size(); ++i) {
        s.col_tail[i] += b.col_tail[i];  // triangle bound; exact zeros stay exact
        s.row_tail[i] += b.row_tail[i];
    }
    s.provenance = "(" + a.provenance + " + " + b.provenance + ")";
    return s;
}

// Q = M_z + (1/r) d/dz (self-adjoint in the limit).
inline TruncatedOperator q_matrix(long N, const GaussWeight& gw) {
    TruncatedOperator t = add(creation_matrix(N, gw), annihilation_matrix(N, gw));
    t.provenance = "q";
    return t;
}

// P = i (M_z - (1/r) d/dz).
inline TruncatedOperator p_matrix(long N, const GaussWeight& gw) {
    TruncatedOperator t = scale(add(creation_matrix(N, gw), scale(annihilation_matrix(N, gw), -1.0)), cplx(0.0, 1.0));
    t.provenance = "p";
    return t;
}

namespace detail {
// Conservative operator-norm bound sqrt(||T||_1 ||T||_inf) used only inside
// inexact tail estimates.
inline double norm_bound(const Eigen::MatrixXcd& m) {
    double c1 = 0.0, cinf = 0.0;
    for (long j = 0; j < m.cols(); ++j) c1 = std::max(c1, m.col(j).cwiseAbs().sum());
    for (long i = 0; i < m.rows(); ++i) cinf = std::max(cinf, m.row(i).cwiseAbs().sum());
    return std::sqrt(c1 * cinf);
}
}  // namespace detail

// Matrix product of compressions with per-column exactness propagation:
// column m of T*S is exact when S's column m is exact and T is exact on the
// support of that column.
inline TruncatedOperator compose(const TruncatedOperator& t, const TruncatedOperator& s) {
    require_same_weight(t.weight, s.weight, "operator compose");
    if (t.N != s.N) throw std::invalid_argument("operator compose: truncation degrees differ");
    TruncatedOperator p = detail::make_blank(t.weight, t.N, "(" + t.provenance + " . " + s.provenance + ")");
    p.mat = t.mat * s.mat;
    const double tb = detail::norm_bound(t.mat);
    const double sb = detail::norm_bound(s.mat);
    const double tmax_ct = *std::max_element(t.col_tail.begin(), t.col_tail.end());
    const double smax_rt = *std::max_element(s.row_tail.begin(), s.row_tail.end());
    for (long m = 0; m <= p.N; ++m) {
        double est = s.col_tail[std::size_t(m)] * (tb + tmax_ct);
        bool exact = (s.col_tail[std::size_t(m)] == 0.0);
        for (long k = 0; k <= p.N; ++k) {
            const double w = std::abs(s.mat(k, m));
            if (w == 0.0) continue;
            if (t.col_tail[std::size_t(k)] != 0.0) exact = false;
            est += w * t.col_tail[std::size_t(k)];
        }
        p.col_tail[std::size_t(m)] = exact ? 0.0 : est;
    }
    for (long n = 0; n <= p.N; ++n) {
        double est = t.row_tail[std::size_t(n)] * (sb + smax_rt);
        bool exact = (t.row_tail[std::size_t(n)] == 0.0);
        for (long k = 0; k <= p.N; ++k) {
            const double w = std::abs(t.mat(n, k));
            if (w == 0.0) continue;
            if (s.row_tail[std::size_t(k)] != 0.0) exact = false;
            est += w * s.row_tail[std::size_t(k)];
        }
        p.row_tail[std::size_t(n)] = exact ? 0.0 : est;
    }
    return p;
}

inline TruncatedOperator commutator(const TruncatedOperator& t, const TruncatedOperator& s) {
    TruncatedOperator c = add(compose(t, s), scale(compose(s, t), -1.0));
    c.provenance = "[" + t.provenance + ", " + s.provenance + "]";
    return c;
}

// A = M_phi + (M_psi)^*, the model non-analytic (harmonic-symbol) operator.
inline TruncatedOperator harmonic_operator(const EntireSymbol& phi, const EntireSymbol& psi, long N,
                                           const GaussWeight& gw) {
    TruncatedOperator t = add(mult_matrix(phi, N, gw), adjoint(mult_matrix(psi, N, gw)));
    t.provenance = "harmonic";
    return t;
}

inline FockVector apply(const TruncatedOperator& t, const FockVector& v) {
    require_same_weight(t.weight, v.weight, "apply");
    if (v.degree_bound() > t.N)
        throw std::invalid_argument("apply: vector degree exceeds operator truncation");
    Eigen::VectorXcd x = Eigen::VectorXcd::Zero(t.N + 1);
    for (long n = 0; n <= v.degree_bound(); ++n) x(n) = v.c[std::size_t(n)];
    const Eigen::VectorXcd y = t.mat * x;
    FockVector out(t.weight, std::size_t(t.N) + 1);
    for (long n = 0; n <= t.N; ++n) out.c[std::size_t(n)] = y(n);
    return out;
}

// Deterministic 2-norm estimate by power iteration on T*T (fixed start).
inline double op_norm_estimate(const TruncatedOperator& t, int iterations = 200) {
    const long n = t.size();
    Eigen::VectorXcd v(n);
    unsigned long long state = 0x9e3779b97f4a7c15ULL;
    for (long i = 0; i < n; ++i) {
        state = state * 6364136223846793005ULL + 1442695040888963407ULL;
        v(i) = cplx(1.0 + double((state >> 33) & 0xffff) / 65536.0, double((state >> 17) & 0xffff) / 65536.0);
    }
    v.normalize();
    double lambda = 0.0;
    for (int it = 0; it < iterations; ++it) {
        Eigen::VectorXcd w = t.mat.adjoint() * (t.mat * v);
        const double nw = w.norm();
        if (nw == 0.0) return 0.0;
        w /= nw;
        const double lam = std::abs((w.adjoint() * (t.mat.adjoint() * (t.mat * w)))(0, 0));
        if (it > 10 && std::abs(lam - lambda) <= 1e-12 * std::max(1.0, lam)) {
            lambda = lam;
            break;
        }
        lambda = lam;
        v.swap(w);
    }
    return std::sqrt(lambda);
}

// CSV export: provenance header, then one row,col,re,im line per entry.
inline void export_csv(const TruncatedOperator& t, std::ostream& os) {
    char buf[96];
    std::snprintf(buf, sizeof buf, "%.17g", t.weight.r);
    os << "# provenance " << t.provenance << " N " << t.N << " r " << buf << " exact_cols " << t.exact_cols()
       << "\n";
    os << "row,col,re,im\n";
    for (long i = 0; i <= t.N; ++i)
        for (long j = 0; j <= t.N; ++j) {
            std::snprintf(buf, sizeof buf, "%ld,%ld,%.17g,%.17g", i, j, t.mat(i, j).real(), t.mat(i, j).imag());
            os << buf << '\n';
        }
}

}  // namespace fock
