#pragma once

// Gaussian weight on the complex plane and the norms of the monomial basis.
//
// The ambient space is the space of entire functions f with
//   ||f||^2 = integral of |f(z)|^2 dmu(z),   dmu = (r/pi) exp(-r|z|^2) dA,
// for a fixed scale r > 0.  Monomials are orthogonal with
//   ||z^n||^2 = n! / r^n,
// so u_n(z) = (r^n/n!)^(1/2) z^n is an orthonormal basis.

#include <cmath>
#include <complex>
#include <limits>
#include <stdexcept>
#include <string>

namespace fock {

using cplx = std::complex<double>;

struct GaussWeight {
    double r = 1.0;

    explicit GaussWeight(double r_) : r(r_) {
        if (!(r > 0.0) || !std::isfinite(r))
            throw std::invalid_argument("GaussWeight: scale r must be positive and finite, got " +
                                        std::to_string(r_));
    }
    GaussWeight() = default;

    bool operator==(const GaussWeight&) const = default;
};

// log(n!) for integer n >= 0; exact table for small n, lgamma beyond.
inline double log_factorial(long n) {
    if (n < 0) throw std::invalid_argument("log_factorial: negative argument");
    static const int table_size = 171;
    static const double* table = [] {
        static double t[table_size];
        t[0] = 0.0;
        for (int k = 1; k < table_size; ++k) t[k] = t[k - 1] + std::log(double(k));
        return t;
    }();
    if (n < table_size) return table[n];
    return std::lgamma(double(n) + 1.0);
}

// log(||z^n||^2) = log(n!) - n log r.
inline double log_basis_norm_sq(long n, const GaussWeight& w) {
    return log_factorial(n) - double(n) * std::log(w.r);
}

// ||z^n||^2 = n!/r^n.  For n <= 170 this is assembled from the exact double
// factorial divided by pow(r,n) whenever that stays in range; otherwise the
// log form is exponentiated (overflow yields +inf).
inline double basis_norm_sq(long n, const GaussWeight& w) {
    if (n < 0) throw std::invalid_argument("basis_norm_sq: negative degree");
    const double lg = log_basis_norm_sq(n, w);
    if (n <= 170) {
        static const double* fact = [] {
            static double f[171];
            f[0] = 1.0;
            for (int k = 1; k <= 170; ++k) f[k] = f[k - 1] * double(k);
            return f;
        }();
        const double rn = std::pow(w.r, double(n));
        if (rn > 0.0 && std::isfinite(rn) && std::isfinite(fact[n] / rn))
            return fact[n] / rn;
    }
    return std::exp(lg);
}

// sqrt(r^n/n!), the coefficient that carries z^n to the orthonormal basis
// element u_n; kept in log form internally to avoid over/underflow.
inline double basis_scale(long n, const GaussWeight& w) {
    return std::exp(-0.5 * log_basis_norm_sq(n, w));
}

}  // namespace fock
