#pragma once

// Finite truncations of entire functions, stored as coefficients in the
// orthonormal basis u_n = (r^n/n!)^(1/2) z^n, degrees 0..N.

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <stdexcept>
#include <vector>

#include "weight.hpp"

namespace fock {

struct FockVector {
    GaussWeight weight;
    std::vector<cplx> c;  // c[n] multiplies u_n

    FockVector() = default;
    FockVector(const GaussWeight& w, std::size_t size) : weight(w), c(size, cplx{0.0, 0.0}) {}
    FockVector(const GaussWeight& w, std::vector<cplx> coeffs) : weight(w), c(std::move(coeffs)) {}

    long degree_bound() const { return long(c.size()) - 1; }

    double norm_sq() const {
        double acc = 0.0;
        for (const cplx& x : c) acc += std::norm(x);
        return acc;
    }
    double norm() const { return std::sqrt(norm_sq()); }
};

inline void require_same_weight(const GaussWeight& a, const GaussWeight& b, const char* what) {
    if (!(a == b))
        throw std::invalid_argument(std::string(what) + ": Gaussian scales differ (r = " + std::to_string(a.r) +
                                    " vs r = " + std::to_string(b.r) + ")");
}

// <f, g>, conjugate-linear in g; shorter vector zero-padded.
inline cplx inner(const FockVector& f, const FockVector& g) {
    require_same_weight(f.weight, g.weight, "inner");
    const std::size_t n = std::min(f.c.size(), g.c.size());
    cplx acc{0.0, 0.0};
    for (std::size_t k = 0; k < n; ++k) acc += f.c[k] * std::conj(g.c[k]);
    return acc;
}

// Truncated reproducing-kernel vector for the point w:
//   c_n = (r^n/n!)^(1/2) conj(w)^n,  n = 0..N.
// Built in log-polar form so large |w| and large n stay in range.
inline FockVector kernel_vector(cplx w, long N, const GaussWeight& gw) {
    if (N < 0) throw std::invalid_argument("kernel_vector: negative truncation degree");
    FockVector k(gw, std::size_t(N) + 1);
    k.c[0] = cplx{1.0, 0.0};
    const double aw = std::abs(w);
    if (aw == 0.0) return k;
    const double phase = -std::arg(w);  // conj(w)^n carries phase -n arg(w)
    const double lw = std::log(aw);
    for (long n = 1; n <= N; ++n) {
        const double lm = -0.5 * log_basis_norm_sq(n, gw) + double(n) * lw;
        const double pn = phase * double(n);
        k.c[std::size_t(n)] = std::exp(lm) * cplx(std::cos(pn), std::sin(pn));
    }
    return k;
}

// Pointwise value sum c_n u_n(z), assembled by Horner on the monomial form.
inline cplx eval(const FockVector& f, cplx z) {
    const long N = f.degree_bound();
    cplx acc{0.0, 0.0};
    for (long n = N; n >= 0; --n) {
        const double scale = std::exp(-0.5 * log_basis_norm_sq(n, f.weight));
        acc = acc * z + f.c[std::size_t(n)] * scale;
    }
    return acc;
}

// Gram matrix of truncated kernel vectors at distinct points.
inline Eigen::MatrixXcd kernel_gram(const std::vector<cplx>& ws, long N, const GaussWeight& gw) {
    const std::size_t m = ws.size();
    if (m == 0) throw std::invalid_argument("kernel_gram: empty point list");
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = i + 1; j < m; ++j)
            if (ws[i] == ws[j])
                throw std::invalid_argument("kernel_gram: duplicate kernel point at index " + std::to_string(j));
    std::vector<FockVector> ks;
    ks.reserve(m);
    for (const cplx& w : ws) ks.push_back(kernel_vector(w, N, gw));
    Eigen::MatrixXcd g(m, m);
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < m; ++j) g(long(i), long(j)) = inner(ks[i], ks[j]);
    return g;
}

}  // namespace fock
