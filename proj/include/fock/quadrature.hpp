#pragma once

// Independent quadrature oracle for Gaussian-weighted inner products.
//
// The inner product integral factorizes in polar coordinates,
//   <f,g> = (1/2pi) int_0^inf e^{-t} int_0^{2pi} f(s e^{i th}) conj(g(s e^{i th})) dth dt,
// with t = r s^2.  The radial factor is handled by Gauss-Laguerre nodes in t,
// the angular factor by uniform sampling; the rule is exact for polynomial
// integrands inside the degree window (2*radial-1 in t, angular-1 in angle).
//
// None of the series-based code in this library is used here: this header is
// the independent cross-check for basis norms, matrix entries and memberships.

#include <cmath>
#include <complex>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "weight.hpp"

namespace fock {

namespace detail {

// Gauss-Laguerre nodes/weights for int_0^inf e^{-t} F(t) dt, alpha = 0.
// Newton iteration on the three-term recurrence; converged when the update
// falls below 1e-14 relative.
inline void laguerre_rule(int n, std::vector<double>& x, std::vector<double>& w) {
    if (n < 1 || n > 400) throw std::invalid_argument("laguerre_rule: radial count out of range [1,400]");
    x.assign(n, 0.0);
    w.assign(n, 0.0);
    double z = 0.0;
    for (int i = 0; i < n; ++i) {
        if (i == 0) {
            z = 3.0 / (1.0 + 2.4 * n);
        } else if (i == 1) {
            z += 15.0 / (1.0 + 2.5 * n);
        } else {
            const double ai = i - 1;
            z += ((1.0 + 2.55 * ai) / (1.9 * ai)) * (z - x[i - 2]);
        }
        // Newton iteration on L_n; evaluate(z) leaves (L_n, L_{n-1}, L_n')
        double p1 = 1.0, p2 = 0.0, pp = 1.0;
        auto evaluate = [&](double zz) {
            p1 = 1.0;
            p2 = 0.0;
            for (int j = 1; j <= n; ++j) {
                const double p3 = p2;
                p2 = p1;
                p1 = ((2.0 * j - 1.0 - zz) * p2 - (j - 1.0) * p3) / double(j);
            }
            pp = n * (p1 - p2) / zz;  // L_n'(z) = n (L_n(z) - L_{n-1}(z)) / z
        };
        bool converged = false;
        for (int it = 0; it < 200; ++it) {
            evaluate(z);
            const double dz = p1 / pp;
            z -= dz;
            if (std::abs(dz) <= 1e-14 * std::max(1.0, std::abs(z))) {
                converged = true;
                evaluate(z);  // one polishing pass at the accepted node
                z -= p1 / pp;
                evaluate(z);
                break;
            }
        }
        if (!converged) throw std::runtime_error("laguerre_rule: Newton failed to converge at node " + std::to_string(i));
        x[i] = z;
        w[i] = -1.0 / (pp * n * p2);
        if (!(w[i] > 0.0)) throw std::runtime_error("laguerre_rule: nonpositive weight at node " + std::to_string(i));
    }
}

// Gauss-Legendre nodes/weights on [-1,1].
inline void legendre_rule(int n, std::vector<double>& x, std::vector<double>& w) {
    x.assign(n, 0.0);
    w.assign(n, 0.0);
    const int m = (n + 1) / 2;
    for (int i = 0; i < m; ++i) {
        double z = std::cos(3.14159265358979323846 * (i + 0.75) / (n + 0.5));
        double pp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p1 = 1.0, p2 = 0.0;
            for (int j = 1; j <= n; ++j) {
                const double p3 = p2;
                p2 = p1;
                p1 = ((2.0 * j - 1.0) * z * p2 - (j - 1.0) * p3) / double(j);
            }
            pp = n * (z * p1 - p2) / (z * z - 1.0);
            const double dz = p1 / pp;
            z -= dz;
            if (std::abs(dz) < 1e-15) break;
        }
        x[i] = -z;
        x[n - 1 - i] = z;
        w[i] = 2.0 / ((1.0 - z * z) * pp * pp);
        w[n - 1 - i] = w[i];
    }
}

}  // namespace detail

struct QuadratureRule {
    GaussWeight weight;
    int radial_count = 40;
    int angular_count = 128;
    std::vector<double> t;  // Laguerre nodes in t = r s^2
    std::vector<double> v;  // Laguerre weights, sum to 1
    std::vector<double> s;  // sample radii s_j = sqrt(t_j/r)

    double weight_sum() const {
        double acc = 0.0;
        for (double vj : v) acc += vj;
        return acc;
    }
};

inline QuadratureRule make_quadrature(const GaussWeight& w, int radial = 40, int angular = 128) {
    if (angular < 1) throw std::invalid_argument("make_quadrature: angular count must be positive");
    QuadratureRule rule;
    rule.weight = w;
    rule.radial_count = radial;
    rule.angular_count = angular;
    detail::laguerre_rule(radial, rule.t, rule.v);
    rule.s.resize(rule.t.size());
    for (size_t j = 0; j < rule.t.size(); ++j) rule.s[j] = std::sqrt(rule.t[j] / w.r);
    return rule;
}

using PointFunction = std::function<cplx(cplx)>;

namespace detail {
inline void require_finite(cplx val, cplx node, const char* what) {
    if (!std::isfinite(val.real()) || !std::isfinite(val.imag()))
        throw std::domain_error(std::string(what) + ": non-finite sample at z = (" + std::to_string(node.real()) +
                                ", " + std::to_string(node.imag()) + ")");
}
}  // namespace detail

// <f, g> over the full plane; conjugate-linear in g.
inline cplx gauss_inner(const PointFunction& f, const PointFunction& g, const QuadratureRule& rule) {
    const int K = rule.angular_count;
    cplx acc{0.0, 0.0};
    for (size_t j = 0; j < rule.s.size(); ++j) {
        cplx ring{0.0, 0.0};
        for (int k = 0; k < K; ++k) {
            const double th = 2.0 * 3.14159265358979323846 * k / K;
            const cplx z = rule.s[j] * cplx(std::cos(th), std::sin(th));
            const cplx fv = f(z);
            const cplx gv = g(z);
            detail::require_finite(fv, z, "gauss_inner(f)");
            detail::require_finite(gv, z, "gauss_inner(g)");
            ring += fv * std::conj(gv);
        }
        acc += rule.v[j] * ring;
    }
    return acc / double(K);
}

// Same contraction on precomputed sample arrays laid out radially-major:
// values[j*K + k] = f(s_j e^{i th_k}).  Lets callers evaluate a basis once.
inline cplx gauss_inner_sampled(const std::vector<cplx>& fv, const std::vector<cplx>& gv,
                                const QuadratureRule& rule) {
    const int K = rule.angular_count;
    if (fv.size() != rule.s.size() * size_t(K) || gv.size() != fv.size())
        throw std::invalid_argument("gauss_inner_sampled: sample array size mismatch");
    cplx acc{0.0, 0.0};
    for (size_t j = 0; j < rule.s.size(); ++j) {
        cplx ring{0.0, 0.0};
        for (int k = 0; k < K; ++k) ring += fv[j * K + k] * std::conj(gv[j * K + k]);
        acc += rule.v[j] * ring;
    }
    return acc / double(K);
}

// Quadrature nodes as points, radially-major, for use with gauss_inner_sampled.
inline std::vector<cplx> quadrature_nodes(const QuadratureRule& rule) {
    const int K = rule.angular_count;
    std::vector<cplx> nodes(rule.s.size() * size_t(K));
    for (size_t j = 0; j < rule.s.size(); ++j)
        for (int k = 0; k < K; ++k) {
            const double th = 2.0 * 3.14159265358979323846 * k / K;
            nodes[j * K + k] = rule.s[j] * cplx(std::cos(th), std::sin(th));
        }
    return nodes;
}

// int_{r_in <= |z| <= r_out} |f(z)|^2 |z|^{2p} dmu(z).
//
// The radial direction clips the rule to the annulus: composite 16-point
// Gauss-Legendre panels of width <= panel_width carry the factor
// 2 r s^{2p+1} e^{-r s^2}; angles reuse the rule's uniform count.  Gaussian
// decay is kept inside the integrand, so integrands that grow like the
// inverse Gaussian (lattice-periodic moduli) stay O(1) on the panels.
// With include_gaussian = false, the factor e^{-r s^2} is omitted from the
// radial weight; the caller's f must then carry e^{-r|z|^2 / 2} itself.  That
// path keeps integrands of rapidly growing functions inside double range.
inline double gauss_norm_over_annulus(const PointFunction& f, double r_in, double r_out,
                                      const QuadratureRule& rule, int p = 0, double panel_width = 0.25,
                                      bool include_gaussian = true) {
    if (!(r_out > r_in) || r_in < 0.0)
        throw std::invalid_argument("gauss_norm_over_annulus: need 0 <= r_in < r_out");
    if (p < 0) throw std::invalid_argument("gauss_norm_over_annulus: power p must be >= 0");
    static thread_local std::vector<double> gx, gw;
    if (gx.size() != 16) detail::legendre_rule(16, gx, gw);
    const int K = rule.angular_count;
    const double r = rule.weight.r;
    const int panels = std::max(1, int(std::ceil((r_out - r_in) / panel_width)));
    const double h = (r_out - r_in) / panels;
    double total = 0.0;
    for (int q = 0; q < panels; ++q) {
        const double a = r_in + q * h;
        for (size_t i = 0; i < gx.size(); ++i) {
            const double s = a + 0.5 * h * (gx[i] + 1.0);
            double ring = 0.0;
            for (int k = 0; k < K; ++k) {
                const double th = 2.0 * 3.14159265358979323846 * k / K;
                const cplx z = s * cplx(std::cos(th), std::sin(th));
                const cplx fv = f(z);
                detail::require_finite(fv, z, "gauss_norm_over_annulus");
                ring += std::norm(fv);
            }
            ring /= double(K);
            const double gauss = include_gaussian ? std::exp(-r * s * s) : 1.0;
            total += 0.5 * h * gw[i] * 2.0 * r * std::pow(s, 2 * p + 1) * gauss * ring;
        }
    }
    return total;
}

// Taylor coefficients a_0..a_n_max of f from uniform samples on |z| = radius:
//   a_n ~= (1/(K radius^n)) sum_k f(radius e^{i th_k}) e^{-i n th_k}.
// Requires K > 2 n_max so the recovered band is below the aliasing fold.
inline std::vector<cplx> cauchy_taylor(const PointFunction& f, int n_max, double radius, int K) {
    if (n_max < 0) throw std::invalid_argument("cauchy_taylor: n_max must be >= 0");
    if (!(radius > 0.0)) throw std::invalid_argument("cauchy_taylor: radius must be positive");
    if (K <= 2 * n_max)
        throw std::invalid_argument("cauchy_taylor: need angular count K > 2*n_max, got K = " + std::to_string(K) +
                                    " for n_max = " + std::to_string(n_max));
    std::vector<cplx> samples(K);
    for (int k = 0; k < K; ++k) {
        const double th = 2.0 * 3.14159265358979323846 * k / K;
        const cplx z = radius * cplx(std::cos(th), std::sin(th));
        samples[k] = f(z);
        detail::require_finite(samples[k], z, "cauchy_taylor");
    }
    std::vector<cplx> coeff(n_max + 1);
    for (int n = 0; n <= n_max; ++n) {
        cplx acc{0.0, 0.0};
        for (int k = 0; k < K; ++k) {
            const double th = 2.0 * 3.14159265358979323846 * k * n / K;
            acc += samples[k] * cplx(std::cos(th), -std::sin(th));
        }
        coeff[n] = acc / (double(K) * std::pow(radius, double(n)));
    }
    return coeff;
}

}  // namespace fock
