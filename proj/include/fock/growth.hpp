#pragma once

// Growth classification of entire symbols against the multiplier class
// Lambda = { entire phi : |phi(z)| = O(exp(r|z|^2/2 - N|z|)) for every N }
// and against square-integrability for the Gaussian weight.
//
// Asymptotic route: fit -log|a_n| ~ (n log n)/rho - c n over a tail window to
// estimate the order rho; near order 2, estimate the type as
// sigma-hat = max_n n |a_n|^{2/n} / (2e).  Clear cases are decided by the
// estimates; boundary cases fall back to closed-form structure (the total
// quadratic exponent alpha decides: |alpha| < r/2 in, |alpha| >= r/2 out).

#include <array>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "symbol.hpp"
#include "weight.hpp"

namespace fock {

enum class Membership { In, NotIn, BoundaryUnknown };

inline const char* membership_name(Membership m) {
    switch (m) {
        case Membership::In: return "In";
        case Membership::NotIn: return "NotIn";
        default: return "BoundaryUnknown";
    }
}

struct GrowthReport {
    Membership lambda_verdict = Membership::BoundaryUnknown;
    Membership fock_verdict = Membership::BoundaryUnknown;
    double order_estimate = 0.0;  // rho-hat
    double type_estimate = 0.0;   // sigma-hat, meaningful when rho-hat is near 2
    std::string rule_used;        // "asymptotic" | "closed_form" | "none"
    long depth = 0;
};

// Partial sums S_k = sum_{n<k} |a_n|^2 n!/r^n, k = 1..M, computed in log
// space so underflowed coefficients cannot masquerade as decay.  Divergent
// tails saturate at +inf; the sequence is nondecreasing by construction.
inline std::vector<double> fock_norm_partial(const EntireSymbol& phi, const GaussWeight& gw, long M) {
    if (M < 1 || M > 10000000L) throw std::invalid_argument("fock_norm_partial: M out of range [1, 1e7]");
    std::vector<double> s(static_cast<std::size_t>(M), 0.0);
    double acc = 0.0;
    for (long n = 0; n < M; ++n) {
        const double lt = 2.0 * log_abs_taylor(phi, n) + log_basis_norm_sq(n, gw);
        acc += std::exp(lt);
        s[std::size_t(n)] = acc;
    }
    return s;
}

// Converged squared norm, or a refusal when no geometric tail certificate is
// reached within max_terms.
inline double converged_fock_norm_sq(const EntireSymbol& phi, const GaussWeight& gw, double tol = 1e-12,
                                     long max_terms = 20000) {
    double acc = 0.0;
    double prev = -1.0;
    int tame = 0;
    for (long n = 0; n < max_terms; ++n) {
        const double term = std::exp(2.0 * log_abs_taylor(phi, n) + log_basis_norm_sq(n, gw));
        if (!std::isfinite(term))
            throw std::runtime_error("converged_fock_norm_sq: term overflow at n = " + std::to_string(n) +
                                     "; the squared norm diverges");
        acc += term;
        if (prev >= 0.0) {
            if (term == 0.0 || term <= 0.9 * prev)
                ++tame;
            else
                tame = 0;
            if (tame >= 12 && term * 9.0 <= tol * std::max(1.0, acc)) return acc;
        }
        prev = term;
    }
    throw std::runtime_error("converged_fock_norm_sq: no convergence certificate after " + std::to_string(max_terms) +
                             " terms (tail is not summable at the requested tolerance)");
}

inline GrowthReport classify_growth(const EntireSymbol& phi, const GaussWeight& gw, long depth = 400) {
    if (depth < 50) throw std::invalid_argument("classify_growth: depth must be >= 50");
    GrowthReport rep;
    rep.depth = depth;
    const double r = gw.r;
    const double delta = 0.1;
    const double delta_type = 0.02 * r;

    // tail window samples with nonvanishing coefficients
    std::vector<long> idx;
    std::vector<double> la;
    for (long n = std::max<long>(8, depth / 2); n <= depth; ++n) {
        const double l = log_abs_taylor(phi, n);
        if (std::isfinite(l)) {
            idx.push_back(n);
            la.push_back(l);
        }
    }

    auto closed_form = [&]() {
        if (auto alpha = quadratic_exponent(phi)) {
            rep.rule_used = "closed_form";
            const bool inside = std::abs(*alpha) < r / 2.0;
            rep.lambda_verdict = inside ? Membership::In : Membership::NotIn;
            rep.fock_verdict = inside ? Membership::In : Membership::NotIn;
        } else {
            rep.rule_used = "none";
            rep.lambda_verdict = Membership::BoundaryUnknown;
            rep.fock_verdict = Membership::BoundaryUnknown;
        }
    };

    if (idx.size() < 6) {
        // vanishing tail: decide by structure
        rep.order_estimate = 0.0;
        if (polynomial_degree(phi)) {
            rep.rule_used = "closed_form";
            rep.lambda_verdict = Membership::In;
            rep.fock_verdict = Membership::In;
        } else {
            closed_form();
        }
        return rep;
    }

    // least squares for y = -log|a_n| ~ c1 (n log n) + c2 n
    double s11 = 0, s12 = 0, s22 = 0, b1 = 0, b2 = 0;
    for (std::size_t i = 0; i < idx.size(); ++i) {
        const double n = double(idx[i]);
        const double x1 = n * std::log(n);
        const double x2 = n;
        const double y = -la[i];
        s11 += x1 * x1;
        s12 += x1 * x2;
        s22 += x2 * x2;
        b1 += x1 * y;
        b2 += x2 * y;
    }
    const double det = s11 * s22 - s12 * s12;
    double c1 = 0.0;
    if (det != 0.0) c1 = (b1 * s22 - b2 * s12) / det;
    rep.order_estimate = (c1 > 1e-12) ? 1.0 / c1 : std::numeric_limits<double>::infinity();

    double sigma = 0.0;
    for (std::size_t i = 0; i < idx.size(); ++i) {
        const double n = double(idx[i]);
        const double v = std::exp(std::log(n) + (2.0 / n) * la[i] - std::log(2.0 * std::exp(1.0)));
        sigma = std::max(sigma, v);
    }
    rep.type_estimate = sigma;

    const double rho = rep.order_estimate;
    if (rho < 2.0 - delta) {
        rep.rule_used = "asymptotic";
        rep.lambda_verdict = Membership::In;
        rep.fock_verdict = Membership::In;
    } else if (std::abs(rho - 2.0) <= delta && sigma < r / 2.0 - delta_type) {
        rep.rule_used = "asymptotic";
        rep.lambda_verdict = Membership::In;
        rep.fock_verdict = Membership::In;
    } else if (rho > 2.0 + delta || (std::abs(rho - 2.0) <= delta && sigma > r / 2.0 + delta_type)) {
        rep.rule_used = "asymptotic";
        rep.lambda_verdict = Membership::NotIn;
        rep.fock_verdict = Membership::NotIn;
    } else {
        closed_form();
    }
    return rep;
}

struct LambdaWitnessReport {
    double decay_rate = 0.0;  // the N in exp(r|z|^2/2 - N|z|)
    double bound_constant = 0.0;
    std::array<cplx, 4> witness_points{};
    std::array<double, 4> witness_norms{};
    double max_violation = -std::numeric_limits<double>::infinity();
    cplx argmax_point{0.0, 0.0};
};

// Constructive pointwise bound |phi(z)| <= C exp(r|z|^2/2 - N|z|) from the
// four witness kernels at w_k = (sqrt(2) N / r) i^k:
//   C = max_k || phi e_{w_k} ||.
// The report records C and the largest violation over the sample points
// (negative when the bound holds strictly).
inline LambdaWitnessReport lambda_bound_witness(const EntireSymbol& phi, double decay_rate, const GaussWeight& gw,
                                                const std::vector<cplx>& samples) {
    if (!(decay_rate > 0.0)) throw std::invalid_argument("lambda_bound_witness: decay rate must be positive");
    require_kernel_scale(phi, gw);
    LambdaWitnessReport rep;
    rep.decay_rate = decay_rate;
    const double rho = std::sqrt(2.0) * decay_rate / gw.r;
    const cplx units[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
    double cmax = 0.0;
    for (int k = 0; k < 4; ++k) {
        rep.witness_points[k] = rho * units[k];
        const EntireSymbol prod = EntireSymbol::product({phi, EntireSymbol::kernel(rep.witness_points[k], gw)});
        double nsq = 0.0;
        try {
            nsq = converged_fock_norm_sq(prod, gw);
        } catch (const std::runtime_error& e) {
            throw std::runtime_error("lambda_bound_witness: || phi e_w || does not converge at witness point " +
                                     std::to_string(k) + "; the symbol is outside the multiplier class (" + e.what() +
                                     ")");
        }
        rep.witness_norms[k] = std::sqrt(nsq);
        cmax = std::max(cmax, rep.witness_norms[k]);
    }
    rep.bound_constant = cmax;
    for (const cplx& z : samples) {
        const double az = std::abs(z);
        const double bound = cmax * std::exp(gw.r * az * az / 2.0 - decay_rate * az);
        const double viol = std::abs(eval_symbol(phi, z)) - bound;
        if (viol > rep.max_violation) {
            rep.max_violation = viol;
            rep.argmax_point = z;
        }
    }
    return rep;
}

}  // namespace fock
