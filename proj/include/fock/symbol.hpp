#pragma once

// Entire-function symbols with exact coefficient access.
//
// A symbol is a closed-form expression tree: polynomials, Gaussians
// exp(alpha z^2 + beta z + gamma), kernel exponentials exp(r z conj(w)),
// coefficient shifts, finite products and sums, derivatives/antiderivatives,
// and custom coefficient sequences supplied in log-magnitude + phase form.
// Taylor coefficients are produced as ScaledComplex so that sequences far
// below the double underflow threshold keep their true magnitude.

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "scaled.hpp"
#include "vector.hpp"
#include "weight.hpp"

namespace fock {

class EntireSymbol {
  public:
    struct Poly {
        std::vector<cplx> a;
    };
    struct ExpQuad {
        cplx alpha, beta, gamma;
    };
    struct Kern {
        cplx w;
        double r;
    };
    // recursive children are held through shared_ptr (or vector, which
    // tolerates an incomplete element type) so every variant alternative is a
    // complete type inside this class definition
    struct Shift {
        std::shared_ptr<const EntireSymbol> base;
        long k;
    };
    struct Prod {
        std::vector<EntireSymbol> factors;
    };
    struct SumOf {
        std::vector<EntireSymbol> terms;
    };
    struct Deriv {
        std::shared_ptr<const EntireSymbol> base;
    };
    struct Antideriv {
        std::shared_ptr<const EntireSymbol> base;
    };
    struct Custom {
        std::string name;
        // n -> (log magnitude, phase) of the n-th Taylor coefficient
        std::function<std::pair<double, double>(long)> rule;
    };
    using Payload = std::variant<Poly, ExpQuad, Kern, Shift, Prod, SumOf, Deriv, Antideriv, Custom>;

    EntireSymbol() : node_(std::make_shared<Node>(Payload{Poly{{}}})) {}
    explicit EntireSymbol(Payload p) : node_(std::make_shared<Node>(std::move(p))) {}

    static EntireSymbol polynomial(std::vector<cplx> coeffs) { return EntireSymbol(Payload{Poly{std::move(coeffs)}}); }
    static EntireSymbol exp_quadratic(cplx alpha, cplx beta = 0.0, cplx gamma = 0.0) {
        return EntireSymbol(Payload{ExpQuad{alpha, beta, gamma}});
    }
    static EntireSymbol kernel(cplx w, const GaussWeight& gw) { return EntireSymbol(Payload{Kern{w, gw.r}}); }
    static EntireSymbol shifted(EntireSymbol base, long k) {
        if (k < 0) throw std::invalid_argument("EntireSymbol::shifted: shift must be >= 0");
        return EntireSymbol(Payload{Shift{std::make_shared<const EntireSymbol>(std::move(base)), k}});
    }
    static EntireSymbol product(std::vector<EntireSymbol> factors) {
        if (factors.empty()) throw std::invalid_argument("EntireSymbol::product: empty factor list");
        // fold to nested binary products so coefficient n costs O(n), not O(n^2)
        EntireSymbol acc = factors.back();
        for (long i = long(factors.size()) - 2; i >= 0; --i)
            acc = EntireSymbol(Payload{Prod{{factors[std::size_t(i)], acc}}});
        return acc;
    }
    static EntireSymbol sum(std::vector<EntireSymbol> terms) {
        if (terms.empty()) throw std::invalid_argument("EntireSymbol::sum: empty term list");
        return EntireSymbol(Payload{SumOf{std::move(terms)}});
    }
    static EntireSymbol custom(std::string name, std::function<std::pair<double, double>(long)> rule) {
        return EntireSymbol(Payload{Custom{std::move(name), std::move(rule)}});
    }

    const Payload& payload() const { return node_->payload; }

    // n-th Taylor coefficient in scaled form (cached per node).
    ScaledComplex coefficient(long n) const {
        if (n < 0) throw std::invalid_argument("EntireSymbol::coefficient: negative index");
        auto& cache = node_->cache;
        while (long(cache.size()) <= n) cache.push_back(compute(long(cache.size())));
        return cache[std::size_t(n)];
    }

  private:
    struct Node {
        Payload payload;
        mutable std::vector<ScaledComplex> cache;
        explicit Node(Payload p) : payload(std::move(p)) {}
    };
    std::shared_ptr<Node> node_;

    ScaledComplex compute(long n) const {
        const auto& cache = node_->cache;  // entries < n are already present
        return std::visit(
            [&](const auto& node) -> ScaledComplex {
                using T = std::decay_t<decltype(node)>;
                if constexpr (std::is_same_v<T, Poly>) {
                    if (n < long(node.a.size())) return ScaledComplex{node.a[std::size_t(n)]};
                    return ScaledComplex{};
                } else if constexpr (std::is_same_v<T, ExpQuad>) {
                    // (m+1) a_{m+1} = beta a_m + 2 alpha a_{m-1}
                    if (n == 0) return ScaledComplex::from_log_polar(node.gamma.real(), node.gamma.imag());
                    const ScaledComplex prev = cache[std::size_t(n - 1)];
                    const ScaledComplex prev2 = (n >= 2) ? cache[std::size_t(n - 2)] : ScaledComplex{};
                    return (prev * node.beta + prev2 * (2.0 * node.alpha)) / double(n);
                } else if constexpr (std::is_same_v<T, Kern>) {
                    // (r conj(w))^n / n!
                    const double aw = std::abs(node.w);
                    if (aw == 0.0) return (n == 0) ? ScaledComplex{cplx{1.0, 0.0}} : ScaledComplex{};
                    const double lm = double(n) * std::log(node.r * aw) - log_factorial(n);
                    return ScaledComplex::from_log_polar(lm, -double(n) * std::arg(node.w));
                } else if constexpr (std::is_same_v<T, Shift>) {
                    // multiply by z^k: slot n of the shift is slot n-k of the base
                    if (n < node.k) return ScaledComplex{};
                    return node.base->coefficient(n - node.k);
                } else if constexpr (std::is_same_v<T, Prod>) {
                    // binary Cauchy product against the children's caches
                    ScaledComplex s{};
                    for (long i = 0; i <= n; ++i)
                        s = s + node.factors[0].coefficient(i) * node.factors[1].coefficient(n - i);
                    return s;
                } else if constexpr (std::is_same_v<T, SumOf>) {
                    ScaledComplex acc{};
                    for (const auto& t : node.terms) acc = acc + t.coefficient(n);
                    return acc;
                } else if constexpr (std::is_same_v<T, Deriv>) {
                    return node.base->coefficient(n + 1) * double(n + 1);
                } else if constexpr (std::is_same_v<T, Antideriv>) {
                    if (n == 0) return ScaledComplex{};
                    return node.base->coefficient(n - 1) / double(n);
                } else {
                    const auto [lm, ph] = node.rule(n);
                    return ScaledComplex::from_log_polar(lm, ph);
                }
            },
            node_->payload);
    }
};

// Plain-double Taylor coefficient (tiny magnitudes may flush to zero).
inline cplx taylor(const EntireSymbol& phi, long n) { return phi.coefficient(n).value(); }

// log |a_n|, -inf when the coefficient vanishes.
inline double log_abs_taylor(const EntireSymbol& phi, long n) { return phi.coefficient(n).log_abs(); }

// Derivative; closed-form kinds map to closed-form kinds so growth
// classification stays sharp.
inline EntireSymbol derivative(const EntireSymbol& phi) {
    using P = EntireSymbol;
    return std::visit(
        [&](const auto& node) -> EntireSymbol {
            using T = std::decay_t<decltype(node)>;
            if constexpr (std::is_same_v<T, P::Poly>) {
                if (node.a.size() <= 1) return P::polynomial({});
                std::vector<cplx> d(node.a.size() - 1);
                for (std::size_t k = 1; k < node.a.size(); ++k) d[k - 1] = double(k) * node.a[k];
                return P::polynomial(std::move(d));
            } else if constexpr (std::is_same_v<T, P::ExpQuad>) {
                return P::product({P::polynomial({node.beta, 2.0 * node.alpha}), phi});
            } else if constexpr (std::is_same_v<T, P::Kern>) {
                return P::product({P::polynomial({node.r * std::conj(node.w)}), phi});
            } else if constexpr (std::is_same_v<T, P::Prod>) {
                std::vector<EntireSymbol> terms;
                for (std::size_t i = 0; i < node.factors.size(); ++i) {
                    std::vector<EntireSymbol> fs = node.factors;
                    fs[i] = derivative(fs[i]);
                    terms.push_back(P::product(std::move(fs)));
                }
                return P::sum(std::move(terms));
            } else if constexpr (std::is_same_v<T, P::SumOf>) {
                std::vector<EntireSymbol> ts;
                for (const auto& t : node.terms) ts.push_back(derivative(t));
                return P::sum(std::move(ts));
            } else {
                return EntireSymbol(P::Payload{P::Deriv{std::make_shared<const EntireSymbol>(phi)}});
            }
        },
        phi.payload());
}

// Antiderivative vanishing at 0: b_0 = 0, b_{n+1} = a_n/(n+1).
inline EntireSymbol antiderivative(const EntireSymbol& phi) {
    return EntireSymbol(
        EntireSymbol::Payload{EntireSymbol::Antideriv{std::make_shared<const EntireSymbol>(phi)}});
}

// Degree when the symbol is (structurally) a polynomial: -1 for the zero
// symbol, nullopt when no finite degree is known.
inline std::optional<long> polynomial_degree(const EntireSymbol& phi) {
    using P = EntireSymbol;
    return std::visit(
        [&](const auto& node) -> std::optional<long> {
            using T = std::decay_t<decltype(node)>;
            if constexpr (std::is_same_v<T, P::Poly>) {
                for (long k = long(node.a.size()) - 1; k >= 0; --k)
                    if (node.a[std::size_t(k)] != cplx{0.0, 0.0}) return k;
                return -1;
            } else if constexpr (std::is_same_v<T, P::ExpQuad>) {
                if (node.alpha == cplx{0.0, 0.0} && node.beta == cplx{0.0, 0.0}) return 0;
                return std::nullopt;
            } else if constexpr (std::is_same_v<T, P::Kern>) {
                if (node.w == cplx{0.0, 0.0}) return 0;
                return std::nullopt;
            } else if constexpr (std::is_same_v<T, P::Shift>) {
                auto d = polynomial_degree(*node.base);
                if (!d) return std::nullopt;
                return (*d < 0) ? -1 : *d + node.k;
            } else if constexpr (std::is_same_v<T, P::Prod>) {
                long total = 0;
                for (const auto& f : node.factors) {
                    auto d = polynomial_degree(f);
                    if (!d) return std::nullopt;
                    if (*d < 0) return -1;
                    total += *d;
                }
                return total;
            } else if constexpr (std::is_same_v<T, P::SumOf>) {
                long mx = -1;
                for (const auto& t : node.terms) {
                    auto d = polynomial_degree(t);
                    if (!d) return std::nullopt;
                    mx = std::max(mx, *d);
                }
                return mx;
            } else if constexpr (std::is_same_v<T, P::Deriv>) {
                auto d = polynomial_degree(*node.base);
                if (!d) return std::nullopt;
                return std::max<long>(-1, *d - 1);
            } else if constexpr (std::is_same_v<T, P::Antideriv>) {
                auto d = polynomial_degree(*node.base);
                if (!d) return std::nullopt;
                return (*d < 0) ? -1 : *d + 1;
            } else {
                return std::nullopt;
            }
        },
        phi.payload());
}

// Total coefficient of z^2 in the exponent when the symbol is built only from
// closed-form pieces: the quadratic part governs membership at the boundary.
inline std::optional<cplx> quadratic_exponent(const EntireSymbol& phi) {
    using P = EntireSymbol;
    return std::visit(
        [&](const auto& node) -> std::optional<cplx> {
            using T = std::decay_t<decltype(node)>;
            if constexpr (std::is_same_v<T, P::Poly>) {
                return cplx{0.0, 0.0};
            } else if constexpr (std::is_same_v<T, P::ExpQuad>) {
                return node.alpha;
            } else if constexpr (std::is_same_v<T, P::Kern>) {
                return cplx{0.0, 0.0};
            } else if constexpr (std::is_same_v<T, P::Shift>) {
                return quadratic_exponent(*node.base);
            } else if constexpr (std::is_same_v<T, P::Prod>) {
                cplx total{0.0, 0.0};
                for (const auto& f : node.factors) {
                    auto a = quadratic_exponent(f);
                    if (!a) return std::nullopt;
                    total += *a;
                }
                return total;
            } else if constexpr (std::is_same_v<T, P::SumOf>) {
                cplx best{0.0, 0.0};
                bool first = true;
                for (const auto& t : node.terms) {
                    auto a = quadratic_exponent(t);
                    if (!a) return std::nullopt;
                    if (first || std::abs(*a) > std::abs(best)) best = *a;
                    first = false;
                }
                return best;
            } else if constexpr (std::is_same_v<T, P::Deriv> || std::is_same_v<T, P::Antideriv>) {
                return quadratic_exponent(*node.base);
            } else {
                return std::nullopt;
            }
        },
        phi.payload());
}

// Any kernel factor must match the ambient Gaussian scale.
inline void require_kernel_scale(const EntireSymbol& phi, const GaussWeight& gw) {
    using P = EntireSymbol;
    std::visit(
        [&](const auto& node) {
            using T = std::decay_t<decltype(node)>;
            if constexpr (std::is_same_v<T, P::Kern>) {
                if (node.r != gw.r)
                    throw std::invalid_argument("kernel symbol was built for r = " + std::to_string(node.r) +
                                                " but is used with r = " + std::to_string(gw.r));
            } else if constexpr (std::is_same_v<T, P::Shift>) {
                require_kernel_scale(*node.base, gw);
            } else if constexpr (std::is_same_v<T, P::Prod>) {
                for (const auto& f : node.factors) require_kernel_scale(f, gw);
            } else if constexpr (std::is_same_v<T, P::SumOf>) {
                for (const auto& t : node.terms) require_kernel_scale(t, gw);
            } else if constexpr (std::is_same_v<T, P::Deriv> || std::is_same_v<T, P::Antideriv>) {
                require_kernel_scale(*node.base, gw);
            }
        },
        phi.payload());
}

namespace detail {
inline std::optional<cplx> eval_closed(const EntireSymbol& phi, cplx z) {
    using P = EntireSymbol;
    return std::visit(
        [&](const auto& node) -> std::optional<cplx> {
            using T = std::decay_t<decltype(node)>;
            if constexpr (std::is_same_v<T, P::Poly>) {
                cplx acc{0.0, 0.0};
                for (long k = long(node.a.size()) - 1; k >= 0; --k) acc = acc * z + node.a[std::size_t(k)];
                return acc;
            } else if constexpr (std::is_same_v<T, P::ExpQuad>) {
                return std::exp(node.alpha * z * z + node.beta * z + node.gamma);
            } else if constexpr (std::is_same_v<T, P::Kern>) {
                return std::exp(node.r * z * std::conj(node.w));
            } else if constexpr (std::is_same_v<T, P::Shift>) {
                auto v = eval_closed(*node.base, z);
                if (!v) return std::nullopt;
                cplx zk{1.0, 0.0};
                for (long i = 0; i < node.k; ++i) zk *= z;
                return zk * *v;
            } else if constexpr (std::is_same_v<T, P::Prod>) {
                cplx acc{1.0, 0.0};
                for (const auto& f : node.factors) {
                    auto v = eval_closed(f, z);
                    if (!v) return std::nullopt;
                    acc *= *v;
                }
                return acc;
            } else if constexpr (std::is_same_v<T, P::SumOf>) {
                cplx acc{0.0, 0.0};
                for (const auto& t : node.terms) {
                    auto v = eval_closed(t, z);
                    if (!v) return std::nullopt;
                    acc += *v;
                }
                return acc;
            } else {
                return std::nullopt;
            }
        },
        phi.payload());
}
}  // namespace detail

// Pointwise value: closed form when the whole tree has one, otherwise the
// Taylor series with a certified geometric tail bound.  Throws when the tail
// cannot be certified below tol within max_terms.
inline cplx eval_symbol(const EntireSymbol& phi, cplx z, long max_terms = 20000, double tol = 1e-12) {
    if (auto v = detail::eval_closed(phi, z)) return *v;
    const double az = std::abs(z);
    ScaledComplex acc{};
    ScaledComplex zpow{cplx{1.0, 0.0}};
    const ScaledComplex zs{z};
    double prev_mag = -1.0;
    int tame_run = 0;
    for (long n = 0; n < max_terms; ++n) {
        const ScaledComplex term = phi.coefficient(n) * zpow;
        acc = acc + term;
        const double tmag = std::exp(term.log_abs());
        const double smag = std::exp(acc.log_abs());
        // certified stop: several consecutive terms decaying at ratio <= 1/2
        // give tail <= last_term, well under tol * scale
        if (n > 0 && prev_mag >= 0.0) {
            if (tmag <= 0.5 * prev_mag || tmag == 0.0)
                ++tame_run;
            else
                tame_run = 0;
            if (tame_run >= 8 && 2.0 * tmag <= tol * std::max(1.0, smag)) return acc.value();
        }
        prev_mag = tmag;
        if (az == 0.0 && n >= 1) return acc.value();
        zpow = zpow * zs;
    }
    throw std::runtime_error("eval_symbol: series tail bound did not fall below tolerance within " +
                             std::to_string(max_terms) + " terms at |z| = " + std::to_string(az));
}

// Truncated embedding of a symbol: c_n = a_n * sqrt(n!/r^n) for n = 0..N.
inline FockVector embed_symbol(const EntireSymbol& phi, long N, const GaussWeight& gw) {
    if (N < 0) throw std::invalid_argument("embed_symbol: negative truncation degree");
    require_kernel_scale(phi, gw);
    FockVector f(gw, std::size_t(N) + 1);
    for (long n = 0; n <= N; ++n) {
        const ScaledComplex scale = ScaledComplex::from_log_polar(0.5 * log_basis_norm_sq(n, gw), 0.0);
        f.c[std::size_t(n)] = (phi.coefficient(n) * scale).value();
    }
    return f;
}

}  // namespace fock
