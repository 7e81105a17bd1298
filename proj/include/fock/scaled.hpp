#pragma once

// Complex values carried as mantissa * 2^exponent so that Taylor coefficients
// far below the double underflow threshold keep an honest magnitude.  A plain
// double would flush such coefficients to zero and make a divergent series
// look convergent once paired with the factorial weights n!/r^n.

#include <cmath>
#include <complex>
#include <limits>

namespace fock {

struct ScaledComplex {
    std::complex<double> m{0.0, 0.0};  // normalized mantissa, |m| in [1,2) unless zero
    long e = 0;                        // binary exponent

    ScaledComplex() = default;
    ScaledComplex(std::complex<double> value, long exp2 = 0) : m(value), e(exp2) { normalize(); }

    void normalize() {
        const double a = std::abs(m);
        if (a == 0.0 || !std::isfinite(a)) {
            if (a == 0.0) e = 0;
            return;
        }
        int k = 0;
        std::frexp(a, &k);  // a = f * 2^k, f in [0.5,1)
        const long shift = k - 1;
        if (shift != 0) {
            m = std::complex<double>(std::ldexp(m.real(), int(-shift)), std::ldexp(m.imag(), int(-shift)));
            e += shift;
        }
    }

    bool is_zero() const { return m == std::complex<double>(0.0, 0.0); }

    // Natural log of |value|; -inf for zero.
    double log_abs() const {
        if (is_zero()) return -std::numeric_limits<double>::infinity();
        return std::log(std::abs(m)) + double(e) * 0.6931471805599453094172321214581766;
    }

    // Collapse to a plain complex double (may under/overflow, by design).
    std::complex<double> value() const {
        if (is_zero()) return {0.0, 0.0};
        if (e > 2000) {
            const double inf = std::numeric_limits<double>::infinity();
            return {m.real() == 0.0 ? 0.0 : (m.real() > 0 ? inf : -inf),
                    m.imag() == 0.0 ? 0.0 : (m.imag() > 0 ? inf : -inf)};
        }
        if (e < -2000) return {0.0, 0.0};
        return {std::ldexp(m.real(), int(e)), std::ldexp(m.imag(), int(e))};
    }

    static ScaledComplex from_log_polar(double log_magnitude, double phase) {
        if (log_magnitude == -std::numeric_limits<double>::infinity()) return ScaledComplex{};
        const double log2e = 1.4426950408889634073599246810018921;  // 1/ln 2
        const double le = log_magnitude * log2e;
        const long e = long(std::floor(le));
        const double mant = std::exp2(le - double(e));
        return ScaledComplex{std::complex<double>(mant * std::cos(phase), mant * std::sin(phase)), e};
    }

    friend ScaledComplex operator*(const ScaledComplex& a, const ScaledComplex& b) {
        if (a.is_zero() || b.is_zero()) return ScaledComplex{};
        return ScaledComplex{a.m * b.m, a.e + b.e};
    }

    friend ScaledComplex operator*(const ScaledComplex& a, std::complex<double> s) {
        return ScaledComplex{a.m * s, a.e};
    }

    friend ScaledComplex operator*(const ScaledComplex& a, double s) {
        return ScaledComplex{a.m * s, a.e};
    }

    friend ScaledComplex operator/(const ScaledComplex& a, double s) {
        return ScaledComplex{a.m / s, a.e};
    }

    friend ScaledComplex operator+(const ScaledComplex& a, const ScaledComplex& b) {
        if (a.is_zero()) return b;
        if (b.is_zero()) return a;
        // Align to the larger exponent; a 128-bit-order gap makes the small
        // term vanish relative to double precision.
        const ScaledComplex& hi = (a.e >= b.e) ? a : b;
        const ScaledComplex& lo = (a.e >= b.e) ? b : a;
        const long gap = hi.e - lo.e;
        if (gap > 130) return hi;
        const std::complex<double> sum =
            hi.m + std::complex<double>(std::ldexp(lo.m.real(), int(-gap)), std::ldexp(lo.m.imag(), int(-gap)));
        return ScaledComplex{sum, hi.e};
    }

    friend ScaledComplex operator-(const ScaledComplex& a, const ScaledComplex& b) {
        return a + ScaledComplex{-b.m, b.e};
    }
};

}  // namespace fock
