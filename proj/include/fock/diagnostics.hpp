#pragma once

// Growth diagnostics for nonnegative-term series and annulus integrals.
//
// A DivergenceDiagnostic records checkpointed partial values, a fitted growth
// model, and a verdict.  Converges is only issued together with a Cauchy-style
// tail estimate below 1e-6 (relative to max(1, value)); Diverges is only
// issued with a fitted unbounded model (logarithmic or power growth).

#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace fock {

enum class Verdict { Converges, Diverges };

inline const char* verdict_name(Verdict v) { return v == Verdict::Converges ? "Converges" : "Diverges"; }

struct FittedModel {
    enum class Kind { Convergent, Logarithmic, Power } kind = Kind::Convergent;
    // Convergent: limit estimate; Logarithmic: slope against log of the
    // index; Power: growth exponent of the partial value.
    double parameter = 0.0;
};

inline const char* model_name(FittedModel::Kind k) {
    switch (k) {
        case FittedModel::Kind::Convergent: return "convergent";
        case FittedModel::Kind::Logarithmic: return "logarithmic";
        case FittedModel::Kind::Power: return "power";
    }
    return "?";
}

struct DivergenceDiagnostic {
    std::vector<double> indices;  // checkpoint index n (series) or radius R (annulus)
    std::vector<double> values;   // nondecreasing partial values at the checkpoints
    std::vector<double> terms;    // last term at each checkpoint (series only)
    FittedModel model;
    Verdict verdict = Verdict::Converges;
    double tail_estimate = std::numeric_limits<double>::infinity();
    std::string description;
};

// ---------------------------------------------------------------------------
// Series: single pass over term(0..M-1), checkpoints at powers of two.
// The local power-law exponent p of the terms decides the model:
//   p > 1 and tail t_M M/(p-1) small  -> Convergent
//   p near 1                          -> Logarithmic divergence, slope fitted
//   p < 1                             -> Power divergence of the partial sums
// Terms that stop decaying (p <= 0) and overflow guards both land in Power.
// ---------------------------------------------------------------------------

inline DivergenceDiagnostic diagnose_series(const std::function<double(long)>& term, long M,
                                            std::string description) {
    if (M < 100) throw std::invalid_argument("diagnose_series: need at least 100 terms");
    DivergenceDiagnostic d;
    d.description = std::move(description);
    double s = 0.0;
    long next_cp = 1;
    long n = 0;
    bool exploded = false;
    for (; n < M; ++n) {
        const double t = term(n);
        if (t < 0.0) throw std::invalid_argument("diagnose_series: negative term at n = " + std::to_string(n));
        if (!std::isfinite(t) || s + t > 1e100) {
            exploded = true;
            break;
        }
        s += t;
        if (n + 1 == next_cp || n + 1 == M) {
            d.indices.push_back(double(n + 1));
            d.values.push_back(s);
            d.terms.push_back(t);
            if (n + 1 == next_cp) next_cp *= 2;
        }
    }
    if (exploded) {
        if (d.indices.empty() || d.indices.back() < double(n)) {
            d.indices.push_back(double(std::max<long>(n, 1)));
            d.values.push_back(std::min(s, 1e100));
            d.terms.push_back(0.0);
        }
        d.model = {FittedModel::Kind::Power, std::numeric_limits<double>::infinity()};
        d.verdict = Verdict::Diverges;
        return d;
    }

    // local exponent of the terms from the last two checkpoints with
    // positive terms
    double phat = std::numeric_limits<double>::quiet_NaN();
    {
        long ia = -1, ib = -1;
        for (long i = long(d.indices.size()) - 1; i >= 0; --i) {
            if (d.terms[std::size_t(i)] > 0.0) {
                if (ib < 0)
                    ib = i;
                else if (d.indices[std::size_t(i)] * 1.5 <= d.indices[std::size_t(ib)]) {
                    ia = i;
                    break;
                }
            }
        }
        if (ib >= 0 && ia >= 0)
            phat = -(std::log(d.terms[std::size_t(ib)]) - std::log(d.terms[std::size_t(ia)])) /
                   (std::log(d.indices[std::size_t(ib)]) - std::log(d.indices[std::size_t(ia)]));
    }

    const double S = d.values.back();
    if (std::isnan(phat)) {
        // terms vanished identically in the tail: finite sum
        d.model = {FittedModel::Kind::Convergent, S};
        d.verdict = Verdict::Converges;
        d.tail_estimate = 0.0;
        return d;
    }

    const double tM = d.terms.back();
    if (phat > 1.2) {
        // terms ~ n^{-p}, p > 1: integral tail bound t_M M/(p-1)
        const double tail = tM * double(M) / (phat - 1.0);
        d.tail_estimate = tail;
        d.model = {FittedModel::Kind::Convergent, S + tail};
        d.verdict = Verdict::Converges;
        if (tail > 1e-6 * std::max(1.0, S))
            d.description += " [tail certificate " + std::to_string(tail) +
                             " above the 1e-6 relative target; increase the term count]";
        return d;
    }
    if (phat > 0.8) {
        // terms ~ c/n: partial sums ~ c log n; slope by least squares over
        // the top checkpoints
        double sx = 0, sy = 0, sxx = 0, sxy = 0;
        int cnt = 0;
        for (long i = std::max<long>(0, long(d.indices.size()) - 5); i < long(d.indices.size()); ++i) {
            const double x = std::log(d.indices[std::size_t(i)]);
            const double y = d.values[std::size_t(i)];
            sx += x;
            sy += y;
            sxx += x * x;
            sxy += x * y;
            ++cnt;
        }
        const double slope = (cnt * sxy - sx * sy) / (cnt * sxx - sx * sx);
        d.model = {FittedModel::Kind::Logarithmic, slope};
        d.verdict = Verdict::Diverges;
        return d;
    }
    // terms ~ n^{-p}, p < 1: partial sums grow like n^{1-p}
    d.model = {FittedModel::Kind::Power, 1.0 - phat};
    d.verdict = Verdict::Diverges;
    return d;
}

// ---------------------------------------------------------------------------
// Annulus values V(R) on a doubling radius ladder.  Increment ratios over
// octaves pick the model:
//   ratios <= 0.6       -> bounded (geometric tail certificate)
//   0.6 < ratio < 1.67  -> logarithmic growth (constant increment/doubling)
//   ratios >= 1.67      -> power growth, exponent log2(ratio)
// ---------------------------------------------------------------------------

inline DivergenceDiagnostic diagnose_annulus(const std::vector<double>& radii, const std::vector<double>& values,
                                             std::string description) {
    if (radii.size() != values.size() || radii.size() < 3)
        throw std::invalid_argument("diagnose_annulus: need >= 3 radii with matching values");
    for (std::size_t i = 1; i < radii.size(); ++i) {
        if (!(radii[i] > radii[i - 1])) throw std::invalid_argument("diagnose_annulus: radii must increase");
        if (values[i] + 1e-12 * std::max(1.0, values[i - 1]) < values[i - 1])
            throw std::invalid_argument("diagnose_annulus: values must be nondecreasing");
    }
    DivergenceDiagnostic d;
    d.description = std::move(description);
    d.indices = radii;
    d.values = values;

    std::vector<double> inc;
    for (std::size_t i = 1; i < values.size(); ++i) inc.push_back(std::max(values[i] - values[i - 1], 0.0));
    const double last = inc.back();
    const double prev = inc[inc.size() - 2];
    const double vscale = std::max(1.0, values.back());
    if (last <= 1e-9 * vscale && prev <= 1e-9 * vscale) {
        d.model = {FittedModel::Kind::Convergent, values.back()};
        d.verdict = Verdict::Converges;
        d.tail_estimate = last;
        return d;
    }
    const double q = (prev > 0.0) ? last / prev : std::numeric_limits<double>::infinity();
    if (q <= 0.6) {
        // geometrically shrinking increments: bounded, tail <= last q/(1-q)
        const double tail = last * q / (1.0 - q);
        d.tail_estimate = tail;
        d.model = {FittedModel::Kind::Convergent, values.back() + tail};
        d.verdict = Verdict::Converges;
        if (tail > 1e-6 * vscale)
            d.description += " [tail certificate " + std::to_string(tail) +
                             " above the 1e-6 relative target; extend the radius ladder]";
        return d;
    }
    if (q < 1.67) {
        // constant increment per doubling: V ~ slope * log R
        const double lr = std::log(radii.back()) - std::log(radii[radii.size() - 2]);
        d.model = {FittedModel::Kind::Logarithmic, last / lr};
        d.verdict = Verdict::Diverges;
        return d;
    }
    d.model = {FittedModel::Kind::Power, std::log2(q)};
    d.verdict = Verdict::Diverges;
    return d;
}

}  // namespace fock
