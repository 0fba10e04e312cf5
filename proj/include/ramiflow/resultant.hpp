#ifndef RAMIFLOW_RESULTANT_HPP
#define RAMIFLOW_RESULTANT_HPP

#include <vector>

#include "ramiflow/series.hpp"

namespace ramiflow {

// Polynomial in y with ValuedSeries coefficients, low degree first.
struct PolyY {
    std::vector<ValuedSeries> coeffs;

    long degree() const {
        long d = (long)coeffs.size() - 1;
        while (d >= 0 && coeffs[d].known_zero()) --d;
        return d;
    }

    PolyY derivative(const CoeffModel& model) const {
        PolyY r;
        for (size_t n = 1; n < coeffs.size(); ++n)
            r.coeffs.push_back(coeffs[n].scaled(Coeff::from_rational(model, Rat((long)n))));
        if (r.coeffs.empty()) r.coeffs.push_back(ValuedSeries::zero(model));
        return r;
    }
};

// Sylvester resultant by a division-free subset-DP determinant.  The matrix
// stays small for the supported families; the cap keeps the DP affordable.
inline ValuedSeries resultant_in_y(const PolyY& P, const PolyY& Q, const CoeffModel& model) {
    long m = P.degree(), n = Q.degree();
    if (m < 0 || n < 0) throw err(Error::Code::ZeroInput, "resultant with zero polynomial");
    if (P.coeffs[m].terms().empty() || Q.coeffs[n].terms().empty())
        throw err(Error::Code::InsufficientPrecision, "leading coefficient not exactly known");
    long N = m + n;
    if (N == 0) return ValuedSeries::monomial(model, Coeff::from_rational(model, 1), 0);
    if (N > 14) throw err(Error::Code::UnsupportedCover, "resultant size beyond supported cap");

    auto entry = [&](long row, long col) -> ValuedSeries {
        // rows 0..n-1 carry P shifted, rows n..n+m-1 carry Q shifted
        if (row < n) {
            long k = m - (col - row);
            if (col >= row && k >= 0 && k <= m) return P.coeffs[k];
        } else {
            long r = row - n;
            long k = n - (col - r);
            if (col >= r && k >= 0 && k <= n) return Q.coeffs[k];
        }
        return ValuedSeries::zero(model);
    };

    // det via DP over column subsets, processing rows in order
    size_t full = size_t(1) << N;
    std::vector<ValuedSeries> dp(full, ValuedSeries::zero(model));
    dp[0] = ValuedSeries::monomial(model, Coeff::from_rational(model, 1), 0);
    std::vector<bool> live(full, false);
    live[0] = true;
    for (long row = 0; row < N; ++row) {
        std::vector<ValuedSeries> next(full, ValuedSeries::zero(model));
        std::vector<bool> nlive(full, false);
        for (size_t mask = 0; mask < full; ++mask) {
            if (!live[mask] || __builtin_popcountll(mask) != row) continue;
            long below = 0;  // chosen columns below the candidate
            for (long col = 0; col < N; ++col) {
                if (mask & (size_t(1) << col)) {
                    ++below;
                    continue;
                }
                ValuedSeries e = entry(row, col);
                if (e.known_zero()) continue;
                ValuedSeries add = dp[mask] * e;
                // inversions added: chosen columns above the candidate
                if ((row - below) % 2 == 1) add = -add;
                size_t nm = mask | (size_t(1) << col);
                next[nm] = nlive[nm] ? next[nm] + add : add;
                nlive[nm] = true;
            }
        }
        dp = std::move(next);
        live = std::move(nlive);
    }
    if (!live[full - 1]) return ValuedSeries::zero(model);
    ValuedSeries res = dp[full - 1];
    if (res.precision() && !res.terms().empty() && res.min_exp() >= *res.precision())
        throw err(Error::Code::InsufficientPrecision, "resultant precision below lowest exponent");
    return res;
}

inline ValuedSeries discriminant_in_y(const PolyY& P, const CoeffModel& model) {
    return resultant_in_y(P, P.derivative(model), model);
}

}  // namespace ramiflow

#endif
