#pragma once

#include <cmath>
#include <vector>

#include "triarb/basis.hpp"

namespace triarb {

/// The leading exchange-rate indices y_ij = x_ij + x_1i - x_1j for
/// 2 <= i < j: the coordinates that evolve on their own history under the
/// reduced matrices, and vanish exactly on the no-arbitrage subspace.
template <class S>
struct LeadingIndices {
    Dimension d;
    std::vector<S> values;  // reduced ordering (2,3), (2,4), ...
};

template <class S>
LeadingIndices<S> leading_indices(const LogRateVector<S>& x) {
    Dimension d = x.d;
    std::vector<S> out(d.reduced_count());
    for (int idx = 0; idx < d.reduced_count(); ++idx) {
        auto [i, j] = reduced_pair_of(idx, d);
        out[idx] = S(x.coords[index_of(i, j, d)] +
                     x.coords[index_of(1, i, d)] -
                     x.coords[index_of(1, j, d)]);
    }
    return {d, std::move(out)};
}

/// Arbitrage profit factor of the triangular path 1 -> i -> j -> 1.
inline double triangle_factor(const RateMatrix& r, int i, int j) {
    Dimension d = r.dim();
    if (i < 2 || i >= j || j > d.value())
        throw validation_error("triangle factor needs 2 <= i < j <= d");
    return r.at(1, i) * r.at(i, j) * r.at(j, 1);
}

struct NacReport {
    Dimension d;
    std::vector<std::pair<PairIndex, double>> factors;
    double accumulative = 0.0;
};

/// Accumulative no-arbitrage measure: sum of |factor - 1| over every
/// triangle through currency 1. Zero means no profitable triangle remains.
inline NacReport nac_report(const RateMatrix& r) {
    Dimension d = r.dim();
    NacReport out{d, {}, 0.0};
    for (int i = 2; i <= d.value(); ++i)
        for (int j = i + 1; j <= d.value(); ++j) {
            double f = triangle_factor(r, i, j);
            out.factors.push_back({{i, j}, f});
            out.accumulative += std::fabs(f - 1.0);
        }
    return out;
}

inline double accumulative_nac(const RateMatrix& r) {
    return nac_report(r).accumulative;
}

/// Log-space companion measure sum |y_ij|; exact on exact kinds (the
/// rate-space sum above overflows under unbounded growth, this one does not).
template <class S>
S log_accumulative_nac(const LogRateVector<S>& x) {
    S total(0);
    for (const S& y : leading_indices(x).values)
        total += scalar_traits<S>::abs(y);
    return total;
}

}  // namespace triarb
