#pragma once

#include <compare>
#include <string>
#include <vector>

#include "triarb/basis.hpp"

namespace triarb {

/// Canonical arbitrage rule (i, j, k): the pair {i, j} with i < j is updated
/// through the intermediary k.
struct RuleTriple {
    int i = 0;
    int j = 0;
    int k = 0;
    friend auto operator<=>(const RuleTriple&, const RuleTriple&) = default;
};

/// A rule with an orientation: the rate src->dst is the one pushed up.
struct DirectedRule {
    int src = 0;
    int dst = 0;
    int via = 0;
    friend bool operator==(const DirectedRule&, const DirectedRule&) = default;
};

inline void validate_rule(const RuleTriple& w, Dimension d) {
    if (w.i < 1 || w.j > d.value() || w.i >= w.j || w.k < 1 ||
        w.k > d.value() || w.k == w.i || w.k == w.j)
        throw validation_error("invalid rule (" + std::to_string(w.i) + ", " +
                               std::to_string(w.j) + ", " +
                               std::to_string(w.k) + ") for d=" +
                               std::to_string(d.value()));
}

inline void validate_rule(const DirectedRule& w, Dimension d) {
    if (w.src < 1 || w.src > d.value() || w.dst < 1 || w.dst > d.value() ||
        w.src == w.dst || w.via < 1 || w.via > d.value() || w.via == w.src ||
        w.via == w.dst)
        throw validation_error("invalid directed rule (" +
                               std::to_string(w.src) + ", " +
                               std::to_string(w.dst) + ", " +
                               std::to_string(w.via) + ")");
}

inline RuleTriple canonical(const DirectedRule& w) {
    return w.src < w.dst ? RuleTriple{w.src, w.dst, w.via}
                         : RuleTriple{w.dst, w.src, w.via};
}

inline DirectedRule directed(const RuleTriple& w) {
    return {w.i, w.j, w.k};
}

/// All C(d,2)*(d-2) canonical rules in lexicographic (i, j, k) order.
inline std::vector<RuleTriple> enumerate_rules(Dimension d) {
    std::vector<RuleTriple> out;
    out.reserve(d.pair_count() * (d.value() - 2));
    for (int i = 1; i <= d.value(); ++i)
        for (int j = i + 1; j <= d.value(); ++j)
            for (int k = 1; k <= d.value(); ++k)
                if (k != i && k != j) out.push_back({i, j, k});
    return out;
}

inline std::string format_rule(const RuleTriple& w) {
    return std::to_string(w.i) + "," + std::to_string(w.j) + "," +
           std::to_string(w.k);
}

template <class S>
struct MaxUpdateResult {
    LogRateVector<S> state;
    bool changed;  // false also covers the tie a_ik + a_kj = a_ij
};

/// One arbitrage step in log space: the directed rate src->dst becomes
/// max{a_{src,via} + a_{via,dst}, a_{src,dst}}; only the {src,dst} coordinate
/// of the stored upper triangle can move, and skew-symmetry is implicit.
template <class S>
MaxUpdateResult<S> max_update(const LogRateVector<S>& x,
                              const DirectedRule& w) {
    validate_rule(w, x.d);
    S candidate = x.entry(w.src, w.via) + x.entry(w.via, w.dst);
    S current = x.entry(w.src, w.dst);
    if (candidate <= current) return {x, false};
    LogRateVector<S> out = x;
    if (w.src < w.dst)
        out.coords[index_of(w.src, w.dst, x.d)] = candidate;
    else
        out.coords[index_of(w.dst, w.src, x.d)] = S(-candidate);
    return {std::move(out), true};
}

struct MultiplicativeResult {
    RateMatrix rates;
    bool changed;
};

/// The same step on true rates: r_{src,dst} <- max{r_{src,via} * r_{via,dst},
/// r_{src,dst}}, reciprocal entry adjusted.
inline MultiplicativeResult multiplicative_update(const RateMatrix& r,
                                                  const DirectedRule& w) {
    validate_rule(w, r.dim());
    Dimension d = r.dim();
    double candidate = r.at(w.src, w.via) * r.at(w.via, w.dst);
    double current = r.at(w.src, w.dst);
    std::vector<double> upper(d.pair_count());
    for (int idx = 0; idx < d.pair_count(); ++idx) {
        auto [i, j] = pair_of(idx, d);
        upper[idx] = r.at(i, j);
    }
    if (candidate <= current)
        return {RateMatrix::from_upper(d, upper), false};
    int lo = std::min(w.src, w.dst), hi = std::max(w.src, w.dst);
    upper[index_of(lo, hi, d)] =
        w.src < w.dst ? candidate : 1.0 / candidate;
    return {RateMatrix::from_upper(d, upper), true};
}

struct Orientation {
    DirectedRule rule;
    /// True when the linear step leaves the state unchanged, in which case
    /// the orientation does not matter.
    bool inessential;
};

/// Selects the orientation under which the nonlinear step reproduces the
/// linear one: a_ij rising means update (i,j,k) first, falling means the
/// mirrored pair goes first, and a tie is inessential.
template <class S>
Orientation realize_linear_as_max(const LogRateVector<S>& x,
                                  const RuleTriple& w) {
    validate_rule(w, x.d);
    S linear = x.entry(w.i, w.k) + x.entry(w.k, w.j);
    S current = x.entry(w.i, w.j);
    if (linear == current) return {{w.i, w.j, w.k}, true};
    if (linear > current) return {{w.i, w.j, w.k}, false};
    return {{w.j, w.i, w.k}, false};
}

}  // namespace triarb
