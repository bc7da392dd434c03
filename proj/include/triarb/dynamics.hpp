#pragma once

#include <complex>
#include <cstdint>
#include <cstring>
#include <map>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "triarb/matrices.hpp"
#include "triarb/polynomial.hpp"
#include "triarb/rules.hpp"

namespace triarb {

/// A base cycle of rules extended by periodicity.
struct RuleSequence {
    std::vector<RuleTriple> base;
    std::uint64_t repeats = 1;
    std::string description;

    RuleSequence() = default;
    RuleSequence(std::vector<RuleTriple> rules, std::uint64_t reps = 1,
                 std::string desc = "")
        : base(std::move(rules)), repeats(reps), description(std::move(desc)) {}

    const RuleTriple& rule_at(std::uint64_t step) const {
        if (base.empty()) throw validation_error("empty rule sequence");
        return base[step % base.size()];
    }
    std::uint64_t expansion_length() const { return base.size() * repeats; }
    // An empty base is fine as long as no rule is ever drawn (zero-step
    // trajectories, identity products).
    void validate(Dimension d) const {
        for (const RuleTriple& w : base) validate_rule(w, d);
    }
};

enum class IterKind {
    PairBasis,  // full-triangle coordinates, linear one-row updates
    Reduced,    // leading-index coordinates
    MaxRule,    // the nonlinear max law on full-triangle coordinates
};

inline int state_size(IterKind kind, Dimension d) {
    return kind == IterKind::Reduced ? d.reduced_count() : d.pair_count();
}

namespace detail {

/// Per-rule matrix cache for one run.
class MatrixTable {
  public:
    MatrixTable(Dimension d, IterKind kind) : d_(d), kind_(kind) {}
    const IntMat& get(const RuleTriple& w) {
        auto it = cache_.find(w);
        if (it != cache_.end()) return it->second;
        IntMat m = kind_ == IterKind::Reduced ? reduced_matrix(w, d_).mat
                                              : pair_update_matrix(w, d_).mat;
        return cache_.emplace(w, std::move(m)).first->second;
    }

  private:
    Dimension d_;
    IterKind kind_;
    std::map<RuleTriple, IntMat> cache_;
};

}  // namespace detail

template <class S>
struct Trajectory {
    Dimension d;
    IterKind kind;
    std::vector<RuleTriple> applied;        // rule used at each step
    std::vector<std::vector<S>> points;     // states x_0 .. x_steps
    std::vector<S> norms;                   // sup norm per state
};

/// Runs the dynamics for `steps` steps. Linear kinds multiply by the exact
/// per-rule matrix; max mode applies the nonlinear law with the rule oriented
/// exactly as written (i updated through k towards j).
template <class S>
Trajectory<S> iterate(std::vector<S> x0, const RuleSequence& seq,
                      std::uint64_t steps, IterKind kind, Dimension d) {
    seq.validate(d);
    if (static_cast<int>(x0.size()) != state_size(kind, d))
        throw validation_error(
            "initial state has length " + std::to_string(x0.size()) +
            ", expected " + std::to_string(state_size(kind, d)));
    Trajectory<S> out{d, kind, {}, {}, {}};
    out.points.reserve(steps + 1);
    out.norms.reserve(steps + 1);
    out.points.push_back(std::move(x0));
    out.norms.push_back(sup_norm(out.points.back()));
    detail::MatrixTable table(d, kind);
    for (std::uint64_t t = 0; t < steps; ++t) {
        const RuleTriple& w = seq.rule_at(t);
        out.applied.push_back(w);
        if (kind == IterKind::MaxRule) {
            LogRateVector<S> x(d, out.points.back());
            out.points.push_back(max_update(x, directed(w)).state.coords);
        } else {
            out.points.push_back(table.get(w).apply(out.points.back()));
        }
        out.norms.push_back(sup_norm(out.points.back()));
    }
    return out;
}

/// Exact product over the expanded sequence, first rule applied first (the
/// matrix of step 1 is the rightmost factor).
inline IntMat product_of(const RuleSequence& seq, IterKind kind, Dimension d) {
    if (kind == IterKind::MaxRule)
        throw validation_error("products are defined for the linear kinds");
    seq.validate(d);
    detail::MatrixTable table(d, kind);
    IntMat h = IntMat::identity(state_size(kind, d));
    for (std::uint64_t t = 0; t < seq.expansion_length(); ++t)
        h = table.get(seq.rule_at(t)) * h;
    return h;
}

struct PeriodReport {
    std::uint64_t period = 0;
    std::uint64_t onset = 0;  // first index from which the relation holds
};

namespace detail {

inline std::size_t state_hash(const IntMat& m) { return m.content_hash(); }

template <class S>
std::size_t state_hash(const std::vector<S>& v) {
    std::uint64_t h = 0x243f6a8885a308d3ULL ^ v.size();
    for (const S& x : v) {
        double d = scalar_traits<S>::to_double(x);
        std::uint64_t bits;
        static_assert(sizeof(bits) == sizeof(d));
        std::memcpy(&bits, &d, sizeof(bits));
        h ^= bits + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    }
    return static_cast<std::size_t>(h);
}

}  // namespace detail

/// Smallest p <= max_lag such that states[n + p] == states[n] for every
/// sampled n past some onset, with at least one full period of matches
/// (onset <= N - 2p). Pure statement about the sampled data; no dynamical
/// assumption is made.
template <class T>
std::optional<PeriodReport> detect_periodicity(const std::vector<T>& states,
                                               std::uint64_t max_lag) {
    const std::uint64_t n = states.size();
    if (n < 2) return std::nullopt;
    std::vector<std::size_t> hashes(n);
    for (std::uint64_t t = 0; t < n; ++t)
        hashes[t] = detail::state_hash(states[t]);
    std::uint64_t limit = std::min<std::uint64_t>(max_lag, n / 2);
    for (std::uint64_t p = 1; p <= limit; ++p) {
        std::uint64_t mismatch = 0;
        bool found = true;
        for (std::uint64_t t = n - p; t-- > 0;) {
            if (hashes[t] != hashes[t + p] || !(states[t] == states[t + p])) {
                mismatch = t + 1;
                found = mismatch + 2 * p <= n;
                break;
            }
        }
        if (found) return PeriodReport{p, mismatch};
    }
    return std::nullopt;
}

/// Eventual periodicity of the power stream M, M^2, ... (an autonomous map,
/// so the first exact content repeat pins both onset and period).
inline std::optional<PeriodReport> matrix_power_periodicity(
    const IntMat& m, std::uint64_t max_powers) {
    std::unordered_map<std::size_t, std::vector<std::uint64_t>> seen;
    std::vector<IntMat> powers;
    IntMat p = m;
    for (std::uint64_t k = 1; k <= max_powers; ++k) {
        std::size_t h = p.content_hash();
        for (std::uint64_t prior : seen[h]) {
            if (powers[prior - 1] == p)
                return PeriodReport{k - prior, prior};
        }
        seen[h].push_back(k);
        powers.push_back(p);
        p = m * p;
    }
    return std::nullopt;
}

struct GrowthClass {
    enum class LogSpace { Periodic, Polynomial, Exponential, Uncertain };
    enum class RateSpace { Bounded, Exponential, DoubleExponential, Uncertain };
    LogSpace log_space = LogSpace::Uncertain;
    RateSpace rate_space = RateSpace::Uncertain;
    std::uint64_t period = 0;                       // Periodic
    int degree = 0;                                 // Polynomial
    double rate = 0.0;                              // Exponential
    double fit_r2 = 1.0;
    std::vector<std::pair<double, double>> fit_points;  // raw (log k, log |M^k|)
};

inline const char* to_string(GrowthClass::LogSpace g) {
    switch (g) {
        case GrowthClass::LogSpace::Periodic: return "periodic";
        case GrowthClass::LogSpace::Polynomial: return "polynomial";
        case GrowthClass::LogSpace::Exponential: return "exponential";
        case GrowthClass::LogSpace::Uncertain: return "uncertain";
    }
    return "?";
}

inline const char* to_string(GrowthClass::RateSpace g) {
    switch (g) {
        case GrowthClass::RateSpace::Bounded: return "bounded";
        case GrowthClass::RateSpace::Exponential: return "exponential";
        case GrowthClass::RateSpace::DoubleExponential:
            return "double-exponential";
        case GrowthClass::RateSpace::Uncertain: return "uncertain";
    }
    return "?";
}

/// Classifies the cycle product: expanding spectral radius means exponential
/// log-rate growth (double exponential on true rates); otherwise a repeat in
/// the exact power stream means periodicity (bounded rates); otherwise the
/// powers grow polynomially and the degree is fitted on a log-log scale.
inline GrowthClass classify_growth(const std::vector<RuleTriple>& cycle,
                                   Dimension d, IterKind kind,
                                   std::uint64_t max_powers = 4096) {
    IntMat m = product_of(RuleSequence(cycle), kind, d);
    GrowthClass out;
    double rho = spectral_radius(m);
    if (rho > 1.0 + 1e-9) {
        out.log_space = GrowthClass::LogSpace::Exponential;
        out.rate_space = GrowthClass::RateSpace::DoubleExponential;
        out.rate = rho;
        return out;
    }
    if (auto rep = matrix_power_periodicity(m, max_powers)) {
        out.log_space = GrowthClass::LogSpace::Periodic;
        out.rate_space = GrowthClass::RateSpace::Bounded;
        out.period = rep->period;
        return out;
    }
    // Log-log fit of max |entry| of M^k over the tail window.
    IntMat p = m;
    std::uint64_t k = 1;
    for (; k < max_powers / 4; ++k) p = m * p;
    for (; k <= max_powers; ++k) {
        Int norm = p.sup_norm();
        if (norm > 0)
            out.fit_points.emplace_back(std::log(double(k)), log_value(norm));
        if (k < max_powers) p = m * p;
    }
    if (out.fit_points.size() < 2) return out;  // uncertain
    double sx = 0, sy = 0, sxx = 0, sxy = 0, syy = 0;
    double cnt = double(out.fit_points.size());
    for (auto [x, y] : out.fit_points) {
        sx += x; sy += y; sxx += x * x; sxy += x * y; syy += y * y;
    }
    double denom = cnt * sxx - sx * sx;
    double slope = (cnt * sxy - sx * sy) / denom;
    double ss_tot = syy - sy * sy / cnt;
    double intercept = (sy - slope * sx) / cnt;
    double ss_res = 0;
    for (auto [x, y] : out.fit_points) {
        double e = y - (slope * x + intercept);
        ss_res += e * e;
    }
    out.fit_r2 = ss_tot > 0 ? 1.0 - ss_res / ss_tot : 1.0;
    if (out.fit_r2 < 0.99) return out;  // uncertain, raw data attached
    out.log_space = GrowthClass::LogSpace::Polynomial;
    out.rate_space = GrowthClass::RateSpace::Exponential;
    out.degree = static_cast<int>(std::lround(slope));
    return out;
}

/// Full record for one cycle: exact product, exact characteristic
/// polynomial, certified spectrum, and the growth classification.
struct CycleAnalysis {
    Dimension d;
    IterKind kind;
    std::vector<RuleTriple> cycle;
    IntMat product;
    IntPoly char_poly;
    std::vector<std::complex<double>> eigenvalues;
    double spectral_radius = 0.0;
    double max_residual = 0.0;
    GrowthClass growth;
};

inline CycleAnalysis analyze_cycle(const std::vector<RuleTriple>& cycle,
                                   Dimension d, IterKind kind,
                                   std::uint64_t max_powers = 4096) {
    CycleAnalysis out{d, kind, cycle, {}, {}, {}, 0.0, 0.0, {}};
    out.product = product_of(RuleSequence(cycle), kind, d);
    out.char_poly = characteristic_polynomial(out.product);
    Eigenvalues eig = polynomial_spectrum(out.char_poly);
    out.eigenvalues = std::move(eig.values);
    out.max_residual = eig.max_residual;
    out.spectral_radius =
        out.eigenvalues.empty() ? 0.0 : std::abs(out.eigenvalues.front());
    out.growth = classify_growth(cycle, d, kind, max_powers);
    return out;
}

struct RateFit {
    double per_cycle = 0.0;  // geometric mean of ||x_{(k+1)L}|| / ||x_{kL}||
    double per_step = 0.0;
    std::uint64_t cycles_used = 0;
    bool per_step_in_bracket = false;  // within [1.071, 1.072]
};

/// Per-cycle growth ratio of the recorded norms after a burn-in, measured
/// between cycle boundaries so within-cycle wobble cancels.
template <class S>
RateFit growth_rate_fit(const std::vector<S>& norms, std::uint64_t cycle_len,
                        std::uint64_t burn_in_cycles) {
    if (cycle_len == 0) throw validation_error("cycle length must be positive");
    if (norms.empty()) throw validation_error("no norms recorded");
    std::uint64_t total_cycles = (norms.size() - 1) / cycle_len;
    if (total_cycles < burn_in_cycles + 10)
        throw validation_error(
            "need at least ten cycles past burn-in, have " +
            std::to_string(total_cycles));
    const S& start = norms[burn_in_cycles * cycle_len];
    const S& end = norms[total_cycles * cycle_len];
    if (start == S(0) || end == S(0))
        throw validation_error("degenerate trajectory: zero norm at a cycle boundary");
    RateFit fit;
    fit.cycles_used = total_cycles - burn_in_cycles;
    double log_ratio =
        (log_value(end) - log_value(start)) / double(fit.cycles_used);
    fit.per_cycle = std::exp(log_ratio);
    fit.per_step = std::exp(log_ratio / double(cycle_len));
    fit.per_step_in_bracket = fit.per_step >= 1.071 && fit.per_step <= 1.072;
    return fit;
}

}  // namespace triarb
