#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <set>
#include <thread>
#include <vector>

#include "triarb/detail/rng.hpp"
#include "triarb/dynamics.hpp"

namespace triarb {

struct SearchConfig {
    Dimension d{4};
    IterKind kind = IterKind::Reduced;
    int max_length = 4;
    enum class Mode { Exhaustive, Random } mode = Mode::Exhaustive;
    std::uint64_t sample_budget = 10000;  // random mode only
    std::uint64_t seed = 0;
    double rho_threshold = 1.0 + 1e-9;
    std::uint64_t work_cap = 100'000'000;  // products
    int threads = 0;                       // 0 = hardware concurrency
};

/// Lexicographically minimal rotation; rotation-equal cycles canonicalize
/// identically.
inline std::vector<RuleTriple> canonical_rotation(
    std::vector<RuleTriple> cycle) {
    if (cycle.empty()) throw validation_error("empty cycle");
    const size_t n = cycle.size();
    size_t best = 0;
    for (size_t s = 1; s < n; ++s) {
        for (size_t t = 0; t < n; ++t) {
            const RuleTriple& a = cycle[(s + t) % n];
            const RuleTriple& b = cycle[(best + t) % n];
            if (a < b) {
                best = s;
                break;
            }
            if (b < a) break;
        }
    }
    std::rotate(cycle.begin(), cycle.begin() + best, cycle.end());
    return cycle;
}

/// Full analysis of one cycle; unstable reports additionally pass the
/// residual certificate gate used by the search.
inline CycleAnalysis verify_cycle(const std::vector<RuleTriple>& cycle,
                                  Dimension d, IterKind kind) {
    if (kind == IterKind::MaxRule)
        throw validation_error("cycle analysis needs a linear kind");
    return analyze_cycle(cycle, d, kind);
}

namespace detail {

/// Cheap sound stability screen: rho(M) <= ||M^16||_inf^(1/16), so an
/// integer row-sum norm of at most 1 proves the cycle stable. Anything else
/// goes to the exact spectrum.
inline bool provably_stable(const IntMat& m) {
    IntMat p = m;
    for (int t = 0; t < 4; ++t) p = p * p;
    return p.row_sum_norm() <= 1;
}

struct CandidateScan {
    const SearchConfig& config;
    std::vector<RuleTriple> rules;
    std::atomic<std::uint64_t> products{0};

    explicit CandidateScan(const SearchConfig& c)
        : config(c), rules(enumerate_rules(c.d)) {}

    /// Exact spectral radius of the cycle product (no growth classification;
    /// hits get the full treatment later).
    double rho_of(const IntMat& product) const {
        return spectral_radius(product);
    }

    void scan_cycle(const std::vector<RuleTriple>& cycle,
                    const IntMat& product,
                    std::vector<std::vector<RuleTriple>>& hits) {
        if (provably_stable(product)) return;
        if (rho_of(product) > config.rho_threshold) hits.push_back(cycle);
    }

    /// DFS over extensions of `prefix`; only cycles that are their own
    /// minimal rotation are scanned, and a prefix is extended only with
    /// rules not below its first element (a canonical cycle must start at
    /// its minimal element).
    void dfs(std::vector<RuleTriple>& prefix, size_t first_rule_index,
             const IntMat& product,
             std::vector<std::vector<RuleTriple>>& hits) {
        if (canonical_rotation(prefix) == prefix)
            scan_cycle(prefix, product, hits);
        if (static_cast<int>(prefix.size()) >= config.max_length) return;
        for (size_t r = first_rule_index; r < rules.size(); ++r) {
            std::uint64_t done =
                products.fetch_add(1, std::memory_order_relaxed) + 1;
            if (done > config.work_cap)
                throw budget_error("search exceeded its work cap", done,
                                   config.work_cap);
            prefix.push_back(rules[r]);
            IntMat next = pair_matrix(rules[r]) * product;
            dfs(prefix, first_rule_index, next, hits);
            prefix.pop_back();
        }
    }

    const IntMat& pair_matrix(const RuleTriple& w) {
        if (matrix_cache_.empty()) {
            for (const RuleTriple& r : rules)
                matrix_cache_.emplace_back(
                    config.kind == IterKind::Reduced
                        ? reduced_matrix(r, config.d).mat
                        : pair_update_matrix(r, config.d).mat);
        }
        size_t at = std::lower_bound(rules.begin(), rules.end(), w) -
                    rules.begin();
        return matrix_cache_[at];
    }

  private:
    std::vector<IntMat> matrix_cache_;
};

}  // namespace detail

/// Enumerates (exhaustive) or samples (random) rule cycles and returns the
/// analyses of every cycle whose spectral radius clears the threshold.
/// Deterministic for a fixed config, including across thread counts:
/// exhaustive work is partitioned by first rule and merged in order; random
/// candidates are generated sequentially from per-sample seeds before the
/// parallel analysis.
inline std::vector<CycleAnalysis> enumerate_unstable(
    const SearchConfig& config) {
    if (config.max_length < 1)
        throw validation_error("max_length must be at least 1");
    const std::vector<RuleTriple> rules = enumerate_rules(config.d);
    const double rule_count = static_cast<double>(rules.size());

    // Candidate cycles, already rotation-deduplicated.
    std::vector<std::vector<RuleTriple>> candidates;

    if (config.mode == SearchConfig::Mode::Exhaustive) {
        double estimate = std::pow(rule_count, config.max_length);
        if (estimate > static_cast<double>(config.work_cap))
            throw budget_error(
                "exhaustive search needs ~" + std::to_string(estimate) +
                    " products, over the work cap",
                0, config.work_cap);
        detail::CandidateScan scan(config);
        scan.pair_matrix(rules[0]);  // build the table up front
        const int nthreads = std::max(
            1, config.threads > 0
                   ? config.threads
                   : static_cast<int>(std::min<std::size_t>(
                         std::thread::hardware_concurrency(), rules.size())));
        std::vector<std::vector<std::vector<RuleTriple>>> per_first(
            rules.size());
        std::vector<std::exception_ptr> errors(rules.size());
        std::atomic<size_t> next_first{0};
        auto worker = [&]() {
            for (;;) {
                size_t at = next_first.fetch_add(1);
                if (at >= rules.size()) return;
                try {
                    std::vector<RuleTriple> prefix{rules[at]};
                    IntMat start = scan.pair_matrix(rules[at]);
                    scan.products.fetch_add(1, std::memory_order_relaxed);
                    scan.dfs(prefix, at, start, per_first[at]);
                } catch (...) {
                    errors[at] = std::current_exception();
                }
            }
        };
        std::vector<std::thread> pool;
        for (int t = 0; t < nthreads; ++t) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
        for (auto& e : errors)
            if (e) std::rethrow_exception(e);
        for (auto& part : per_first)
            for (auto& c : part) candidates.push_back(std::move(c));
    } else {
        if (config.sample_budget *
                static_cast<std::uint64_t>(config.max_length) >
            config.work_cap)
            throw budget_error("random search budget over the work cap",
                               0, config.work_cap);
        std::set<std::vector<RuleTriple>> seen;
        for (std::uint64_t s = 0; s < config.sample_budget; ++s) {
            detail::SplitMix64 rng(detail::split_seed(config.seed, s));
            int len = 1 + static_cast<int>(rng.below(config.max_length));
            std::vector<RuleTriple> cycle(len);
            for (int t = 0; t < len; ++t)
                cycle[t] = rules[rng.below(rules.size())];
            cycle = canonical_rotation(std::move(cycle));
            if (seen.insert(cycle).second) candidates.push_back(cycle);
        }
    }

    // Screen candidates cheaply, then re-verify each hit from scratch and
    // keep it only if the exact spectrum clears the threshold with a
    // certified residual.
    std::vector<CycleAnalysis> hits;
    detail::CandidateScan screen(config);
    for (const auto& cycle : candidates) {
        IntMat product = IntMat::identity(state_size(config.kind, config.d));
        for (const RuleTriple& w : cycle)
            product = screen.pair_matrix(w) * product;
        if (detail::provably_stable(product)) continue;
        if (spectral_radius(product) <= config.rho_threshold) continue;
        CycleAnalysis full = verify_cycle(cycle, config.d, config.kind);
        if (full.spectral_radius > config.rho_threshold &&
            full.max_residual < 1e-8)
            hits.push_back(std::move(full));
    }
    std::sort(hits.begin(), hits.end(),
              [](const CycleAnalysis& a, const CycleAnalysis& b) {
                  if (a.spectral_radius != b.spectral_radius)
                      return a.spectral_radius > b.spectral_radius;
                  if (a.cycle.size() != b.cycle.size())
                      return a.cycle.size() < b.cycle.size();
                  return a.cycle < b.cycle;
              });
    return hits;
}

}  // namespace triarb
