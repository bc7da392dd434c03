#pragma once

#include <chrono>
#include <cmath>
#include <sstream>
#include <string>
#include <vector>

#include "triarb/detail/reference_data.hpp"
#include "triarb/detail/rng.hpp"
#include "triarb/dynamics.hpp"
#include "triarb/io.hpp"
#include "triarb/linalg.hpp"
#include "triarb/metrics.hpp"
#include "triarb/polytope.hpp"
#include "triarb/search.hpp"

// The built-in reproduction suite: every published quantity this engine is
// expected to reproduce, checked end to end at pinned tolerances. The CLI
// `verify-paper` subcommand and the acceptance test binary both run this.

namespace triarb::verify {

struct CriterionResult {
    std::string name;
    bool pass = true;
    std::string detail;
    double seconds = 0.0;
};

namespace detail {

using triarb::detail::SplitMix64;

template <int N>
IntMat from_array(const int (&rows)[N][N]) {
    IntMat m(N, N);
    for (int r = 0; r < N; ++r)
        for (int c = 0; c < N; ++c) m.at(r, c) = rows[r][c];
    return m;
}

inline std::vector<Int> signed_vertex(int id) {
    std::vector<Int> v(3);
    int a = id > 0 ? id : -id;
    for (int c = 0; c < 3; ++c) {
        v[c] = refdata::cert_vertices[a - 1][c];
        if (id < 0) v[c] = -v[c];
    }
    return v;
}

class Check {
  public:
    explicit Check(std::string name) { result_.name = std::move(name); }

    void require(bool ok, const std::string& what) {
        if (!ok && result_.pass) {
            result_.pass = false;
            result_.detail = what;
        }
    }
    void note(const std::string& what) {
        if (result_.pass) result_.detail = what;
    }
    CriterionResult finish(double seconds) {
        result_.seconds = seconds;
        return result_;
    }

  private:
    CriterionResult result_;
};

template <class F>
CriterionResult timed(const std::string& name, F&& body) {
    Check check(name);
    auto start = std::chrono::steady_clock::now();
    try {
        body(check);
    } catch (const std::exception& e) {
        check.require(false, std::string("exception: ") + e.what());
    }
    double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
            .count();
    return check.finish(seconds);
}

/// Kernel vector of a numerically rank-(n-1) matrix, by partial-pivot
/// elimination with the near-zero pivot column taken as the free variable.
inline std::vector<double> kernel_vector(std::vector<std::vector<double>> a) {
    const int n = static_cast<int>(a.size());
    std::vector<int> pivot_row_of_col(n, -1);
    int row = 0;
    for (int col = 0; col < n && row < n; ++col) {
        int best = -1;
        double best_abs = 1e-8;
        for (int r = row; r < n; ++r)
            if (std::fabs(a[r][col]) > best_abs) {
                best_abs = std::fabs(a[r][col]);
                best = r;
            }
        if (best < 0) continue;  // free column
        std::swap(a[row], a[best]);
        for (int r = 0; r < n; ++r) {
            if (r == row || a[r][col] == 0.0) continue;
            double f = a[r][col] / a[row][col];
            for (int c = col; c < n; ++c) a[r][c] -= f * a[row][c];
        }
        pivot_row_of_col[col] = row;
        ++row;
    }
    int free_col = -1;
    for (int col = 0; col < n; ++col)
        if (pivot_row_of_col[col] < 0) free_col = col;
    std::vector<double> x(n, 0.0);
    if (free_col < 0) return x;  // numerically nonsingular; caller checks
    x[free_col] = 1.0;
    for (int col = 0; col < n; ++col) {
        int pr = pivot_row_of_col[col];
        if (pr < 0) continue;
        x[col] = -a[pr][free_col] / a[pr][col];
    }
    return x;
}

inline std::vector<RuleTriple> rules_from(const int (*rows)[3], int count) {
    std::vector<RuleTriple> out;
    for (int t = 0; t < count; ++t)
        out.push_back({rows[t][0], rows[t][1], rows[t][2]});
    return out;
}

}  // namespace detail

// --- 1. factory output vs the published reference tables -------------------

inline CriterionResult check_reference_tables() {
    return detail::timed("reference matrix tables (d=4, d=5)", [](auto& check) {
        auto run = [&check](Dimension d, const int (*rule_rows)[3], auto& bs,
                            auto& ds, auto& gs, auto& q, auto& qinv) {
            std::vector<RuleTriple> rules = enumerate_rules(d);
            for (size_t t = 0; t < rules.size(); ++t) {
                const RuleTriple want{rule_rows[t][0], rule_rows[t][1],
                                      rule_rows[t][2]};
                check.require(rules[t] == want, "rule order mismatch at " +
                                                    format_rule(rules[t]));
                IntMat b = pair_update_matrix(rules[t], d).mat;
                check.require(b == detail::from_array(bs[t]),
                              "pair-update matrix mismatch for rule " +
                                  format_rule(rules[t]));
                BlockDecomposition blocks = block_form(rules[t], d);
                check.require(blocks.block.mat == detail::from_array(ds[t]),
                              "block-form matrix mismatch for rule " +
                                  format_rule(rules[t]));
                check.require(blocks.reduced.mat == detail::from_array(gs[t]),
                              "reduced matrix mismatch for rule " +
                                  format_rule(rules[t]));
            }
            check.require(change_of_basis(d).mat == detail::from_array(q),
                          "change-of-basis mismatch");
            check.require(
                change_of_basis_inverse(d).mat == detail::from_array(qinv),
                "inverse change-of-basis mismatch");
        };
        run(Dimension(4), refdata::d4_rules, refdata::d4_B, refdata::d4_D,
            refdata::d4_G, refdata::d4_Q, refdata::d4_Qinv);
        run(Dimension(5), refdata::d5_rules, refdata::d5_B, refdata::d5_D,
            refdata::d5_G, refdata::d5_Q, refdata::d5_Qinv);
        check.note("84 + 32 exact matrix comparisons");
    });
}

// --- 2. structural identities ----------------------------------------------

inline CriterionResult check_structure() {
    return detail::timed("structural identities (d=3..7)", [](auto& check) {
        for (int dv = 3; dv <= 7; ++dv) {
            Dimension d(dv);
            const IntMat identity = IntMat::identity(d.pair_count());
            IntMat q = change_of_basis(d).mat;
            IntMat qinv = change_of_basis_inverse(d).mat;
            check.require(q * qinv == identity && qinv * q == identity,
                          "basis change is not an exact inverse pair");
            IntMat p = fixed_projector(d).mat;
            check.require(p * p == p, "fixed projector is not idempotent");
            FixedSubspaceBasis basis = fixed_basis(d);
            const int top = dv - 1;
            for (const RuleTriple& w : enumerate_rules(d)) {
                IntMat b = pair_update_matrix(w, d).mat;
                check.require(b * b == b, "update matrix not idempotent: " +
                                              format_rule(w));
                for (const auto& f : basis.vectors)
                    check.require(b.apply(f) == f,
                                  "fixed basis vector moved by " +
                                      format_rule(w));
                BlockDecomposition blocks = block_form(w, d);
                check.require(blocks.block.mat == block_form_closed(w, d),
                              "closed-form block matrix deviates for " +
                                  format_rule(w));
                check.require(
                    blocks.reduced.mat == reduced_matrix_closed(w, d),
                    "closed-form reduced matrix deviates for " +
                        format_rule(w));
                bool block_ok = true;
                for (int r = 0; r < top && block_ok; ++r)
                    for (int c = 0; c < top; ++c)
                        if (blocks.block.mat.at(r, c) != (r == c ? 1 : 0))
                            block_ok = false;
                for (int r = top; r < d.pair_count() && block_ok; ++r)
                    for (int c = 0; c < top; ++c)
                        if (blocks.block.mat.at(r, c) != 0) block_ok = false;
                check.require(block_ok,
                              "block-triangular shape broken for " +
                                  format_rule(w));
            }
        }
        check.note("idempotency, inverses, fixed basis, block shape");
    });
}

// --- 3. max/linear dichotomy ------------------------------------------------

inline CriterionResult check_dichotomy() {
    return detail::timed("max/linear dichotomy (10^4 random states)",
                         [](auto& check) {
        detail::SplitMix64 rng(20240517);
        for (int trial = 0; trial < 10000; ++trial) {
            Dimension d(3 + static_cast<int>(rng.below(4)));  // 3..6
            std::vector<Rat> coords(d.pair_count());
            for (Rat& c : coords) {
                long num = rng.small_int();
                long den = 1 + static_cast<long>(rng.below(9));
                c = Rat(num, den);
                c.canonicalize();
            }
            LogRateVector<Rat> x(d, coords);
            std::vector<RuleTriple> rules = enumerate_rules(d);
            RuleTriple w = rules[rng.below(rules.size())];
            std::vector<Rat> linear =
                pair_update_matrix(w, d).mat.apply(x.coords);
            for (DirectedRule orient :
                 {DirectedRule{w.i, w.j, w.k}, DirectedRule{w.j, w.i, w.k}}) {
                auto result = max_update(x, orient);
                bool is_same = result.state.coords == x.coords;
                bool is_linear = result.state.coords == linear;
                check.require(is_same || is_linear,
                              "max step left the {x, Bx} pair at trial " +
                                  std::to_string(trial));
            }
            Orientation chosen = realize_linear_as_max(x, w);
            auto realized = max_update(x, chosen.rule);
            check.require(realized.state.coords == linear,
                          "selected orientation missed the linear image at "
                          "trial " + std::to_string(trial));
        }
    });
}

// --- 4. the 16-rule replay ---------------------------------------------------

inline CriterionResult check_replay16() {
    return detail::timed("16-rule replay: orbit and period 32",
                         [](auto& check) {
        Dimension d(4);
        auto rules = detail::rules_from(refdata::replay16_rules, 16);
        RuleSequence seq(rules);
        std::vector<Int> x0 = detail::signed_vertex(1);
        Trajectory<Int> orbit = iterate(x0, seq, 96, IterKind::Reduced, d);
        for (int n = 1; n <= 16; ++n)
            check.require(orbit.points[n] ==
                              detail::signed_vertex(refdata::replay16_states[n - 1]),
                          "orbit state " + std::to_string(n) +
                              " differs from the reference list");
        auto period = detect_periodicity(orbit.points, 64);
        check.require(period && period->period == 32 && period->onset == 0,
                      "expected period 32 from the start");
        // Products of the full-basis matrices repeat with the same period.
        IntMat h = IntMat::identity(d.pair_count());
        std::vector<IntMat> stream{h};
        for (int n = 1; n <= 129; ++n) {
            h = pair_update_matrix(seq.rule_at(n - 1), d).mat * h;
            stream.push_back(h);
        }
        for (int n = 32; n <= 96; ++n)
            check.require(stream[n] == stream[n + 32],
                          "product stream not 32-periodic at n=" +
                              std::to_string(n));
        check.note(std::string("onset at step 0; initial product repeats: ") +
                   (stream[0] == stream[32] ? "yes" : "no"));
    });
}

// --- 5. the 12-rule replay ---------------------------------------------------

inline CriterionResult check_replay12() {
    return detail::timed("12-rule replay: period 12 and linear growth",
                         [](auto& check) {
        Dimension d(4);
        auto rules = detail::rules_from(refdata::replay12_rules, 12);
        RuleSequence seq(rules);
        std::vector<Int> x0 = detail::signed_vertex(1);
        Trajectory<Int> orbit = iterate(x0, seq, 48, IterKind::Reduced, d);
        for (int n = 1; n <= 12; ++n)
            check.require(orbit.points[n] ==
                              detail::signed_vertex(refdata::replay12_states[n - 1]),
                          "orbit state " + std::to_string(n) +
                              " differs from the reference list");
        auto period = detect_periodicity(orbit.points, 24);
        check.require(period && period->period == 12 && period->onset == 0,
                      "expected period 12 from the start");
        IntMat h = IntMat::identity(d.pair_count());
        std::vector<Int> norms{h.sup_norm()};
        for (int n = 1; n <= 12 * 51; ++n) {
            h = pair_update_matrix(seq.rule_at(n - 1), d).mat * h;
            if (n % 12 == 0) norms.push_back(h.sup_norm());
        }
        Int step = norms[6] - norms[5];
        bool constant = true;
        for (int k = 5; k <= 50; ++k)
            if (norms[k + 1] - norms[k] != step) constant = false;
        check.require(constant && step > 0,
                      "sup-norm increments of the 12-step products are not "
                      "eventually constant");
        check.note("increment per 12 steps: " + to_decimal(step));
    });
}

// --- 6. the unstable 7-rule cycle -------------------------------------------

inline CriterionResult check_unstable_cycle() {
    return detail::timed("unstable 7-rule cycle: products and spectrum",
                         [](auto& check) {
        Dimension d(5);
        const double phi = (1.0 + std::sqrt(5.0)) / 2.0;
        auto cycle = detail::rules_from(refdata::unstable7_rules, 7);
        IntMat full = product_of(RuleSequence(cycle), IterKind::PairBasis, d);
        check.require(full == detail::from_array(refdata::unstable7_product_full),
                      "full-basis product differs from the reference matrix");
        IntMat reduced = product_of(RuleSequence(cycle), IterKind::Reduced, d);
        check.require(
            reduced == detail::from_array(refdata::unstable7_product_reduced),
            "reduced product differs from the reference matrix");

        Eigenvalues spec_full = eigenvalues(full);
        check.require(std::fabs(std::abs(spec_full.values[0]) - phi) < 1e-9,
                      "spectral radius of the full product is off");
        std::vector<double> expect_full{-phi, 1, 1, 1, 1, 1, phi - 1, 0, 0, 0};
        check.require(spec_full.values.size() == expect_full.size(),
                      "eigenvalue count mismatch");
        for (size_t t = 0; t < expect_full.size(); ++t)
            check.require(std::abs(spec_full.values[t] -
                                   std::complex<double>(expect_full[t])) <
                              1e-9,
                          "full spectrum mismatch at position " +
                              std::to_string(t));
        check.require(spec_full.max_residual < 1e-9,
                      "spectrum residual above tolerance");

        Eigenvalues spec_red = eigenvalues(reduced);
        std::vector<double> expect_red{-phi, 1, phi - 1, 0, 0, 0};
        check.require(spec_red.values.size() == expect_red.size(),
                      "reduced eigenvalue count mismatch");
        for (size_t t = 0; t < expect_red.size(); ++t)
            check.require(std::abs(spec_red.values[t] -
                                   std::complex<double>(expect_red[t])) < 1e-9,
                          "reduced spectrum mismatch at position " +
                              std::to_string(t));
        std::ostringstream os;
        os.precision(12);
        os << "rho = " << std::abs(spec_full.values[0]);
        check.note(os.str());
    });
}

// --- 7. the exponential growth bracket --------------------------------------

inline CriterionResult check_growth_bracket() {
    return detail::timed("exponential bracket and double-exponential fit",
                         [](auto& check) {
        Dimension d(5);
        const double phi = (1.0 + std::sqrt(5.0)) / 2.0;
        auto cycle = detail::rules_from(refdata::unstable7_rules, 7);
        RuleSequence seq(cycle);
        IntMat h = product_of(seq, IterKind::PairBasis, d);
        const int n = d.pair_count();

        // Left kernel of (H + phi I): detects starts with no component along
        // the dominant direction.
        std::vector<std::vector<double>> shifted(n, std::vector<double>(n));
        for (int r = 0; r < n; ++r)
            for (int c = 0; c < n; ++c) {
                shifted[r][c] = h.at(c, r).get_d();  // transpose
                if (r == c) shifted[r][c] += phi;
            }
        std::vector<double> left = detail::kernel_vector(shifted);
        double left_norm = 0;
        for (double v : left) left_norm += v * v;
        left_norm = std::sqrt(left_norm);
        check.require(left_norm > 0, "no dominant left direction found");

        detail::SplitMix64 rng(424243);
        std::vector<Int> x0(n);
        int rejected = 0;
        for (;;) {
            double along = 0, scale = 0;
            for (int t = 0; t < n; ++t) {
                x0[t] = rng.small_int();
                double xt = x0[t].get_d();
                along += left[t] * xt;
                scale += xt * xt;
            }
            if (scale > 0 &&
                std::fabs(along) / (left_norm * std::sqrt(scale)) > 1e-6)
                break;
            ++rejected;  // too close to the non-dominant invariant subspace
        }

        const int cycles = 80;
        Trajectory<Int> run =
            iterate(x0, seq, 7 * cycles, IterKind::PairBasis, d);
        RateFit fit = growth_rate_fit(run.norms, 7, 60);
        check.require(fit.per_step_in_bracket,
                      "per-step ratio " + std::to_string(fit.per_step) +
                          " outside [1.071, 1.072]");
        for (int k = 60; k < cycles; ++k) {
            double ratio = run.norms[7 * (k + 1)].get_d() /
                           run.norms[7 * k].get_d();
            check.require(std::fabs(ratio - phi) < 1e-6,
                          "per-cycle ratio has not converged by cycle " +
                              std::to_string(k));
        }

        // Log-space double-exponential model: the sup norm of the log-rate
        // state (the log of the worst rate magnitude) follows c * phi^k.
        double num = 0, den = 0, base = run.norms[0].get_d();
        std::vector<std::pair<double, double>> samples;
        for (int k = 40; k <= cycles; ++k) {
            double y = run.norms[7 * k].get_d() - base;
            double model = std::pow(phi, k);
            samples.push_back({y, model});
            num += y * model;
            den += model * model;
        }
        double c = num / den;
        double worst = 0;
        for (auto [y, model] : samples)
            worst = std::max(worst, std::fabs(y - c * model) / std::fabs(y));
        check.require(worst < 1e-3,
                      "double-exponential fit error " + std::to_string(worst));
        std::ostringstream os;
        os.precision(10);
        os << "per-step " << fit.per_step << ", fit rel err " << worst
           << ", rejected starts " << rejected;
        check.note(os.str());
    });
}

// --- 8. the d=4 certificate --------------------------------------------------

inline CriterionResult check_certificate() {
    return detail::timed("d=4 invariant polytope certificate", [](auto& check) {
        Dimension d(4);
        InvariantPolytope body = certificate_polytope();
        std::vector<IntMat> mats;
        for (const RuleTriple& w : enumerate_rules(d))
            mats.push_back(reduced_matrix(w, d).mat);
        InvarianceReport report = check_invariance(body, mats);
        check.require(report.pass, "some vertex image escapes the body");
        check.require(report.witness == 1,
                      "operator-norm witness is not exactly 1");
        for (size_t vi = 0; vi < body.vertices.size(); ++vi) {
            bool killed = false;
            for (size_t mi = 0; mi < mats.size(); ++mi) {
                bool zero = true;
                for (const Int& c : report.images[mi][vi])
                    if (c != 0) zero = false;
                if (zero) killed = true;
            }
            check.require(killed, "vertex " + std::to_string(vi + 1) +
                                      " is annihilated by no matrix");
        }
        check.note(std::to_string(body.facets.size()) +
                   " facets, witness exactly 1");
    });
}

// --- 9. d=4 exhaustive sweep --------------------------------------------------

inline CriterionResult check_exhaustive_sweep() {
    return detail::timed("d=4 exhaustive stability sweep (length <= 6)",
                         [](auto& check) {
        SearchConfig config;
        config.d = Dimension(4);
        config.kind = IterKind::Reduced;
        config.max_length = 6;
        config.mode = SearchConfig::Mode::Exhaustive;
        auto hits = enumerate_unstable(config);
        check.require(hits.empty(),
                      "found " + std::to_string(hits.size()) +
                          " expanding cycles; expected none");
    });
}

// --- 10. metrics closure -------------------------------------------------------

inline CriterionResult check_metrics_closure() {
    return detail::timed("leading-index metrics closure", [](auto& check) {
        detail::SplitMix64 rng(77001);
        // (a) the accumulative measure vanishes exactly on projected states
        for (int trial = 0; trial < 100; ++trial) {
            Dimension d(3 + static_cast<int>(rng.below(4)));
            std::vector<Rat> coords(d.pair_count());
            for (Rat& c : coords) {
                c = Rat(rng.small_int(), 1 + long(rng.below(9)));
                c.canonicalize();
            }
            std::vector<Rat> fixed = fixed_projector(d).mat.apply(coords);
            LogRateVector<Rat> xf(d, fixed);
            check.require(log_accumulative_nac(xf) == 0,
                          "projected state has a nonzero exact measure");
            check.require(accumulative_nac(exp_rates(xf)) <= 1e-10,
                          "projected state has rate-space measure above 1e-10");
        }
        // (b) leading indices of a full-basis trajectory replay the reduced
        // trajectory exactly
        for (int dv : {4, 5}) {
            Dimension d(dv);
            std::vector<RuleTriple> rules = enumerate_rules(d);
            for (int run = 0; run < 100; ++run) {
                std::vector<Int> x0(d.pair_count());
                for (Int& v : x0) v = rng.small_int();
                std::vector<RuleTriple> steps(50);
                for (auto& w : steps) w = rules[rng.below(rules.size())];
                RuleSequence seq(steps);
                Trajectory<Int> full =
                    iterate(x0, seq, 50, IterKind::PairBasis, d);
                LogRateVector<Int> start(d, x0);
                Trajectory<Int> reduced =
                    iterate(leading_indices(start).values, seq, 50,
                            IterKind::Reduced, d);
                for (int n = 0; n <= 50; ++n) {
                    LogRateVector<Int> state(d, full.points[n]);
                    check.require(leading_indices(state).values ==
                                      reduced.points[n],
                                  "closure broke at step " +
                                      std::to_string(n));
                }
            }
        }
    });
}

inline std::vector<CriterionResult> run_all() {
    return {
        check_reference_tables(), check_structure(),     check_dichotomy(),
        check_replay16(),         check_replay12(),      check_unstable_cycle(),
        check_growth_bracket(),   check_certificate(),   check_exhaustive_sweep(),
        check_metrics_closure(),
    };
}

inline bool report(const std::vector<CriterionResult>& results,
                   std::ostream& os) {
    bool all = true;
    for (const auto& r : results) {
        os << (r.pass ? "PASS" : "FAIL") << "  " << r.name;
        if (!r.detail.empty()) os << " — " << r.detail;
        std::ostringstream t;
        t.precision(2);
        t << std::fixed << r.seconds;
        os << " (" << t.str() << "s)\n";
        all = all && r.pass;
    }
    return all;
}

}  // namespace triarb::verify
