#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "triarb/detail/reference_data.hpp"
#include "triarb/detail/rng.hpp"
#include "triarb/dynamics.hpp"

using namespace triarb;

namespace {

std::vector<RuleTriple> rules_from(const int (*rows)[3], int count) {
    std::vector<RuleTriple> out;
    for (int t = 0; t < count; ++t)
        out.push_back({rows[t][0], rows[t][1], rows[t][2]});
    return out;
}

const std::vector<RuleTriple> kUnstable7 =
    rules_from(refdata::unstable7_rules, 7);

}  // namespace

TEST_CASE("products compose right to left") {
    Dimension d(4);
    RuleSequence single({{1, 2, 3}});
    CHECK(product_of(single, IterKind::PairBasis, d) ==
          pair_update_matrix({1, 2, 3}, d).mat);

    RuleSequence empty({{1, 2, 3}}, 0);
    CHECK(product_of(empty, IterKind::PairBasis, d) ==
          IntMat::identity(d.pair_count()));

    RuleSequence two({{1, 2, 3}, {2, 3, 4}});
    CHECK(product_of(two, IterKind::PairBasis, d) ==
          pair_update_matrix({2, 3, 4}, d).mat *
              pair_update_matrix({1, 2, 3}, d).mat);

    CHECK_THROWS_AS(product_of(two, IterKind::MaxRule, d), validation_error);
}

TEST_CASE("the published 7-rule product in both bases") {
    Dimension d(5);
    IntMat full = product_of(RuleSequence(kUnstable7), IterKind::PairBasis, d);
    for (int r = 0; r < 10; ++r)
        for (int c = 0; c < 10; ++c)
            CHECK(full.at(r, c) == refdata::unstable7_product_full[r][c]);
    IntMat reduced = product_of(RuleSequence(kUnstable7), IterKind::Reduced, d);
    for (int r = 0; r < 6; ++r)
        for (int c = 0; c < 6; ++c)
            CHECK(reduced.at(r, c) == refdata::unstable7_product_reduced[r][c]);
}

TEST_CASE("iteration validates shapes and stays exact") {
    Dimension d(4);
    RuleSequence seq({{1, 2, 3}});
    std::vector<Int> wrong(5, Int(0));
    CHECK_THROWS_AS(iterate(wrong, seq, 3, IterKind::PairBasis, d),
                    validation_error);

    // fixed-subspace start is constant under every kind of step
    std::vector<Int> fixed = fixed_basis(d).vectors[0];
    RuleSequence rules(enumerate_rules(d));
    Trajectory<Int> t = iterate(fixed, rules, 24, IterKind::PairBasis, d);
    for (const auto& p : t.points) CHECK(p == fixed);
    Trajectory<Int> tm = iterate(fixed, rules, 24, IterKind::MaxRule, d);
    for (const auto& p : tm.points) CHECK(p == fixed);
}

TEST_CASE("max mode agrees with the one-sided linear mode when rates rise") {
    // on a basis start, the first application either keeps or applies the
    // linear law; compare against the dichotomy directly
    Dimension d(4);
    triarb::detail::SplitMix64 rng(99);
    auto rules = enumerate_rules(d);
    for (int trial = 0; trial < 200; ++trial) {
        std::vector<Int> x0(d.pair_count());
        for (Int& v : x0) v = rng.small_int();
        RuleTriple w = rules[rng.below(rules.size())];
        RuleSequence seq({w});
        Trajectory<Int> mx = iterate(x0, seq, 1, IterKind::MaxRule, d);
        Trajectory<Int> lin = iterate(x0, seq, 1, IterKind::PairBasis, d);
        bool kept = mx.points[1] == mx.points[0];
        bool linear = mx.points[1] == lin.points[1];
        CHECK((kept || linear));
    }
}

TEST_CASE("periodicity detection on sampled data") {
    using V = std::vector<Int>;
    std::vector<V> constant(10, V{Int(3)});
    auto rep = detect_periodicity(constant, 5);
    REQUIRE(rep);
    CHECK(rep->period == 1);
    CHECK(rep->onset == 0);

    std::vector<V> pre{V{Int(9)}, V{Int(1)}, V{Int(2)}, V{Int(1)}, V{Int(2)},
                       V{Int(1)}, V{Int(2)}, V{Int(1)}, V{Int(2)}};
    rep = detect_periodicity(pre, 4);
    REQUIRE(rep);
    CHECK(rep->period == 2);
    CHECK(rep->onset == 1);

    std::vector<V> aperiodic;
    for (int t = 0; t < 12; ++t) aperiodic.push_back(V{Int(t)});
    CHECK_FALSE(detect_periodicity(aperiodic, 6));
}

TEST_CASE("power stream periodicity") {
    Dimension d(4);
    // any single update matrix is idempotent: repeat at the second power
    IntMat b = pair_update_matrix({1, 2, 3}, d).mat;
    auto rep = matrix_power_periodicity(b, 16);
    REQUIRE(rep);
    CHECK(rep->period == 1);
    CHECK(rep->onset == 1);

    // a 3-cycle permutation has period 3
    IntMat perm(3, 3);
    perm.at(0, 1) = 1;
    perm.at(1, 2) = 1;
    perm.at(2, 0) = 1;
    rep = matrix_power_periodicity(perm, 16);
    REQUIRE(rep);
    CHECK(rep->period == 3);

    // the expanding product never repeats
    Dimension d5(5);
    IntMat h = product_of(RuleSequence(kUnstable7), IterKind::PairBasis, d5);
    CHECK_FALSE(matrix_power_periodicity(h, 64));
}

TEST_CASE("growth classification of the three reference regimes") {
    const double phi = (1.0 + std::sqrt(5.0)) / 2.0;

    GrowthClass expanding =
        classify_growth(kUnstable7, Dimension(5), IterKind::PairBasis);
    CHECK(expanding.log_space == GrowthClass::LogSpace::Exponential);
    CHECK(expanding.rate_space == GrowthClass::RateSpace::DoubleExponential);
    CHECK(expanding.rate == Catch::Approx(phi).epsilon(1e-9));

    auto rules12 = rules_from(refdata::replay12_rules, 12);
    GrowthClass linear =
        classify_growth(rules12, Dimension(4), IterKind::PairBasis, 512);
    CHECK(linear.log_space == GrowthClass::LogSpace::Polynomial);
    CHECK(linear.rate_space == GrowthClass::RateSpace::Exponential);
    CHECK(linear.degree == 1);
    CHECK(linear.fit_r2 > 0.99);

    auto rules16 = rules_from(refdata::replay16_rules, 16);
    std::vector<RuleTriple> expanded;
    for (int rep = 0; rep < 2; ++rep)
        for (const auto& w : rules16) expanded.push_back(w);
    GrowthClass periodic =
        classify_growth(expanded, Dimension(4), IterKind::PairBasis, 512);
    CHECK(periodic.log_space == GrowthClass::LogSpace::Periodic);
    CHECK(periodic.rate_space == GrowthClass::RateSpace::Bounded);
}

TEST_CASE("instability is inherited by larger markets") {
    // the same 7-rule cycle read inside a bigger market keeps its spectrum
    const double phi = (1.0 + std::sqrt(5.0)) / 2.0;
    for (int dv : {6, 8, 12}) {
        CycleAnalysis a =
            analyze_cycle(kUnstable7, Dimension(dv), IterKind::PairBasis, 64);
        CHECK(a.spectral_radius == Catch::Approx(phi).epsilon(1e-9));
        CHECK(a.max_residual < 1e-9);
        CHECK(a.growth.log_space == GrowthClass::LogSpace::Exponential);
        CHECK(a.growth.rate_space == GrowthClass::RateSpace::DoubleExponential);
    }
}

TEST_CASE("cycle analysis is rotation invariant") {
    Dimension d(5);
    CycleAnalysis base = analyze_cycle(kUnstable7, d, IterKind::PairBasis, 64);
    std::vector<RuleTriple> rotated(kUnstable7.begin() + 3, kUnstable7.end());
    rotated.insert(rotated.end(), kUnstable7.begin(), kUnstable7.begin() + 3);
    CycleAnalysis rot = analyze_cycle(rotated, d, IterKind::PairBasis, 64);
    CHECK(base.char_poly == rot.char_poly);
    CHECK(base.product.trace() == rot.product.trace());
    CHECK(std::fabs(base.spectral_radius - rot.spectral_radius) < 1e-9);
}

TEST_CASE("spectral radius dominates the power growth trend") {
    // Gelfand: ||M^k||^(1/k) approaches rho from above for the norms we use
    Dimension d5(5);
    IntMat h = product_of(RuleSequence(kUnstable7), IterKind::PairBasis, d5);
    double rho = spectral_radius(h);
    IntMat p = h;
    for (int t = 1; t < 64; ++t) p = h * p;
    double gelfand = std::exp(log_value(p.row_sum_norm()) / 64.0);
    CHECK(rho <= gelfand + 1e-3);
    CHECK(gelfand - rho < 0.05);  // converging, not wildly off

    auto rules16 = rules_from(refdata::replay16_rules, 16);
    std::vector<RuleTriple> expanded;
    for (int rep = 0; rep < 2; ++rep)
        for (const auto& w : rules16) expanded.push_back(w);
    IntMat m = product_of(RuleSequence(expanded), IterKind::PairBasis,
                          Dimension(4));
    double rho4 = spectral_radius(m);
    IntMat p4 = m;
    for (int t = 1; t < 64; ++t) p4 = m * p4;
    CHECK(rho4 <= std::exp(log_value(p4.row_sum_norm()) / 64.0) + 1e-3);
}

TEST_CASE("growth rate fit") {
    Dimension d(5);
    RuleSequence seq(kUnstable7);
    triarb::detail::SplitMix64 rng(5);
    std::vector<Int> x0(d.pair_count());
    for (Int& v : x0) v = rng.small_int();
    Trajectory<Int> run = iterate(x0, seq, 7 * 45, IterKind::PairBasis, d);
    RateFit fit = growth_rate_fit(run.norms, 7, 30);
    const double phi = (1.0 + std::sqrt(5.0)) / 2.0;
    CHECK(fit.per_cycle == Catch::Approx(phi).epsilon(1e-6));
    CHECK(fit.per_step_in_bracket);

    // periodic orbit: ratio exactly 1
    auto rules16 = rules_from(refdata::replay16_rules, 16);
    std::vector<Int> s1{1, 1, 0};
    Trajectory<Int> orbit =
        iterate(s1, RuleSequence(rules16), 32 * 12, IterKind::Reduced,
                Dimension(4));
    RateFit flat = growth_rate_fit(orbit.norms, 32, 1);
    CHECK(flat.per_cycle == Catch::Approx(1.0));
    CHECK_FALSE(flat.per_step_in_bracket);

    CHECK_THROWS_AS(growth_rate_fit(run.norms, 7, 44), validation_error);
    std::vector<Int> zeros(200, Int(0));
    CHECK_THROWS_AS(growth_rate_fit(zeros, 7, 2), validation_error);
}
