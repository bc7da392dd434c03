#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "triarb/detail/rng.hpp"
#include "triarb/matrices.hpp"
#include "triarb/rules.hpp"

using namespace triarb;

namespace {

LogRateVector<Rat> rational_state(Dimension d, triarb::detail::SplitMix64& rng) {
    std::vector<Rat> coords(d.pair_count());
    for (Rat& c : coords) {
        c = Rat(rng.small_int(), 1 + long(rng.below(9)));
        c.canonicalize();
    }
    return LogRateVector<Rat>(d, coords);
}

}  // namespace

TEST_CASE("rule enumeration is lexicographic and complete") {
    auto d3 = enumerate_rules(Dimension(3));
    REQUIRE(d3.size() == 3);
    CHECK(d3[0] == RuleTriple{1, 2, 3});
    CHECK(d3[1] == RuleTriple{1, 3, 2});
    CHECK(d3[2] == RuleTriple{2, 3, 1});

    auto d4 = enumerate_rules(Dimension(4));
    REQUIRE(d4.size() == 12);
    CHECK(std::is_sorted(d4.begin(), d4.end()));

    auto d5 = enumerate_rules(Dimension(5));
    REQUIRE(d5.size() == 30);
    CHECK(std::is_sorted(d5.begin(), d5.end()));
}

TEST_CASE("rule validation") {
    Dimension d(4);
    CHECK_THROWS_AS(validate_rule(RuleTriple{2, 1, 3}, d), validation_error);
    CHECK_THROWS_AS(validate_rule(RuleTriple{1, 2, 2}, d), validation_error);
    CHECK_THROWS_AS(validate_rule(RuleTriple{1, 5, 2}, d), validation_error);
    CHECK_THROWS_AS(validate_rule(DirectedRule{1, 1, 2}, d), validation_error);
    CHECK(canonical(DirectedRule{3, 1, 2}) == RuleTriple{1, 3, 2});
}

TEST_CASE("max update moves one coordinate by the triangle sum") {
    Dimension d(4);
    LogRateVector<Rat> x(d, {Rat(0), Rat(2), Rat(0), Rat(1), Rat(0), Rat(0)});

    SECTION("rising rate is replaced") {
        auto r = max_update(x, DirectedRule{1, 2, 3});
        CHECK(r.changed);
        CHECK(r.state.coords ==
              std::vector<Rat>{Rat(1), Rat(2), Rat(0), Rat(1), Rat(0), Rat(0)});
    }
    SECTION("larger old value is kept") {
        LogRateVector<Rat> y(d,
                             {Rat(5), Rat(2), Rat(0), Rat(1), Rat(0), Rat(0)});
        auto r = max_update(y, DirectedRule{1, 2, 3});
        CHECK_FALSE(r.changed);
        CHECK(r.state.coords == y.coords);
    }
    SECTION("reversed orientation takes the min form") {
        auto r = max_update(x, DirectedRule{2, 1, 3});
        CHECK_FALSE(r.changed);
        CHECK(r.state.coords == x.coords);
    }
    SECTION("invalid rule is rejected") {
        CHECK_THROWS_AS(max_update(x, DirectedRule{1, 2, 1}),
                        validation_error);
    }
}

TEST_CASE("multiplicative update matches the log-space path") {
    Dimension d(4);
    std::vector<double> upper(6, 1.0);
    upper[index_of(1, 3, d)] = std::exp(2.0);
    upper[index_of(2, 3, d)] = std::exp(1.0);  // r_32 = 1/e
    RateMatrix r = RateMatrix::from_upper(d, upper);
    auto updated = multiplicative_update(r, DirectedRule{1, 2, 3});
    CHECK(updated.changed);
    CHECK(updated.rates.at(1, 2) ==
          Catch::Approx(std::exp(1.0)).epsilon(1e-12));

    RateMatrix ones = RateMatrix::from_upper(d, std::vector<double>(6, 1.0));
    for (const RuleTriple& w : enumerate_rules(d)) {
        auto u = multiplicative_update(ones, directed(w));
        CHECK_FALSE(u.changed);
    }

    triarb::detail::SplitMix64 rng(2024);
    for (int trial = 0; trial < 1000; ++trial) {
        std::vector<double> up(6);
        for (double& v : up) v = 0.2 + 4.0 * (rng.below(10000) / 10000.0);
        RateMatrix rr = RateMatrix::from_upper(d, up);
        auto rules = enumerate_rules(d);
        DirectedRule w = directed(rules[rng.below(rules.size())]);
        if (rng.below(2)) std::swap(w.src, w.dst);
        RateMatrix direct = multiplicative_update(rr, w).rates;
        RateMatrix via_log = exp_rates(max_update(log_rates(rr), w).state);
        for (int i = 1; i <= 4; ++i)
            for (int j = 1; j <= 4; ++j)
                if (i != j)
                    CHECK(direct.at(i, j) ==
                          Catch::Approx(via_log.at(i, j)).epsilon(1e-10));
    }
}

TEST_CASE("orientation selection realizes the linear law") {
    Dimension d(4);
    LogRateVector<Rat> x(d, {Rat(0), Rat(2), Rat(0), Rat(1), Rat(0), Rat(0)});
    RuleTriple w{1, 2, 3};

    auto up = realize_linear_as_max(x, w);  // a13 + a32 = 1 > a12 = 0
    CHECK_FALSE(up.inessential);
    CHECK(up.rule == DirectedRule{1, 2, 3});

    LogRateVector<Rat> y(d, {Rat(5), Rat(2), Rat(0), Rat(1), Rat(0), Rat(0)});
    auto down = realize_linear_as_max(y, w);
    CHECK_FALSE(down.inessential);
    CHECK(down.rule == DirectedRule{2, 1, 3});

    LogRateVector<Rat> tie(d, {Rat(1), Rat(2), Rat(0), Rat(1), Rat(0), Rat(0)});
    CHECK(realize_linear_as_max(tie, w).inessential);
}

TEST_CASE("max update is monotone and local") {
    triarb::detail::SplitMix64 rng(5150);
    for (int trial = 0; trial < 500; ++trial) {
        Dimension d(3 + int(rng.below(4)));
        LogRateVector<Rat> x = rational_state(d, rng);
        auto rules = enumerate_rules(d);
        RuleTriple w = rules[rng.below(rules.size())];
        auto r = max_update(x, directed(w));
        int at = index_of(w.i, w.j, d);
        CHECK(r.state.coords[at] >= x.coords[at]);
        for (int idx = 0; idx < d.pair_count(); ++idx)
            if (idx != at) CHECK(r.state.coords[idx] == x.coords[idx]);
    }
}

TEST_CASE("max/linear dichotomy on random rational states") {
    triarb::detail::SplitMix64 rng(31337);
    for (int trial = 0; trial < 2000; ++trial) {
        Dimension d(3 + int(rng.below(4)));
        LogRateVector<Rat> x = rational_state(d, rng);
        auto rules = enumerate_rules(d);
        RuleTriple w = rules[rng.below(rules.size())];
        std::vector<Rat> linear = pair_update_matrix(w, d).mat.apply(x.coords);
        for (DirectedRule orient :
             {DirectedRule{w.i, w.j, w.k}, DirectedRule{w.j, w.i, w.k}}) {
            auto r = max_update(x, orient);
            bool same = r.state.coords == x.coords;
            bool lin = r.state.coords == linear;
            CHECK((same || lin));
        }
        CHECK(max_update(x, realize_linear_as_max(x, w).rule).state.coords ==
              linear);
    }
}

TEST_CASE("fixed subspace states never move") {
    triarb::detail::SplitMix64 rng(8);
    for (int dv : {4, 5}) {
        Dimension d(dv);
        FixedSubspaceBasis basis = fixed_basis(d);
        for (int trial = 0; trial < 20; ++trial) {
            std::vector<Rat> coords(d.pair_count(), Rat(0));
            for (const auto& f : basis.vectors) {
                Rat weight(rng.small_int(), 1 + long(rng.below(5)));
                weight.canonicalize();
                for (int t = 0; t < d.pair_count(); ++t)
                    coords[t] += weight * Rat(f[t]);
            }
            LogRateVector<Rat> x(d, coords);
            for (const RuleTriple& w : enumerate_rules(d)) {
                CHECK_FALSE(max_update(x, directed(w)).changed);
                CHECK_FALSE(
                    max_update(x, DirectedRule{w.j, w.i, w.k}).changed);
            }
        }
    }
}
