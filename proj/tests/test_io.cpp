#include <catch2/catch_amalgamated.hpp>

#include <sstream>

#include "triarb/detail/reference_data.hpp"
#include "triarb/io.hpp"

using namespace triarb;

TEST_CASE("matrix json shape and values") {
    Dimension d(4);
    json g = matrix_json(block_form({1, 2, 3}, d).reduced);
    CHECK(g["d"] == 4);
    CHECK(g["kind"] == "G");
    CHECK(g["rule"] == json({1, 2, 3}));
    CHECK(g["rows"] == json({{0, 0, 0}, {-1, 1, 0}, {0, 0, 1}}));

    json q = matrix_json(change_of_basis(d));
    CHECK(q["kind"] == "Q");
    CHECK(q["rule"].is_null());
}

TEST_CASE("config parsing, normalization, and errors") {
    json j{{"d", 4},
           {"mode", "linear-G"},
           {"initial", {{"kind", "explicit"}, {"coords", {1, 1, 0}}}},
           {"sequence",
            {{"rules", {{1, 4, 2}, {1, 2, 3}}}, {"repeats", 2}}},
           {"output", json::object()}};
    RunConfig config = parse_config(j);
    CHECK(config.d.value() == 4);
    CHECK(config.mode == IterKind::Reduced);
    CHECK(config.sequence.base.size() == 2);
    CHECK(config.sequence.expansion_length() == 4);
    CHECK(initial_vector(config) == std::vector<Rat>{1, 1, 0});

    // normalized form round-trips exactly
    json normalized = config_json(config);
    CHECK(config_json(parse_config(normalized)) == normalized);

    auto expect_error = [](json bad, const std::string& needle) {
        try {
            parse_config(bad);
            FAIL("expected a config error");
        } catch (const config_error& e) {
            CHECK(std::string(e.what()).find(needle) != std::string::npos);
        }
    };
    json missing = j;
    missing.erase("sequence");
    expect_error(missing, "sequence");
    json bad_mode = j;
    bad_mode["mode"] = "sideways";
    expect_error(bad_mode, "mode");
    json bad_len = j;
    bad_len["initial"]["coords"] = {1, 1};
    expect_error(bad_len, "initial.coords");
    json bad_rule = j;
    bad_rule["sequence"]["rules"] = {{1, 1, 2}};
    CHECK_THROWS_AS(parse_config(bad_rule), validation_error);
    json bad_repeats = j;
    bad_repeats["sequence"]["repeats"] = 0;
    expect_error(bad_repeats, "repeats");
}

TEST_CASE("rational literals") {
    CHECK(parse_rational("3/4") == Rat(3, 4));
    CHECK(parse_rational("-7") == Rat(-7));
    CHECK(to_decimal(Rat(3, 4)) == "3/4");
    CHECK(to_decimal(Rat(-8, 2)) == "-4");
    CHECK_THROWS_AS(parse_rational("x"), validation_error);
}

TEST_CASE("seeded initial vectors reproduce") {
    json j{{"d", 5},
           {"mode", "linear-B"},
           {"initial", {{"kind", "random"}, {"seed", 42}}},
           {"sequence", {{"rules", {{1, 2, 3}}}, {"repeats", 1}}}};
    RunConfig config = parse_config(j);
    auto a = initial_vector(config);
    auto b = initial_vector(config);
    CHECK(a == b);
    CHECK(a.size() == 10);
    for (const Rat& v : a) {
        CHECK(v >= -9);
        CHECK(v <= 9);
        CHECK(v.get_den() == 1);
    }

    json basis{{"d", 4},
               {"mode", "linear-G"},
               {"initial", {{"kind", "basis"}, {"pair", {2, 4}}}},
               {"sequence", {{"rules", {{1, 2, 3}}}, {"repeats", 1}}}};
    auto x = initial_vector(parse_config(basis));
    CHECK(x == std::vector<Rat>{0, 1, 0});
}

TEST_CASE("trajectory csv layout") {
    Dimension d(4);
    std::vector<RuleTriple> rules;
    for (const auto& row : refdata::replay16_rules)
        rules.push_back({row[0], row[1], row[2]});
    RuleSequence seq(rules, 2);
    std::vector<Rat> s1{1, 1, 0};
    Trajectory<Rat> t = iterate(s1, seq, 32, IterKind::Reduced, d);
    std::ostringstream os;
    write_trajectory(t, os);
    std::istringstream in(os.str());
    std::string line;
    std::vector<std::string> lines;
    while (std::getline(in, line)) lines.push_back(line);
    REQUIRE(lines.size() == 34);  // header + steps 0..32
    CHECK(lines[0] == "step,rule,x_2_3,x_2_4,x_3_4,sup_norm");
    CHECK(lines[1] == "0,,1,1,0,1");
    CHECK(lines[2] == "1,\"1,4,2\",1,0,-1,1");

    // empty sequence, zero steps: header plus the start row
    Trajectory<Rat> still = iterate(s1, RuleSequence(), 0, IterKind::Reduced, d);
    std::ostringstream os2;
    write_trajectory(still, os2);
    std::istringstream in2(os2.str());
    int count = 0;
    while (std::getline(in2, line)) ++count;
    CHECK(count == 2);
    CHECK_THROWS_AS(iterate(s1, RuleSequence(), 1, IterKind::Reduced, d),
                    validation_error);

    // rationals render as p/q
    std::vector<Rat> frac{Rat(1, 2), Rat(0), Rat(0)};
    Trajectory<Rat> tf = iterate(frac, seq, 1, IterKind::Reduced, d);
    std::ostringstream os3;
    write_trajectory(tf, os3);
    CHECK(os3.str().find("1/2") != std::string::npos);
}

TEST_CASE("cycle analysis json carries exact strings") {
    std::vector<RuleTriple> cycle;
    for (const auto& row : refdata::unstable7_rules)
        cycle.push_back({row[0], row[1], row[2]});
    CycleAnalysis a = verify_cycle(cycle, Dimension(5), IterKind::PairBasis);
    json j = cycle_analysis_json(a);
    CHECK(j["kind"] == "B");
    CHECK(j["length"] == 7);
    CHECK(j["char_poly"].size() == 11);
    for (const auto& c : j["char_poly"]) CHECK(c.is_string());
    CHECK(j["char_poly"].back() == "1");
    CHECK(j["eigenvalues"].size() == 10);
    CHECK(j["growth"]["log_space"] == "exponential");
    CHECK(j["growth"]["rate_space"] == "double-exponential");
}

TEST_CASE("polytope json") {
    json j = polytope_json(certificate_polytope());
    CHECK(j["vertices"].size() == 12);
    CHECK(j["facets"].size() == 14);
    for (const auto& f : j["facets"]) {
        CHECK(f["normal"].size() == 3);
        CHECK(f["offset"].is_string());
    }
}

TEST_CASE("search config parsing") {
    json j{{"d", 4},       {"kind", "G"},  {"max_length", 5},
           {"mode", "exhaustive"}, {"seed", 3}, {"threads", 2}};
    SearchConfig c = parse_search_config(j);
    CHECK(c.d.value() == 4);
    CHECK(c.kind == IterKind::Reduced);
    CHECK(c.max_length == 5);
    CHECK(c.mode == SearchConfig::Mode::Exhaustive);
    CHECK(c.threads == 2);
    CHECK(c.rho_threshold == 1.0 + 1e-9);

    json bad = j;
    bad["kind"] = "Z";
    CHECK_THROWS_AS(parse_search_config(bad), config_error);
}
