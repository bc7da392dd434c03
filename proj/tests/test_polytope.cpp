#include <catch2/catch_amalgamated.hpp>

#include "triarb/detail/reference_data.hpp"
#include "triarb/detail/rng.hpp"
#include "triarb/dynamics.hpp"
#include "triarb/polytope.hpp"

using namespace triarb;

namespace {

std::vector<std::vector<Int>> unit_cross(int dim) {
    std::vector<std::vector<Int>> verts;
    for (int sign : {1, -1})
        for (int c = 0; c < dim; ++c) {
            std::vector<Int> v(dim, 0);
            v[c] = sign;
            verts.push_back(std::move(v));
        }
    return verts;
}

}  // namespace

TEST_CASE("certificate vertices are the published twelve") {
    auto verts = certificate_vertices();
    REQUIRE(verts.size() == 12);
    CHECK(verts[0] == std::vector<Int>{1, 1, 0});
    CHECK(verts[1] == std::vector<Int>{1, 0, -1});
    CHECK(verts[7] == std::vector<Int>{-1, 0, 1});  // -s2
    for (int t = 0; t < 6; ++t)
        for (int c = 0; c < 3; ++c) CHECK(verts[t][c] == -verts[t + 6][c]);
}

TEST_CASE("facet enumeration on known bodies") {
    auto octa = hull_facets(unit_cross(3));
    CHECK(octa.size() == 8);
    for (const Facet& f : octa) {
        CHECK(f.offset == 1);
        for (const Int& c : f.normal) CHECK((c == 1 || c == -1));
    }

    std::vector<std::vector<Int>> cube;
    for (int a : {-1, 1})
        for (int b : {-1, 1})
            for (int c : {-1, 1}) cube.push_back({a, b, c});
    auto cube_facets = hull_facets(cube);
    CHECK(cube_facets.size() == 6);

    // degenerate: all vertices in a plane
    std::vector<std::vector<Int>> flat{
        {1, 0, 0}, {-1, 0, 0}, {0, 1, 0}, {0, -1, 0}};
    CHECK_THROWS_AS(hull_facets(flat), geometry_error);
    CHECK_THROWS_AS(hull_facets({{1, 0}, {2, 0}}), geometry_error);
}

TEST_CASE("certificate facets support all vertices tightly") {
    InvariantPolytope body = certificate_polytope();
    CHECK(body.facets.size() == 14);
    for (const auto& v : body.vertices) {
        CHECK(contains(body, v));
        CHECK(dual_norm(body, v) == 1);  // vertices sit on the boundary
    }
    for (const Facet& f : body.facets) {
        int tight = 0;
        for (const auto& v : body.vertices) {
            Int s = 0;
            for (size_t t = 0; t < v.size(); ++t) s += f.normal[t] * v[t];
            CHECK(s <= f.offset);
            if (s == f.offset) ++tight;
        }
        CHECK(tight >= 3);
    }
}

TEST_CASE("gauge values") {
    InvariantPolytope body = certificate_polytope();
    CHECK(dual_norm(body, std::vector<Int>{0, 0, 0}) == 0);
    CHECK(dual_norm(body, std::vector<Int>{1, 1, 0}) == 1);
    CHECK(dual_norm(body, std::vector<Int>{2, 0, 0}) == 2);
    CHECK_FALSE(contains(body, std::vector<Int>{2, 0, 0}));
    // symmetry of the gauge
    triarb::detail::SplitMix64 rng(11);
    for (int trial = 0; trial < 100; ++trial) {
        std::vector<Rat> x(3), neg(3);
        for (int c = 0; c < 3; ++c) {
            x[c] = Rat(rng.small_int(), 1 + long(rng.below(5)));
            x[c].canonicalize();
            neg[c] = -x[c];
        }
        CHECK(dual_norm(body, x) == dual_norm(body, neg));
        CHECK(contains(body, x) == contains(body, neg));
    }
}

TEST_CASE("all twelve reduced matrices preserve the body") {
    Dimension d(4);
    InvariantPolytope body = certificate_polytope();
    std::vector<IntMat> mats;
    for (const RuleTriple& w : enumerate_rules(d))
        mats.push_back(reduced_matrix(w, d).mat);
    InvarianceReport report = check_invariance(body, mats);
    CHECK(report.pass);
    CHECK(report.witness == 1);
    CHECK(report.violations.empty());

    // the rule (1,4,2) maps vertex 1 to vertex 2
    auto rules = enumerate_rules(d);
    size_t at142 =
        std::find(rules.begin(), rules.end(), RuleTriple{1, 4, 2}) -
        rules.begin();
    CHECK(report.images[at142][0] == body.vertices[1]);

    // every vertex is annihilated by at least one matrix
    for (size_t vi = 0; vi < body.vertices.size(); ++vi) {
        bool killed = false;
        for (size_t mi = 0; mi < mats.size(); ++mi) {
            bool zero = true;
            for (const Int& c : report.images[mi][vi])
                if (c != 0) zero = false;
            killed = killed || zero;
        }
        CHECK(killed);
    }
}

TEST_CASE("doubling the body fails the certificate") {
    InvariantPolytope body = certificate_polytope();
    IntMat twice = IntMat::identity(3);
    for (int t = 0; t < 3; ++t) twice.at(t, t) = 2;
    InvarianceReport report = check_invariance(body, {twice});
    CHECK_FALSE(report.pass);
    CHECK(report.witness == 2);
    CHECK(report.violations.size() > 0);
}

TEST_CASE("d=4 reduced orbits started in the body stay in it") {
    Dimension d(4);
    InvariantPolytope body = certificate_polytope();
    auto rules = enumerate_rules(d);
    triarb::detail::SplitMix64 rng(3333);
    for (size_t vi = 0; vi < body.vertices.size(); ++vi) {
        std::vector<RuleTriple> steps(60);
        for (auto& w : steps) w = rules[rng.below(rules.size())];
        Trajectory<Int> orbit = iterate(body.vertices[vi], RuleSequence(steps),
                                        60, IterKind::Reduced, d);
        for (const auto& y : orbit.points) CHECK(contains(body, y));
    }
}

TEST_CASE("the d=5 falsification hook rejects a candidate body") {
    // candidate: the unit cross-polytope in the d=5 reduced space; the
    // expanding 7-rule product must push some vertex outside any bounded
    // symmetric body
    Dimension d(5);
    std::vector<RuleTriple> cycle;
    for (const auto& row : refdata::unstable7_rules)
        cycle.push_back({row[0], row[1], row[2]});
    IntMat product = product_of(RuleSequence(cycle), IterKind::Reduced, d);
    InvariantPolytope candidate = make_polytope(unit_cross(6));
    InvarianceReport report = check_invariance(candidate, {product});
    CHECK_FALSE(report.pass);
    CHECK(report.witness > 1);
}
