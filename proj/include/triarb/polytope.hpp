#pragma once

#include <algorithm>
#include <set>
#include <vector>

#include "triarb/intmat.hpp"
#include "triarb/linalg.hpp"
#include "triarb/scalar.hpp"

namespace triarb {

/// One supporting inequality <normal, x> <= offset, offset > 0 (the origin
/// is interior). Normals are primitive integer vectors.
struct Facet {
    std::vector<Int> normal;
    Int offset;
    friend bool operator==(const Facet&, const Facet&) = default;
    friend bool operator<(const Facet& a, const Facet& b) {
        if (a.offset != b.offset) return a.offset < b.offset;
        return std::lexicographical_compare(a.normal.begin(), a.normal.end(),
                                            b.normal.begin(), b.normal.end());
    }
};

struct InvariantPolytope {
    std::vector<std::vector<Int>> vertices;
    std::vector<Facet> facets;
};

/// The twelve distinguished vertices of the d=4 certificate, in their
/// published order (7..12 are the negatives of 1..6).
inline std::vector<std::vector<Int>> certificate_vertices() {
    const int base[6][3] = {{1, 1, 0}, {1, 0, -1}, {0, 1, 1},
                            {1, 0, 0}, {0, 1, 0}, {0, 0, 1}};
    std::vector<std::vector<Int>> out;
    for (const auto& v : base) out.push_back({v[0], v[1], v[2]});
    for (const auto& v : base) out.push_back({-v[0], -v[1], -v[2]});
    return out;
}

namespace detail {

/// Scales a rational normal to a primitive integer vector.
inline std::vector<Int> primitive_normal(const std::vector<Rat>& n) {
    Int lcm = 1;
    for (const Rat& c : n) {
        Int den = c.get_den();
        Int g;
        mpz_gcd(g.get_mpz_t(), lcm.get_mpz_t(), den.get_mpz_t());
        lcm = lcm / g * den;
    }
    std::vector<Int> out;
    Int gcd = 0;
    for (const Rat& c : n) {
        Rat scaled = c * Rat(lcm);
        out.push_back(Int(scaled.get_num()));
        mpz_gcd(gcd.get_mpz_t(), gcd.get_mpz_t(), out.back().get_mpz_t());
    }
    if (gcd > 1)
        for (Int& v : out) v /= gcd;
    return out;
}

inline Int dot(const std::vector<Int>& a, const std::vector<Int>& b) {
    Int s = 0;
    for (size_t t = 0; t < a.size(); ++t) s += a[t] * b[t];
    return s;
}

}  // namespace detail

/// Irredundant facet description by brute force: every size-m vertex subset
/// spans a candidate hyperplane (exact rational nullspace); keep the ones
/// with all vertices on one side and the origin strictly inside. Sized for
/// small vertex sets; the d=4 certificate needs only triples in R^3.
inline std::vector<Facet> hull_facets(
    const std::vector<std::vector<Int>>& vertices) {
    if (vertices.empty()) throw geometry_error("no vertices");
    const int m = static_cast<int>(vertices[0].size());
    const int nv = static_cast<int>(vertices.size());
    if (nv < m + 1) throw geometry_error("too few vertices to span a body");

    // Full-dimensionality: differences from vertex 0 must have rank m.
    {
        RatMat diffs;
        for (int v = 1; v < nv; ++v) {
            std::vector<Rat> row(m);
            for (int c = 0; c < m; ++c)
                row[c] = Rat(vertices[v][c] - vertices[0][c]);
            diffs.push_back(std::move(row));
        }
        if (rank(diffs) < m)
            throw geometry_error("vertex set is not full-dimensional");
    }

    std::set<Facet> found;
    std::vector<int> pick(m);
    for (int t = 0; t < m; ++t) pick[t] = t;
    auto advance = [&]() {
        int t = m - 1;
        while (t >= 0 && pick[t] == nv - m + t) --t;
        if (t < 0) return false;
        ++pick[t];
        for (int u = t + 1; u < m; ++u) pick[u] = pick[u - 1] + 1;
        return true;
    };
    do {
        RatMat rows;
        for (int t = 1; t < m; ++t) {
            std::vector<Rat> row(m);
            for (int c = 0; c < m; ++c)
                row[c] =
                    Rat(vertices[pick[t]][c] - vertices[pick[0]][c]);
            rows.push_back(std::move(row));
        }
        auto ns = nullspace(rows);
        if (ns.size() != 1) continue;  // affinely dependent subset
        std::vector<Int> normal = detail::primitive_normal(ns[0]);
        Int offset = detail::dot(normal, vertices[pick[0]]);
        if (offset == 0) continue;  // plane through the interior point 0
        if (offset < 0) {
            for (Int& v : normal) v = -v;
            offset = -offset;
        }
        bool supporting = true;
        for (const auto& v : vertices)
            if (detail::dot(normal, v) > offset) {
                supporting = false;
                break;
            }
        if (supporting) found.insert({std::move(normal), std::move(offset)});
    } while (advance());
    return {found.begin(), found.end()};
}

inline InvariantPolytope make_polytope(std::vector<std::vector<Int>> verts) {
    std::vector<Facet> f = hull_facets(verts);
    return {std::move(verts), std::move(f)};
}

inline InvariantPolytope certificate_polytope() {
    return make_polytope(certificate_vertices());
}

/// Gauge of the polytope: min {t >= 0 : x in t * body}, computed from the
/// facet description as max <n, x>/offset. Exactly 1 on the boundary.
inline Rat dual_norm(const InvariantPolytope& body,
                     const std::vector<Rat>& x) {
    if (body.facets.empty() ||
        x.size() != body.facets.front().normal.size())
        throw validation_error("point/polytope dimension mismatch");
    Rat best(0);
    for (const Facet& f : body.facets) {
        Rat s(0);
        for (size_t t = 0; t < x.size(); ++t) s += Rat(f.normal[t]) * x[t];
        s /= Rat(f.offset);
        if (s > best) best = s;
    }
    return best;
}

inline Rat dual_norm(const InvariantPolytope& body,
                     const std::vector<Int>& x) {
    std::vector<Rat> q(x.begin(), x.end());
    return dual_norm(body, q);
}

inline bool contains(const InvariantPolytope& body,
                     const std::vector<Rat>& x) {
    return dual_norm(body, x) <= 1;
}

inline bool contains(const InvariantPolytope& body,
                     const std::vector<Int>& x) {
    return dual_norm(body, x) <= 1;
}

struct InvarianceReport {
    bool pass = true;
    Rat witness = Rat(0);  // max gauge of any vertex image
    struct Violation {
        int matrix_index;
        int vertex_index;
        std::vector<Int> image;
    };
    std::vector<Violation> violations;
    // images[matrix][vertex]
    std::vector<std::vector<std::vector<Int>>> images;
};

/// Checks that every matrix maps every vertex back into the body, and
/// reports the operator-norm witness max_v gauge(M v).
inline InvarianceReport check_invariance(const InvariantPolytope& body,
                                         const std::vector<IntMat>& mats) {
    InvarianceReport report;
    for (int mi = 0; mi < static_cast<int>(mats.size()); ++mi) {
        report.images.emplace_back();
        for (int vi = 0; vi < static_cast<int>(body.vertices.size()); ++vi) {
            std::vector<Int> image = mats[mi].apply(body.vertices[vi]);
            Rat gauge = dual_norm(body, image);
            if (gauge > report.witness) report.witness = gauge;
            if (gauge > 1) {
                report.pass = false;
                report.violations.push_back({mi, vi, image});
            }
            report.images.back().push_back(std::move(image));
        }
    }
    return report;
}

}  // namespace triarb
