#include <catch2/catch_amalgamated.hpp>

#include "triarb/detail/reference_data.hpp"
#include "triarb/linalg.hpp"
#include "triarb/matrices.hpp"

using namespace triarb;

namespace {

template <int N>
IntMat from_array(const int (&rows)[N][N]) {
    IntMat m(N, N);
    for (int r = 0; r < N; ++r)
        for (int c = 0; c < N; ++c) m.at(r, c) = rows[r][c];
    return m;
}

}  // namespace

TEST_CASE("factory matches the d=4 reference tables") {
    Dimension d(4);
    auto rules = enumerate_rules(d);
    for (size_t t = 0; t < rules.size(); ++t) {
        CAPTURE(format_rule(rules[t]));
        CHECK(pair_update_matrix(rules[t], d).mat ==
              from_array(refdata::d4_B[t]));
        BlockDecomposition blocks = block_form(rules[t], d);
        CHECK(blocks.block.mat == from_array(refdata::d4_D[t]));
        CHECK(blocks.reduced.mat == from_array(refdata::d4_G[t]));
    }
    CHECK(change_of_basis(d).mat == from_array(refdata::d4_Q));
    CHECK(change_of_basis_inverse(d).mat == from_array(refdata::d4_Qinv));
}

TEST_CASE("factory matches the d=5 reference tables") {
    Dimension d(5);
    auto rules = enumerate_rules(d);
    for (size_t t = 0; t < rules.size(); ++t) {
        CAPTURE(format_rule(rules[t]));
        CHECK(pair_update_matrix(rules[t], d).mat ==
              from_array(refdata::d5_B[t]));
        BlockDecomposition blocks = block_form(rules[t], d);
        CHECK(blocks.block.mat == from_array(refdata::d5_D[t]));
        CHECK(blocks.reduced.mat == from_array(refdata::d5_G[t]));
    }
    CHECK(change_of_basis(d).mat == from_array(refdata::d5_Q));
    CHECK(change_of_basis_inverse(d).mat == from_array(refdata::d5_Qinv));
}

TEST_CASE("spot values from the construction") {
    Dimension d4(4);
    IntMat b123 = pair_update_matrix({1, 2, 3}, d4).mat;
    std::vector<Int> row0{0, 1, 0, -1, 0, 0};
    for (int c = 0; c < 6; ++c) CHECK(b123.at(0, c) == row0[c]);

    IntMat b341 = pair_update_matrix({3, 4, 1}, d4).mat;
    std::vector<Int> row5{0, -1, 1, 0, 0, 0};
    for (int c = 0; c < 6; ++c) CHECK(b341.at(5, c) == row5[c]);

    Dimension d5(5);
    IntMat b453 = pair_update_matrix({4, 5, 3}, d5).mat;
    std::vector<Int> row9{0, 0, 0, 0, 0, 0, 0, -1, 1, 0};
    for (int c = 0; c < 10; ++c) CHECK(b453.at(9, c) == row9[c]);

    // d=3 has a single reduced pair; the change of basis has one fan row.
    Dimension d3(3);
    IntMat q3 = change_of_basis(d3).mat;
    CHECK(q3.at(2, 0) == -1);
    CHECK(q3.at(2, 1) == 1);
    CHECK(q3.at(2, 2) == 1);

    // the two sides of one block collapse: update through currency 2 of the
    // pair (3,4) stays a one-row matrix under conjugation
    BlockDecomposition b342 = block_form({3, 4, 2}, d5);
    CHECK(b342.block.mat == pair_update_matrix({3, 4, 2}, d5).mat);

    // rule (1,2,3) on d=5 has fan block -e_12 e_23^T
    BlockDecomposition b123_5 = block_form({1, 2, 3}, d5);
    int nonzero = 0;
    for (int r = 0; r < b123_5.fan.rows(); ++r)
        for (int c = 0; c < b123_5.fan.cols(); ++c)
            if (b123_5.fan.at(r, c) != 0) ++nonzero;
    CHECK(nonzero == 1);
    CHECK(b123_5.fan.at(0, 0) == -1);
}

TEST_CASE("fixed projector and basis") {
    Dimension d(4);
    FixedSubspaceBasis basis = fixed_basis(d);
    REQUIRE(basis.vectors.size() == 3);
    CHECK(basis.vectors[0] == std::vector<Int>{1, 0, 0, -1, -1, 0});  // f_2
    CHECK(basis.vectors[2] == std::vector<Int>{0, 0, 1, 0, 1, 1});    // f_4

    for (int dv = 3; dv <= 6; ++dv) {
        Dimension dd(dv);
        IntMat p = fixed_projector(dd).mat;
        CHECK(p * p == p);
        CHECK(integer_rank(p) == dv - 1);
        for (const auto& f : fixed_basis(dd).vectors) CHECK(p.apply(f) == f);
    }
}

TEST_CASE("update matrices are one-row projectors") {
    for (int dv = 3; dv <= 6; ++dv) {
        Dimension d(dv);
        for (const RuleTriple& w : enumerate_rules(d)) {
            IntMat b = pair_update_matrix(w, d).mat;
            CHECK(b * b == b);
            int changed_rows = 0;
            for (int r = 0; r < b.rows(); ++r) {
                int off_diag = 0;
                bool is_identity_row = true;
                for (int c = 0; c < b.cols(); ++c) {
                    if (b.at(r, c) != (r == c ? 1 : 0)) is_identity_row = false;
                    if (r != c && b.at(r, c) != 0) ++off_diag;
                }
                if (!is_identity_row) {
                    ++changed_rows;
                    CHECK(off_diag == 2);
                    CHECK(r == index_of(w.i, w.j, d));
                }
            }
            CHECK(changed_rows == 1);
        }
    }
}

TEST_CASE("block form shape and route agreement") {
    for (int dv = 3; dv <= 6; ++dv) {
        Dimension d(dv);
        const int top = dv - 1;
        for (const RuleTriple& w : enumerate_rules(d)) {
            CAPTURE(dv, format_rule(w));
            BlockDecomposition blocks = block_form(w, d);
            CHECK(blocks.block.mat == block_form_closed(w, d));
            CHECK(blocks.reduced.mat == reduced_matrix_closed(w, d));
            for (int r = 0; r < top; ++r)
                for (int c = 0; c < top; ++c)
                    CHECK(blocks.block.mat.at(r, c) == (r == c ? 1 : 0));
            for (int r = top; r < d.pair_count(); ++r)
                for (int c = 0; c < top; ++c)
                    CHECK(blocks.block.mat.at(r, c) == 0);
            CHECK(blocks.fan.rows() == top);
            CHECK(blocks.fan.cols() == d.reduced_count());
        }
    }
}

TEST_CASE("change of basis is exactly invertible") {
    for (int dv = 3; dv <= 12; ++dv) {
        Dimension d(dv);
        IntMat identity = IntMat::identity(d.pair_count());
        CHECK(change_of_basis(d).mat * change_of_basis_inverse(d).mat ==
              identity);
        CHECK(change_of_basis_inverse(d).mat * change_of_basis(d).mat ==
              identity);
    }
}

TEST_CASE("top of the supported range stays exact") {
    Dimension d(12);
    CHECK(d.pair_count() == 66);
    for (const RuleTriple& w :
         {RuleTriple{1, 2, 12}, RuleTriple{2, 11, 1}, RuleTriple{10, 12, 11},
          RuleTriple{1, 12, 6}}) {
        IntMat b = pair_update_matrix(w, d).mat;
        CHECK(b * b == b);
        BlockDecomposition blocks = block_form(w, d);
        CHECK(blocks.block.mat == block_form_closed(w, d));
        for (const auto& f : fixed_basis(d).vectors)
            CHECK(b.apply(f) == f);
    }
}

TEST_CASE("joint fixed space equals the span of the fixed basis") {
    for (int dv : {3, 4, 5}) {
        Dimension d(dv);
        auto rules = enumerate_rules(d);
        // stack (B - I) for all rules and solve exactly
        RatMat stacked;
        for (const RuleTriple& w : rules) {
            IntMat b = pair_update_matrix(w, d).mat;
            for (int r = 0; r < b.rows(); ++r) {
                std::vector<Rat> row(d.pair_count());
                for (int c = 0; c < b.cols(); ++c) {
                    row[c] = Rat(b.at(r, c));
                    if (r == c) row[c] -= 1;
                }
                stacked.push_back(std::move(row));
            }
        }
        auto kernel = nullspace(stacked);
        CHECK(static_cast<int>(kernel.size()) == dv - 1);
        // every kernel vector satisfies x_ij = -x_1i + x_1j
        for (const auto& v : kernel)
            for (int i = 2; i <= dv; ++i)
                for (int j = i + 1; j <= dv; ++j)
                    CHECK(v[index_of(i, j, d)] ==
                          -v[index_of(1, i, d)] + v[index_of(1, j, d)]);
        // and each fixed-basis vector lies in the kernel of every stack row
        for (const auto& f : fixed_basis(d).vectors)
            for (const RuleTriple& w : rules)
                CHECK(pair_update_matrix(w, d).mat.apply(f) == f);
    }
}
