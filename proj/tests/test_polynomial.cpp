#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "triarb/matrices.hpp"
#include "triarb/polynomial.hpp"

using namespace triarb;

namespace {

IntMat small(std::vector<std::vector<long>> rows) {
    IntMat m(rows.size(), rows[0].size());
    for (size_t r = 0; r < rows.size(); ++r)
        for (size_t c = 0; c < rows[r].size(); ++c) m.at(r, c) = rows[r][c];
    return m;
}

IntPoly poly_mul(const IntPoly& a, const IntPoly& b) {
    IntPoly out(a.size() + b.size() - 1, Int(0));
    for (size_t i = 0; i < a.size(); ++i)
        for (size_t j = 0; j < b.size(); ++j) out[i + j] += a[i] * b[j];
    return out;
}

}  // namespace

TEST_CASE("characteristic polynomial, ascending coefficients") {
    // fibonacci companion: p = t^2 - t - 1
    CHECK(characteristic_polynomial(small({{0, 1}, {1, 1}})) ==
          IntPoly{-1, -1, 1});
    // identity: (t - 1)^3
    CHECK(characteristic_polynomial(IntMat::identity(3)) ==
          IntPoly{-1, 3, -3, 1});
    // nilpotent shift: t^3
    CHECK(characteristic_polynomial(
              small({{0, 1, 0}, {0, 0, 1}, {0, 0, 0}})) ==
          IntPoly{0, 0, 0, 1});
    CHECK_THROWS_AS(characteristic_polynomial(IntMat(2, 3)),
                    validation_error);
}

TEST_CASE("block triangular polynomials factor") {
    for (int dv : {4, 5}) {
        Dimension d(dv);
        IntPoly unit_block{-1, 1};  // t - 1
        IntPoly top{1};
        for (int t = 0; t < dv - 1; ++t) top = poly_mul(top, unit_block);
        for (const RuleTriple& w : enumerate_rules(d)) {
            BlockDecomposition blocks = block_form(w, d);
            CHECK(characteristic_polynomial(blocks.block.mat) ==
                  poly_mul(top,
                           characteristic_polynomial(blocks.reduced.mat)));
        }
    }
}

TEST_CASE("square-free decomposition recovers multiplicities") {
    auto cubed = squarefree_decomposition(RatPoly{-1, 3, -3, 1});  // (t-1)^3
    REQUIRE(cubed.size() == 1);
    CHECK(cubed[0].second == 3);
    CHECK(cubed[0].first == RatPoly{-1, 1});

    auto simple = squarefree_decomposition(RatPoly{-1, 1, 1});  // t^2 + t - 1
    REQUIRE(simple.size() == 1);
    CHECK(simple[0].second == 1);

    // (t - 1)^2 (t + 2)^3
    RatPoly p{1};
    auto mul = [](const RatPoly& a, const RatPoly& b) {
        RatPoly out(a.size() + b.size() - 1, Rat(0));
        for (size_t i = 0; i < a.size(); ++i)
            for (size_t j = 0; j < b.size(); ++j) out[i + j] += a[i] * b[j];
        return out;
    };
    for (int t = 0; t < 2; ++t) p = mul(p, RatPoly{-1, 1});
    for (int t = 0; t < 3; ++t) p = mul(p, RatPoly{2, 1});
    auto factors = squarefree_decomposition(p);
    REQUIRE(factors.size() == 2);
    CHECK(factors[0].first == RatPoly{-1, 1});
    CHECK(factors[0].second == 2);
    CHECK(factors[1].first == RatPoly{2, 1});
    CHECK(factors[1].second == 3);
}

TEST_CASE("eigenvalues with exact multiplicities and residuals") {
    const double phi = (1.0 + std::sqrt(5.0)) / 2.0;
    Eigenvalues fib = eigenvalues(small({{0, 1}, {1, 1}}));
    REQUIRE(fib.values.size() == 2);
    CHECK(std::abs(fib.values[0] - std::complex<double>(phi)) < 1e-12);
    CHECK(std::abs(fib.values[1] - std::complex<double>(1 - phi)) < 1e-12);
    CHECK(fib.max_residual < 1e-12);

    Eigenvalues id = eigenvalues(IntMat::identity(4));
    for (const auto& v : id.values)
        CHECK(std::abs(v - std::complex<double>(1)) == 0.0);
    CHECK(spectral_radius(IntMat::identity(4)) == 1.0);

    Eigenvalues nil =
        eigenvalues(small({{0, 1, 0}, {0, 0, 1}, {0, 0, 0}}));
    for (const auto& v : nil.values) CHECK(std::abs(v) == 0.0);

    // rotation by 90 degrees: complex pair, sorted by real part at tie
    Eigenvalues rot = eigenvalues(small({{0, -1}, {1, 0}}));
    CHECK(rot.values[0].imag() > 0);
    CHECK(std::abs(std::abs(rot.values[0]) - 1.0) < 1e-12);
}

TEST_CASE("certified residual is a relative backward error") {
    IntPoly p{-1, -1, 1};  // t^2 - t - 1
    const double phi = (1.0 + std::sqrt(5.0)) / 2.0;
    CHECK(certified_residual(p, {phi, 0.0}) < 1e-15);
    // |p(1)| = 1 against a coefficient scale of 1 + 1 + 1
    CHECK(certified_residual(p, {1.0, 0.0}) ==
          Catch::Approx(1.0 / 3.0).epsilon(1e-12));
    CHECK(certified_residual(p, {0.0, 0.0}) == 1.0);

    // the scale keeps high-degree residuals meaningful: an exact root of a
    // degree-40 polynomial with huge values still certifies tightly
    IntPoly big{1};
    auto shift_mul = [&](long root) {
        IntPoly out(big.size() + 1, Int(0));
        for (size_t i = 0; i < big.size(); ++i) {
            out[i + 1] += big[i];
            out[i] -= root * big[i];
        }
        big = out;
    };
    for (int t = 0; t < 20; ++t) shift_mul(2), shift_mul(-3);
    CHECK(certified_residual(big, {2.0, 0.0}) == 0.0);
    CHECK(certified_residual(big, {-3.0, 0.0}) == 0.0);
    CHECK(certified_residual(big, {2.0 + 1e-13, 0.0}) < 1e-9);
}

TEST_CASE("spectrum ordering is by modulus, then real, then imaginary") {
    // diag(2, -2, 1): |2| ties, real part decides
    Eigenvalues e = eigenvalues(small({{2, 0, 0}, {0, -2, 0}, {0, 0, 1}}));
    CHECK(e.values[0] == std::complex<double>(2));
    CHECK(e.values[1] == std::complex<double>(-2));
    CHECK(e.values[2] == std::complex<double>(1));
}
