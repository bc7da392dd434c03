#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <utility>
#include <vector>

#include "triarb/errors.hpp"
#include "triarb/intmat.hpp"
#include "triarb/scalar.hpp"

namespace triarb {

// Polynomials are coefficient vectors in ascending power order; the
// characteristic polynomial is always monic with exact integer entries.
using IntPoly = std::vector<Int>;
using RatPoly = std::vector<Rat>;

/// Exact characteristic polynomial by the trace recursion
/// M_1 = A, c_k = -tr(A(M_{k-1} + c_{k-1} I))/k; every division is exact.
inline IntPoly characteristic_polynomial(const IntMat& a) {
    if (a.rows() != a.cols())
        throw validation_error("characteristic polynomial needs a square matrix");
    const int n = a.rows();
    IntPoly p(n + 1);
    p[n] = 1;
    IntMat m = a;
    Int c = -m.trace();
    p[n - 1] = c;
    for (int k = 2; k <= n; ++k) {
        for (int i = 0; i < n; ++i) m.at(i, i) += c;
        m = a * m;
        Int t = m.trace();
        Int q, r;
        mpz_fdiv_qr(q.get_mpz_t(), r.get_mpz_t(), Int(-t).get_mpz_t(),
                    Int(k).get_mpz_t());
        if (r != 0)
            throw numeric_error("trace recursion produced a non-integer", 0.0);
        c = q;
        p[n - k] = c;
    }
    return p;
}

namespace detail {

inline int degree(const RatPoly& p) {
    for (int i = static_cast<int>(p.size()) - 1; i >= 0; --i)
        if (p[i] != 0) return i;
    return -1;  // zero polynomial
}

inline RatPoly trim(RatPoly p) {
    p.resize(static_cast<size_t>(std::max(degree(p), 0)) + 1);
    return p;
}

inline RatPoly make_monic(RatPoly p) {
    int d = degree(p);
    if (d < 0) return p;
    Rat lead = p[d];
    for (Rat& c : p) c /= lead;
    return trim(std::move(p));
}

inline RatPoly derivative(const RatPoly& p) {
    if (p.size() <= 1) return {Rat(0)};
    RatPoly out(p.size() - 1);
    for (size_t i = 1; i < p.size(); ++i) out[i - 1] = Rat(long(i)) * p[i];
    return trim(std::move(out));
}

/// Euclidean remainder of a by b (b nonzero), both treated over the rationals.
inline RatPoly poly_rem(RatPoly a, const RatPoly& b) {
    int db = degree(b);
    for (int da = degree(a); da >= db && da >= 0; da = degree(a)) {
        Rat f = a[da] / b[db];
        for (int t = 0; t <= db; ++t) a[da - db + t] -= f * b[t];
        a[da] = 0;  // clear rounding of the cancelled leading term
    }
    return trim(std::move(a));
}

/// Exact quotient; throws if b does not divide a.
inline RatPoly poly_div_exact(RatPoly a, const RatPoly& b) {
    int db = degree(b);
    int da = degree(a);
    if (da < db) {
        if (da >= 0) throw numeric_error("inexact polynomial division", 0.0);
        return {Rat(0)};
    }
    RatPoly q(static_cast<size_t>(da - db) + 1, Rat(0));
    for (; da >= db; da = degree(a)) {
        Rat f = a[da] / b[db];
        q[da - db] = f;
        for (int t = 0; t <= db; ++t) a[da - db + t] -= f * b[t];
        a[da] = 0;
    }
    if (degree(a) >= 0)
        throw numeric_error("inexact polynomial division", 0.0);
    return q;
}

inline RatPoly poly_gcd(RatPoly a, RatPoly b) {
    a = make_monic(std::move(a));
    b = make_monic(std::move(b));
    while (degree(b) >= 0) {
        RatPoly r = poly_rem(a, b);
        a = std::move(b);
        b = make_monic(std::move(r));
    }
    return a;
}

inline RatPoly poly_sub(RatPoly a, const RatPoly& b) {
    if (a.size() < b.size()) a.resize(b.size(), Rat(0));
    for (size_t i = 0; i < b.size(); ++i) a[i] -= b[i];
    return trim(std::move(a));
}

}  // namespace detail

/// Yun's square-free decomposition: returns monic factors with their
/// multiplicities; the product of factor^multiplicity is the (monic) input.
inline std::vector<std::pair<RatPoly, int>> squarefree_decomposition(
    const RatPoly& poly) {
    using namespace detail;
    RatPoly p = make_monic(poly);
    std::vector<std::pair<RatPoly, int>> out;
    if (degree(p) <= 0) return out;
    RatPoly dp = derivative(p);
    RatPoly g = poly_gcd(p, dp);
    if (degree(g) == 0) {
        out.emplace_back(std::move(p), 1);
        return out;
    }
    RatPoly b = poly_div_exact(p, g);
    RatPoly c = poly_div_exact(dp, g);
    RatPoly d = poly_sub(std::move(c), derivative(b));
    for (int mult = 1; degree(b) > 0; ++mult) {
        RatPoly a = poly_gcd(b, d);
        if (degree(a) > 0) out.emplace_back(a, mult);
        b = poly_div_exact(std::move(b), a);
        c = poly_div_exact(std::move(d), a);
        d = poly_sub(std::move(c), derivative(b));
    }
    return out;
}

namespace detail {

/// Aberth–Ehrlich simultaneous iteration for all roots of a monic polynomial
/// with simple roots. Callers must pass square-free input.
inline std::vector<std::complex<double>> aberth_roots(
    const std::vector<double>& coeffs) {
    const int n = static_cast<int>(coeffs.size()) - 1;
    if (n <= 0) return {};
    using C = std::complex<double>;
    auto eval = [&](C z, C& value, C& deriv) {
        value = C(coeffs[n]);
        deriv = C(0);
        for (int i = n - 1; i >= 0; --i) {
            deriv = deriv * z + value;
            value = value * z + C(coeffs[i]);
        }
    };
    double radius = 0;
    for (int i = 0; i < n; ++i)
        radius = std::max(radius, std::abs(coeffs[i]));
    radius = 1.0 + radius;  // Cauchy bound
    std::vector<C> z(n);
    for (int i = 0; i < n; ++i) {
        double angle = 2.0 * std::numbers::pi * i / n + 0.4;
        z[i] = 0.9 * radius * C(std::cos(angle), std::sin(angle));
    }
    const int max_iter = 1000;
    double worst = 0;
    for (int it = 0; it < max_iter; ++it) {
        worst = 0;
        for (int i = 0; i < n; ++i) {
            C value, deriv;
            eval(z[i], value, deriv);
            if (value == C(0)) continue;
            C w = deriv == C(0) ? C(0) : value / deriv;
            C sum(0);
            for (int j = 0; j < n; ++j)
                if (j != i) sum += C(1) / (z[i] - z[j]);
            C denom = C(1) - w * sum;
            C corr = denom == C(0) ? w : w / denom;
            z[i] -= corr;
            worst = std::max(worst, std::abs(corr) / (1.0 + std::abs(z[i])));
        }
        if (worst < 1e-14) break;
    }
    if (worst > 1e-10)
        throw numeric_error("root iteration did not converge", worst);
    // Newton polish in extended precision.
    std::vector<long double> cl(coeffs.begin(), coeffs.end());
    for (auto& root : z) {
        std::complex<long double> zl(root.real(), root.imag());
        for (int step = 0; step < 3; ++step) {
            std::complex<long double> value(cl[n]), deriv(0);
            for (int i = n - 1; i >= 0; --i) {
                deriv = deriv * zl + value;
                value = value * zl + cl[i];
            }
            if (deriv != std::complex<long double>(0)) zl -= value / deriv;
        }
        root = C(static_cast<double>(zl.real()), static_cast<double>(zl.imag()));
    }
    return z;
}

inline std::vector<double> to_monic_doubles(const RatPoly& p) {
    RatPoly m = make_monic(p);
    std::vector<double> out(m.size());
    for (size_t i = 0; i < m.size(); ++i) out[i] = m[i].get_d();
    return out;
}

}  // namespace detail

/// Certified residual of z as a root of p: an upper bound on
/// |p(z)| / sum_i |c_i| |z|^i, the relative backward error. The numerator
/// and a lower bound on the denominator are computed in exact rational
/// arithmetic at the exactly-representable point z; only the final division
/// is floating point. Scale-free, so it stays meaningful for high degrees.
inline double certified_residual(const IntPoly& p, std::complex<double> z) {
    Rat zr(z.real()), zi(z.imag());
    Rat re(0), im(0);
    for (int i = static_cast<int>(p.size()) - 1; i >= 0; --i) {
        Rat nre = re * zr - im * zi + Rat(p[i]);
        Rat nim = re * zi + im * zr;
        re = std::move(nre);
        im = std::move(nim);
    }
    Rat value2 = re * re + im * im;
    if (value2 == 0) return 0.0;
    // scale = sum |c_i| |z|^i via |z|^2 (rational) and a certified rational
    // lower bound l <= |z| for the odd powers
    Rat r = zr * zr + zi * zi;
    Rat l(0);
    if (r > 0) {
        l = Rat(std::nextafter(std::sqrt(r.get_d()), 0.0));
        if (l < 0) l = 0;
        while (l * l > r) l *= Rat(999999, 1000000);
    }
    Rat even(0), odd(0), rp(1);
    for (size_t i = 0; i < p.size(); ++i) {
        Rat a = ::abs(Rat(p[i]));
        if (i % 2 == 0) {
            even += a * rp;
        } else {
            odd += a * rp;
            rp *= r;
        }
    }
    Rat scale = even + odd * l;
    if (scale == 0) return std::sqrt(value2.get_d());
    return std::sqrt(value2.get_d()) / scale.get_d();
}

struct Eigenvalues {
    std::vector<std::complex<double>> values;  // with multiplicity, sorted
    double max_residual;  // worst certified |p(lambda)| over distinct roots
};

/// Roots of an exact monic polynomial: exact zero roots are split off, the
/// rest is square-free factored so every numeric root is simple, and each
/// distinct root carries its exact multiplicity.
inline Eigenvalues polynomial_spectrum(const IntPoly& p) {
    if (p.empty() || p.back() != 1)
        throw validation_error("expected a monic integer polynomial");
    std::vector<std::complex<double>> roots;
    size_t zero_count = 0;
    while (zero_count < p.size() - 1 && p[zero_count] == 0) ++zero_count;
    for (size_t t = 0; t < zero_count; ++t) roots.emplace_back(0.0, 0.0);
    RatPoly rest(p.begin() + zero_count, p.end());
    double max_residual = 0;
    for (const auto& [factor, mult] : squarefree_decomposition(rest)) {
        auto simple = detail::aberth_roots(detail::to_monic_doubles(factor));
        for (auto root : simple) {
            // Real-root snap: conjugate pairing leaves lone near-real roots
            // with spurious imaginary dust.
            if (std::abs(root.imag()) < 1e-12 * (1 + std::abs(root.real())))
                root = {root.real(), 0.0};
            max_residual = std::max(max_residual, certified_residual(p, root));
            for (int t = 0; t < mult; ++t) roots.push_back(root);
        }
    }
    std::sort(roots.begin(), roots.end(),
              [](const std::complex<double>& a, const std::complex<double>& b) {
                  double ma = std::abs(a), mb = std::abs(b);
                  if (ma != mb) return ma > mb;
                  if (a.real() != b.real()) return a.real() > b.real();
                  return a.imag() > b.imag();
              });
    return {std::move(roots), max_residual};
}

inline Eigenvalues eigenvalues(const IntMat& m) {
    return polynomial_spectrum(characteristic_polynomial(m));
}

inline double spectral_radius(const IntMat& m) {
    Eigenvalues e = eigenvalues(m);
    return e.values.empty() ? 0.0 : std::abs(e.values.front());
}

}  // namespace triarb
