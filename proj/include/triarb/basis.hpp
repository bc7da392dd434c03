#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "triarb/errors.hpp"
#include "triarb/scalar.hpp"

namespace triarb {

/// Number of currencies. 12 caps the coordinate count at 66, which keeps
/// dense exact storage trivial.
class Dimension {
  public:
    explicit Dimension(int d) : d_(d) {
        if (d < 3 || d > 12)
            throw validation_error("currency count must be in [3, 12], got " +
                                   std::to_string(d));
    }
    int value() const { return d_; }
    /// d(d-1)/2: coordinates of the full upper triangle.
    int pair_count() const { return d_ * (d_ - 1) / 2; }
    /// (d-1)(d-2)/2: coordinates of the reduced (leading-index) space.
    int reduced_count() const { return (d_ - 1) * (d_ - 2) / 2; }
    friend bool operator==(Dimension, Dimension) = default;

  private:
    int d_;
};

/// A canonical currency pair, 1-based, i < j.
struct PairIndex {
    int i = 0;
    int j = 0;
    friend bool operator==(PairIndex, PairIndex) = default;
};

/// Row-major position of the pair (i, j) in the upper-triangle ordering
/// (1,2), (1,3), ..., (1,d), (2,3), ..., (d-1,d).
inline int index_of(int i, int j, Dimension d) {
    if (i < 1 || j > d.value() || i >= j)
        throw validation_error("invalid pair (" + std::to_string(i) + ", " +
                               std::to_string(j) + ") for d=" +
                               std::to_string(d.value()));
    return (i - 1) * d.value() - i * (i - 1) / 2 + (j - i - 1);
}

inline PairIndex pair_of(int idx, Dimension d) {
    if (idx < 0 || idx >= d.pair_count())
        throw validation_error("pair index " + std::to_string(idx) +
                               " out of range for d=" +
                               std::to_string(d.value()));
    int i = 1;
    while (idx >= d.value() - i) {
        idx -= d.value() - i;
        ++i;
    }
    return {i, i + idx + 1};
}

/// Position of (i, j), 2 <= i < j, in the reduced ordering (2,3), (2,4), ...
/// The reduced ordering is the tail of the full one, shifted by d-1.
inline int reduced_index_of(int i, int j, Dimension d) {
    if (i < 2)
        throw validation_error("reduced pair must have i >= 2, got i=" +
                               std::to_string(i));
    return index_of(i, j, d) - (d.value() - 1);
}

inline PairIndex reduced_pair_of(int idx, Dimension d) {
    if (idx < 0 || idx >= d.reduced_count())
        throw validation_error("reduced index " + std::to_string(idx) +
                               " out of range for d=" +
                               std::to_string(d.value()));
    return pair_of(idx + d.value() - 1, d);
}

/// Vector of upper-triangular log exchange rates x_ij = log r_ij.
template <class S>
struct LogRateVector {
    Dimension d;
    std::vector<S> coords;

    LogRateVector(Dimension dim, std::vector<S> c)
        : d(dim), coords(std::move(c)) {
        if (static_cast<int>(coords.size()) != d.pair_count())
            throw validation_error(
                "log-rate vector needs " + std::to_string(d.pair_count()) +
                " coordinates, got " + std::to_string(coords.size()));
    }
    static LogRateVector zero(Dimension dim) {
        return LogRateVector(dim,
                             std::vector<S>(dim.pair_count(), S(0)));
    }

    /// Signed entry of the skew-symmetric matrix: a(i,j) = -a(j,i).
    S entry(int i, int j) const {
        if (i == j) return S(0);
        if (i < j) return coords[index_of(i, j, d)];
        return S(-coords[index_of(j, i, d)]);
    }
    friend bool operator==(const LogRateVector&, const LogRateVector&)
        = default;
};

/// The same data addressed as a d x d skew-symmetric matrix.
template <class S>
struct SkewLogMatrix {
    Dimension d;
    std::vector<S> upper;  // strict upper triangle, row-major

    SkewLogMatrix(Dimension dim, std::vector<S> u)
        : d(dim), upper(std::move(u)) {
        if (static_cast<int>(upper.size()) != d.pair_count())
            throw validation_error("skew matrix needs " +
                                   std::to_string(d.pair_count()) +
                                   " upper entries");
    }
    static SkewLogMatrix zero(Dimension dim) {
        return SkewLogMatrix(dim, std::vector<S>(dim.pair_count(), S(0)));
    }
    S entry(int i, int j) const {
        if (i == j) return S(0);
        if (i < j) return upper[index_of(i, j, d)];
        return S(-upper[index_of(j, i, d)]);
    }
    friend bool operator==(const SkewLogMatrix&, const SkewLogMatrix&)
        = default;
};

template <class S>
LogRateVector<S> to_vector(const SkewLogMatrix<S>& a) {
    return LogRateVector<S>(a.d, a.upper);
}

template <class S>
SkewLogMatrix<S> to_matrix(const LogRateVector<S>& x) {
    return SkewLogMatrix<S>(x.d, x.coords);
}

/// Positive exchange rates with the reciprocal convention r_ji = 1/r_ij.
class RateMatrix {
  public:
    static constexpr double kReciprocalTol = 1e-12;

    RateMatrix(Dimension d, std::vector<double> entries)
        : d_(d), r_(std::move(entries)) {
        const int n = d_.value();
        if (static_cast<int>(r_.size()) != n * n)
            throw validation_error("rate matrix needs d*d entries");
        for (int i = 1; i <= n; ++i) {
            if (at(i, i) != 1.0)
                throw validation_error("rate matrix diagonal must be 1");
            for (int j = 1; j <= n; ++j) {
                if (i == j) continue;
                if (!(at(i, j) > 0.0))
                    throw validation_error("rates must be positive");
                double prod = at(i, j) * at(j, i);
                if (std::fabs(prod - 1.0) > kReciprocalTol)
                    throw validation_error(
                        "rates are not reciprocal at (" + std::to_string(i) +
                        ", " + std::to_string(j) + ")");
            }
        }
    }

    /// Builds from the independent upper-triangle rates, deriving the rest.
    static RateMatrix from_upper(Dimension d,
                                 const std::vector<double>& upper) {
        const int n = d.value();
        if (static_cast<int>(upper.size()) != d.pair_count())
            throw validation_error("need one rate per pair");
        std::vector<double> full(n * n, 1.0);
        for (int i = 1; i <= n; ++i)
            for (int j = i + 1; j <= n; ++j) {
                double v = upper[index_of(i, j, d)];
                if (!(v > 0.0))
                    throw validation_error("rates must be positive");
                full[(i - 1) * n + (j - 1)] = v;
                full[(j - 1) * n + (i - 1)] = 1.0 / v;
            }
        return RateMatrix(d, std::move(full));
    }

    Dimension dim() const { return d_; }
    double at(int i, int j) const { return r_[(i - 1) * d_.value() + j - 1]; }

  private:
    Dimension d_;
    std::vector<double> r_;  // includes the unit diagonal
};

inline LogRateVector<double> log_rates(const RateMatrix& r) {
    Dimension d = r.dim();
    std::vector<double> c(d.pair_count());
    for (int idx = 0; idx < d.pair_count(); ++idx) {
        auto [i, j] = pair_of(idx, d);
        c[idx] = std::log(r.at(i, j));
    }
    return LogRateVector<double>(d, std::move(c));
}

template <class S>
RateMatrix exp_rates(const LogRateVector<S>& x) {
    std::vector<double> upper(x.d.pair_count());
    for (int idx = 0; idx < x.d.pair_count(); ++idx)
        upper[idx] = std::exp(scalar_traits<S>::to_double(x.coords[idx]));
    return RateMatrix::from_upper(x.d, upper);
}

}  // namespace triarb
