#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "triarb/errors.hpp"
#include "triarb/scalar.hpp"

namespace triarb {

/// Dense matrix over arbitrary-precision integers. Sizes here never exceed
/// 66, so dense exact storage is the whole story.
class IntMat {
  public:
    IntMat() = default;
    IntMat(int rows, int cols)
        : rows_(rows), cols_(cols), e_(static_cast<size_t>(rows) * cols) {}

    static IntMat identity(int n) {
        IntMat m(n, n);
        for (int i = 0; i < n; ++i) m.at(i, i) = 1;
        return m;
    }

    int rows() const { return rows_; }
    int cols() const { return cols_; }
    Int& at(int r, int c) { return e_[static_cast<size_t>(r) * cols_ + c]; }
    const Int& at(int r, int c) const {
        return e_[static_cast<size_t>(r) * cols_ + c];
    }

    friend bool operator==(const IntMat&, const IntMat&) = default;

    IntMat operator*(const IntMat& o) const {
        if (cols_ != o.rows_)
            throw validation_error("matrix shape mismatch in product");
        IntMat out(rows_, o.cols_);
        Int acc;
        for (int r = 0; r < rows_; ++r)
            for (int k = 0; k < cols_; ++k) {
                const Int& a = at(r, k);
                if (a == 0) continue;
                for (int c = 0; c < o.cols_; ++c) {
                    const Int& b = o.at(k, c);
                    if (b == 0) continue;
                    out.at(r, c) += a * b;
                }
            }
        return out;
    }

    IntMat operator+(const IntMat& o) const {
        if (rows_ != o.rows_ || cols_ != o.cols_)
            throw validation_error("matrix shape mismatch in sum");
        IntMat out = *this;
        for (size_t t = 0; t < e_.size(); ++t) out.e_[t] += o.e_[t];
        return out;
    }

    IntMat operator-(const IntMat& o) const {
        if (rows_ != o.rows_ || cols_ != o.cols_)
            throw validation_error("matrix shape mismatch in difference");
        IntMat out = *this;
        for (size_t t = 0; t < e_.size(); ++t) out.e_[t] -= o.e_[t];
        return out;
    }

    IntMat transpose() const {
        IntMat out(cols_, rows_);
        for (int r = 0; r < rows_; ++r)
            for (int c = 0; c < cols_; ++c) out.at(c, r) = at(r, c);
        return out;
    }

    Int trace() const {
        Int t = 0;
        for (int i = 0; i < rows_; ++i) t += at(i, i);
        return t;
    }

    /// Largest |entry|; the growth measurements all use this norm, which is
    /// exact on integers.
    Int sup_norm() const {
        Int best = 0;
        for (const Int& v : e_) {
            Int a = ::abs(v);
            if (a > best) best = a;
        }
        return best;
    }

    /// Max absolute row sum (the operator infinity-norm).
    Int row_sum_norm() const {
        Int best = 0;
        for (int r = 0; r < rows_; ++r) {
            Int s = 0;
            for (int c = 0; c < cols_; ++c) s += ::abs(at(r, c));
            if (s > best) best = s;
        }
        return best;
    }

    template <class S>
    std::vector<S> apply(const std::vector<S>& x) const {
        if (static_cast<int>(x.size()) != cols_)
            throw validation_error("vector length " +
                                   std::to_string(x.size()) +
                                   " does not match matrix with " +
                                   std::to_string(cols_) + " columns");
        std::vector<S> out(rows_, S(0));
        for (int r = 0; r < rows_; ++r)
            for (int c = 0; c < cols_; ++c) {
                const Int& a = at(r, c);
                if (a == 0) continue;
                out[r] += scalar_traits<S>::from_int(a) * x[c];
            }
        return out;
    }

    std::size_t content_hash() const {
        std::uint64_t h = 0x9e3779b97f4a7c15ULL ^ (std::uint64_t)rows_;
        for (const Int& v : e_) {
            std::uint64_t r = mpz_fdiv_ui(v.get_mpz_t(), 0xffffffffffc5ULL);
            h ^= r + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
        }
        return static_cast<std::size_t>(h);
    }

  private:
    int rows_ = 0, cols_ = 0;
    std::vector<Int> e_;
};

}  // namespace triarb
