#pragma once

#include <vector>

#include "triarb/intmat.hpp"
#include "triarb/scalar.hpp"

namespace triarb {

using RatMat = std::vector<std::vector<Rat>>;

/// In-place reduced row echelon form; returns the pivot columns.
inline std::vector<int> rref(RatMat& a) {
    std::vector<int> pivots;
    if (a.empty()) return pivots;
    const int rows = static_cast<int>(a.size());
    const int cols = static_cast<int>(a[0].size());
    int r = 0;
    for (int c = 0; c < cols && r < rows; ++c) {
        int p = -1;
        for (int t = r; t < rows; ++t)
            if (a[t][c] != 0) {
                p = t;
                break;
            }
        if (p < 0) continue;
        std::swap(a[r], a[p]);
        Rat inv = 1 / a[r][c];
        for (int cc = c; cc < cols; ++cc) a[r][cc] *= inv;
        for (int t = 0; t < rows; ++t) {
            if (t == r || a[t][c] == 0) continue;
            Rat f = a[t][c];
            for (int cc = c; cc < cols; ++cc) a[t][cc] -= f * a[r][cc];
        }
        pivots.push_back(c);
        ++r;
    }
    return pivots;
}

inline int rank(RatMat a) { return static_cast<int>(rref(a).size()); }

/// Basis of the right nullspace, one vector per free column.
inline std::vector<std::vector<Rat>> nullspace(RatMat a) {
    if (a.empty()) return {};
    const int cols = static_cast<int>(a[0].size());
    std::vector<int> pivots = rref(a);
    std::vector<bool> is_pivot(cols, false);
    for (int c : pivots) is_pivot[c] = true;
    std::vector<std::vector<Rat>> basis;
    for (int free = 0; free < cols; ++free) {
        if (is_pivot[free]) continue;
        std::vector<Rat> v(cols, Rat(0));
        v[free] = 1;
        for (size_t pr = 0; pr < pivots.size(); ++pr)
            v[pivots[pr]] = -a[pr][free];
        basis.push_back(std::move(v));
    }
    return basis;
}

inline RatMat to_rational(const IntMat& m) {
    RatMat out(m.rows(), std::vector<Rat>(m.cols()));
    for (int r = 0; r < m.rows(); ++r)
        for (int c = 0; c < m.cols(); ++c) out[r][c] = Rat(m.at(r, c));
    return out;
}

inline int integer_rank(const IntMat& m) { return rank(to_rational(m)); }

}  // namespace triarb
