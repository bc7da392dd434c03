#pragma once

#include <cassert>
#include <optional>
#include <vector>

#include "triarb/intmat.hpp"
#include "triarb/rules.hpp"

namespace triarb {

enum class MatrixKind {
    PairUpdate,    // one-step update matrix acting on the full triangle
    BlockForm,     // its conjugate by the change of basis
    Reduced,       // the autonomous lower block of the block form
    Basis,         // change of basis to leading-index coordinates
    BasisInverse,  //
    Projector,     // projector onto the fixed (no-arbitrage) subspace
    Product,       // product of any of the above
};

inline const char* to_tag(MatrixKind k) {
    switch (k) {
        case MatrixKind::PairUpdate: return "B";
        case MatrixKind::BlockForm: return "D";
        case MatrixKind::Reduced: return "G";
        case MatrixKind::Basis: return "Q";
        case MatrixKind::BasisInverse: return "Qinv";
        case MatrixKind::Projector: return "P";
        case MatrixKind::Product: return "product";
    }
    return "?";
}

struct UpdateMatrix {
    IntMat mat;
    MatrixKind kind;
    Dimension d;
    std::optional<RuleTriple> rule;
};

namespace detail {

// e_ij e_pq^T contribution: adds sign at (row of pair ij, column of pair pq).
inline void add_outer(IntMat& m, int i, int j, int p, int q, int sign,
                      Dimension d) {
    m.at(index_of(i, j, d), index_of(p, q, d)) += sign;
}

inline void add_outer_reduced(IntMat& m, int i, int j, int p, int q, int sign,
                              Dimension d) {
    m.at(reduced_index_of(i, j, d), reduced_index_of(p, q, d)) += sign;
}

}  // namespace detail

/// The one-step update matrix of a rule: identity except in the row of the
/// updated pair, which reads the two legs of the triangle. Splits into three
/// cases by where k sits relative to i < j, because the stored triangle only
/// keeps one orientation per pair.
inline UpdateMatrix pair_update_matrix(const RuleTriple& w, Dimension d) {
    validate_rule(w, d);
    IntMat m = IntMat::identity(d.pair_count());
    const int i = w.i, j = w.j, k = w.k;
    using detail::add_outer;
    add_outer(m, i, j, i, j, -1, d);
    if (k < i) {  // a_ij <- a_ik + a_kj = -a_ki + a_kj
        add_outer(m, i, j, k, i, -1, d);
        add_outer(m, i, j, k, j, +1, d);
    } else if (k < j) {  // a_ij <- a_ik + a_kj
        add_outer(m, i, j, i, k, +1, d);
        add_outer(m, i, j, k, j, +1, d);
    } else {  // a_ij <- a_ik - a_jk
        add_outer(m, i, j, i, k, +1, d);
        add_outer(m, i, j, j, k, -1, d);
    }
    return {std::move(m), MatrixKind::PairUpdate, d, w};
}

/// Change of basis to leading-index coordinates: y_ij = x_ij + x_1i - x_1j
/// for 2 <= i < j; the first d-1 coordinates pass through.
inline UpdateMatrix change_of_basis(Dimension d) {
    IntMat q = IntMat::identity(d.pair_count());
    for (int i = 2; i <= d.value(); ++i)
        for (int j = i + 1; j <= d.value(); ++j) {
            detail::add_outer(q, i, j, 1, j, +1, d);
            detail::add_outer(q, i, j, 1, i, -1, d);
        }
    return {std::move(q), MatrixKind::Basis, d, std::nullopt};
}

inline UpdateMatrix change_of_basis_inverse(Dimension d) {
    IntMat q = IntMat::identity(d.pair_count());
    for (int i = 2; i <= d.value(); ++i)
        for (int j = i + 1; j <= d.value(); ++j) {
            detail::add_outer(q, i, j, 1, j, -1, d);
            detail::add_outer(q, i, j, 1, i, +1, d);
        }
    return {std::move(q), MatrixKind::BasisInverse, d, std::nullopt};
}

/// Projector onto the fixed subspace (states no rule can change).
inline UpdateMatrix fixed_projector(Dimension d) {
    IntMat p(d.pair_count(), d.pair_count());
    for (int j = 2; j <= d.value(); ++j)
        detail::add_outer(p, 1, j, 1, j, +1, d);
    for (int i = 2; i <= d.value(); ++i)
        for (int j = i + 1; j <= d.value(); ++j) {
            detail::add_outer(p, i, j, 1, j, +1, d);
            detail::add_outer(p, i, j, 1, i, -1, d);
        }
    return {std::move(p), MatrixKind::Projector, d, std::nullopt};
}

struct FixedSubspaceBasis {
    Dimension d;
    std::vector<std::vector<Int>> vectors;  // f_2, ..., f_d
};

/// Basis f_i = sum_{j<i} e_ji - sum_{i<j} e_ij of the fixed subspace; every
/// update matrix leaves each f_i alone.
inline FixedSubspaceBasis fixed_basis(Dimension d) {
    FixedSubspaceBasis out{d, {}};
    for (int i = 2; i <= d.value(); ++i) {
        std::vector<Int> f(d.pair_count(), 0);
        for (int j = 1; j < i; ++j) f[index_of(j, i, d)] = 1;
        for (int j = i + 1; j <= d.value(); ++j) f[index_of(i, j, d)] = -1;
        out.vectors.push_back(std::move(f));
    }
    return out;
}

/// Closed-form block matrix, split into six cases by how 1 interleaves with
/// (k, i, j). Empty sums at the j=2 and j=d boundaries contribute nothing.
inline IntMat block_form_closed(const RuleTriple& w, Dimension d) {
    validate_rule(w, d);
    const int i = w.i, j = w.j, k = w.k;
    using detail::add_outer;
    if (i > 1 && k == 1) {  // 1 = k < i < j: the update row collapses to zero
        IntMat m = IntMat::identity(d.pair_count());
        add_outer(m, i, j, i, j, -1, d);
        return m;
    }
    if (i > 1) return pair_update_matrix(w, d).mat;  // conjugation fixes B
    IntMat m = IntMat::identity(d.pair_count());
    if (k < j) {
        // 1 = i < k < j: column of (k, j) gains the fan of pairs through j
        add_outer(m, 1, j, k, j, +1, d);
        for (int n = j + 1; n <= d.value(); ++n)
            add_outer(m, j, n, k, j, +1, d);
        for (int mm = 2; mm < j; ++mm)
            add_outer(m, mm, j, k, j, -1, d);
    } else {
        // 1 = i < j < k: the same fan, subtracted, in the column of (j, k)
        add_outer(m, 1, j, j, k, -1, d);
        for (int n = j + 1; n <= d.value(); ++n)
            add_outer(m, j, n, j, k, -1, d);
        for (int mm = 2; mm < j; ++mm)
            add_outer(m, mm, j, j, k, +1, d);
    }
    return m;
}

namespace detail {

inline IntMat conjugated_block_form(const RuleTriple& w, Dimension d) {
    IntMat b = pair_update_matrix(w, d).mat;
    return change_of_basis_inverse(d).mat * b * change_of_basis(d).mat;
}

}  // namespace detail

struct BlockDecomposition {
    UpdateMatrix block;  // full block-triangular matrix
    IntMat fan;          // top-right (d-1) x m block
    UpdateMatrix reduced;  // bottom-right m x m block
};

/// Conjugates the update matrix into block-triangular form and extracts the
/// blocks. The top-left block must be the identity and the bottom-left block
/// zero; debug builds additionally cross-check the closed-form construction.
inline BlockDecomposition block_form(const RuleTriple& w, Dimension d) {
    IntMat full = detail::conjugated_block_form(w, d);
    assert(full == block_form_closed(w, d));
    const int top = d.value() - 1, m = d.reduced_count();
    IntMat fan(top, m);
    IntMat g(m, m);
    for (int r = 0; r < top; ++r)
        for (int c = 0; c < m; ++c) fan.at(r, c) = full.at(r, top + c);
    for (int r = 0; r < m; ++r)
        for (int c = 0; c < m; ++c) g.at(r, c) = full.at(top + r, top + c);
    return {{std::move(full), MatrixKind::BlockForm, d, w},
            std::move(fan),
            {std::move(g), MatrixKind::Reduced, d, w}};
}

inline UpdateMatrix reduced_matrix(const RuleTriple& w, Dimension d) {
    return block_form(w, d).reduced;
}

/// Direct construction of the reduced matrix from its own case formula;
/// kept separate from the conjugation route so tests can compare the two.
inline IntMat reduced_matrix_closed(const RuleTriple& w, Dimension d) {
    validate_rule(w, d);
    const int i = w.i, j = w.j, k = w.k;
    using detail::add_outer_reduced;
    IntMat m = IntMat::identity(d.reduced_count());
    if (i > 1) {
        // mirrors the full-basis construction, restricted to pairs above 1
        add_outer_reduced(m, i, j, i, j, -1, d);
        if (k == 1) return m;
        if (k < i) {
            add_outer_reduced(m, i, j, k, i, -1, d);
            add_outer_reduced(m, i, j, k, j, +1, d);
        } else if (k < j) {
            add_outer_reduced(m, i, j, i, k, +1, d);
            add_outer_reduced(m, i, j, k, j, +1, d);
        } else {
            add_outer_reduced(m, i, j, i, k, +1, d);
            add_outer_reduced(m, i, j, j, k, -1, d);
        }
        return m;
    }
    if (k < j) {
        for (int n = j + 1; n <= d.value(); ++n)
            add_outer_reduced(m, j, n, k, j, +1, d);
        for (int mm = 2; mm < j; ++mm)
            add_outer_reduced(m, mm, j, k, j, -1, d);
    } else {
        for (int n = j + 1; n <= d.value(); ++n)
            add_outer_reduced(m, j, n, j, k, -1, d);
        for (int mm = 2; mm < j; ++mm)
            add_outer_reduced(m, mm, j, j, k, +1, d);
    }
    return m;
}

}  // namespace triarb
