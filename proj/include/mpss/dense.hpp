#pragma once

#include <algorithm>
#include <cstdlib>
#include <vector>

#include "rings.hpp"

namespace mpss {

// Small dense matrices with exact entries. Row-major.
template <class R>
struct DenseMat {
    using Elem = typename R::Elem;
    int rows = 0, cols = 0;
    std::vector<Elem> a;

    DenseMat() = default;
    DenseMat(int r, int c, const R& ring) : rows(r), cols(c), a(size_t(r) * c, ring.zero()) {}

    Elem& at(int i, int j) { return a[size_t(i) * cols + j]; }
    const Elem& at(int i, int j) const { return a[size_t(i) * cols + j]; }

    static DenseMat identity(int n, const R& ring) {
        DenseMat m(n, n, ring);
        for (int i = 0; i < n; ++i) m.at(i, i) = ring.one();
        return m;
    }

    bool operator==(const DenseMat& o) const {
        return rows == o.rows && cols == o.cols && a == o.a;
    }
};

template <class R>
DenseMat<R> dense_mul(const DenseMat<R>& x, const DenseMat<R>& y, const R& ring) {
    if (x.cols != y.rows) throw contract_error("dense_mul: shape mismatch");
    DenseMat<R> z(x.rows, y.cols, ring);
    for (int i = 0; i < x.rows; ++i)
        for (int k = 0; k < x.cols; ++k) {
            if (ring.is_zero(x.at(i, k))) continue;
            for (int j = 0; j < y.cols; ++j)
                z.at(i, j) = ring.add(z.at(i, j), ring.mul(x.at(i, k), y.at(k, j)));
        }
    return z;
}

template <class R>
bool dense_is_zero(const DenseMat<R>& m, const R& ring) {
    for (const auto& e : m.a)
        if (!ring.is_zero(e)) return false;
    return true;
}

// Reduced row echelon over a field; returns rank. If basis_change != nullptr it
// accumulates the row transform (starts as identity supplied by caller).
template <class R>
int dense_rref(DenseMat<R>& m, const R& ring, DenseMat<R>* basis_change = nullptr) {
    static_assert(R::is_field);
    int r = 0;
    for (int c = 0; c < m.cols && r < m.rows; ++c) {
        int piv = -1;
        for (int i = r; i < m.rows; ++i)
            if (!ring.is_zero(m.at(i, c))) {
                piv = i;
                break;
            }
        if (piv < 0) continue;
        if (piv != r) {
            for (int j = 0; j < m.cols; ++j) std::swap(m.at(piv, j), m.at(r, j));
            if (basis_change)
                for (int j = 0; j < basis_change->cols; ++j)
                    std::swap(basis_change->at(piv, j), basis_change->at(r, j));
        }
        auto iv = ring.inv(m.at(r, c));
        for (int j = 0; j < m.cols; ++j) m.at(r, j) = ring.mul(m.at(r, j), iv);
        if (basis_change)
            for (int j = 0; j < basis_change->cols; ++j)
                basis_change->at(r, j) = ring.mul(basis_change->at(r, j), iv);
        for (int i = 0; i < m.rows; ++i) {
            if (i == r || ring.is_zero(m.at(i, c))) continue;
            auto f = m.at(i, c);
            for (int j = 0; j < m.cols; ++j)
                m.at(i, j) = ring.sub(m.at(i, j), ring.mul(f, m.at(r, j)));
            if (basis_change)
                for (int j = 0; j < basis_change->cols; ++j)
                    basis_change->at(i, j) =
                        ring.sub(basis_change->at(i, j), ring.mul(f, basis_change->at(r, j)));
        }
        ++r;
    }
    return r;
}

// Smith normal form over Z: U*M*V = D with U, V unimodular and the diagonal a
// divisibility chain d1 | d2 | ... Pivot choice: smallest nonzero absolute
// value, ties broken by lowest row then lowest column.
struct SmithResult {
    DenseMat<RingZ> d, u, v;        // u*m*v = d
    DenseMat<RingZ> uinv, vinv;     // inverses, tracked rather than solved for
    std::vector<Int> diag;          // nonzero diagonal entries, divisibility chain
    int rank = 0;
};

inline SmithResult smith_normal_form(DenseMat<RingZ> m, bool with_transforms = true) {
    RingZ zz;
    const int rows = m.rows, cols = m.cols;
    SmithResult res;
    res.u = DenseMat<RingZ>::identity(rows, zz);
    res.uinv = DenseMat<RingZ>::identity(rows, zz);
    res.v = DenseMat<RingZ>::identity(cols, zz);
    res.vinv = DenseMat<RingZ>::identity(cols, zz);

    auto row_swap = [&](int i, int j) {
        if (i == j) return;
        for (int c = 0; c < cols; ++c) std::swap(m.at(i, c), m.at(j, c));
        if (!with_transforms) return;
        for (int c = 0; c < rows; ++c) std::swap(res.u.at(i, c), res.u.at(j, c));
        for (int r = 0; r < rows; ++r) std::swap(res.uinv.at(r, i), res.uinv.at(r, j));
    };
    auto col_swap = [&](int i, int j) {
        if (i == j) return;
        for (int r = 0; r < rows; ++r) std::swap(m.at(r, i), m.at(r, j));
        if (!with_transforms) return;
        for (int r = 0; r < cols; ++r) std::swap(res.v.at(r, i), res.v.at(r, j));
        for (int c = 0; c < cols; ++c) std::swap(res.vinv.at(i, c), res.vinv.at(j, c));
    };
    // row_i -= q * row_j
    auto row_axpy = [&](int i, int j, const Int& q) {
        if (q == 0) return;
        for (int c = 0; c < cols; ++c) m.at(i, c) -= q * m.at(j, c);
        if (!with_transforms) return;
        for (int c = 0; c < rows; ++c) res.u.at(i, c) -= q * res.u.at(j, c);
        for (int r = 0; r < rows; ++r) res.uinv.at(r, j) += q * res.uinv.at(r, i);
    };
    // col_i -= q * col_j
    auto col_axpy = [&](int i, int j, const Int& q) {
        if (q == 0) return;
        for (int r = 0; r < rows; ++r) m.at(r, i) -= q * m.at(r, j);
        if (!with_transforms) return;
        for (int r = 0; r < cols; ++r) res.v.at(r, i) -= q * res.v.at(r, j);
        for (int c = 0; c < cols; ++c) res.vinv.at(j, c) += q * res.vinv.at(i, c);
    };
    auto row_negate = [&](int i) {
        for (int c = 0; c < cols; ++c) m.at(i, c) = -m.at(i, c);
        if (!with_transforms) return;
        for (int c = 0; c < rows; ++c) res.u.at(i, c) = -res.u.at(i, c);
        for (int r = 0; r < rows; ++r) res.uinv.at(r, i) = -res.uinv.at(r, i);
    };

    auto diagonalize = [&]() {
        int t = 0;
        while (t < rows && t < cols) {
            // Locate pivot in the trailing submatrix.
            int pr = -1, pc = -1;
            Int best;
            for (int i = t; i < rows; ++i)
                for (int j = t; j < cols; ++j) {
                    if (m.at(i, j) == 0) continue;
                    Int v = abs(m.at(i, j));
                    if (pr < 0 || v < best) {
                        best = v;
                        pr = i;
                        pc = j;
                    }
                }
            if (pr < 0) break;
            row_swap(t, pr);
            col_swap(t, pc);

            bool clean = false;
            while (!clean) {
                clean = true;
                for (int i = t + 1; i < rows; ++i) {
                    if (m.at(i, t) == 0) continue;
                    Int q = zz.quot_round(m.at(i, t), m.at(t, t));
                    row_axpy(i, t, q);
                    if (m.at(i, t) != 0) {
                        // Remainder is smaller than the pivot: promote it.
                        row_swap(t, i);
                        clean = false;
                    }
                }
                for (int j = t + 1; j < cols; ++j) {
                    if (m.at(t, j) == 0) continue;
                    Int q = zz.quot_round(m.at(t, j), m.at(t, t));
                    col_axpy(j, t, q);
                    if (m.at(t, j) != 0) {
                        col_swap(t, j);
                        clean = false;
                    }
                }
            }
            if (m.at(t, t) < 0) row_negate(t);
            ++t;
        }
        return t;
    };

    res.rank = diagonalize();
    // Enforce the divisibility chain: fold offenders together and rediagonalize.
    // Terminates because each fold strictly decreases an invariant-factor bound.
    while (true) {
        int bad = -1;
        for (int i = 0; i + 1 < res.rank; ++i)
            if (m.at(i + 1, i + 1) % m.at(i, i) != 0) {
                bad = i;
                break;
            }
        if (bad < 0) break;
        col_axpy(bad, bad + 1, Int(-1));
        res.rank = diagonalize();
    }

    res.d = m;
    for (int i = 0; i < res.rank; ++i) res.diag.push_back(m.at(i, i));
    return res;
}

}  // namespace mpss
