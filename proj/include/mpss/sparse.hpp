#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <unordered_map>
#include <vector>

#include "dense.hpp"
#include "rings.hpp"

namespace mpss {

// Sparse column vector, entries sorted by row index.
template <class R>
struct SparseVec {
    using Elem = typename R::Elem;
    std::vector<std::pair<int, Elem>> e;

    bool empty() const { return e.empty(); }
    int low() const { return e.empty() ? -1 : e.back().first; }
    const Elem& low_entry() const { return e.back().second; }
    size_t nnz() const { return e.size(); }

    void push(int row, Elem v) { e.emplace_back(row, std::move(v)); }

    typename R::Elem at(int row, const R& ring) const {
        auto it = std::lower_bound(e.begin(), e.end(), row,
                                   [](const auto& p, int r) { return p.first < r; });
        if (it != e.end() && it->first == row) return it->second;
        return ring.zero();
    }
};

// dst += c * src
template <class R>
void sv_axpy(SparseVec<R>& dst, const typename R::Elem& c, const SparseVec<R>& src,
             const R& ring) {
    if (ring.is_zero(c) || src.empty()) return;
    SparseVec<R> out;
    out.e.reserve(dst.e.size() + src.e.size());
    size_t i = 0, j = 0;
    while (i < dst.e.size() || j < src.e.size()) {
        if (j >= src.e.size() || (i < dst.e.size() && dst.e[i].first < src.e[j].first)) {
            out.e.push_back(dst.e[i++]);
        } else if (i >= dst.e.size() || dst.e[i].first > src.e[j].first) {
            out.push(src.e[j].first, ring.mul(c, src.e[j].second));
            ++j;
        } else {
            auto v = ring.add(dst.e[i].second, ring.mul(c, src.e[j].second));
            if (!ring.is_zero(v)) out.push(dst.e[i].first, std::move(v));
            ++i;
            ++j;
        }
    }
    dst.e = std::move(out.e);
}

template <class R>
void sv_scale(SparseVec<R>& v, const typename R::Elem& c, const R& ring) {
    if (ring.is_zero(c)) {
        v.e.clear();
        return;
    }
    for (auto& p : v.e) p.second = ring.mul(p.second, c);
}

// Sparse column-major matrix.
template <class R>
struct SparseMat {
    using Elem = typename R::Elem;
    int rows = 0;
    std::vector<SparseVec<R>> cols;

    SparseMat() = default;
    SparseMat(int r, int c) : rows(r), cols(c) {}

    int ncols() const { return int(cols.size()); }

    static SparseMat identity(int n, const R& ring) {
        SparseMat m(n, n);
        for (int i = 0; i < n; ++i) m.cols[i].push(i, ring.one());
        return m;
    }

    DenseMat<R> to_dense(const R& ring) const {
        DenseMat<R> d(rows, ncols(), ring);
        for (int j = 0; j < ncols(); ++j)
            for (const auto& [i, v] : cols[j].e) d.at(i, j) = v;
        return d;
    }
};

template <class R>
SparseMat<R> sparse_from_dense(const DenseMat<R>& d, const R& ring) {
    SparseMat<R> m(d.rows, d.cols);
    for (int j = 0; j < d.cols; ++j)
        for (int i = 0; i < d.rows; ++i)
            if (!ring.is_zero(d.at(i, j))) m.cols[j].push(i, d.at(i, j));
    return m;
}

// C = A * B
template <class R>
SparseMat<R> sparse_mul(const SparseMat<R>& a, const SparseMat<R>& b, const R& ring) {
    if (a.ncols() != b.rows) throw contract_error("sparse_mul: shape mismatch");
    SparseMat<R> c(a.rows, b.ncols());
    for (int j = 0; j < b.ncols(); ++j) {
        std::map<int, typename R::Elem> acc;
        for (const auto& [k, bv] : b.cols[j].e)
            for (const auto& [i, av] : a.cols[k].e) {
                auto it = acc.find(i);
                if (it == acc.end())
                    acc.emplace(i, ring.mul(av, bv));
                else
                    it->second = ring.add(it->second, ring.mul(av, bv));
            }
        for (auto& [i, v] : acc)
            if (!ring.is_zero(v)) c.cols[j].push(i, std::move(v));
    }
    return c;
}

template <class R>
SparseVec<R> sparse_apply(const SparseMat<R>& a, const SparseVec<R>& x, const R& ring) {
    std::map<int, typename R::Elem> acc;
    for (const auto& [k, xv] : x.e) {
        if (k >= a.ncols()) throw contract_error("sparse_apply: index out of range");
        for (const auto& [i, av] : a.cols[k].e) {
            auto it = acc.find(i);
            if (it == acc.end())
                acc.emplace(i, ring.mul(av, xv));
            else
                it->second = ring.add(it->second, ring.mul(av, xv));
        }
    }
    SparseVec<R> r;
    for (auto& [i, v] : acc)
        if (!ring.is_zero(v)) r.push(i, std::move(v));
    return r;
}

template <class R>
bool sparse_is_zero(const SparseMat<R>& m) {
    for (const auto& c : m.cols)
        if (!c.empty()) return false;
    return true;
}

// ---------------------------------------------------------------------------
// Low-based column elimination. Processes rows from the highest index down;
// at each row, all active columns whose lowest entry sits in that row are
// combined until at most one remains nonzero there, which is then frozen as a
// pivot. Over Z the combination is euclidean (smallest entry reduces the
// others), over a field a single pass eliminates. All operations are column
// operations, invertible over the ring, so the column span (the lattice, over
// Z) is preserved. Deterministic by construction.
// ---------------------------------------------------------------------------

template <class R>
struct Elimination {
    SparseMat<R> m;                 // columns after reduction
    SparseMat<R> v;                 // transform, if tracked: m = original * v
    std::vector<char> is_pivot;     // per column
    int rank = 0;
    bool tracked = false;
};

template <class R>
Elimination<R> column_eliminate(SparseMat<R> m, const R& ring, bool track) {
    Elimination<R> res;
    const int ncols = m.ncols();
    SparseMat<R> v;
    if (track) v = SparseMat<R>::identity(ncols, ring);
    std::vector<char> pivot(ncols, 0);

    std::vector<std::vector<int>> by_low(std::max(m.rows, 1));
    for (int j = 0; j < ncols; ++j)
        if (!m.cols[j].empty()) by_low[m.cols[j].low()].push_back(j);

    auto col_axpy_both = [&](int dst, const typename R::Elem& c, int src) {
        sv_axpy(m.cols[dst], c, m.cols[src], ring);
        if (track) sv_axpy(v.cols[dst], c, v.cols[src], ring);
    };

    for (int row = m.rows - 1; row >= 0; --row) {
        // Gather live candidates whose current low is exactly this row.
        std::vector<int> cand;
        for (int j : by_low[row])
            if (!pivot[j] && !m.cols[j].empty() && m.cols[j].low() == row)
                cand.push_back(j);
        by_low[row].clear();
        if (cand.empty()) continue;
        std::sort(cand.begin(), cand.end());
        cand.erase(std::unique(cand.begin(), cand.end()), cand.end());

        if constexpr (R::is_field) {
            // Pick pivot: fewest nonzeros, ties by lowest column index.
            int piv = cand[0];
            for (int j : cand)
                if (m.cols[j].nnz() < m.cols[piv].nnz() ||
                    (m.cols[j].nnz() == m.cols[piv].nnz() && j < piv))
                    piv = j;
            auto piv_inv = ring.inv(m.cols[piv].low_entry());
            for (int j : cand) {
                if (j == piv) continue;
                auto c = ring.neg(ring.mul(m.cols[j].low_entry(), piv_inv));
                col_axpy_both(j, c, piv);
                if (!m.cols[j].empty()) by_low[m.cols[j].low()].push_back(j);
            }
            pivot[piv] = 1;
            ++res.rank;
        } else {
            // Euclidean passes: reduce everything by the smallest low entry
            // until a single column remains nonzero in this row.
            while (cand.size() > 1) {
                int piv = cand[0];
                for (int j : cand) {
                    const auto &ej = m.cols[j].low_entry(), &ep = m.cols[piv].low_entry();
                    Int aj = abs(ej), ap = abs(ep);
                    if (aj < ap || (aj == ap && j < piv)) piv = j;
                }
                std::vector<int> next;
                next.push_back(piv);
                for (int j : cand) {
                    if (j == piv) continue;
                    Int q = ring.quot_round(m.cols[j].low_entry(), m.cols[piv].low_entry());
                    col_axpy_both(j, ring.neg(q), piv);
                    if (m.cols[j].empty())
                        continue;
                    else if (m.cols[j].low() == row)
                        next.push_back(j);
                    else
                        by_low[m.cols[j].low()].push_back(j);
                }
                std::sort(next.begin(), next.end());
                cand = std::move(next);
            }
            pivot[cand[0]] = 1;
            ++res.rank;
        }
    }

    res.m = std::move(m);
    res.v = std::move(v);
    res.is_pivot = std::move(pivot);
    res.tracked = track;
    return res;
}

template <class R>
int sparse_rank(const SparseMat<R>& m, const R& ring) {
    return column_eliminate(m, ring, false).rank;
}

// Basis of the (right) kernel. Over Z this is a basis of the full kernel
// lattice, which is automatically saturated.
template <class R>
SparseMat<R> kernel_basis(const SparseMat<R>& m, const R& ring) {
    auto el = column_eliminate(m, ring, true);
    SparseMat<R> k(m.ncols(), 0);
    for (int j = 0; j < m.ncols(); ++j)
        if (el.m.cols[j].empty()) k.cols.push_back(std::move(el.v.cols[j]));
    return k;
}

// ---------------------------------------------------------------------------
// Echelon form of a column span: columns with pairwise distinct lows, fully
// reduced (entries sitting in another pivot's low row are normalized: zero
// over a field, representatives in [0, pivot) over Z). Supports membership
// tests, solves and canonical residues modulo the span.
// ---------------------------------------------------------------------------

template <class R>
struct Echelon {
    using Elem = typename R::Elem;
    SparseMat<R> basis;                      // ascending low order
    std::unordered_map<int, int> col_of_low; // row -> basis column

    const R* ring = nullptr;
    int ambient_rows = 0;

    int dim() const { return basis.ncols(); }
};

template <class R>
Echelon<R> echelonize(const SparseMat<R>& gens, const R& ring) {
    auto el = column_eliminate(gens, ring, false);
    std::vector<SparseVec<R>> keep;
    for (int j = 0; j < el.m.ncols(); ++j)
        if (!el.m.cols[j].empty()) keep.push_back(std::move(el.m.cols[j]));
    std::sort(keep.begin(), keep.end(),
              [](const SparseVec<R>& a, const SparseVec<R>& b) { return a.low() < b.low(); });

    Echelon<R> e;
    e.ring = &ring;
    e.ambient_rows = gens.rows;
    e.basis.rows = gens.rows;
    e.basis.cols = std::move(keep);
    // Normalize pivots: positive over Z, unit over a field. Needed for
    // canonical residues.
    for (auto& c : e.basis.cols) {
        if constexpr (R::is_field) {
            sv_scale(c, ring.inv(c.low_entry()), ring);
        } else {
            if (c.low_entry() < 0) sv_scale(c, ring.from_int(-1), ring);
        }
    }
    for (int j = 0; j < e.basis.ncols(); ++j) e.col_of_low[e.basis.cols[j].low()] = j;

    // Full reduction pass, highest low first: normalize entries of each
    // column that lie in the low row of an earlier column.
    for (int j = e.basis.ncols() - 1; j >= 0; --j) {
        for (int t = j - 1; t >= 0; --t) {
            int l = e.basis.cols[t].low();
            auto val = e.basis.cols[j].at(l, ring);
            if (ring.is_zero(val)) continue;
            typename R::Elem q;
            if constexpr (R::is_field)
                q = ring.div(val, e.basis.cols[t].low_entry());
            else
                q = ring.quot_floor(val, e.basis.cols[t].low_entry());
            sv_axpy(e.basis.cols[j], ring.neg(q), e.basis.cols[t], ring);
        }
    }
    return e;
}

// Reduce v modulo the span: returns the canonical residue. If coords is
// non-null, accumulates the coefficients used (v = basis * coords + residue).
// Over Z, entries in pivot rows are reduced into [0, pivot); membership in
// the lattice therefore corresponds to a zero residue.
template <class R>
SparseVec<R> echelon_residue(const Echelon<R>& e, SparseVec<R> v, const R& ring,
                             std::vector<typename R::Elem>* coords = nullptr) {
    if (coords) coords->assign(e.dim(), ring.zero());
    SparseVec<R> rem;
    while (!v.empty()) {
        int l = v.low();
        auto it = e.col_of_low.find(l);
        if (it == e.col_of_low.end()) {
            rem.e.push_back(v.e.back());
            v.e.pop_back();
            continue;
        }
        int j = it->second;
        typename R::Elem q;
        if constexpr (R::is_field)
            q = ring.div(v.low_entry(), e.basis.cols[j].low_entry());
        else
            q = ring.quot_floor(v.low_entry(), e.basis.cols[j].low_entry());
        if (!ring.is_zero(q)) {
            sv_axpy(v, ring.neg(q), e.basis.cols[j], ring);
            if (coords) (*coords)[j] = ring.add((*coords)[j], q);
        }
        if (!v.empty() && v.low() == l) {
            // Nonzero remainder in a pivot row (Z only): canonical, keep it.
            rem.e.push_back(v.e.back());
            v.e.pop_back();
        }
    }
    std::reverse(rem.e.begin(), rem.e.end());
    return rem;
}

// Exact solve: coordinates of v in the span, or nullopt if not a member.
template <class R>
std::optional<std::vector<typename R::Elem>> echelon_solve(const Echelon<R>& e,
                                                           const SparseVec<R>& v,
                                                           const R& ring) {
    std::vector<typename R::Elem> coords;
    auto rem = echelon_residue(e, v, ring, &coords);
    if (!rem.empty()) return std::nullopt;
    return coords;
}

// ---------------------------------------------------------------------------
// Diagonal of the Smith normal form of a sparse integer matrix, without
// transforms. Unit pivots are peeled off cheaply (clearing a pivot row by
// column operations; the implicit row operations that clear the pivot column
// touch nothing else once the row is clear), the remaining core is handled
// densely. Only the multiset of invariant factors is returned; it is unique,
// so no pivot-rule knob is needed here.
// ---------------------------------------------------------------------------

inline std::vector<Int> divisibility_chain(std::vector<Int> d) {
    for (auto& x : d) x = abs(x);
    d.erase(std::remove_if(d.begin(), d.end(), [](const Int& x) { return x == 0; }), d.end());
    bool changed = true;
    while (changed) {
        changed = false;
        for (size_t i = 0; i + 1 < d.size(); ++i)
            for (size_t j = i + 1; j < d.size(); ++j) {
                if (d[j] % d[i] == 0) continue;
                Int g = gcd(d[i], d[j]);
                d[j] = d[i] / g * d[j];
                d[i] = g;
                changed = true;
            }
    }
    std::sort(d.begin(), d.end());
    return d;
}

inline std::vector<Int> smith_diagonal_sparse(const SparseMat<RingZ>& m0) {
    RingZ zz;
    // Column-major working copy with per-row occupancy.
    std::vector<std::map<int, Int>> col(m0.ncols());
    std::vector<std::map<int, char>> row_cols(m0.rows);
    for (int j = 0; j < m0.ncols(); ++j)
        for (const auto& [i, val] : m0.cols[j].e) {
            col[j].emplace(i, val);
            row_cols[i].emplace(j, 1);
        }
    std::vector<char> row_dead(m0.rows, 0), col_dead(m0.ncols(), 0);
    std::vector<Int> diag;

    auto set_entry = [&](int i, int j, Int v) {
        if (v == 0) {
            col[j].erase(i);
            row_cols[i].erase(j);
        } else {
            col[j][i] = std::move(v);
            row_cols[i].emplace(j, 1);
        }
    };

    // Peel unit pivots, queue-driven.
    std::vector<int> queue;
    std::vector<char> queued(m0.ncols(), 0);
    for (int j = 0; j < m0.ncols(); ++j) {
        queue.push_back(j);
        queued[j] = 1;
    }
    for (size_t qi = 0; qi < queue.size(); ++qi) {
        int j = queue[qi];
        queued[j] = 0;
        if (col_dead[j] || col[j].empty()) continue;
        int prow = -1;
        Int piv;
        for (const auto& [i, v] : col[j]) {
            if (row_dead[i]) continue;
            if (abs(v) == 1) {
                prow = i;
                piv = v;
                break;
            }
        }
        if (prow < 0) continue;
        // Pivot (prow, j): clear row prow by column ops, then retire both.
        std::vector<int> touched;
        for (const auto& [j2, mark] : row_cols[prow])
            if (j2 != j && !col_dead[j2]) touched.push_back(j2);
        for (int j2 : touched) {
            Int f = col[j2].at(prow);
            Int q = (piv == 1) ? f : -f;
            // col_j2 -= q * col_j
            for (const auto& [r2, v2] : col[j]) {
                if (row_dead[r2]) continue;
                auto it = col[j2].find(r2);
                Int nv = (it == col[j2].end() ? Int(0) : it->second) - q * v2;
                set_entry(r2, j2, std::move(nv));
            }
            if (!queued[j2]) {
                queue.push_back(j2);
                queued[j2] = 1;
            }
        }
        diag.push_back(1);
        row_dead[prow] = 1;
        col_dead[j] = 1;
        for (const auto& [r2, v2] : col[j]) row_cols[r2].erase(j);
        col[j].clear();
    }

    // Dense core for whatever survives.
    std::vector<int> live_rows, live_cols;
    for (int i = 0; i < m0.rows; ++i)
        if (!row_dead[i] && !row_cols[i].empty()) live_rows.push_back(i);
    for (int j = 0; j < m0.ncols(); ++j)
        if (!col_dead[j] && !col[j].empty()) live_cols.push_back(j);
    if (!live_cols.empty() && !live_rows.empty()) {
        std::unordered_map<int, int> rix;
        for (size_t i = 0; i < live_rows.size(); ++i) rix[live_rows[i]] = int(i);
        DenseMat<RingZ> core(int(live_rows.size()), int(live_cols.size()), zz);
        for (size_t j = 0; j < live_cols.size(); ++j)
            for (const auto& [i, v] : col[live_cols[j]])
                if (!row_dead[i]) core.at(rix[i], int(j)) = v;
        auto s = smith_normal_form(std::move(core), false);
        for (const auto& d : s.diag) diag.push_back(d);
    }
    return divisibility_chain(std::move(diag));
}

}  // namespace mpss
