#pragma once

#include <optional>
#include <string>
#include <vector>

#include "sparse.hpp"

namespace mpss {

// A finitely generated module over Z, Q or F_p, reported as a free rank plus
// an ordered list of torsion coefficients d1 | d2 | ... (each > 1, empty over
// a field).
struct HomologyGroup {
    long long free_rank = 0;
    std::vector<Int> torsion;

    bool is_zero() const { return free_rank == 0 && torsion.empty(); }
    bool operator==(const HomologyGroup& o) const {
        return free_rank == o.free_rank && torsion == o.torsion;
    }
    bool operator!=(const HomologyGroup& o) const { return !(*this == o); }

    std::string str() const {
        std::string s = "rank " + std::to_string(free_rank);
        if (!torsion.empty()) {
            s += " + [";
            for (size_t i = 0; i < torsion.size(); ++i)
                s += (i ? "," : "") + torsion[i].str();
            s += "]";
        }
        return s;
    }
};

inline HomologyGroup group_from_diag(long long free_rank, const std::vector<Int>& diag) {
    HomologyGroup g;
    g.free_rank = free_rank;
    for (const auto& d : diag)
        if (abs(d) > 1) g.torsion.push_back(abs(d));
    return g;
}

// Direct sum, tensor and Tor of finitely generated abelian groups, used by
// the Kunneth bookkeeping over Z.
inline HomologyGroup ab_direct_sum(const HomologyGroup& a, const HomologyGroup& b) {
    std::vector<Int> d = a.torsion;
    d.insert(d.end(), b.torsion.begin(), b.torsion.end());
    HomologyGroup g = group_from_diag(a.free_rank + b.free_rank, divisibility_chain(d));
    return g;
}

inline HomologyGroup ab_tensor(const HomologyGroup& a, const HomologyGroup& b) {
    std::vector<Int> d;
    for (const auto& x : a.torsion)
        for (long long i = 0; i < b.free_rank; ++i) d.push_back(x);
    for (const auto& y : b.torsion)
        for (long long i = 0; i < a.free_rank; ++i) d.push_back(y);
    for (const auto& x : a.torsion)
        for (const auto& y : b.torsion) d.push_back(gcd(x, y));
    return group_from_diag(a.free_rank * b.free_rank, divisibility_chain(d));
}

inline HomologyGroup ab_tor(const HomologyGroup& a, const HomologyGroup& b) {
    std::vector<Int> d;
    for (const auto& x : a.torsion)
        for (const auto& y : b.torsion) d.push_back(gcd(x, y));
    return group_from_diag(0, divisibility_chain(d));
}

// ---------------------------------------------------------------------------
// homology_of_pair: ker(d_k) / im(d_{k+1}) for a composable pair of maps of
// free modules (d_k: R^n -> R^m, d_{k+1}: R^p -> R^n). The composite is
// checked to vanish. Over a field this is rank arithmetic; over Z the kernel
// is saturated in R^n, so the torsion of the quotient equals that of
// R^n / im(d_{k+1}).
// ---------------------------------------------------------------------------

template <class R>
HomologyGroup homology_of_pair(const SparseMat<R>& dk, const SparseMat<R>& dk1,
                               const R& ring) {
    if (dk.ncols() != dk1.rows)
        throw contract_error("homology_of_pair: shape mismatch");
    if (!sparse_is_zero(sparse_mul(dk, dk1, ring)))
        throw contract_error("homology_of_pair: composite differential is nonzero");
    int n = dk.ncols();
    int rank_out = sparse_rank(dk, ring);
    int rank_in = sparse_rank(dk1, ring);
    HomologyGroup g;
    g.free_rank = n - rank_out - rank_in;
    if constexpr (!R::is_field) {
        auto diag = smith_diagonal_sparse(dk1);
        for (const auto& d : diag)
            if (d > 1) g.torsion.push_back(d);
    }
    return g;
}

// ---------------------------------------------------------------------------
// Subquotient span(Z) / span(B) of the free module R^ambient. The Z-span is
// kept as an echelonized basis L; relations are the coordinates of the B
// generators in that basis, also echelonized, so classes have canonical
// residues. Generator data (an explicit basis of the quotient with ambient
// lifts) is materialized on demand via a dense Smith computation.
// ---------------------------------------------------------------------------

template <class R>
class Subquotient {
public:
    using Elem = typename R::Elem;

    static Subquotient build(int ambient_dim, const SparseMat<R>& z_gens,
                             const SparseMat<R>& b_gens, const R& ring) {
        Subquotient s;
        s.ring_ = ring;
        s.ambient_ = ambient_dim;
        if (z_gens.rows != ambient_dim || (b_gens.ncols() > 0 && b_gens.rows != ambient_dim))
            throw contract_error("subquotient: ambient dimension mismatch");
        s.lattice_ = echelonize(z_gens, ring);
        SparseMat<R> rel_coords(s.lattice_.dim(), 0);
        for (int j = 0; j < b_gens.ncols(); ++j) {
            auto c = echelon_solve(s.lattice_, b_gens.cols[j], ring);
            if (!c) throw contract_error("subquotient: B generators not contained in span(Z)");
            SparseVec<R> cv;
            for (int i = 0; i < int(c->size()); ++i)
                if (!ring.is_zero((*c)[i])) cv.push(i, (*c)[i]);
            rel_coords.cols.push_back(std::move(cv));
        }
        s.rel_raw_ = std::move(rel_coords);
        if constexpr (R::is_field) {
            s.group_.free_rank = s.lattice_.dim() - sparse_rank(s.rel_raw_, ring);
        } else {
            auto diag = smith_diagonal_sparse(s.rel_raw_);
            s.group_ = group_from_diag(s.lattice_.dim() - (long long)diag.size(), diag);
        }
        return s;
    }

    const HomologyGroup& group() const { return group_; }
    int lattice_dim() const { return lattice_.dim(); }
    int ambient_dim() const { return ambient_; }

    // Coordinates of an ambient vector in the lattice basis. Fails (nullopt)
    // if the vector is not in span(Z).
    std::optional<std::vector<Elem>> lattice_coords(const SparseVec<R>& v) const {
        return echelon_solve(lattice_, v, ring_);
    }

    // Canonical residue of the class of v: reduce the lattice coordinates
    // modulo the relation span. Classes are equal iff residues are equal.
    std::optional<SparseVec<R>> class_residue(const SparseVec<R>& v) const {
        auto c = lattice_coords(v);
        if (!c) return std::nullopt;
        SparseVec<R> cv;
        for (int i = 0; i < int(c->size()); ++i)
            if (!ring_.is_zero((*c)[i])) cv.push(i, (*c)[i]);
        return echelon_residue(relations(), cv, ring_);
    }

    bool is_zero_class(const SparseVec<R>& v) const {
        auto r = class_residue(v);
        if (!r) throw contract_error("is_zero_class: vector not in span(Z)");
        return r->empty();
    }

    // Residue of a vector already written in lattice coordinates.
    SparseVec<R> residue_of_coords(const SparseVec<R>& coords) const {
        return echelon_residue(relations(), coords, ring_);
    }

    const Echelon<R>& lattice() const { return lattice_; }
    const SparseMat<R>& relation_coords() const { return rel_raw_; }
    const Echelon<R>& relations() const {
        if (!relations_) relations_ = echelonize(rel_raw_, ring_);
        return *relations_;
    }

    // --- generator data (dense, on demand) --------------------------------

    // Ambient lifts of a chosen basis of the quotient: free generators first,
    // then torsion generators in divisibility order (Z only).
    struct Generators {
        std::vector<SparseVec<R>> lifts;           // free then torsion
        std::vector<Int> orders;                   // 0 for free, d_i>1 for torsion
        // Map lattice coordinates to coordinates in this generator basis.
        DenseMat<R> coord_map;                     // (free+torsion) x lattice_dim
    };

    const Generators& generators() const {
        if (!gens_) gens_ = materialize();
        return *gens_;
    }

    // Coordinates of the class of v in the generator basis (torsion entries
    // reduced mod their order). Throws if v not in span(Z).
    std::vector<Elem> generator_coords(const SparseVec<R>& v) const {
        auto c = lattice_coords(v);
        if (!c) throw contract_error("generator_coords: vector not in span(Z)");
        const auto& g = generators();
        std::vector<Elem> out(g.lifts.size(), ring_.zero());
        for (size_t i = 0; i < g.lifts.size(); ++i) {
            Elem s = ring_.zero();
            for (int j = 0; j < int(c->size()); ++j)
                s = ring_.add(s, ring_.mul(g.coord_map.at(int(i), j), (*c)[j]));
            if constexpr (!R::is_field) {
                if (g.orders[i] > 1) {
                    s = s % g.orders[i];
                    if (s < 0) s += g.orders[i];
                }
            }
            out[i] = s;
        }
        return out;
    }

private:
    R ring_{};
    int ambient_ = 0;
    Echelon<R> lattice_;
    mutable std::optional<Echelon<R>> relations_;  // built on first class query
    SparseMat<R> rel_raw_;
    HomologyGroup group_;
    mutable std::optional<Generators> gens_;

    Generators materialize() const {
        Generators g;
        int s = lattice_.dim();
        if constexpr (R::is_field) {
            // Quotient basis: lattice basis vectors whose coordinate is not a
            // pivot row of the relation echelon.
            std::vector<char> is_rel_low(s, 0);
            for (const auto& [l, j] : relations().col_of_low) is_rel_low[l] = 1;
            g.coord_map = DenseMat<R>(int(group_.free_rank), s, ring_);
            std::vector<int> out_row_of(s, -1);
            int row = 0;
            for (int i = 0; i < s; ++i) {
                if (is_rel_low[i]) continue;
                g.lifts.push_back(lattice_.basis.cols[i]);
                g.orders.push_back(0);
                out_row_of[i] = row++;
            }
            // coord_map: residue projection, one unit vector at a time. Over
            // a field residues are supported on non-pivot rows only.
            for (int i = 0; i < s; ++i) {
                SparseVec<R> ei;
                ei.push(i, ring_.one());
                auto r = echelon_residue(relations(), ei, ring_);
                for (const auto& [ri, rv] : r.e) g.coord_map.at(out_row_of[ri], i) = rv;
            }
        } else {
            // Dense Smith of the relation coordinate matrix: U*C*V = D. In the
            // transformed basis y = U*x of the lattice coordinates the
            // quotient is a direct sum of Z/d_i (d_i > 1) and free lines.
            DenseMat<RingZ> c(s, std::max(rel_raw_.ncols(), 0), ring_);
            for (int j = 0; j < rel_raw_.ncols(); ++j)
                for (const auto& [i, v] : rel_raw_.cols[j].e) c.at(i, j) = v;
            auto sm = smith_normal_form(std::move(c), true);
            // Generator i corresponds to row i of U (column i of Uinv).
            std::vector<int> free_rows, tors_rows;
            for (int i = 0; i < s; ++i) {
                if (i < sm.rank) {
                    if (sm.d.at(i, i) > 1) tors_rows.push_back(i);
                } else {
                    free_rows.push_back(i);
                }
            }
            std::vector<int> order_rows = free_rows;
            order_rows.insert(order_rows.end(), tors_rows.begin(), tors_rows.end());
            g.coord_map = DenseMat<R>(int(order_rows.size()), s, ring_);
            for (size_t i = 0; i < order_rows.size(); ++i) {
                for (int j = 0; j < s; ++j) g.coord_map.at(int(i), j) = sm.u.at(order_rows[i], j);
                g.orders.push_back(order_rows[i] < sm.rank ? sm.d.at(order_rows[i], order_rows[i])
                                                           : Int(0));
                // Lift: lattice basis combined with column order_rows[i] of Uinv.
                SparseVec<R> lift;
                for (int t = 0; t < s; ++t) {
                    const Elem& coef = sm.uinv.at(t, order_rows[i]);
                    if (!ring_.is_zero(coef)) sv_axpy(lift, coef, lattice_.basis.cols[t], ring_);
                }
                g.lifts.push_back(std::move(lift));
            }
        }
        return g;
    }
};

// Debug serialization: {"rows":r,"cols":c,"entries":[[..],..]}.
template <class R>
std::string dense_to_json(const DenseMat<R>& m, const R& ring) {
    std::string s = "{\"rows\":" + std::to_string(m.rows) +
                    ",\"cols\":" + std::to_string(m.cols) + ",\"entries\":[";
    for (int i = 0; i < m.rows; ++i) {
        if (i) s += ",";
        s += "[";
        for (int j = 0; j < m.cols; ++j) {
            if (j) s += ",";
            s += ring.to_string(m.at(i, j));
        }
        s += "]";
    }
    return s + "]}";
}

// A homomorphism between two subquotients induced by an ambient linear map.
// The matrix is expressed on the generator bases of source and target; the
// is_isomorphism verdict is decided exactly.
template <class R>
struct InducedMap {
    DenseMat<R> matrix;     // tgt generators x src generators
    bool well_defined = true;
    bool is_isomorphism = false;
};

template <class R>
InducedMap<R> induced_subquotient_map(const Subquotient<R>& src, const Subquotient<R>& tgt,
                                      const SparseMat<R>& ambient_map, const R& ring) {
    InducedMap<R> out;
    const auto& sg = src.generators();
    const auto& tg = tgt.generators();
    out.matrix = DenseMat<R>(int(tg.lifts.size()), int(sg.lifts.size()), ring);

    // Well-definedness: B generators of the source must land in span(B_tgt),
    // i.e. have zero class in the target. Z-span containment is enforced by
    // the solves below.
    for (int j = 0; j < src.relation_coords().ncols(); ++j) {
        // Reconstruct the ambient B generator from its lattice coordinates.
        SparseVec<R> amb;
        for (const auto& [i, v] : src.relation_coords().cols[j].e)
            sv_axpy(amb, v, src.lattice().basis.cols[i], ring);
        auto img = sparse_apply(ambient_map, amb, ring);
        auto res = tgt.class_residue(img);
        if (!res || !res->empty())
            throw contract_error("induced_subquotient_map: map does not respect relations");
    }

    for (size_t j = 0; j < sg.lifts.size(); ++j) {
        auto img = sparse_apply(ambient_map, sg.lifts[j], ring);
        auto coords = tgt.generator_coords(img);  // throws if not in span(Z_tgt)
        for (size_t i = 0; i < coords.size(); ++i) out.matrix.at(int(i), int(j)) = coords[i];
    }

    // Isomorphism test. Same invariants + surjectivity suffices (finitely
    // generated modules over these rings are Hopfian).
    if (src.group() == tgt.group()) {
        if constexpr (R::is_field) {
            DenseMat<R> m = out.matrix;
            int rk = dense_rref(m, ring);
            out.is_isomorphism = (rk == int(tg.lifts.size()));
        } else {
            // Surjective iff coker(matrix | target relations) = 0.
            int tn = int(tg.lifts.size());
            int extra = 0;
            for (int i = 0; i < tn; ++i)
                if (tg.orders[i] > 1) ++extra;
            DenseMat<RingZ> stack(tn, int(sg.lifts.size()) + extra, ring);
            for (int i = 0; i < tn; ++i)
                for (size_t j = 0; j < sg.lifts.size(); ++j)
                    stack.at(i, int(j)) = out.matrix.at(i, int(j));
            int c = int(sg.lifts.size());
            for (int i = 0; i < tn; ++i)
                if (tg.orders[i] > 1) stack.at(i, c++) = tg.orders[i];
            auto sm = smith_normal_form(std::move(stack), false);
            bool onto = (sm.rank == tn);
            for (const auto& d : sm.diag)
                if (abs(d) != 1) onto = false;
            out.is_isomorphism = onto;
        }
    }
    return out;
}

}  // namespace mpss
