#pragma once

#include <functional>
#include <map>
#include <memory>
#include <unordered_map>
#include <vector>

#include "digraph.hpp"
#include "homalg.hpp"

namespace mpss {

// A trail: a tuple of vertices with consecutive entries distinct and each
// reachable from the previous. Degree k = entries-1, length = sum of
// consecutive shortest-path distances.
struct Trail {
    std::vector<int> vertices;
    long long length = 0;

    int degree() const { return int(vertices.size()) - 1; }
    bool operator==(const Trail& o) const { return vertices == o.vertices; }
    bool operator<(const Trail& o) const { return vertices < o.vertices; }
};

std::string trail_str(const std::vector<int>& tuple, const DiGraph& g);

// Signed formal sum of tuples with integer coefficients (boundary values are
// always small integers; rings cast on use).
using FormalSum = std::vector<std::pair<std::vector<int>, int>>;

// Normalize: sort by tuple, combine, drop zeros.
FormalSum normalize_sum(FormalSum s);

enum class ComplexMode { full_rc, mc_graded, relative, op };

// All trails of a graph up to degree and length bounds, stored once and
// shared by every complex built over them. Within a (degree, length) cell
// trails are ordered lexicographically by vertex tuple; the per-degree
// column order sorts by (length, tuple) so filtration levels are prefixes.
class TrailStore {
public:
    TrailStore(const DiGraph& g, int k_max, long long l_max);

    const DiGraph& graph() const { return graph_; }
    const DistMatrix& metric() const { return dist_; }
    int k_max() const { return k_max_; }
    long long l_max() const { return l_max_; }

    // (degree, length) cell, lexicographically sorted tuples.
    const std::vector<int>& cell(int k, long long l) const;    // trail ids
    const std::vector<int>& degree_ids(int n) const;           // (length, lex) order
    const Trail& trail(int id) const { return trails_[id]; }
    int id_of(const std::vector<int>& tuple) const;            // -1 if absent

    // Column index of a trail inside its degree block, and block sizes.
    int degree_position(int id) const { return pos_in_degree_[id]; }
    int degree_size(int n) const;
    // Number of degree-n columns of length <= l (columns are length-sorted).
    int filtration_prefix(int n, long long l) const;

    long long tuple_length(const std::vector<int>& tuple) const;

private:
    DiGraph graph_;
    DistMatrix dist_;
    int k_max_;
    long long l_max_;
    std::vector<Trail> trails_;
    std::map<std::pair<int, long long>, std::vector<int>> cells_;
    std::vector<std::vector<int>> by_degree_;
    std::vector<int> pos_in_degree_;
    std::unordered_map<std::string, int> index_;
    std::vector<int> empty_;

    static std::string key(const std::vector<int>& tuple);
};

// Boundary of a tuple in the chosen mode:
//   full_rc   - alternating deletions, consecutive-repeat results dropped;
//   mc_graded - additionally drop any term of smaller length;
//   relative  - full_rc terms lying wholly in the subgraph A dropped.
FormalSum rc_boundary(const std::vector<int>& tuple, const TrailStore& store, ComplexMode mode,
                      const std::vector<char>* in_a = nullptr);

// A filtered chain complex over a trail store: per-degree column spaces in
// filtration order with integer boundary matrices. In relative mode the
// basis omits trails wholly inside A and the boundary is the induced one.
class FilteredComplex {
public:
    // absolute
    FilteredComplex(std::shared_ptr<TrailStore> store, ComplexMode mode);
    // relative: A given as vertex set of the ambient graph; convexity is
    // checked. When require_no_entry is set, additionally verifies that no
    // edge enters A from outside (the condition that splits the sequence of
    // the pair).
    FilteredComplex(std::shared_ptr<TrailStore> store, const std::vector<int>& a_vertices,
                    bool require_no_entry);

    ComplexMode mode() const { return mode_; }
    const TrailStore& store() const { return *store_; }
    int k_max() const { return store_->k_max(); }
    long long l_max() const { return store_->l_max(); }

    // Columns of degree n in filtration order: trail ids.
    const std::vector<int>& columns(int n) const { return columns_[n]; }
    int dim(int n) const { return int(columns_[n].size()); }
    // Number of degree-n columns with length <= l.
    int prefix(int n, long long l) const;
    // Boundary matrix d_n : C_n -> C_{n-1} with integer entries.
    const SparseMat<RingZ>& boundary(int n) const { return boundary_[n]; }
    // Column position of a trail id in its degree block; -1 if absent.
    int position(int id) const;

    bool is_relative() const { return mode_ == ComplexMode::relative; }
    const std::vector<char>& in_a_mask() const { return in_a_; }

    // Splitting of MC(X) -> MC(A) by last-entry membership (available when
    // built with require_no_entry): maps an absolute trail id to true when
    // the splitting projects it into MC(A).
    bool splits_to_a(int trail_id) const;
    bool no_entry_verified() const { return no_entry_; }

    // Chain vector helpers: formal sum -> column vector of degree n.
    template <class R>
    SparseVec<R> vector_of(const FormalSum& sum, int n, const R& ring) const {
        SparseVec<R> v;
        std::map<int, typename R::Elem> acc;
        for (const auto& [tuple, coef] : sum) {
            if (int(tuple.size()) - 1 != n) throw contract_error("vector_of: degree mismatch");
            int id = store_->id_of(tuple);
            if (id < 0) throw contract_error("vector_of: tuple outside the enumerated window");
            int pos = position(id);
            if (pos < 0) continue;  // relative mode: trail inside A
            auto it = acc.find(pos);
            if (it == acc.end())
                acc.emplace(pos, ring.from_int(coef));
            else
                it->second = ring.add(it->second, ring.from_int(coef));
        }
        for (auto& [i, c] : acc)
            if (!ring.is_zero(c)) v.push(i, std::move(c));
        return v;
    }

    template <class R>
    SparseMat<R> boundary_as(int n, const R& ring) const {
        const auto& b = boundary(n);
        SparseMat<R> m(b.rows, b.ncols());
        for (int j = 0; j < b.ncols(); ++j)
            for (const auto& [i, v] : b.cols[j].e)
                m.cols[j].push(i, ring.from_int(int(v.template convert_to<long long>())));
        return m;
    }

    // MC-mode block of the boundary: rows and columns of the given length.
    SparseMat<RingZ> mc_block(int n, long long l) const;

private:
    std::shared_ptr<TrailStore> store_;
    ComplexMode mode_;
    std::vector<std::vector<int>> columns_;
    std::vector<std::vector<int>> prefix_;  // per degree, per length 0..l_max
    std::vector<SparseMat<RingZ>> boundary_;
    std::vector<int> position_;  // trail id -> column position (-1 if absent)
    std::vector<char> in_a_;
    bool no_entry_ = false;

    void build_columns();
    void build_boundaries();
};

// Graded basis view per the enumerate_trails operation.
struct GradedBasis {
    std::shared_ptr<TrailStore> store;
    const std::vector<int>& cell(int k, long long l) const { return store->cell(k, l); }
};

GradedBasis enumerate_trails(const DiGraph& g, int k_max, long long l_max);

// The magnitude complex of G at a single length l: bases for k = 0..l and
// the length-preserving differential. d o d = 0 is asserted on construction.
struct MagnitudeComplex {
    long long l = 0;
    std::shared_ptr<TrailStore> store;
    std::vector<std::vector<int>> basis;       // per degree k: trail ids (lex)
    std::vector<SparseMat<RingZ>> d;           // d[k] : MC_k -> MC_{k-1}
};

MagnitudeComplex magnitude_complex(const DiGraph& g, long long l);

template <class R>
std::map<std::pair<int, long long>, HomologyGroup> magnitude_homology(const DiGraph& g,
                                                                      long long l_max,
                                                                      const R& ring,
                                                                      int threads = 1);

// Relative complex of the pair (X, A). A must be induced and convex.
FilteredComplex relative_complex(const DiGraph& x, const std::vector<int>& a_vertices,
                                 long long l_max, bool require_no_entry = false);

// Per-(start, end) summands of the magnitude complex at length l.
std::map<std::pair<int, int>, MagnitudeComplex> endpoint_decomposition(const DiGraph& g,
                                                                       long long l);

// Ordered partitions of l with parts < m; the differential sums adjacent
// parts, dropping terms at or over the threshold.
struct OrderedPartition {
    std::vector<int> parts;
    bool operator<(const OrderedPartition& o) const { return parts < o.parts; }
    bool operator==(const OrderedPartition& o) const { return parts == o.parts; }
};

struct OPComplex {
    long long l = 0;
    int m = 0;
    std::vector<std::vector<OrderedPartition>> basis;  // per degree k (lex order)
    std::vector<SparseMat<RingZ>> d;                   // d[k] : OP_k -> OP_{k-1}
};

OPComplex op_complex(long long l, int m);

template <class R>
std::map<int, HomologyGroup> op_homology(long long l, int m, const R& ring);

// Deterministic cell-parallel driver: results are indexed, assembly ordered.
void run_cells(size_t count, int threads, const std::function<void(size_t)>& work);

// ---------------------------------------------------------------------------

template <class R>
std::map<std::pair<int, long long>, HomologyGroup> magnitude_homology(const DiGraph& g,
                                                                      long long l_max,
                                                                      const R& ring,
                                                                      int threads) {
    std::map<std::pair<int, long long>, HomologyGroup> out;
    std::vector<MagnitudeComplex> mcs;
    for (long long l = 0; l <= l_max; ++l) mcs.push_back(magnitude_complex(g, l));

    struct Cell {
        int k;
        long long l;
    };
    std::vector<Cell> cells;
    for (long long l = 0; l <= l_max; ++l)
        for (int k = 0; k <= int(l); ++k) cells.push_back({k, l});
    std::vector<HomologyGroup> results(cells.size());

    auto work = [&](size_t idx) {
        const auto& mc = mcs[cells[idx].l];
        int k = cells[idx].k;
        SparseMat<R> dk = [&] {
            if (k == 0) return SparseMat<R>(0, int(mc.basis[0].size()));
            SparseMat<R> m(int(mc.basis[k - 1].size()), int(mc.basis[k].size()));
            for (int j = 0; j < int(mc.d[k].ncols()); ++j)
                for (const auto& [i, v] : mc.d[k].cols[j].e)
                    m.cols[j].push(i, ring.from_int(int(v.template convert_to<long long>())));
            return m;
        }();
        SparseMat<R> dk1 = [&] {
            if (k + 1 >= int(mc.basis.size()))
                return SparseMat<R>(int(mc.basis[k].size()), 0);
            SparseMat<R> m(int(mc.basis[k].size()), int(mc.basis[k + 1].size()));
            for (int j = 0; j < int(mc.d[k + 1].ncols()); ++j)
                for (const auto& [i, v] : mc.d[k + 1].cols[j].e)
                    m.cols[j].push(i, ring.from_int(int(v.template convert_to<long long>())));
            return m;
        }();
        results[idx] = homology_of_pair(dk, dk1, ring);
    };
    run_cells(cells.size(), threads, work);
    for (size_t i = 0; i < cells.size(); ++i) out[{cells[i].k, cells[i].l}] = results[i];
    return out;
}

template <class R>
std::map<int, HomologyGroup> op_homology(long long l, int m, const R& ring) {
    auto c = op_complex(l, m);
    std::map<int, HomologyGroup> out;
    for (int k = 0; k < int(c.basis.size()); ++k) {
        SparseMat<R> dk(k == 0 ? 0 : int(c.basis[k - 1].size()), int(c.basis[k].size()));
        if (k > 0)
            for (int j = 0; j < c.d[k].ncols(); ++j)
                for (const auto& [i, v] : c.d[k].cols[j].e)
                    dk.cols[j].push(i, ring.from_int(int(v.template convert_to<long long>())));
        SparseMat<R> dk1(int(c.basis[k].size()),
                         k + 1 < int(c.basis.size()) ? int(c.basis[k + 1].size()) : 0);
        if (k + 1 < int(c.basis.size()))
            for (int j = 0; j < c.d[k + 1].ncols(); ++j)
                for (const auto& [i, v] : c.d[k + 1].cols[j].e)
                    dk1.cols[j].push(i, ring.from_int(int(v.template convert_to<long long>())));
        out[k] = homology_of_pair(dk, dk1, ring);
    }
    return out;
}

// JSON bundle of a complex (bases as vertex tuples, differentials as sparse
// triplets), for cross-checking against other tools.
std::string complex_to_json(const FilteredComplex& c);

}  // namespace mpss
