#pragma once

#include <memory>
#include <mutex>
#include <set>
#include <tuple>

#include "chains.hpp"

namespace mpss {

// Ring-erased summaries used by reports and the CLI.
struct EntrySummary {
    int p = 0, q = 0;
    HomologyGroup group;
    bool exact = true;
    std::vector<std::string> representatives;  // optional, human-readable chains
};

struct PageSummary {
    int r = 0;
    long long l_max = 0;
    std::vector<EntrySummary> entries;  // sorted by (p, q); nonzero or inexact
};

// ---------------------------------------------------------------------------
// The spectral sequence of the length-filtered complex. Entry (p,q) on page r
// is presented as the subquotient
//     Z^r_{p,q} / ( Z^{r-1}_{p-1,q+1} + d Z^{r-1}_{p+r-1,q-r+2} ),
// where Z^r_{p,q} = { x in F_p C_{p+q} : dx in F_{p-r} }. The Z^r are
// computed as incremental kernel towers: passing from level r to r+1 kills
// the boundary rows of length exactly p-r.
//
// An entry is exact (its value certain within the truncation) iff
// p+r-1 <= l_max and p+q+1 <= k_max; the underlying store enumerates degrees
// through l_max+1, whose top block is empty since every trail satisfies
// length >= degree, so with default bounds the second condition is vacuous.
// ---------------------------------------------------------------------------

template <class R>
class PageEngine {
public:
    using Elem = typename R::Elem;

    PageEngine(std::shared_ptr<FilteredComplex> cx, R ring, int threads = 1)
        : cx_(std::move(cx)), ring_(ring), threads_(threads) {
        boundary_.resize(cx_->k_max() + 1);
        for (int n = 0; n <= cx_->k_max(); ++n) boundary_[n] = cx_->template boundary_as<R>(n, ring_);
    }

    static PageEngine absolute(const DiGraph& g, long long l_max, R ring, int threads = 1) {
        auto store = std::make_shared<TrailStore>(g, int(l_max) + 1, l_max);
        auto cx = std::make_shared<FilteredComplex>(store, ComplexMode::full_rc);
        return PageEngine(cx, ring, threads);
    }

    static PageEngine relative(const DiGraph& x, const std::vector<int>& a_vertices,
                               long long l_max, R ring, int threads = 1,
                               bool require_no_entry = false) {
        auto store = std::make_shared<TrailStore>(x, int(l_max) + 1, l_max);
        auto cx = std::make_shared<FilteredComplex>(store, a_vertices, require_no_entry);
        return PageEngine(cx, ring, threads);
    }

    const FilteredComplex& complex() const { return *cx_; }
    const R& ring() const { return ring_; }
    long long l_max() const { return cx_->l_max(); }
    int k_max() const { return cx_->k_max(); }
    int threads() const { return threads_; }

    bool entry_exact(int r, int p, int q) const {
        return p + r - 1 <= l_max() && p + q + 1 <= k_max();
    }

    // The (p,q) cell of E^0; every later page is a subquotient of it.
    int e0_dim(int p, int q) const {
        int n = p + q;
        if (n < 0 || n > k_max() || p < 0 || p > l_max()) return 0;
        return cx_->prefix(n, p) - cx_->prefix(n, p - 1);
    }

    const Subquotient<R>& presentation(int r, int p, int q) {
        auto key = std::make_tuple(r, p, q);
        auto it = entries_.find(key);
        if (it != entries_.end()) return *it->second;
        auto sq = build_entry(r, p, q);
        auto res = entries_.emplace(key, std::make_unique<Subquotient<R>>(std::move(sq)));
        return *res.first->second;
    }

    HomologyGroup group(int r, int p, int q) {
        if (e0_dim(p, q) == 0) return HomologyGroup{};
        if constexpr (R::is_field) {
            HomologyGroup g;
            g.free_rank = entry_dim_by_ranks(r, p, q);
            return g;
        } else {
            auto it = entries_.find(std::make_tuple(r, p, q));
            if (it != entries_.end()) return it->second->group();
            if (cache_presentations_) return presentation(r, p, q).group();
            return build_entry(r, p, q).group();
        }
    }

    // When disabled, group queries over Z do not retain their subquotient
    // presentations; differentials and class operations still cache.
    void set_cache_presentations(bool b) { cache_presentations_ = b; }

    // Field-coefficient dimension of E^r_{p,q} from four windowed kernel
    // dimensions: with z^s(a,m) = dim{x in F_a C_m : dx in F_{a-s}},
    //   dim E^r = z^r(p,n) - z^{r-1}(p-1,n) - z^{r-1}(p',n+1) + z^{s}(p',n+1)
    // where p' = min(p+r-1, l_max) and s = p'-p+1, using
    //   Z^{r-1}_{p-1} + d Z^{r-1}_{p'} with intersection d Z^{s}_{p'}.
    long long entry_dim_by_ranks(int r, int p, int q) {
        int n = p + q;
        int pprime = int(std::min<long long>((long long)p + r - 1, l_max()));
        long long v = zdim(r, p, n) - zdim(r - 1, p - 1, n) - zdim(r - 1, pprime, n + 1) +
                      zdim(pprime - p + 1, pprime, n + 1);
        return v;
    }

    // dim Z^s(a, m); levels <= 0 mean the whole filtration prefix.
    long long zdim(int level, int a, int m) {
        if (a < 0 || m < 0 || m > k_max()) return 0;
        a = int(std::min<long long>(a, l_max()));
        long long pref = cx_->prefix(m, a);
        if (level <= 0) return pref;
        return pref - windowed_rank(a, (long long)a - level, m);
    }

    // Rank of the boundary block: columns of degree m with length <= a,
    // rows of degree m-1 with length > b.
    int windowed_rank(int a, long long b, int m) {
        if (m <= 0 || m > k_max()) return 0;
        if (b >= a) return 0;  // d F_a lies inside F_a
        auto key = std::make_tuple(a, b, m);
        auto it = wrank_.find(key);
        if (it != wrank_.end()) return it->second;
        int cols = cx_->prefix(m, a);
        int row_cut = b < 0 ? 0 : cx_->prefix(m - 1, b);
        SparseMat<R> w(cx_->dim(m - 1) - row_cut, cols);
        for (int j = 0; j < cols; ++j)
            for (const auto& [i, val] : boundary_[m].cols[j].e)
                if (i >= row_cut) w.cols[j].push(i - row_cut, val);
        int rk = sparse_rank(w, ring_);
        wrank_[key] = rk;
        return rk;
    }

    // Lattice-coordinate differential d^r: (p,q) -> (p-r, q+r-1); columns are
    // images of the source Z-basis expressed in the target Z-basis.
    SparseMat<R> differential_lattice(int r, int p, int q) {
        const auto& src = presentation(r, p, q);
        const auto& tgt = presentation(r, p - r, q + r - 1);
        int n = p + q;
        SparseMat<R> out(tgt.lattice_dim(), src.lattice_dim());
        for (int j = 0; j < src.lattice_dim(); ++j) {
            auto img = sparse_apply(boundary_[n], src.lattice().basis.cols[j], ring_);
            auto c = tgt.lattice_coords(img);
            if (!c) throw contract_error("page differential leaves the target cycle span");
            for (int i = 0; i < int(c->size()); ++i)
                if (!ring_.is_zero((*c)[i])) out.cols[j].push(i, (*c)[i]);
        }
        return out;
    }

    // Generator-coordinate differential matrix (materializes presentations).
    DenseMat<R> differential_on_generators(int r, int p, int q) {
        auto& src = presentation(r, p, q);
        auto& tgt = presentation(r, p - r, q + r - 1);
        int n = p + q;
        const auto& sg = src.generators();
        const auto& tg = tgt.generators();
        DenseMat<R> m(int(tg.lifts.size()), int(sg.lifts.size()), ring_);
        for (size_t j = 0; j < sg.lifts.size(); ++j) {
            auto img = sparse_apply(boundary_[n], sg.lifts[j], ring_);
            auto coords = tgt.generator_coords(img);
            for (size_t i = 0; i < coords.size(); ++i) m.at(int(i), int(j)) = coords[i];
        }
        return m;
    }

    // Class of a chain (given as a formal sum of tuples of degree p+q and
    // length exactly p) in the entry's generator coordinates.
    std::vector<Elem> class_coords(int r, int p, int q, const FormalSum& chain) {
        auto v = ambient_vector(p, q, chain);
        return presentation(r, p, q).generator_coords(v);
    }

    SparseVec<R> ambient_vector(int p, int q, const FormalSum& chain) const {
        for (const auto& [tuple, coef] : chain) {
            (void)coef;
            if (cx_->store().tuple_length(tuple) > p)
                throw contract_error("chain lies outside filtration level p");
        }
        return cx_->template vector_of<R>(chain, p + q, ring_);
    }

    // The d^1 recipe on an explicit magnitude cycle: apply the full boundary,
    // discard everything of length <= p-2, return the class in E^1_{p-1,q}.
    // Throws if the chain is not an MC cycle of length p.
    struct D1Result {
        std::vector<Elem> coords;  // in the generator basis of E^1_{p-1,q}
        FormalSum chain;           // the reduced boundary representative
    };
    D1Result d1_on_class(const FormalSum& rep, int p, int q) {
        int n = p + q;
        for (const auto& [tuple, coef] : rep) {
            (void)coef;
            if (int(tuple.size()) - 1 != n || cx_->store().tuple_length(tuple) != p)
                throw contract_error("d1_on_class: representative must be homogeneous of length p");
        }
        FormalSum image;
        for (const auto& [tuple, coef] : rep) {
            auto b = rc_boundary(tuple, cx_->store(), ComplexMode::full_rc);
            for (auto& [face, c] : b) image.emplace_back(face, c * coef);
        }
        image = normalize_sum(std::move(image));
        FormalSum reduced;
        for (auto& [face, c] : image) {
            long long l = cx_->store().tuple_length(face);
            if (l == p)
                throw contract_error("d1_on_class: representative is not a magnitude cycle");
            if (l <= p - 2) continue;
            reduced.emplace_back(face, c);
        }
        D1Result out;
        out.chain = reduced;
        auto v = cx_->template vector_of<R>(reduced, n - 1, ring_);
        out.coords = presentation(1, p - 1, q).generator_coords(v);
        return out;
    }

    // Summary of one page over the whole window. Parallelizes across
    // entries; output assembly is ordered, so results are deterministic.
    PageSummary page_summary(int r, bool with_representatives = false) {
        PageSummary page;
        page.r = r;
        page.l_max = l_max();
        std::vector<std::pair<int, int>> pq;
        for (int p = 0; p <= int(l_max()); ++p)
            for (int q = -p; q <= 0; ++q)
                if (e0_dim(p, q) > 0) pq.push_back({p, q});
        std::vector<EntrySummary> results(pq.size());
        if constexpr (R::is_field) {
            // Dimension formula per entry; cheap and serial.
            for (size_t i = 0; i < pq.size(); ++i) {
                auto [p, q] = pq[i];
                results[i].p = p;
                results[i].q = q;
                results[i].exact = entry_exact(r, p, q);
                results[i].group = group(r, p, q);
            }
        } else {
            // Torsion needs presentations; parallelize across entries.
            prebuild_towers(r, pq);
            run_cells(pq.size(), threads_, [&](size_t i) {
                auto [p, q] = pq[i];
                EntrySummary e;
                e.p = p;
                e.q = q;
                e.exact = entry_exact(r, p, q);
                e.group = group_locked(r, p, q);
                results[i] = e;
            });
        }
        for (size_t i = 0; i < pq.size(); ++i) {
            auto& e = results[i];
            if (e.group.is_zero() && e.exact) continue;
            if (with_representatives && !e.group.is_zero()) {
                const auto& pres = presentation(r, e.p, e.q);
                const auto& gens = pres.generators();
                for (const auto& lift : gens.lifts)
                    e.representatives.push_back(chain_str(lift, e.p + e.q));
            }
            page.entries.push_back(std::move(e));
        }
        return page;
    }

    std::string chain_str(const SparseVec<R>& v, int degree) const {
        std::string s;
        for (const auto& [pos, coef] : v.e) {
            int id = cx_->columns(degree)[pos];
            std::string c = ring_.to_string(coef);
            if (!s.empty() && c[0] != '-') s += "+";
            s += c + "*" + trail_str(cx_->store().trail(id).vertices, cx_->store().graph());
        }
        return s.empty() ? "0" : s;
    }

    const SparseMat<R>& boundary(int n) const { return boundary_[n]; }

    // Basis of Z^level(p, n) as ambient degree-n vectors, echelonized.
    // Level 0 is the filtration prefix; higher levels are direct kernels of
    // the windowed boundary (columns length <= p, rows length > p-level).
    const SparseMat<R>& tower(int p, int n, int level) {
        if (p < 0 || n < 0 || n > k_max()) {
            static const SparseMat<R> empty;
            return empty;
        }
        int eff = std::max(0, std::min(level, p + 1));
        auto key = std::make_pair(p, n);
        auto& tw = towers_[key];
        if (tw.empty()) {
            // Level 0: the filtration prefix itself.
            SparseMat<R> k0(dim(n), 0);
            int pref = cx_->prefix(n, p);
            for (int j = 0; j < pref; ++j) {
                SparseVec<R> e;
                e.push(j, ring_.one());
                k0.cols.push_back(std::move(e));
            }
            tw.push_back(std::move(k0));
        }
        while (int(tw.size()) <= eff) {
            int level_now = int(tw.size());
            long long cut = (long long)p - level_now;  // rows with length > cut
            int cols = cx_->prefix(n, p);
            int row_cut = (n == 0) ? 0 : (cut < 0 ? 0 : cx_->prefix(n - 1, cut));
            int nrows = (n == 0) ? 0 : cx_->dim(n - 1) - row_cut;
            if (nrows == 0) {
                tw.push_back(tw.back());
                continue;
            }
            SparseMat<R> w(nrows, cols);
            for (int j = 0; j < cols; ++j)
                for (const auto& [i, val] : boundary_[n].cols[j].e)
                    if (i >= row_cut) w.cols[j].push(i - row_cut, val);
            auto ker = kernel_basis(w, ring_);
            // Kernel coordinates are positions inside the prefix, which embed
            // directly as ambient coordinates.
            ker.rows = dim(n);
            auto ech = echelonize(ker, ring_);
            tw.push_back(std::move(ech.basis));
        }
        return tw[eff];
    }

    int dim(int n) const { return (n >= 0 && n <= k_max()) ? cx_->dim(n) : 0; }

private:
    std::shared_ptr<FilteredComplex> cx_;
    R ring_;
    int threads_;
    std::vector<SparseMat<R>> boundary_;
    std::map<std::pair<int, int>, std::vector<SparseMat<R>>> towers_;
    std::map<std::tuple<int, int, int>, std::unique_ptr<Subquotient<R>>> entries_;
    std::map<std::tuple<int, long long, int>, int> wrank_;
    bool cache_presentations_ = true;
    std::unique_ptr<std::mutex> mu_ = std::make_unique<std::mutex>();

    Subquotient<R> build_entry(int r, int p, int q) {
        int n = p + q;
        const auto& z = tower(p, n, r);
        SparseMat<R> b(dim(n), 0);
        if (p >= 1) {
            const auto& b1 = tower(p - 1, n, std::max(r - 1, 0));
            for (const auto& c : b1.cols) b.cols.push_back(c);
        }
        int pprime = std::min<long long>(p + r - 1, l_max());
        if (pprime >= 0 && n + 1 <= k_max()) {
            const auto& zup = tower(pprime, n + 1, std::max(r - 1, 0));
            for (const auto& c : zup.cols) {
                auto img = sparse_apply(boundary_[n + 1], c, ring_);
                if (!img.empty()) b.cols.push_back(std::move(img));
            }
        }
        return Subquotient<R>::build(dim(n), z, b, ring_);
    }

    // Thread-safe group computation used by page_summary: presentations are
    // inserted under a lock but built outside it; towers are prebuilt.
    HomologyGroup group_locked(int r, int p, int q) {
        {
            std::lock_guard<std::mutex> lk(*mu_);
            auto it = entries_.find(std::make_tuple(r, p, q));
            if (it != entries_.end()) return it->second->group();
        }
        auto sq = build_entry(r, p, q);
        HomologyGroup g = sq.group();
        if (cache_presentations_) {
            std::lock_guard<std::mutex> lk(*mu_);
            entries_.emplace(std::make_tuple(r, p, q),
                             std::make_unique<Subquotient<R>>(std::move(sq)));
        }
        return g;
    }

    // Ensure all towers needed by a page exist before parallel entry builds:
    // slots are created serially, levels of distinct (p,n) towers are
    // independent jobs, and afterwards the tower map is read-only.
    void prebuild_towers(int r, const std::vector<std::pair<int, int>>& pq) {
        std::map<std::pair<int, int>, int> want;  // (p,n) -> level
        auto bump = [&](int p, int n, int level) {
            if (p < 0) return;
            int eff = std::max(0, std::min(level, p + 1));
            auto key = std::make_pair(p, n);
            auto it = want.find(key);
            if (it == want.end())
                want[key] = eff;
            else
                it->second = std::max(it->second, eff);
        };
        for (auto [p, q] : pq) {
            int n = p + q;
            bump(p, n, r);
            bump(p - 1, n, r - 1);
            bump(int(std::min<long long>(p + r - 1, l_max())), n + 1, r - 1);
        }
        std::vector<std::pair<std::pair<int, int>, int>> jobs(want.begin(), want.end());
        for (const auto& [key, level] : jobs) towers_[key];  // create slots serially
        run_cells(jobs.size(), threads_, [&](size_t i) {
            auto [key, level] = jobs[i];
            tower(key.first, key.second, level);
        });
    }
};

// ---------------------------------------------------------------------------
// Derived views and free functions.
// ---------------------------------------------------------------------------

struct BigradedPHEntry {
    HomologyGroup group;
    bool exact = true;
};

// PH_{k,l} = E^2_{l, k-l}; table keyed by (k, l).
template <class R>
std::map<std::pair<int, long long>, BigradedPHEntry> bigraded_path_homology(PageEngine<R>& eng) {
    std::map<std::pair<int, long long>, BigradedPHEntry> out;
    auto page = eng.page_summary(2);
    for (const auto& e : page.entries)
        out[{e.p + e.q, e.p}] = BigradedPHEntry{e.group, e.exact};
    return out;
}

template <class R>
std::map<std::pair<int, long long>, BigradedPHEntry> bigraded_path_homology(const DiGraph& g,
                                                                            long long l_max,
                                                                            const R& ring,
                                                                            int threads = 1) {
    auto eng = PageEngine<R>::absolute(g, l_max, ring, threads);
    return bigraded_path_homology(eng);
}

// Homology of the unfiltered reachability complex through degree k_max.
template <class R>
std::map<int, HomologyGroup> reachability_homology(const DiGraph& g, int k_max, const R& ring) {
    long long k = std::max(1ll, diameter(g));
    auto store = std::make_shared<TrailStore>(g, k_max + 1, (k_max + 1) * k);
    FilteredComplex cx(store, ComplexMode::full_rc);
    std::map<int, HomologyGroup> out;
    for (int deg = 0; deg <= k_max; ++deg) {
        auto dk = cx.boundary_as(deg, ring);
        auto dk1 = deg + 1 <= cx.k_max() ? cx.boundary_as(deg + 1, ring)
                                         : SparseMat<R>(cx.dim(deg), 0);
        out[deg] = homology_of_pair(dk, dk1, ring);
    }
    return out;
}

// Convergence data: per bidegree, the page at which the entry provably
// stabilizes (octant and slope bounds), its stable value when the window
// certifies it, and per-total-degree comparison with reachability homology.
struct ConvergenceEntry {
    int p = 0, q = 0;
    int stable_bound = 0;    // differentials provably vanish from this page on
    int stable_from = 0;     // first page from which the computed value is constant
    bool known = false;      // stable value certified within the window
    HomologyGroup einf;
};

struct ConvergenceDegreeLine {
    int n = 0;
    bool comparable = false;
    long long einf_rank_sum = 0;
    std::vector<Int> einf_torsion;  // concatenated, divisibility-normalized
    HomologyGroup rh;
};

struct ConvergenceReport {
    std::vector<ConvergenceEntry> entries;
    std::vector<ConvergenceDegreeLine> lines;
    bool ranks_agree = true;  // on comparable lines
};

template <class R>
ConvergenceReport convergence_report(const DiGraph& g, long long l_max, const R& ring,
                                     int threads = 1) {
    ConvergenceReport rep;
    long long bigk = std::max(1ll, diameter(g));
    auto eng = PageEngine<R>::absolute(g, l_max, ring, threads);

    std::map<std::pair<int, int>, ConvergenceEntry> table;
    for (int p = 0; p <= int(l_max); ++p)
        for (int q = -p; q <= 0; ++q) {
            if (eng.e0_dim(p, q) == 0) continue;
            ConvergenceEntry e;
            e.p = p;
            e.q = q;
            int r_out = std::min(p, 1 - q) + 1;
            long long r_in = bigk * (q + 1) + (bigk - 1) * p + 1;
            int bound = int(std::max<long long>(r_out, r_in));
            bound = std::max(bound, 1);
            e.stable_bound = bound;
            e.known = eng.entry_exact(bound, p, q);
            if (e.known) {
                e.einf = eng.group(bound, p, q);
                // First page from which the value no longer changes.
                int from = bound;
                for (int r = bound - 1; r >= 0; --r) {
                    if (eng.group(r, p, q) == e.einf)
                        from = r;
                    else
                        break;
                }
                e.stable_from = from;
            }
            table[{p, q}] = e;
            rep.entries.push_back(e);
        }

    // Per-total-degree comparison. Degree n is comparable when every
    // possibly-nonzero entry (p <= K*n by the slope bound) is known.
    int n_max = int(l_max / bigk);
    auto rh = reachability_homology(g, n_max, ring);
    for (int n = 0; n <= n_max; ++n) {
        ConvergenceDegreeLine line;
        line.n = n;
        line.comparable = true;
        std::vector<Int> tors;
        for (int p = n; p <= int(std::min<long long>(bigk * n, l_max)); ++p) {
            int q = n - p;
            if (eng.e0_dim(p, q) == 0) continue;
            auto it = table.find({p, q});
            if (it == table.end() || !it->second.known) {
                line.comparable = false;
                break;
            }
            line.einf_rank_sum += it->second.einf.free_rank;
            for (const auto& t : it->second.einf.torsion) tors.push_back(t);
        }
        if (bigk * n > l_max) line.comparable = false;
        if (line.comparable) {
            line.einf_torsion = divisibility_chain(tors);
            line.rh = rh.at(n);
            if (line.rh.free_rank != line.einf_rank_sum) rep.ranks_agree = false;
        }
        rep.lines.push_back(line);
    }
    return rep;
}

// First r in [0, r_max] whose exact entries are a single copy of the ground
// ring at (0,0); -1 if none.
template <class R>
int first_trivial_page(PageEngine<R>& eng, int r_max) {
    for (int r = 0; r <= r_max; ++r) {
        bool trivial = true;
        for (int p = 0; p <= int(eng.l_max()) && trivial; ++p)
            for (int q = -p; q <= 0 && trivial; ++q) {
                if (eng.e0_dim(p, q) == 0) continue;
                if (!eng.entry_exact(r, p, q)) continue;
                auto g = eng.group(r, p, q);
                if (p == 0 && q == 0) {
                    if (!(g.free_rank == 1 && g.torsion.empty())) trivial = false;
                } else if (!g.is_zero()) {
                    trivial = false;
                }
            }
        if (trivial) return r;
    }
    return -1;
}

// ---------------------------------------------------------------------------
// Induced maps of pages.
// ---------------------------------------------------------------------------

// Chain map data between two complexes over the same ring: one matrix per
// degree. Built from a graph map (trails map entrywise; consecutive repeats
// make the image degenerate, hence zero; in relative targets, trails wholly
// inside the subgraph die).
template <class R>
std::vector<SparseMat<R>> chain_map_matrices(const FilteredComplex& src,
                                             const FilteredComplex& tgt,
                                             const std::vector<int>& vertex_assignment,
                                             const R& ring) {
    std::vector<SparseMat<R>> out(src.k_max() + 1);
    int kmax = std::min(src.k_max(), tgt.k_max());
    for (int n = 0; n <= src.k_max(); ++n) {
        SparseMat<R> m(n <= kmax ? tgt.dim(n) : 0, src.dim(n));
        if (n <= kmax) {
            for (int j = 0; j < src.dim(n); ++j) {
                const auto& t = src.store().trail(src.columns(n)[j]).vertices;
                std::vector<int> img;
                img.reserve(t.size());
                bool degenerate = false;
                for (size_t i = 0; i < t.size(); ++i) {
                    int w = vertex_assignment.at(t[i]);
                    if (!img.empty() && img.back() == w) {
                        degenerate = true;
                        break;
                    }
                    img.push_back(w);
                }
                if (degenerate) continue;
                int id = tgt.store().id_of(img);
                if (id < 0) throw contract_error("chain map image missing from target store");
                int pos = tgt.position(id);
                if (pos < 0) continue;  // relative target: image lies in the subgraph
                m.cols[j].push(pos, ring.one());
            }
        }
        out[n] = std::move(m);
    }
    return out;
}

template <class R>
struct PageMapEntry {
    int p = 0, q = 0;
    bool exact = true;
    HomologyGroup src_group, tgt_group;
    DenseMat<R> matrix;  // generator coordinates
    bool is_isomorphism = false;
};

// Induced map on page r, entry by entry over the window.
template <class R>
std::vector<PageMapEntry<R>> induced_page_map(PageEngine<R>& src, PageEngine<R>& tgt,
                                              const std::vector<SparseMat<R>>& chain_map,
                                              int r) {
    std::vector<PageMapEntry<R>> out;
    const R& ring = src.ring();
    for (int p = 0; p <= int(src.l_max()); ++p)
        for (int q = -p; q <= 0; ++q) {
            if (src.e0_dim(p, q) == 0 && tgt.e0_dim(p, q) == 0) continue;
            PageMapEntry<R> e;
            e.p = p;
            e.q = q;
            e.exact = src.entry_exact(r, p, q) && tgt.entry_exact(r, p, q);
            e.src_group = src.group(r, p, q);
            e.tgt_group = tgt.group(r, p, q);
            if (e.src_group.is_zero() && e.tgt_group.is_zero()) {
                e.is_isomorphism = true;
                out.push_back(std::move(e));
                continue;
            }
            int n = p + q;
            auto m = induced_subquotient_map(src.presentation(r, p, q),
                                             tgt.presentation(r, p, q), chain_map[n], ring);
            e.matrix = m.matrix;
            e.is_isomorphism = m.is_isomorphism;
            out.push_back(std::move(e));
        }
    return out;
}

// Convenience wrapper: absolute engines for a graph map.
template <class R>
std::vector<PageMapEntry<R>> induced_page_map(const GraphMap& f, int r, long long l_max,
                                              const R& ring, int threads = 1) {
    if (!validate_map(f)) throw input_error("induced_page_map: invalid graph map");
    auto src = PageEngine<R>::absolute(f.source, l_max, ring, threads);
    auto tgt = PageEngine<R>::absolute(f.target, l_max, ring, threads);
    auto cm = chain_map_matrices(src.complex(), tgt.complex(), f.assignment, ring);
    return induced_page_map(src, tgt, cm, r);
}

// Agreement of induced maps on page s (r-homotopic maps agree for
// s >= r+1). Checks the precondition gap(f,g) <= r_claim.
template <class R>
bool r_homotopy_page_agreement(const GraphMap& f, const GraphMap& g, long long r_claim, int s,
                               long long l_max, const R& ring, int threads = 1) {
    auto gap = r_homotopy_gap(f, g);
    if (gap.is_inf() || gap.value() > r_claim)
        throw input_error("r_homotopy_page_agreement: gap exceeds the claimed bound");
    auto src = PageEngine<R>::absolute(f.source, l_max, ring, threads);
    auto tgt = PageEngine<R>::absolute(f.target, l_max, ring, threads);
    auto cf = chain_map_matrices(src.complex(), tgt.complex(), f.assignment, ring);
    auto cg = chain_map_matrices(src.complex(), tgt.complex(), g.assignment, ring);
    auto mf = induced_page_map(src, tgt, cf, s);
    auto mg = induced_page_map(src, tgt, cg, s);
    if (mf.size() != mg.size()) return false;
    for (size_t i = 0; i < mf.size(); ++i) {
        if (!mf[i].exact || !mg[i].exact) continue;
        if (!(mf[i].matrix == mg[i].matrix)) return false;
    }
    return true;
}

// ---------------------------------------------------------------------------
// Independent page-recurrence oracle: homology of (E^r, d^r) at an entry,
// computed from the generator-coordinate differentials and presented groups,
// not from the engine's tower subquotients.
// ---------------------------------------------------------------------------

template <class R>
HomologyGroup page_entry_homology(PageEngine<R>& eng, int r, int p, int q) {
    const R& ring = eng.ring();
    auto& mid = eng.presentation(r, p, q);
    const auto& mg = mid.generators();
    int gb = int(mg.lifts.size());

    bool has_out = eng.e0_dim(p - r, q + r - 1) > 0 && p - r >= 0;
    bool has_in = eng.e0_dim(p + r, q - r + 1) > 0 && p + r <= eng.l_max();

    DenseMat<R> out_m(0, gb, ring), in_m(gb, 0, ring);
    std::vector<Int> out_orders;
    if (has_out) {
        out_m = eng.differential_on_generators(r, p, q);
        out_orders = eng.presentation(r, p - r, q + r - 1).generators().orders;
    }
    if (has_in) in_m = eng.differential_on_generators(r, p + r, q - r + 1);

    if constexpr (R::is_field) {
        DenseMat<R> a = out_m;
        int rk_out = dense_rref(a, ring);
        DenseMat<R> b = in_m;
        int rk_in = dense_rref(b, ring);
        HomologyGroup g;
        g.free_rank = gb - rk_out - rk_in;
        return g;
    } else {
        RingZ zz;
        // Pullback lattice L = { x : out(x) in span(target relations) }.
        int oc = out_m.rows;
        DenseMat<RingZ> stack(oc, gb + int(std::count_if(out_orders.begin(), out_orders.end(),
                                                         [](const Int& o) { return o > 1; })),
                              zz);
        for (int i = 0; i < oc; ++i)
            for (int j = 0; j < gb; ++j) stack.at(i, j) = out_m.at(i, j);
        {
            int c = gb;
            for (int i = 0; i < oc; ++i)
                if (i < int(out_orders.size()) && out_orders[i] > 1) stack.at(i, c++) = out_orders[i];
        }
        auto ker = kernel_basis(sparse_from_dense(stack, zz), zz);
        // Project kernel columns to the first gb coordinates.
        SparseMat<RingZ> lgen(gb, 0);
        for (const auto& col : ker.cols) {
            SparseVec<RingZ> v;
            for (const auto& [i, val] : col.e)
                if (i < gb) v.push(i, val);
            if (!v.empty()) lgen.cols.push_back(std::move(v));
        }
        auto lat = echelonize(lgen, zz);
        // Relations: images of in_m plus the middle group's own torsion.
        SparseMat<RingZ> rel(lat.dim(), 0);
        auto add_rel = [&](const SparseVec<RingZ>& amb) {
            auto c = echelon_solve(lat, amb, zz);
            if (!c) throw contract_error("page_entry_homology: relation outside kernel lattice");
            SparseVec<RingZ> cv;
            for (int i = 0; i < int(c->size()); ++i)
                if ((*c)[i] != 0) cv.push(i, (*c)[i]);
            rel.cols.push_back(std::move(cv));
        };
        for (int j = 0; j < in_m.cols; ++j) {
            SparseVec<RingZ> amb;
            for (int i = 0; i < gb; ++i)
                if (in_m.at(i, j) != 0) amb.push(i, in_m.at(i, j));
            add_rel(amb);
        }
        for (int i = 0; i < gb; ++i)
            if (mg.orders[i] > 1) {
                SparseVec<RingZ> amb;
                amb.push(i, mg.orders[i]);
                add_rel(amb);
            }
        auto diag = smith_diagonal_sparse(rel);
        return group_from_diag(lat.dim() - (long long)diag.size(), diag);
    }
}

}  // namespace mpss
