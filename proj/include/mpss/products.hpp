#pragma once

#include "pages.hpp"

namespace mpss {

// A monotone lattice path from (0,0) to (p,q): false = Right, true = Up.
struct LatticePath {
    std::vector<bool> steps;
};

// Sign of a path, normative description: (-1)^n where n counts lattice
// points on or above the x-axis and strictly below the path, the height of
// the path over a column being its height on first arrival there.
int path_sign_lattice(const LatticePath& path);

// Sign via the pair-counting clause, read with a universal quantifier: n is
// the number of pairs (i,j), 0 <= i, 0 <= j, such that every step index s
// with i_s = i has j < j_s. Implemented independently as a cross-check.
int path_sign_pairs(const LatticePath& path);

void enumerate_paths(int p, int q, const std::function<void(const LatticePath&)>& fn);

// Eilenberg-Zilber on a pair of trails. Vertices of the box product are
// encoded as g * nvh + h (the box_product index layout).
FormalSum ez_map(const std::vector<int>& gt, const std::vector<int>& ht, int nvh);

// Bilinear extension to formal sums.
FormalSum ez_chain(const FormalSum& a, const FormalSum& b, int nvh);

// Alexander-Whitney: front faces of the left projection tensor back faces of
// the right one, degenerate factors dropped.
struct TensorTerm {
    std::vector<int> left, right;
    int coef = 0;
};
std::vector<TensorTerm> aw_map(const std::vector<int>& box_tuple, int nvh);

std::vector<TensorTerm> tensor_boundary(const std::vector<int>& gt, const std::vector<int>& ht,
                                        const TrailStore& sg, const TrailStore& sh);

namespace detail {

inline std::string pqs(int p, int q) {
    return "(" + std::to_string(p) + "," + std::to_string(q) + ")";
}

template <class R>
std::map<std::pair<int, int>, HomologyGroup> nonzero_entries(PageEngine<R>& eng, int r) {
    std::map<std::pair<int, int>, HomologyGroup> out;
    auto page = eng.page_summary(r);
    for (auto& e : page.entries)
        if (!e.group.is_zero()) out[{e.p, e.q}] = e.group;
    return out;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Tensor page of two spectral sequences over a field: entry (p,q) is the
// direct sum over factor bidegrees, with the signed Leibniz differential
//   d(x (x) y) = dx (x) y + (-1)^{deg x} x (x) dy.
// Basis order: factor bidegrees (s,t) lexicographic, then generator pairs
// row-major.
// ---------------------------------------------------------------------------

template <class R>
struct TensorPage {
    int r = 0;
    std::map<std::pair<int, int>, HomologyGroup> entries;
    std::map<std::pair<int, int>, DenseMat<R>> differentials;  // toward (p-r, q+r-1)
};

template <class R>
TensorPage<R> tensor_page(PageEngine<R>& eg, PageEngine<R>& eh, int r) {
    static_assert(R::is_field);
    const R& ring = eg.ring();
    TensorPage<R> tp;
    tp.r = r;
    long long lmax = std::min(eg.l_max(), eh.l_max());

    auto tg = detail::nonzero_entries(eg, r);
    auto th = detail::nonzero_entries(eh, r);

    struct BasisElt {
        int s, t, u, v;
        int i, j;  // generator indices in the factor entries
    };
    std::map<std::pair<int, int>, std::vector<BasisElt>> basis;
    for (const auto& [st, ga] : tg)
        for (const auto& [uv, gb] : th) {
            int p = st.first + uv.first, q = st.second + uv.second;
            if (p > lmax) continue;
            auto& b = basis[{p, q}];
            for (int i = 0; i < ga.free_rank; ++i)
                for (int j = 0; j < gb.free_rank; ++j)
                    b.push_back({st.first, st.second, uv.first, uv.second, i, j});
        }
    for (const auto& [pq, b] : basis)
        tp.entries[pq] = HomologyGroup{(long long)b.size(), {}};

    // Differentials: factor generator matrices assembled blockwise.
    for (const auto& [pq, b] : basis) {
        auto tgt_pq = std::make_pair(pq.first - r, pq.second + r - 1);
        auto it_tgt = basis.find(tgt_pq);
        if (it_tgt == basis.end()) {
            tp.differentials[pq] = DenseMat<R>(0, int(b.size()), ring);
            continue;
        }
        const auto& tb = it_tgt->second;
        DenseMat<R> m(int(tb.size()), int(b.size()), ring);
        // position lookup in the target basis
        auto tpos = [&](int s, int t, int u, int v, int i, int j) -> int {
            for (size_t a = 0; a < tb.size(); ++a)
                if (tb[a].s == s && tb[a].t == t && tb[a].u == u && tb[a].v == v &&
                    tb[a].i == i && tb[a].j == j)
                    return int(a);
            return -1;
        };
        for (size_t col = 0; col < b.size(); ++col) {
            const auto& e = b[col];
            // dx (x) y
            if (tg.count({e.s - r, e.t + r - 1})) {
                auto dm = eg.differential_on_generators(r, e.s, e.t);
                for (int i2 = 0; i2 < dm.rows; ++i2) {
                    if (ring.is_zero(dm.at(i2, e.i))) continue;
                    int row = tpos(e.s - r, e.t + r - 1, e.u, e.v, i2, e.j);
                    if (row >= 0) m.at(row, int(col)) = dm.at(i2, e.i);
                }
            }
            // (-1)^{deg x} x (x) dy
            if (th.count({e.u - r, e.v + r - 1})) {
                auto dm = eh.differential_on_generators(r, e.u, e.v);
                auto sign = ((e.s + e.t) % 2 == 0) ? ring.one() : ring.neg(ring.one());
                for (int j2 = 0; j2 < dm.rows; ++j2) {
                    if (ring.is_zero(dm.at(j2, e.j))) continue;
                    int row = tpos(e.s, e.t, e.u - r, e.v + r - 1, e.i, j2);
                    if (row >= 0) m.at(row, int(col)) = ring.mul(sign, dm.at(j2, e.j));
                }
            }
        }
        tp.differentials[pq] = std::move(m);
    }
    return tp;
}

// ---------------------------------------------------------------------------
// Kunneth verification harness.
// ---------------------------------------------------------------------------

enum class KunnethLevel { MH, PH_ordinary, PH_bigraded, Page };

struct KunnethReport {
    bool hypotheses_ok = true;   // flatness assumptions, when required
    bool ok = true;              // all comparisons verified
    std::vector<std::string> failures;
    std::vector<std::string> notes;
    int entries_checked = 0;

    void fail(const std::string& msg) {
        ok = false;
        failures.push_back(msg);
    }
};

// Over a field: entrywise rank equality between the tensor page and the page
// of the box product, on exact entries. Over Z (a P.I.D.): the short exact
// sequence bookkeeping -- the middle group must be isomorphic to
// tensor-part + Tor-part (the sequences split), with the Tor bidegree shift
// appropriate to the level. Hypothesis failures are reported, not asserted.
template <class R>
KunnethReport kunneth_check(const DiGraph& g, const DiGraph& h, KunnethLevel level,
                            const R& ring, long long l_max, int page_r = 1, int threads = 1) {
    KunnethReport rep;
    int r = page_r;
    switch (level) {
        case KunnethLevel::MH: r = 1; break;
        case KunnethLevel::PH_ordinary:
        case KunnethLevel::PH_bigraded: r = 2; break;
        case KunnethLevel::Page: r = page_r; break;
    }

    auto box = box_product(g, h);
    auto eng_g = PageEngine<R>::absolute(g, l_max, ring, threads);
    auto eng_h = PageEngine<R>::absolute(h, l_max, ring, threads);
    auto eng_b = PageEngine<R>::absolute(box.graph, l_max, ring, threads);

    auto tg = detail::nonzero_entries(eng_g, r);
    auto th = detail::nonzero_entries(eng_h, r);

    // Flatness hypotheses over a P.I.D.
    if constexpr (!R::is_field) {
        if (level == KunnethLevel::PH_bigraded) {
            auto mh_g = detail::nonzero_entries(eng_g, 1);
            for (const auto& [pq, grp] : mh_g)
                if (!grp.torsion.empty()) {
                    rep.hypotheses_ok = false;
                    rep.notes.push_back("left factor has non-flat magnitude homology at " +
                                        detail::pqs(pq.first, pq.second));
                }
        }
        if (level == KunnethLevel::Page) {
            for (int t = 1; t < r; ++t) {
                auto et = detail::nonzero_entries(eng_g, t);
                for (const auto& [pq, grp] : et)
                    if (!grp.torsion.empty()) {
                        rep.hypotheses_ok = false;
                        rep.notes.push_back("left factor page " + std::to_string(t) +
                                            " not flat at " + detail::pqs(pq.first, pq.second));
                    }
            }
        }
        if (!rep.hypotheses_ok) return rep;
    }

    // Tor bidegree shift on the right factor: the Tor term at (p,q) pairs
    // E^r_{mn}(G) with E^r_{u-r+1, v+r-2}(H). At r = 1 this is the magnitude
    // homology shift (total degree drops by one at equal length), at r = 2
    // the bigraded path homology shift (k,l) -> (k-1, l-1).
    const int shift_p = -(r - 1);
    const int shift_q = r - 2;

    auto diagonal_only = (level == KunnethLevel::PH_ordinary);

    for (int p = 0; p <= int(l_max); ++p)
        for (int q = -p; q <= 0; ++q) {
            if (!eng_b.entry_exact(r, p, q)) continue;
            if (diagonal_only && q != 0) continue;
            // Tensor part.
            HomologyGroup tensor;
            for (const auto& [st, gg] : tg)
                for (const auto& [uv, gh] : th) {
                    if (st.first + uv.first != p || st.second + uv.second != q) continue;
                    tensor = ab_direct_sum(tensor, ab_tensor(gg, gh));
                }
            HomologyGroup expected = tensor;
            if constexpr (!R::is_field) {
                HomologyGroup torpart;
                for (const auto& [st, gg] : tg)
                    for (const auto& [uv, gh] : th) {
                        // Right factor sits at (u,v); its contribution to the
                        // Tor term at (p,q) uses the shifted position.
                        int u = uv.first - shift_p;
                        int v = uv.second - shift_q;
                        if (st.first + u != p || st.second + v != q) continue;
                        torpart = ab_direct_sum(torpart, ab_tor(gg, gh));
                    }
                expected = ab_direct_sum(expected, torpart);
            }
            auto got = eng_b.group(r, p, q);
            ++rep.entries_checked;
            if (!(got == expected))
                rep.fail("entry " + detail::pqs(p, q) + ": box has " + got.str() +
                         ", expected " + expected.str());
        }
    return rep;
}

// ---------------------------------------------------------------------------
// The pairing realized by the EZ map on page r, as matrices in generator
// coordinates, with per-entry isomorphism verdicts (field coefficients for
// r >= 1).
// ---------------------------------------------------------------------------

// EZ applied to a pair of chain vectors (ring coefficients), landing in the
// box complex at the summed degree.
template <class R>
SparseVec<R> ez_apply(const FilteredComplex& cxg, int degg, const SparseVec<R>& vg,
                      const FilteredComplex& cxh, int degh, const SparseVec<R>& vh,
                      const FilteredComplex& cxbox, int nvh, const R& ring) {
    std::map<int, typename R::Elem> acc;
    for (const auto& [pg, cg] : vg.e) {
        const auto& gt = cxg.store().trail(cxg.columns(degg)[pg]).vertices;
        for (const auto& [ph, ch] : vh.e) {
            const auto& ht = cxh.store().trail(cxh.columns(degh)[ph]).vertices;
            auto coef = ring.mul(cg, ch);
            for (const auto& [tuple, sgn] : ez_map(gt, ht, nvh)) {
                int id = cxbox.store().id_of(tuple);
                if (id < 0) throw contract_error("ez_apply: image outside the box window");
                int pos = cxbox.position(id);
                auto term = sgn > 0 ? coef : ring.neg(coef);
                auto it = acc.find(pos);
                if (it == acc.end())
                    acc.emplace(pos, term);
                else
                    it->second = ring.add(it->second, term);
            }
        }
    }
    SparseVec<R> out;
    for (auto& [i, c] : acc)
        if (!ring.is_zero(c)) out.push(i, std::move(c));
    return out;
}

template <class R>
struct PairingEntry {
    int p = 0, q = 0;
    bool exact = true;
    long long tensor_rank = 0;
    long long box_rank = 0;
    DenseMat<R> matrix;
    bool is_isomorphism = false;
};

template <class R>
struct PairingReport {
    std::vector<PairingEntry<R>> entries;
    bool all_iso = true;
    bool chain_map_ok = true;  // r = 0 only
};

template <class R>
PairingReport<R> ez_pairing_on_page(const DiGraph& g, const DiGraph& h, int r, const R& ring,
                                    long long l_max, int threads = 1) {
    if (r >= 1 && !R::is_field)
        throw input_error("ez_pairing_on_page: matrix form on pages r >= 1 needs a field");
    PairingReport<R> rep;
    auto box = box_product(g, h);
    int nvh = h.n;
    auto eng_g = PageEngine<R>::absolute(g, l_max, ring, threads);
    auto eng_h = PageEngine<R>::absolute(h, l_max, ring, threads);
    auto eng_b = PageEngine<R>::absolute(box.graph, l_max, ring, threads);

    if (r == 0) {
        // MC-level matrices plus the chain-map identity
        //   d_box o nabla = nabla o d_tensor, cellwise.
        const auto& sg = eng_g.complex().store();
        const auto& sh = eng_h.complex().store();
        for (int p = 0; p <= int(l_max); ++p)
            for (int q = -p; q <= 0; ++q) {
                if (eng_b.e0_dim(p, q) == 0) continue;
                // Tensor basis: pairs of trails with lengths adding to p and
                // degrees adding to p+q.
                int n = p + q;
                std::vector<std::pair<int, int>> basis;  // (idG, idH)
                for (int kg = 0; kg <= n; ++kg)
                    for (long long lg = 0; lg <= p; ++lg) {
                        const auto& cg = sg.cell(kg, lg);
                        const auto& ch = sh.cell(n - kg, p - lg);
                        for (int a : cg)
                            for (int b : ch) basis.push_back({a, b});
                    }
                PairingEntry<R> e;
                e.p = p;
                e.q = q;
                e.exact = true;
                e.tensor_rank = (long long)basis.size();
                e.box_rank = eng_b.e0_dim(p, q);
                // Matrix of nabla on the MC cell of the box complex; EZ
                // preserves length, so images land in rows of length exactly p.
                int r0 = eng_b.complex().prefix(n, p - 1);
                int r1 = eng_b.complex().prefix(n, p);
                DenseMat<R> m(r1 - r0, int(basis.size()), ring);
                for (size_t j = 0; j < basis.size(); ++j) {
                    auto sum = ez_map(sg.trail(basis[j].first).vertices,
                                      sh.trail(basis[j].second).vertices, nvh);
                    auto v = eng_b.complex().template vector_of<R>(sum, n, ring);
                    for (const auto& [i, val] : v.e) {
                        if (i < r0 || i >= r1)
                            throw contract_error("EZ image escapes its length cell");
                        m.at(i - r0, int(j)) = val;
                    }
                }
                e.matrix = std::move(m);
                rep.entries.push_back(std::move(e));
            }
        // Chain-map identity, checked on every tensor basis pair in window.
        for (int kg = 0; kg <= int(l_max); ++kg)
            for (long long lg = 0; lg <= l_max; ++lg)
                for (int kh = 0; kh + kg <= int(l_max); ++kh)
                    for (long long lh = 0; lg + lh <= l_max; ++lh)
                        for (int a : sg.cell(kg, lg))
                            for (int b : sh.cell(kh, lh)) {
                                auto lhs = normalize_sum([&] {
                                    FormalSum s;
                                    auto nab = ez_map(sg.trail(a).vertices,
                                                      sh.trail(b).vertices, nvh);
                                    for (auto& [t, c] : nab) {
                                        auto bd = rc_boundary(t, eng_b.complex().store(),
                                                              ComplexMode::full_rc);
                                        for (auto& [f, c2] : bd) s.emplace_back(f, c * c2);
                                    }
                                    return s;
                                }());
                                auto rhs = normalize_sum([&] {
                                    FormalSum s;
                                    for (auto& tt : tensor_boundary(sg.trail(a).vertices,
                                                                    sh.trail(b).vertices, sg,
                                                                    sh)) {
                                        auto nab = ez_map(tt.left, tt.right, nvh);
                                        for (auto& [t, c] : nab)
                                            s.emplace_back(t, c * tt.coef);
                                    }
                                    return s;
                                }());
                                if (lhs != rhs) rep.chain_map_ok = false;
                            }
        return rep;
    }

    // Pages r >= 1 over a field.
    auto tg = detail::nonzero_entries(eng_g, r);
    auto th = detail::nonzero_entries(eng_h, r);
    for (int p = 0; p <= int(l_max); ++p)
        for (int q = -p; q <= 0; ++q) {
            if (!eng_b.entry_exact(r, p, q)) continue;
            // Collect tensor generators.
            struct Gen {
                const SparseVec<R>* left;
                const SparseVec<R>* right;
                int sdeg, udeg;
            };
            std::vector<Gen> gens;
            for (const auto& [st, gg] : tg)
                for (const auto& [uv, gh] : th) {
                    if (st.first + uv.first != p || st.second + uv.second != q) continue;
                    const auto& pg = eng_g.presentation(r, st.first, st.second).generators();
                    const auto& ph = eng_h.presentation(r, uv.first, uv.second).generators();
                    for (const auto& lg : pg.lifts)
                        for (const auto& lh : ph.lifts)
                            gens.push_back({&lg, &lh, st.first + st.second, uv.first + uv.second});
                }
            auto bgrp = eng_b.group(r, p, q);
            if (gens.empty() && bgrp.is_zero()) continue;
            PairingEntry<R> e;
            e.p = p;
            e.q = q;
            e.tensor_rank = (long long)gens.size();
            e.box_rank = bgrp.free_rank;
            const auto& bpres = eng_b.presentation(r, p, q);
            const auto& bgens = bpres.generators();
            e.matrix = DenseMat<R>(int(bgens.lifts.size()), int(gens.size()), ring);
            for (size_t j = 0; j < gens.size(); ++j) {
                auto v = ez_apply(eng_g.complex(), gens[j].sdeg, *gens[j].left,
                                  eng_h.complex(), gens[j].udeg, *gens[j].right,
                                  eng_b.complex(), nvh, ring);
                auto coords = bpres.generator_coords(v);
                for (size_t i = 0; i < coords.size(); ++i) e.matrix.at(int(i), int(j)) = coords[i];
            }
            // Verdict: equal ranks and invertible matrix.
            DenseMat<R> mm = e.matrix;
            int rk = dense_rref(mm, ring);
            e.is_isomorphism = (e.tensor_rank == e.box_rank && rk == e.matrix.rows &&
                                e.matrix.rows == e.matrix.cols);
            if (!e.is_isomorphism) rep.all_iso = false;
            rep.entries.push_back(std::move(e));
        }
    return rep;
}

}  // namespace mpss
