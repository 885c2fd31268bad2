#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <mpss/pages.hpp>

#include <random>

using namespace mpss;

namespace {

RingQ qq;
RingZ zz;

std::map<std::pair<int, int>, HomologyGroup> page_table(PageSummary s) {
    std::map<std::pair<int, int>, HomologyGroup> t;
    for (auto& e : s.entries)
        if (!e.group.is_zero()) t[{e.p, e.q}] = e.group;
    return t;
}

}  // namespace

TEST_CASE("page 0 is the magnitude chain complex") {
    auto g = bidirected_cycle(3, 2);
    auto eng = PageEngine<RingQ>::absolute(g, 4, qq);
    auto store = std::make_shared<TrailStore>(g, 5, 4);
    for (int p = 0; p <= 4; ++p)
        for (int q = -p; q <= 0; ++q) {
            int n = p + q;
            auto grp = eng.group(0, p, q);
            CHECK(grp.free_rank == int(store->cell(n, p).size()));
        }
}

TEST_CASE("page 1 is magnitude homology") {
    for (const auto& g : {directed_cycle(4), bidirected_cycle(3, 2), sphere(2)}) {
        auto eng = PageEngine<RingZ>::absolute(g, 5, zz);
        auto mh = magnitude_homology(g, 5, zz);
        for (const auto& [kl, grp] : mh) {
            auto [k, l] = kl;
            CHECK(eng.group(1, int(l), int(k - l)) == grp);
        }
    }
}

TEST_CASE("pages of Z3: support, stabilization, triviality") {
    auto eng = PageEngine<RingQ>::absolute(directed_cycle(3), 7, qq);
    SUBCASE("page 1 support: rank 3 at the six listed bidegrees") {
        auto t = page_table(eng.page_summary(1));
        std::map<std::pair<int, int>, HomologyGroup> expect;
        for (auto [p, q] : std::vector<std::pair<int, int>>{
                 {0, 0}, {1, 0}, {3, -1}, {4, -1}, {6, -2}, {7, -2}})
            expect[{p, q}] = HomologyGroup{3, {}};
        CHECK(t == expect);
    }
    SUBCASE("page 2 = bigraded path homology support (exact entries)") {
        auto s = eng.page_summary(2);
        std::map<std::pair<int, int>, HomologyGroup> t;
        for (auto& e : s.entries) {
            if (!e.exact) {
                CHECK(e.p + 2 - 1 > 7);  // only the window edge may be uncertified
                continue;
            }
            if (!e.group.is_zero()) t[{e.p, e.q}] = e.group;
        }
        std::map<std::pair<int, int>, HomologyGroup> expect;
        for (auto [p, q] : std::vector<std::pair<int, int>>{
                 {0, 0}, {1, 0}, {3, -1}, {4, -1}, {6, -2}})
            expect[{p, q}] = HomologyGroup{1, {}};
        CHECK(t == expect);
    }
    SUBCASE("page 3 is trivial on exact entries") {
        CHECK(first_trivial_page(eng, 5) == 3);
    }
}

TEST_CASE("E^m(Z_m) trivial, E^2..E^{m-1} equal (m = 4)") {
    auto eng = PageEngine<RingQ>::absolute(directed_cycle(4), 9, qq);
    auto t2 = page_table(eng.page_summary(2));
    auto t3 = page_table(eng.page_summary(3));
    // entries exact on both pages must agree
    for (const auto& [pq, grp] : t2) {
        if (!eng.entry_exact(3, pq.first, pq.second)) continue;
        auto it = t3.find(pq);
        bool in3 = it != t3.end();
        CHECK(in3);
        if (in3) CHECK(it->second == grp);
    }
    CHECK(first_trivial_page(eng, 5) == 4);
}

TEST_CASE("bigraded path homology tables") {
    SUBCASE("PH of Z5 within the window") {
        auto ph = bigraded_path_homology(directed_cycle(5), 11, qq);
        for (const auto& [kl, e] : ph) {
            auto [k, l] = kl;
            if (!e.exact) continue;
            bool support = (k % 2 == 0 && l == 5ll * (k / 2)) ||
                           (k % 2 == 1 && l == 5ll * (k / 2) + 1);
            CHECK(e.group.free_rank == (support ? 1 : 0));
        }
    }
    SUBCASE("PH of C_{4,3}: spectral entries (0,0),(1,0),(4,-2)") {
        auto eng = PageEngine<RingQ>::absolute(bidirected_cycle(4, 3), 7, qq);
        auto t = page_table(eng.page_summary(2));
        std::map<std::pair<int, int>, HomologyGroup> expect{
            {{0, 0}, HomologyGroup{1, {}}},
            {{1, 0}, HomologyGroup{1, {}}},
            {{4, -2}, HomologyGroup{1, {}}},
        };
        CHECK(t == expect);
    }
    SUBCASE("PH of S^2: R at (0,0) and (2,2), diagonal only") {
        auto ph = bigraded_path_homology(sphere(2), 6, qq);
        for (const auto& [kl, e] : ph) {
            auto [k, l] = kl;
            if (!e.exact) continue;
            long long expect = ((k == 0 && l == 0) || (k == 2 && l == 2)) ? 1 : 0;
            CHECK(e.group.free_rank == expect);
        }
    }
}

TEST_CASE("d1 golden classes") {
    SUBCASE("kappa and lambda on Z4") {
        auto eng = PageEngine<RingZ>::absolute(directed_cycle(4), 9, zz);
        // i = 1 classes: kappa^1_x = [(x,x+,x)] at (p,q) = (4,-2),
        // lambda^1_e = [(x,x+,x,x+)] at (5,-2).
        FormalSum lam{{{0, 1, 0, 1}, 1}};
        auto d = eng.d1_on_class(lam, 5, -2);
        // Expect kappa^1_1 - kappa^1_0.
        auto k1 = eng.class_coords(1, 4, -2, FormalSum{{{1, 0, 1}, 1}});
        auto k0 = eng.class_coords(1, 4, -2, FormalSum{{{0, 1, 0}, 1}});
        REQUIRE(d.coords.size() == k1.size());
        for (size_t i = 0; i < d.coords.size(); ++i)
            CHECK(d.coords[i] == k1[i] - k0[i]);
        // d1(kappa^1_x) = 0.
        auto dk = eng.d1_on_class(FormalSum{{{0, 1, 0}, 1}}, 4, -2);
        for (const auto& c : dk.coords) CHECK(c == 0);
    }
    SUBCASE("kappa, lambda, mu on C_{4,1}") {
        auto g = bidirected_cycle(4, 1);
        auto eng = PageEngine<RingZ>::absolute(g, 6, zz);
        // d1(lambda_e) = kappa_b - kappa_a for the edge e = (0,1).
        auto d = eng.d1_on_class(FormalSum{{{0, 1}, 1}}, 1, 0);
        auto kb = eng.class_coords(1, 0, 0, FormalSum{{{1}, 1}});
        auto ka = eng.class_coords(1, 0, 0, FormalSum{{{0}, 1}});
        REQUIRE(d.coords.size() == kb.size());
        for (size_t i = 0; i < d.coords.size(); ++i) CHECK(d.coords[i] == kb[i] - ka[i]);
        // d1(kappa_x) = 0 trivially; d1(mu) = 0 here since MH_{1,3} = 0.
        auto mu = eng.d1_on_class(FormalSum{{{0, 2, 4}, 1}}, 4, -2);
        for (const auto& c : mu.coords) CHECK(c == 0);
        // mu itself is nonzero in MH_{2,4}.
        auto mucoords = eng.class_coords(1, 4, -2, FormalSum{{{0, 2, 4}, 1}});
        bool nonzero = false;
        for (const auto& c : mucoords) nonzero = nonzero || c != 0;
        CHECK(nonzero);
        // mu does not depend on the interior vertex.
        auto mu2 = eng.class_coords(1, 4, -2, FormalSum{{{0, 3, 4}, 1}});
        CHECK(mucoords == mu2);
    }
    SUBCASE("d1(mu) on C_{2,1} hits lambda + lambda - lambda") {
        auto g = bidirected_cycle(2, 1);
        auto eng = PageEngine<RingZ>::absolute(g, 5, zz);
        auto d = eng.d1_on_class(FormalSum{{{0, 1, 2}, 1}}, 2, 0);
        auto expect = eng.class_coords(
            1, 1, 0, FormalSum{{{0, 1}, 1}, {{1, 2}, 1}, {{0, 2}, -1}});
        CHECK(d.coords == expect);
    }
    SUBCASE("d1_on_class rejects non-cycles") {
        auto eng = PageEngine<RingZ>::absolute(bidirected_cycle(2, 1), 4, zz);
        // (0,1,2) has length 2; at l = 2 it is a cycle, but (0,1) at p=2 is
        // not homogeneous.
        CHECK_THROWS_AS(eng.d1_on_class(FormalSum{{{0, 1}, 1}}, 2, -1), contract_error);
    }
}

TEST_CASE("d1 recipe agrees with the page differential matrix") {
    auto g = bidirected_cycle(2, 1);
    auto eng = PageEngine<RingZ>::absolute(g, 5, zz);
    // Page-1 differential at (2,0) -> (1,0) as a generator matrix.
    auto m = eng.differential_on_generators(1, 2, 0);
    const auto& src = eng.presentation(1, 2, 0);
    const auto& gens = src.generators();
    REQUIRE(gens.lifts.size() == 1);
    // Apply the six-step recipe to the generator lift and compare.
    FormalSum rep;
    for (const auto& [pos, coef] : gens.lifts[0].e) {
        int id = eng.complex().columns(2)[pos];
        rep.emplace_back(eng.complex().store().trail(id).vertices,
                         int(coef.convert_to<long long>()));
    }
    auto d = eng.d1_on_class(rep, 2, 0);
    for (size_t i = 0; i < d.coords.size(); ++i) CHECK(d.coords[i] == m.at(int(i), 0));
}

TEST_CASE("relative pages") {
    SUBCASE("A empty gives the absolute page") {
        auto g = directed_cycle(3);
        auto abs_eng = PageEngine<RingQ>::absolute(g, 5, qq);
        auto rel_eng = PageEngine<RingQ>::relative(g, {}, 5, qq);
        for (int r = 1; r <= 2; ++r) {
            auto a = page_table(abs_eng.page_summary(r));
            auto b = page_table(rel_eng.page_summary(r));
            CHECK(a == b);
        }
    }
    SUBCASE("excision: E^1(C43, A43) matches E^1(C41, pt) rank for rank") {
        auto c43 = bidirected_cycle(4, 3);
        auto c41 = bidirected_cycle(4, 1);
        auto e1 = PageEngine<RingQ>::relative(c43, {0, 5, 6}, 6, qq);
        auto e2 = PageEngine<RingQ>::relative(c41, {0}, 6, qq);
        for (int r = 1; r <= 2; ++r) {
            auto a = page_table(e1.page_summary(r));
            auto b = page_table(e2.page_summary(r));
            CHECK(a == b);
        }
    }
    SUBCASE("long exact sequence of (cone(Z3), Z3): alternating ranks vanish") {
        auto c = cone(directed_cycle(3));
        auto rel = PageEngine<RingQ>::relative(c.graph, c.inclusion.assignment, 4, qq);
        auto absx = PageEngine<RingQ>::absolute(c.graph, 4, qq);
        auto suba = PageEngine<RingQ>::absolute(directed_cycle(3), 4, qq);
        // MH level: for each (k,l) the sequence 0 -> MH(A) -> MH(X) ->
        // MH(X,A) -> 0 is exact (no-entry condition holds), so ranks add.
        for (int p = 0; p <= 4; ++p)
            for (int q = -p; q <= 0; ++q) {
                auto ga = suba.group(1, p, q);
                auto gx = absx.group(1, p, q);
                auto gr = rel.group(1, p, q);
                CHECK(ga.free_rank + gr.free_rank == gx.free_rank);
            }
    }
}

TEST_CASE("induced page maps") {
    SUBCASE("identity induces the identity") {
        auto g = bidirected_cycle(3, 2);
        auto maps = induced_page_map(identity_map(g), 2, 5, qq);
        for (const auto& e : maps) {
            CHECK(e.is_isomorphism);
            if (e.matrix.rows > 0) {
                CHECK(e.matrix.rows == e.matrix.cols);
                CHECK(e.matrix == DenseMat<RingQ>::identity(e.matrix.rows, qq));
            }
        }
    }
    SUBCASE("collapse C_{4,3} -> C_{4,1} is a page-2 isomorphism everywhere exact") {
        auto c43 = bidirected_cycle(4, 3);
        auto c41 = bidirected_cycle(4, 1);
        // a0, b1, b2 -> a0; top interior fixed; z -> z.
        GraphMap f{c43, c41, {0, 1, 2, 3, 4, 0, 0}};
        REQUIRE(validate_map(f));
        auto maps = induced_page_map(f, 2, 7, qq);
        for (const auto& e : maps)
            if (e.exact) CHECK(e.is_isomorphism);
    }
    SUBCASE("Z4 -> Z3 contraction: iso on the path-homology axis only") {
        auto z4 = directed_cycle(4);
        auto z3 = directed_cycle(3);
        GraphMap f{z4, z3, {0, 1, 2, 0}};
        REQUIRE(validate_map(f));
        auto maps = induced_page_map(f, 2, 7, qq);
        std::map<std::pair<int, int>, bool> verdict;
        for (const auto& e : maps) verdict[{e.p, e.q}] = e.is_isomorphism;
        CHECK(verdict.at({0, 0}));
        CHECK(verdict.at({1, 0}));
        CHECK(!verdict.at({3, -1}));
    }
}

TEST_CASE("r-homotopy invariance on pages") {
    SUBCASE("identity vs fold on cone(Z3): equal on page 2") {
        auto c = cone(directed_cycle(3));
        auto id = identity_map(c.graph);
        auto d = cone_fold(c);
        CHECK(r_homotopy_page_agreement(id, d, 1, 2, 4, qq));
    }
    SUBCASE("two adjacent constants on Z3: equal on page 2, not on page 1") {
        auto g = directed_cycle(3);
        auto c0 = constant_map(g, g, 0);
        auto c1 = constant_map(g, g, 1);
        REQUIRE(r_homotopy_gap(c0, c1) == Dist::of(1));
        CHECK(r_homotopy_page_agreement(c0, c1, 1, 2, 5, qq));
        // They differ on page 1 at (0,0): kappa classes of distinct vertices.
        auto src = PageEngine<RingQ>::absolute(g, 5, qq);
        auto tgt = PageEngine<RingQ>::absolute(g, 5, qq);
        auto m0 = chain_map_matrices(src.complex(), tgt.complex(), c0.assignment, qq);
        auto m1 = chain_map_matrices(src.complex(), tgt.complex(), c1.assignment, qq);
        auto p0 = induced_page_map(src, tgt, m0, 1);
        auto p1 = induced_page_map(src, tgt, m1, 1);
        bool differ = false;
        for (size_t i = 0; i < p0.size(); ++i)
            if (!(p0[i].matrix == p1[i].matrix)) differ = true;
        CHECK(differ);
    }
}

TEST_CASE("reachability homology") {
    SUBCASE("point") {
        auto rh = reachability_homology(point(), 3, qq);
        CHECK(rh.at(0).free_rank == 1);
        for (int k = 1; k <= 3; ++k) CHECK(rh.at(k).is_zero());
    }
    SUBCASE("Z_m trivial for m = 3, 4") {
        for (int m : {3, 4}) {
            auto rh = reachability_homology(directed_cycle(m), 4, zz);
            CHECK(rh.at(0).free_rank == 1);
            for (int k = 1; k <= 4; ++k) CHECK(rh.at(k).is_zero());
        }
    }
    SUBCASE("C_{3,2} trivial") {
        auto rh = reachability_homology(bidirected_cycle(3, 2), 4, qq);
        CHECK(rh.at(0).free_rank == 1);
        for (int k = 1; k <= 4; ++k) CHECK(rh.at(k).is_zero());
    }
}

TEST_CASE("convergence report") {
    SUBCASE("point stabilizes immediately") {
        auto rep = convergence_report(point(), 2, qq);
        REQUIRE(rep.entries.size() == 1);
        CHECK(rep.entries[0].stable_from == 0);
        CHECK(rep.entries[0].known);
        CHECK(rep.ranks_agree);
    }
    SUBCASE("Z3: positive degrees die; entries stable by page 3") {
        auto rep = convergence_report(directed_cycle(3), 7, qq);
        CHECK(rep.ranks_agree);
        for (const auto& e : rep.entries)
            if (e.known) {
                CHECK(e.stable_from <= 3);
                if (e.p + e.q > 0) CHECK(e.einf.is_zero());
            }
        for (const auto& line : rep.lines)
            if (line.comparable && line.n > 0) CHECK(line.einf_rank_sum == 0);
    }
    SUBCASE("C_{m,n} first trivial page is max(m,n)") {
        for (auto [m, n] : std::vector<std::pair<int, int>>{{3, 1}, {3, 2}, {4, 3}}) {
            int mm = std::max(m, n);
            auto eng =
                PageEngine<RingQ>::absolute(bidirected_cycle(m, n), 2 * mm - 1, qq);
            CHECK(first_trivial_page(eng, mm + 1) == mm);
        }
    }
}

TEST_CASE("page recurrence H(E^r, d^r) = E^{r+1}") {
    std::vector<DiGraph> corpus{directed_cycle(4), bidirected_cycle(4, 1),
                                cone(directed_cycle(3)).graph};
    for (const auto& g : corpus) {
        auto engq = PageEngine<RingQ>::absolute(g, 5, qq);
        auto engz = PageEngine<RingZ>::absolute(g, 5, zz);
        for (int r = 1; r <= 3; ++r)
            for (int p = 0; p <= 5; ++p)
                for (int q = -p; q <= 0; ++q) {
                    if (engq.e0_dim(p, q) == 0) continue;
                    // All three cells of the d^r complex must be exact.
                    if (!engq.entry_exact(r + 1, p, q)) continue;
                    if (!engq.entry_exact(r, p + r, q - r + 1)) continue;
                    CHECK(page_entry_homology(engq, r, p, q) == engq.group(r + 1, p, q));
                    CHECK(page_entry_homology(engz, r, p, q) == engz.group(r + 1, p, q));
                }
    }
}

TEST_CASE("d^r o d^r = 0 in generator coordinates") {
    auto g = directed_cycle(3);
    auto eng = PageEngine<RingZ>::absolute(g, 7, zz);
    for (int r = 1; r <= 3; ++r)
        for (int p = 0; p <= 7; ++p)
            for (int q = -p; q <= 0; ++q) {
                if (eng.e0_dim(p, q) == 0) continue;
                if (p - 2 * r < 0 || q + 2 * (r - 1) > 0) continue;
                if (!eng.entry_exact(r, p, q)) continue;
                if (eng.group(r, p, q).is_zero()) continue;
                if (eng.group(r, p - r, q + r - 1).is_zero()) continue;
                auto m1 = eng.differential_on_generators(r, p, q);
                auto m2 = eng.differential_on_generators(r, p - r, q + r - 1);
                auto comp = dense_mul(m2, m1, zz);
                const auto& orders =
                    eng.presentation(r, p - 2 * r, q + 2 * (r - 1)).generators().orders;
                for (int i = 0; i < comp.rows; ++i)
                    for (int j = 0; j < comp.cols; ++j) {
                        if (i < int(orders.size()) && orders[i] > 1)
                            CHECK(comp.at(i, j) % orders[i] == 0);
                        else
                            CHECK(comp.at(i, j) == 0);
                    }
            }
}

TEST_CASE("random graphs: pages are consistent with magnitude homology") {
    std::mt19937 rng(2024);
    std::uniform_int_distribution<int> nd(1, 5);
    std::bernoulli_distribution edge(0.3);
    for (int trial = 0; trial < 10; ++trial) {
        DiGraph g;
        g.n = nd(rng);
        for (int u = 0; u < g.n; ++u)
            for (int v = 0; v < g.n; ++v)
                if (u != v && edge(rng)) g.edges.insert({u, v});
        auto eng = PageEngine<RingQ>::absolute(g, 4, qq);
        auto mh = magnitude_homology(g, 4, qq);
        for (const auto& [kl, grp] : mh)
            CHECK(eng.group(1, int(kl.second), int(kl.first - kl.second)) == grp);
    }
}

TEST_CASE("relative page of (cone(S0), S0) is the reduced table of S0 shifted by (1,1)") {
    auto x = sphere(0);
    auto c = cone(x);
    auto rel = PageEngine<RingQ>::relative(c.graph, c.inclusion.assignment, 4, qq);
    // Reduced PH(S0) is a single R at (0,0); the pair therefore carries a
    // single R at (1,1), i.e. spectral (1,0), among exact entries.
    auto t = page_table(rel.page_summary(2));
    std::map<std::pair<int, int>, HomologyGroup> expect{{{1, 0}, HomologyGroup{1, {}}}};
    std::map<std::pair<int, int>, HomologyGroup> exact;
    for (const auto& [pq, g] : t)
        if (rel.entry_exact(2, pq.first, pq.second)) exact[pq] = g;
    CHECK(exact == expect);
}

TEST_CASE("excision comparison matrix at (1,0) for the suspension pushout of S0") {
    auto x = sphere(0);
    auto c = cone(x);
    auto i = inclusion_map(c.inclusion.assignment, c.graph);
    auto f = constant_map(i.source, point(), 0);
    auto po = pushout(i, f);
    auto src = PageEngine<RingZ>::relative(c.graph, c.inclusion.assignment, 4, zz);
    std::vector<int> yv;
    for (int v = 0; v < po.j.source.n; ++v) yv.push_back(po.j.assignment[v]);
    auto tgt = PageEngine<RingZ>::relative(po.graph, yv, 4, zz);
    auto cm = chain_map_matrices(src.complex(), tgt.complex(), po.g.assignment, zz);
    auto m = induced_subquotient_map(src.presentation(1, 1, 0), tgt.presentation(1, 1, 0),
                                     cm[1], zz);
    CHECK(m.is_isomorphism);
}

TEST_CASE("entries stay constant above the stabilization bound") {
    auto rep = convergence_report(directed_cycle(3), 7, qq);
    auto eng = PageEngine<RingQ>::absolute(directed_cycle(3), 7, qq);
    for (const auto& e : rep.entries) {
        if (!e.known) continue;
        for (int r = e.stable_bound; r <= e.stable_bound + 2; ++r) {
            if (!eng.entry_exact(r, e.p, e.q)) break;
            CHECK(eng.group(r, e.p, e.q) == e.einf);
        }
    }
}

TEST_CASE("lattice-level differentials compose to zero and match generators") {
    auto eng = PageEngine<RingQ>::absolute(directed_cycle(3), 7, qq);
    // d1 at (4,-1) -> (3,-1) -> (2,-1): ambient boundaries square to zero, so
    // the lattice-coordinate matrices must compose to zero exactly.
    auto m1 = eng.differential_lattice(1, 4, -1);
    auto m2 = eng.differential_lattice(1, 3, -1);
    CHECK(sparse_is_zero(sparse_mul(m2, m1, qq)));
    // Consistency with the ambient boundary: mapping a lattice basis vector
    // through the matrix and through the boundary agree.
    const auto& src = eng.presentation(1, 4, -1);
    const auto& tgt = eng.presentation(1, 3, -1);
    for (int j = 0; j < src.lattice_dim(); ++j) {
        auto direct = sparse_apply(eng.boundary(3), src.lattice().basis.cols[j], qq);
        SparseVec<RingQ> via;
        for (const auto& [i, c] : m1.cols[j].e)
            sv_axpy(via, c, tgt.lattice().basis.cols[i], qq);
        CHECK(direct.e == via.e);
    }
}

TEST_CASE("prime field pages agree with the torsion-free integral picture") {
    RingFp f5(5);
    // MH(Z_4) is free over Z, so ranks over F_5 coincide; the page-2 table
    // and the collapse page do too.
    auto eng5 = PageEngine<RingFp>::absolute(directed_cycle(4), 9, f5);
    auto engq = PageEngine<RingQ>::absolute(directed_cycle(4), 9, qq);
    for (int r = 1; r <= 4; ++r) {
        auto a = page_table(eng5.page_summary(r));
        auto b = page_table(engq.page_summary(r));
        CHECK(a == b);
    }
    CHECK(first_trivial_page(eng5, 5) == 4);
    // d1 classes behave identically.
    auto d = eng5.d1_on_class(FormalSum{{{0, 1}, 1}}, 1, 0);
    bool nonzero = false;
    for (auto c : d.coords) nonzero = nonzero || c != 0;
    CHECK(nonzero);
}
