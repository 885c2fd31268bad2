#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <mpss/digraph.hpp>

using namespace mpss;

namespace {

// Loop-insensitive comparison: loops are invisible to maps, metrics and all
// complexes, and pushouts keep collapse-created loops.
DiGraph strip_loops(DiGraph g) {
    for (auto it = g.edges.begin(); it != g.edges.end();)
        it = (it->first == it->second) ? g.edges.erase(it) : std::next(it);
    return g;
}

// Independent reachability oracle: boolean transitive closure.
std::vector<std::vector<bool>> warshall(const DiGraph& g) {
    std::vector<std::vector<bool>> r(g.n, std::vector<bool>(g.n, false));
    for (int i = 0; i < g.n; ++i) r[i][i] = true;
    for (auto [u, v] : g.edges)
        if (u != v) r[u][v] = true;
    for (int k = 0; k < g.n; ++k)
        for (int i = 0; i < g.n; ++i)
            for (int j = 0; j < g.n; ++j)
                if (r[i][k] && r[k][j]) r[i][j] = true;
    return r;
}

}  // namespace

TEST_CASE("shortest path metric") {
    SUBCASE("one vertex") {
        auto m = shortest_path_metric(point());
        CHECK(m.at(0, 0) == Dist::of(0));
    }
    SUBCASE("directed 4-cycle") {
        auto z4 = directed_cycle(4);
        auto m = shortest_path_metric(z4);
        CHECK(m.at(0, 1) == Dist::of(1));
        CHECK(m.at(1, 0) == Dist::of(3));
        CHECK(diameter(z4) == 3);
    }
    SUBCASE("box metric is the l1 sum on Z3 box Z3") {
        auto z3 = directed_cycle(3);
        auto b = box_product(z3, z3);
        auto mb = shortest_path_metric(b.graph);
        auto mz = shortest_path_metric(z3);
        for (int g0 = 0; g0 < 3; ++g0)
            for (int h0 = 0; h0 < 3; ++h0)
                for (int g1 = 0; g1 < 3; ++g1)
                    for (int h1 = 0; h1 < 3; ++h1)
                        CHECK(mb.at(g0 * 3 + h0, g1 * 3 + h1) ==
                              mz.at(g0, g1) + mz.at(h0, h1));
    }
    SUBCASE("loops do not affect the metric") {
        DiGraph g = directed_cycle(3);
        g.edges.insert({1, 1});
        auto m1 = shortest_path_metric(g);
        auto m2 = shortest_path_metric(directed_cycle(3));
        CHECK(m1.d.size() == m2.d.size());
        for (size_t i = 0; i < m1.d.size(); ++i) CHECK(m1.d[i] == m2.d[i]);
    }
}

TEST_CASE("box product") {
    auto z3 = directed_cycle(3);
    SUBCASE("point is the unit, identity on indices") {
        auto b = box_product(point(), z3);
        CHECK(b.graph.n == 3);
        CHECK(b.graph.edges == z3.edges);
    }
    SUBCASE("Z1 box Z1 is a point") {
        auto b = box_product(directed_cycle(1), directed_cycle(1));
        CHECK(b.graph.n == 1);
        CHECK(b.graph.edges.empty());
    }
    SUBCASE("Z3 box Z3 has 9 vertices and 18 edges") {
        auto b = box_product(z3, z3);
        CHECK(b.graph.n == 9);
        CHECK(b.graph.edges.size() == 18);  // 2*m*n by the two defining clauses
        CHECK(validate_map(b.proj_left));
        CHECK(validate_map(b.proj_right));
    }
}

TEST_CASE("standard families") {
    SUBCASE("directed_cycle(3)") {
        auto g = directed_cycle(3);
        CHECK(g.n == 3);
        CHECK(g.edges == std::set<std::pair<int, int>>{{0, 1}, {1, 2}, {2, 0}});
    }
    SUBCASE("bidirected_cycle(2,1)") {
        auto g = bidirected_cycle(2, 1);
        CHECK(g.n == 3);
        CHECK(g.edges.size() == 3);
        // initial vertex 0 (no incoming), terminal vertex 2 (no outgoing)
        for (auto [u, v] : g.edges) {
            CHECK(v != 0);
            CHECK(u != 2);
        }
    }
    SUBCASE("sphere(1): two sources each pointing to two sinks") {
        auto g = sphere(1);
        CHECK(g.n == 4);
        CHECK(g.edges.size() == 4);
        int sources = 0, sinks = 0;
        for (int v = 0; v < 4; ++v) {
            int out = 0, in = 0;
            for (auto [a, b] : g.edges) {
                if (a == v) ++out;
                if (b == v) ++in;
            }
            if (out == 2 && in == 0) ++sources;
            if (in == 2 && out == 0) ++sinks;
        }
        CHECK(sources == 2);
        CHECK(sinks == 2);
    }
    SUBCASE("invalid parameters rejected") {
        CHECK_THROWS_AS(directed_cycle(0), input_error);
        CHECK_THROWS_AS(bidirected_cycle(0, 1), input_error);
        CHECK_THROWS_AS(sphere(-1), input_error);
    }
    SUBCASE("diameters: Z_m and C_{m,n}") {
        for (int m = 2; m <= 6; ++m) CHECK(diameter(directed_cycle(m)) == m - 1);
        // max(m,n)-1 when m != n; for m = n the initial-to-terminal distance
        // is m, which dominates.
        for (int m = 2; m <= 6; ++m)
            for (int n = 2; n <= 6; ++n) {
                long long expect = (m == n) ? m : std::max(m, n) - 1;
                CHECK(diameter(bidirected_cycle(m, n)) == expect);
            }
    }
}

TEST_CASE("cone") {
    SUBCASE("cone of a point is the interval I") {
        auto c = cone(point());
        CHECK(c.graph.n == 3);
        CHECK(is_isomorphic(c.graph, interval_i()));
    }
    SUBCASE("cone(Z3) has 7 vertices") {
        auto c = cone(directed_cycle(3));
        CHECK(c.graph.n == 7);
        CHECK(validate_map(c.inclusion));
    }
    SUBCASE("X into CX is a cofibration for X = Z4") {
        auto c = cone(directed_cycle(4));
        auto chk = is_cofibration(c.inclusion.assignment, c.graph);
        CHECK(chk.ok);
        // reach is exactly the two lower levels
        auto r = reach(c.inclusion.assignment, c.graph);
        CHECK(int(r.size()) == 8);
        CHECK(std::find(r.begin(), r.end(), c.apex) == r.end());
        // pi maps (x,0) back to (x,-1)
        for (int v = 0; v < 4; ++v) CHECK(chk.projection.at(4 + v) == v);
    }
}

TEST_CASE("suspension") {
    SUBCASE("suspension of empty graph is S^0") {
        auto g = suspension(empty_graph());
        CHECK(g.n == 2);
        CHECK(g.edges.empty());
    }
    SUBCASE("suspension of S^0 is S^1") {
        CHECK(is_isomorphic(suspension(sphere(0)), sphere(1)));
    }
    SUBCASE("suspension of a point") {
        auto g = suspension(point());
        CHECK(g.n == 3);
        CHECK(g.edges.size() == 2);
    }
}

TEST_CASE("reach") {
    SUBCASE("reach of everything is everything") {
        auto g = bidirected_cycle(3, 2);
        std::vector<int> all;
        for (int v = 0; v < g.n; ++v) all.push_back(v);
        CHECK(reach(all, g) == all);
    }
    SUBCASE("initial vertex of C_{4,3} reaches all 7 vertices") {
        auto g = bidirected_cycle(4, 3);
        auto r = reach({0}, g);
        CHECK(int(r.size()) == 7);
        // Cross-check against transitive closure.
        auto w = warshall(g);
        for (int v = 0; v < g.n; ++v) CHECK(w[0][v]);
    }
    SUBCASE("reach of X in cone(X) is the two lower levels") {
        auto c = cone(directed_cycle(3));
        auto r = reach(c.inclusion.assignment, c.graph);
        std::vector<int> expect{0, 1, 2, 3, 4, 5};
        CHECK(r == expect);
    }
}

TEST_CASE("is_cofibration") {
    SUBCASE("A = X is always a cofibration with identity projection") {
        auto g = bidirected_cycle(3, 2);
        std::vector<int> all;
        for (int v = 0; v < g.n; ++v) all.push_back(v);
        auto chk = is_cofibration(all, g);
        CHECK(chk.ok);
        for (int v = 0; v < g.n; ++v) CHECK(chk.projection.at(v) == v);
    }
    SUBCASE("A_{4,3} in C_{4,3}") {
        auto g = bidirected_cycle(4, 3);
        // A_{4,3}: initial vertex and the first two bottom-interval vertices.
        std::vector<int> a{0, 5, 6};
        auto chk = is_cofibration(a, g);
        CHECK(chk.ok);
        // Projection rule: vertices of A fixed, terminal vertex to the
        // terminal vertex of A, everything else to the initial vertex.
        CHECK(chk.projection.at(0) == 0);
        CHECK(chk.projection.at(5) == 5);
        CHECK(chk.projection.at(6) == 6);
        CHECK(chk.projection.at(4) == 6);  // terminal -> end of A
        CHECK(chk.projection.at(1) == 0);
        CHECK(chk.projection.at(2) == 0);
        CHECK(chk.projection.at(3) == 0);
    }
    SUBCASE("one interior vertex of Z3 is not a cofibration") {
        auto chk = is_cofibration({1}, directed_cycle(3));
        CHECK(!chk.ok);
        CHECK(chk.violated == 1);
    }
    SUBCASE("cofibration invariants hold when verdict is yes") {
        auto c = cone(directed_cycle(4));
        auto chk = is_cofibration(c.inclusion.assignment, c.graph);
        REQUIRE(chk.ok);
        std::set<int> a_set(c.inclusion.assignment.begin(), c.inclusion.assignment.end());
        for (auto [u, v] : c.graph.edges)
            CHECK(!(a_set.count(v) && !a_set.count(u)));
        auto dist = shortest_path_metric(c.graph);
        for (auto [x, px] : chk.projection) {
            if (a_set.count(x)) CHECK(px == x);
            for (int a : a_set) CHECK(dist.at(a, x) == dist.at(a, px) + dist.at(px, x));
        }
    }
}

TEST_CASE("pushout") {
    SUBCASE("pushout along identity is X") {
        auto x = bidirected_cycle(3, 2);
        std::vector<int> a_all;
        for (int v = 0; v < x.n; ++v) a_all.push_back(v);
        auto i = inclusion_map(a_all, x);
        auto f = identity_map(i.source);
        auto p = pushout(i, f);
        CHECK(is_isomorphic(p.graph, x));
    }
    SUBCASE("pushout of X into cone(X) along X -> point is the suspension") {
        auto x = directed_cycle(3);
        auto c = cone(x);
        auto f = constant_map(x, point(), 0);
        auto p = pushout(c.inclusion, f);
        CHECK(is_isomorphic(strip_loops(p.graph), suspension(x)));
    }
    SUBCASE("collapsing A_{4,3} in C_{4,3} gives C_{4,1}") {
        auto g = bidirected_cycle(4, 3);
        auto i = inclusion_map({0, 5, 6}, g);
        auto f = constant_map(i.source, point(), 0);
        auto p = pushout(i, f);
        CHECK(is_isomorphic(strip_loops(p.graph), bidirected_cycle(4, 1)));
    }
    SUBCASE("pushout invariants") {
        auto x = directed_cycle(4);
        auto c = cone(x);
        auto f = constant_map(x, point(), 0);
        auto p = pushout(c.inclusion, f);
        // square commutes: j o f = g o i
        for (int v = 0; v < x.n; ++v)
            CHECK(p.j.assignment[f.assignment[v]] == p.g.assignment[c.inclusion.assignment[v]]);
        // g injective on X \ A, jointly surjective with j
        std::set<int> img;
        for (int v = 0; v < p.j.source.n; ++v) img.insert(p.j.assignment[v]);
        std::set<int> a_img(c.inclusion.assignment.begin(), c.inclusion.assignment.end());
        std::set<int> g_outside;
        for (int v = 0; v < c.graph.n; ++v) {
            img.insert(p.g.assignment[v]);
            if (!a_img.count(v)) g_outside.insert(p.g.assignment[v]);
        }
        CHECK(int(g_outside.size()) == c.graph.n - int(a_img.size()));
        CHECK(int(img.size()) == p.graph.n);
        CHECK(validate_map(p.g));
        CHECK(validate_map(p.j));
    }
    SUBCASE("non-induced inclusion rejected") {
        DiGraph x = directed_cycle(3);
        DiGraph a;  // two vertices, no edge, mapped onto an edge of Z3
        a.n = 2;
        GraphMap i{a, x, {0, 1}};
        auto f = identity_map(a);
        CHECK_THROWS_AS(pushout(i, f), input_error);
    }
}

TEST_CASE("r_homotopy_gap") {
    SUBCASE("equal maps have gap 0") {
        auto g = directed_cycle(5);
        auto id = identity_map(g);
        CHECK(r_homotopy_gap(id, id) == Dist::of(0));
    }
    SUBCASE("identity and constant-at-apex are 1-homotopic to the cone fold") {
        auto c = cone(directed_cycle(3));
        auto id = identity_map(c.graph);
        auto d = cone_fold(c);
        auto k = constant_map(c.graph, c.graph, c.apex);
        CHECK(r_homotopy_gap(id, d) <= Dist::of(1));
        CHECK(r_homotopy_gap(k, d) <= Dist::of(1));
    }
    SUBCASE("swap on S^0 vs identity has infinite gap") {
        auto s0 = sphere(0);
        auto id = identity_map(s0);
        GraphMap swap{s0, s0, {1, 0}};
        CHECK(r_homotopy_gap(swap, id).is_inf());
    }
    SUBCASE("gap 0 iff equal on vertices") {
        auto g = directed_cycle(4);
        GraphMap f{g, g, {1, 2, 3, 0}};
        auto id = identity_map(g);
        CHECK(r_homotopy_gap(f, id) != Dist::of(0));
    }
    SUBCASE("mismatched graphs rejected") {
        auto f = identity_map(directed_cycle(3));
        auto g = identity_map(directed_cycle(4));
        CHECK_THROWS_AS(r_homotopy_gap(f, g), input_error);
    }
}

TEST_CASE("validate_map") {
    auto z3 = directed_cycle(3);
    CHECK(validate_map(identity_map(z3)));
    CHECK(validate_map(constant_map(z3, z3, 1)));
    GraphMap rev{z3, z3, {0, 2, 1}};  // x -> -x mod 3 reverses orientation
    CHECK(!validate_map(rev));
}

TEST_CASE("transpose") {
    auto g = bidirected_cycle(2, 1);
    CHECK(transpose(transpose(g)) == g);
    CHECK(is_isomorphic(transpose(directed_cycle(3)), directed_cycle(3)));
    // In the transpose of C_{2,1}, the old terminal vertex becomes initial.
    auto t = transpose(g);
    for (auto [u, v] : t.edges) CHECK(v != 2);
}

TEST_CASE("graph io") {
    SUBCASE("text round trip") {
        auto g = bidirected_cycle(3, 2);
        auto h = parse_graph_text(graph_to_text(g));
        CHECK(g == h);
    }
    SUBCASE("json round trip") {
        auto g = sphere(2);
        auto h = parse_graph_json(graph_to_json(g));
        CHECK(g == h);
    }
    SUBCASE("parallel edges rejected") {
        CHECK_THROWS_AS(parse_graph_text("digraph 2\n0 1\n0 1\n"), input_error);
        CHECK_THROWS_AS(parse_graph_json(R"({"vertices":2,"edges":[[0,1],[0,1]]})"),
                        input_error);
    }
    SUBCASE("loops accepted") {
        auto g = parse_graph_json(R"({"vertices":2,"edges":[[0,0],[0,1]]})");
        CHECK(g.has_edge(0, 0));
    }
    SUBCASE("bad input rejected") {
        CHECK_THROWS_AS(parse_graph_text("graph 2\n"), input_error);
        CHECK_THROWS_AS(parse_graph_json("{"), input_error);
        CHECK_THROWS_AS(parse_graph_json(R"({"vertices":1,"edges":[[0,3]]})"), input_error);
    }
}
