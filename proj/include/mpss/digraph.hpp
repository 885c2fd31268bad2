#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "rings.hpp"

namespace mpss {

// Distance in the shortest path metric: a natural number or infinity.
// Infinity is a distinct state, never a large integer; addition saturates.
class Dist {
public:
    Dist() : fin_(true), v_(0) {}
    static Dist inf() {
        Dist d;
        d.fin_ = false;
        d.v_ = 0;
        return d;
    }
    static Dist of(long long v) {
        Dist d;
        d.fin_ = true;
        d.v_ = v;
        return d;
    }
    bool is_inf() const { return !fin_; }
    bool is_finite() const { return fin_; }
    long long value() const {
        if (!fin_) throw contract_error("Dist::value on infinity");
        return v_;
    }
    Dist operator+(const Dist& o) const {
        if (!fin_ || !o.fin_) return inf();
        return of(v_ + o.v_);
    }
    bool operator==(const Dist& o) const { return fin_ == o.fin_ && (!fin_ || v_ == o.v_); }
    bool operator!=(const Dist& o) const { return !(*this == o); }
    bool operator<(const Dist& o) const {
        if (fin_ && o.fin_) return v_ < o.v_;
        return fin_ && !o.fin_;
    }
    bool operator<=(const Dist& o) const { return *this < o || *this == o; }
    std::string str() const { return fin_ ? std::to_string(v_) : "inf"; }

private:
    bool fin_;
    long long v_;
};

struct DistMatrix {
    int n = 0;
    std::vector<Dist> d;  // row-major
    const Dist& at(int x, int y) const { return d[size_t(x) * n + y]; }
    Dist& at(int x, int y) { return d[size_t(x) * n + y]; }
};

// Finite directed graph. Loops allowed, parallel edges not. Vertices are
// 0..n-1; optional labels document constructor index layouts.
struct DiGraph {
    int n = 0;
    std::set<std::pair<int, int>> edges;
    std::vector<std::string> labels;  // empty or size n

    bool has_edge(int u, int v) const { return edges.count({u, v}) != 0; }
    void add_edge(int u, int v) {
        if (u < 0 || u >= n || v < 0 || v >= n) throw input_error("edge endpoint out of range");
        edges.insert({u, v});
    }
    std::string label(int v) const {
        if (v >= 0 && v < int(labels.size())) return labels[v];
        return "v" + std::to_string(v);
    }
    bool operator==(const DiGraph& o) const { return n == o.n && edges == o.edges; }
};

// f: source -> target; for every source edge (x,y) either f(x)=f(y) or
// (f(x),f(y)) is a target edge.
struct GraphMap {
    DiGraph source, target;
    std::vector<int> assignment;

    int operator()(int v) const { return assignment.at(v); }
};

bool validate_map(const GraphMap& f);
GraphMap identity_map(const DiGraph& g);
GraphMap compose(const GraphMap& g, const GraphMap& f);  // g after f
GraphMap constant_map(const DiGraph& src, const DiGraph& tgt, int value);

DistMatrix shortest_path_metric(const DiGraph& g);
// Largest finite distance (0 for a graph with no finite positive distances).
long long diameter(const DiGraph& g);

struct BoxProduct {
    DiGraph graph;
    GraphMap proj_left, proj_right;
};
// Vertex (g,h) has index g*|V(H)| + h.
BoxProduct box_product(const DiGraph& g, const DiGraph& h);

// The categorical product; its metric is the l_infinity maximum of the
// factor metrics. Constructor only: its nerve identification is not
// filtered, so no homology machinery applies to it here.
DiGraph strong_product(const DiGraph& g, const DiGraph& h);

// Standard families.
DiGraph point();
DiGraph empty_graph();
DiGraph directed_cycle(int m);             // Z_m; Z_1 is a bare vertex
DiGraph bidirected_cycle(int m, int n);    // C_{m,n}
DiGraph interval_i();                      // -1 -> 0 <- +1
DiGraph interval_j();                      // -2 -> -1 <- 0 -> 1 <- 2
DiGraph sphere(int n);                     // iterated suspension of the empty graph

enum class Family { directed_cycle, bidirected_cycle, interval_I, interval_J, sphere };
DiGraph standard_family(Family f, const std::vector<int>& params);

struct ConeResult {
    DiGraph graph;       // X at level -1 (indices 0..n-1), X at level 0 (n..2n-1), apex 2n
    GraphMap inclusion;  // X as the induced subgraph at level -1
    int apex = 0;
};
ConeResult cone(const DiGraph& x);
// The fold of the cone: level -1 collapses onto level 0, apex fixed.
GraphMap cone_fold(const ConeResult& c);

// Two new vertices n ("-1 pole") and n+1 ("+1 pole"), each with an edge to
// every vertex of x.
DiGraph suspension(const DiGraph& x);

std::vector<int> reach(const std::vector<int>& a_vertices, const DiGraph& x);

struct CofibrationCheck {
    bool ok = false;
    int violated = 0;                // 1 or 2 when !ok
    std::string detail;
    std::map<int, int> projection;   // pi on the reach, when ok
};
CofibrationCheck is_cofibration(const std::vector<int>& a_vertices, const DiGraph& x);

DiGraph induced_subgraph(const DiGraph& x, const std::vector<int>& vertices);
GraphMap inclusion_map(const std::vector<int>& a_vertices, const DiGraph& x);

struct PushoutResult {
    DiGraph graph;  // vertices of Y first, then X \ A in ascending order
    GraphMap g;     // X -> P
    GraphMap j;     // Y -> P
};
// i must be an induced subgraph inclusion; f arbitrary. Loops created by
// collapsing are retained.
PushoutResult pushout(const GraphMap& i, const GraphMap& f);

// max over vertices x of d(f(x), g(x)); infinity when some pair is
// unreachable. f ~>_r g iff the result is <= r.
Dist r_homotopy_gap(const GraphMap& f, const GraphMap& g);

DiGraph transpose(const DiGraph& g);

bool is_isomorphic(const DiGraph& g, const DiGraph& h);

// Serialization. Text: first line "digraph <n>", then "u v" lines.
// JSON: {"vertices": n, "edges": [[u,v],...], "labels": [...]}.
DiGraph parse_graph_text(const std::string& text);
DiGraph parse_graph_json(const std::string& text);
std::string graph_to_text(const DiGraph& g);
std::string graph_to_json(const DiGraph& g);

}  // namespace mpss
