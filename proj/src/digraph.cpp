#include "mpss/digraph.hpp"

#include <algorithm>
#include <deque>
#include <sstream>

#include <json.hpp>

namespace mpss {

bool validate_map(const GraphMap& f) {
    if (int(f.assignment.size()) != f.source.n) return false;
    for (int v : f.assignment)
        if (v < 0 || v >= f.target.n) return false;
    for (auto [x, y] : f.source.edges) {
        int fx = f.assignment[x], fy = f.assignment[y];
        if (fx != fy && !f.target.has_edge(fx, fy)) return false;
    }
    return true;
}

GraphMap identity_map(const DiGraph& g) {
    GraphMap f{g, g, {}};
    f.assignment.resize(g.n);
    for (int i = 0; i < g.n; ++i) f.assignment[i] = i;
    return f;
}

GraphMap compose(const GraphMap& g, const GraphMap& f) {
    if (f.target != g.source) throw input_error("compose: middle graphs differ");
    GraphMap h{f.source, g.target, {}};
    h.assignment.resize(f.source.n);
    for (int i = 0; i < f.source.n; ++i) h.assignment[i] = g.assignment[f.assignment[i]];
    return h;
}

GraphMap constant_map(const DiGraph& src, const DiGraph& tgt, int value) {
    if (value < 0 || value >= tgt.n) throw input_error("constant_map: vertex out of range");
    GraphMap f{src, tgt, std::vector<int>(src.n, value)};
    return f;
}

DistMatrix shortest_path_metric(const DiGraph& g) {
    DistMatrix m;
    m.n = g.n;
    m.d.assign(size_t(g.n) * g.n, Dist::inf());
    std::vector<std::vector<int>> out(g.n);
    for (auto [u, v] : g.edges)
        if (u != v) out[u].push_back(v);  // loops never shorten anything
    for (int s = 0; s < g.n; ++s) {
        m.at(s, s) = Dist::of(0);
        std::deque<int> q{s};
        while (!q.empty()) {
            int x = q.front();
            q.pop_front();
            long long dx = m.at(s, x).value();
            for (int y : out[x])
                if (m.at(s, y).is_inf()) {
                    m.at(s, y) = Dist::of(dx + 1);
                    q.push_back(y);
                }
        }
    }
    return m;
}

long long diameter(const DiGraph& g) {
    auto m = shortest_path_metric(g);
    long long best = 0;
    for (const auto& d : m.d)
        if (d.is_finite()) best = std::max(best, d.value());
    return best;
}

BoxProduct box_product(const DiGraph& g, const DiGraph& h) {
    BoxProduct b;
    b.graph.n = g.n * h.n;
    auto idx = [&](int x, int y) { return x * h.n + y; };
    for (int x = 0; x < g.n; ++x)
        for (auto [y1, y2] : h.edges) b.graph.edges.insert({idx(x, y1), idx(x, y2)});
    for (auto [x1, x2] : g.edges)
        for (int y = 0; y < h.n; ++y) b.graph.edges.insert({idx(x1, y), idx(x2, y)});
    b.graph.labels.resize(b.graph.n);
    for (int x = 0; x < g.n; ++x)
        for (int y = 0; y < h.n; ++y)
            b.graph.labels[idx(x, y)] = "(" + g.label(x) + "," + h.label(y) + ")";
    b.proj_left = GraphMap{b.graph, g, {}};
    b.proj_right = GraphMap{b.graph, h, {}};
    b.proj_left.assignment.resize(b.graph.n);
    b.proj_right.assignment.resize(b.graph.n);
    for (int x = 0; x < g.n; ++x)
        for (int y = 0; y < h.n; ++y) {
            b.proj_left.assignment[idx(x, y)] = x;
            b.proj_right.assignment[idx(x, y)] = y;
        }
    return b;
}

DiGraph strong_product(const DiGraph& g, const DiGraph& h) {
    DiGraph s;
    s.n = g.n * h.n;
    auto idx = [&](int x, int y) { return x * h.n + y; };
    for (int x = 0; x < g.n; ++x)
        for (auto [y1, y2] : h.edges) s.edges.insert({idx(x, y1), idx(x, y2)});
    for (auto [x1, x2] : g.edges)
        for (int y = 0; y < h.n; ++y) s.edges.insert({idx(x1, y), idx(x2, y)});
    for (auto [x1, x2] : g.edges)
        for (auto [y1, y2] : h.edges) s.edges.insert({idx(x1, y1), idx(x2, y2)});
    return s;
}

DiGraph point() {
    DiGraph g;
    g.n = 1;
    g.labels = {"pt"};
    return g;
}

DiGraph empty_graph() { return DiGraph{}; }

DiGraph directed_cycle(int m) {
    if (m < 1) throw input_error("directed_cycle: m >= 1 required");
    DiGraph g;
    g.n = m;
    for (int i = 0; i < m; ++i) g.labels.push_back("c" + std::to_string(i));
    if (m == 1) return g;  // a single vertex, no loop
    for (int i = 0; i < m; ++i) g.edges.insert({i, (i + 1) % m});
    return g;
}

DiGraph bidirected_cycle(int m, int n) {
    if (m < 1 || n < 1) throw input_error("bidirected_cycle: m,n >= 1 required");
    // Index layout: 0 = initial vertex a0; 1..m-1 = interior of the top
    // (length-m) interval; m = terminal vertex; m+1..m+n-1 = interior of the
    // bottom (length-n) interval.
    DiGraph g;
    g.n = m + n;
    g.labels.resize(g.n);
    g.labels[0] = "a0";
    for (int i = 1; i < m; ++i) g.labels[i] = "t" + std::to_string(i);
    g.labels[m] = "z";
    for (int i = 1; i < n; ++i) g.labels[m + i] = "b" + std::to_string(i);
    for (int i = 0; i < m; ++i) g.edges.insert({i, i + 1});
    if (n == 1) {
        g.edges.insert({0, m});
    } else {
        g.edges.insert({0, m + 1});
        for (int i = 1; i + 1 < n; ++i) g.edges.insert({m + i, m + i + 1});
        g.edges.insert({m + n - 1, m});
    }
    return g;
}

DiGraph interval_i() {
    DiGraph g;
    g.n = 3;
    g.labels = {"-1", "0", "+1"};
    g.edges.insert({0, 1});
    g.edges.insert({2, 1});
    return g;
}

DiGraph interval_j() {
    DiGraph g;
    g.n = 5;
    g.labels = {"-2", "-1", "0", "+1", "+2"};
    g.edges.insert({0, 1});
    g.edges.insert({2, 1});
    g.edges.insert({2, 3});
    g.edges.insert({4, 3});
    return g;
}

DiGraph sphere(int n) {
    if (n < 0) throw input_error("sphere: n >= 0 required");
    DiGraph g = empty_graph();
    for (int i = 0; i <= n; ++i) g = suspension(g);
    return g;
}

DiGraph standard_family(Family f, const std::vector<int>& params) {
    switch (f) {
        case Family::directed_cycle:
            if (params.size() != 1) throw input_error("directed_cycle takes one parameter");
            return directed_cycle(params[0]);
        case Family::bidirected_cycle:
            if (params.size() != 2) throw input_error("bidirected_cycle takes two parameters");
            return bidirected_cycle(params[0], params[1]);
        case Family::interval_I:
            if (!params.empty()) throw input_error("interval_I takes no parameters");
            return interval_i();
        case Family::interval_J:
            if (!params.empty()) throw input_error("interval_J takes no parameters");
            return interval_j();
        case Family::sphere:
            if (params.size() != 1) throw input_error("sphere takes one parameter");
            return sphere(params[0]);
    }
    throw input_error("unknown family");
}

ConeResult cone(const DiGraph& x) {
    // Box with the interval -1 -> 0 <- +1, then collapse level +1 to a point.
    // Index layout: (v,-1) = v, (v,0) = n+v, apex = 2n.
    ConeResult c;
    int n = x.n;
    c.graph.n = 2 * n + 1;
    c.apex = 2 * n;
    for (auto [u, v] : x.edges) {
        c.graph.edges.insert({u, v});          // level -1
        c.graph.edges.insert({n + u, n + v});  // level 0
    }
    for (int v = 0; v < n; ++v) {
        c.graph.edges.insert({v, n + v});       // -1 -> 0
        c.graph.edges.insert({c.apex, n + v});  // collapsed +1 -> 0
    }
    if (!x.edges.empty()) c.graph.edges.insert({c.apex, c.apex});  // collapse loop
    c.graph.labels.resize(c.graph.n);
    for (int v = 0; v < n; ++v) {
        c.graph.labels[v] = "(" + x.label(v) + ",-1)";
        c.graph.labels[n + v] = "(" + x.label(v) + ",0)";
    }
    c.graph.labels[c.apex] = "apex";
    c.inclusion = GraphMap{x, c.graph, {}};
    c.inclusion.assignment.resize(n);
    for (int v = 0; v < n; ++v) c.inclusion.assignment[v] = v;
    return c;
}

GraphMap cone_fold(const ConeResult& c) {
    int n = (c.graph.n - 1) / 2;
    GraphMap d{c.graph, c.graph, {}};
    d.assignment.resize(c.graph.n);
    for (int v = 0; v < n; ++v) {
        d.assignment[v] = n + v;
        d.assignment[n + v] = n + v;
    }
    d.assignment[c.apex] = c.apex;
    return d;
}

DiGraph suspension(const DiGraph& x) {
    DiGraph g = x;
    g.labels.resize(x.n);
    for (int v = 0; v < x.n; ++v) g.labels[v] = x.label(v);
    g.n = x.n + 2;
    g.labels.push_back("-1");
    g.labels.push_back("+1");
    for (int v = 0; v < x.n; ++v) {
        g.edges.insert({x.n, v});
        g.edges.insert({x.n + 1, v});
    }
    return g;
}

std::vector<int> reach(const std::vector<int>& a_vertices, const DiGraph& x) {
    for (int v : a_vertices)
        if (v < 0 || v >= x.n) throw input_error("reach: vertex out of range");
    std::vector<char> seen(x.n, 0);
    std::vector<std::vector<int>> out(x.n);
    for (auto [u, v] : x.edges)
        if (u != v) out[u].push_back(v);
    std::deque<int> q;
    for (int v : a_vertices)
        if (!seen[v]) {
            seen[v] = 1;
            q.push_back(v);
        }
    while (!q.empty()) {
        int u = q.front();
        q.pop_front();
        for (int v : out[u])
            if (!seen[v]) {
                seen[v] = 1;
                q.push_back(v);
            }
    }
    std::vector<int> r;
    for (int v = 0; v < x.n; ++v)
        if (seen[v]) r.push_back(v);
    return r;
}

CofibrationCheck is_cofibration(const std::vector<int>& a_vertices, const DiGraph& x) {
    CofibrationCheck res;
    std::vector<char> in_a(x.n, 0);
    for (int v : a_vertices) {
        if (v < 0 || v >= x.n) throw input_error("is_cofibration: vertex out of range");
        in_a[v] = 1;
    }
    // Condition 1: no edges from outside A into A.
    for (auto [u, v] : x.edges)
        if (!in_a[u] && in_a[v]) {
            res.violated = 1;
            res.detail = "edge (" + x.label(u) + "," + x.label(v) + ") enters A from outside";
            return res;
        }
    auto dist = shortest_path_metric(x);
    auto r = reach(a_vertices, x);
    // Condition 2: each x in the reach has a projection pi(x) in A with
    // d(a,x) = d(a,pi(x)) + d(pi(x),x) for every a in A. pi(a) = a is forced,
    // and the equation then holds trivially; other vertices are searched
    // exhaustively over A.
    for (int v : r) {
        std::optional<int> pi;
        if (in_a[v]) {
            pi = v;
        } else {
            for (int cand : a_vertices) {
                bool good = true;
                for (int a : a_vertices)
                    if (dist.at(a, v) != dist.at(a, cand) + dist.at(cand, v)) {
                        good = false;
                        break;
                    }
                if (good) {
                    pi = cand;
                    break;
                }
            }
        }
        if (!pi) {
            res.violated = 2;
            res.detail = "no valid projection for vertex " + x.label(v);
            return res;
        }
        res.projection[v] = *pi;
    }
    res.ok = true;
    return res;
}

DiGraph induced_subgraph(const DiGraph& x, const std::vector<int>& vertices) {
    std::vector<int> vs = vertices;
    std::sort(vs.begin(), vs.end());
    vs.erase(std::unique(vs.begin(), vs.end()), vs.end());
    std::map<int, int> reindex;
    DiGraph g;
    g.n = int(vs.size());
    for (int i = 0; i < g.n; ++i) {
        if (vs[i] < 0 || vs[i] >= x.n) throw input_error("induced_subgraph: vertex out of range");
        reindex[vs[i]] = i;
        g.labels.push_back(x.label(vs[i]));
    }
    for (auto [u, v] : x.edges)
        if (reindex.count(u) && reindex.count(v)) g.edges.insert({reindex[u], reindex[v]});
    return g;
}

GraphMap inclusion_map(const std::vector<int>& a_vertices, const DiGraph& x) {
    auto a = induced_subgraph(x, a_vertices);
    std::vector<int> vs = a_vertices;
    std::sort(vs.begin(), vs.end());
    vs.erase(std::unique(vs.begin(), vs.end()), vs.end());
    GraphMap f{a, x, vs};
    return f;
}

namespace {
// Check that i is an induced subgraph inclusion: injective, edge sets match
// exactly under the vertex injection.
bool is_induced_inclusion(const GraphMap& i) {
    std::vector<char> hit(i.target.n, 0);
    for (int v : i.assignment) {
        if (hit[v]) return false;
        hit[v] = 1;
    }
    std::vector<char> in_img(i.target.n, 0);
    for (int v : i.assignment) in_img[v] = 1;
    for (auto [u, v] : i.source.edges)
        if (!i.target.has_edge(i.assignment[u], i.assignment[v])) return false;
    for (auto [u, v] : i.target.edges)
        if (in_img[u] && in_img[v]) {
            // Pull back.
            int su = -1, sv = -1;
            for (int t = 0; t < i.source.n; ++t) {
                if (i.assignment[t] == u) su = t;
                if (i.assignment[t] == v) sv = t;
            }
            if (!i.source.has_edge(su, sv)) return false;
        }
    return true;
}
}  // namespace

PushoutResult pushout(const GraphMap& i, const GraphMap& f) {
    if (i.source != f.source) throw input_error("pushout: maps must share their source");
    if (!validate_map(i) || !validate_map(f)) throw input_error("pushout: invalid graph map");
    if (!is_induced_inclusion(i))
        throw input_error("pushout: i is not an induced subgraph inclusion");
    const DiGraph& x = i.target;
    const DiGraph& y = f.target;
    std::vector<char> in_a(x.n, 0);
    std::vector<int> a_of_x(x.n, -1);
    for (int t = 0; t < i.source.n; ++t) {
        in_a[i.assignment[t]] = 1;
        a_of_x[i.assignment[t]] = t;
    }
    PushoutResult res;
    res.graph.n = y.n;
    std::vector<int> g_assign(x.n, -1);
    for (int v = 0; v < x.n; ++v) {
        if (in_a[v]) {
            g_assign[v] = f.assignment[a_of_x[v]];
        } else {
            g_assign[v] = res.graph.n++;
        }
    }
    res.graph.labels.resize(res.graph.n);
    for (int v = 0; v < y.n; ++v) res.graph.labels[v] = y.label(v);
    for (int v = 0; v < x.n; ++v)
        if (!in_a[v]) res.graph.labels[g_assign[v]] = x.label(v);
    for (auto [u, v] : y.edges) res.graph.edges.insert({u, v});
    for (auto [u, v] : x.edges) res.graph.edges.insert({g_assign[u], g_assign[v]});
    res.g = GraphMap{x, res.graph, g_assign};
    res.j = GraphMap{y, res.graph, {}};
    res.j.assignment.resize(y.n);
    for (int v = 0; v < y.n; ++v) res.j.assignment[v] = v;
    return res;
}

Dist r_homotopy_gap(const GraphMap& f, const GraphMap& g) {
    if (f.source != g.source || f.target != g.target)
        throw input_error("r_homotopy_gap: maps must share source and target");
    auto dist = shortest_path_metric(f.target);
    Dist gap = Dist::of(0);
    for (int v = 0; v < f.source.n; ++v) {
        const Dist& d = dist.at(f.assignment[v], g.assignment[v]);
        if (d.is_inf()) return Dist::inf();
        if (gap < d) gap = d;
    }
    return gap;
}

DiGraph transpose(const DiGraph& g) {
    DiGraph t;
    t.n = g.n;
    t.labels = g.labels;
    for (auto [u, v] : g.edges) t.edges.insert({v, u});
    return t;
}

namespace {
bool iso_backtrack(const DiGraph& g, const DiGraph& h, std::vector<int>& map_gh,
                   std::vector<char>& used, int v,
                   const std::vector<std::pair<int, int>>& deg_g,
                   const std::vector<std::pair<int, int>>& deg_h) {
    if (v == g.n) return true;
    for (int w = 0; w < h.n; ++w) {
        if (used[w] || deg_g[v] != deg_h[w]) continue;
        bool ok = (g.has_edge(v, v) == h.has_edge(w, w));
        for (int u = 0; u < v && ok; ++u) {
            if (g.has_edge(u, v) != h.has_edge(map_gh[u], w)) ok = false;
            if (g.has_edge(v, u) != h.has_edge(w, map_gh[u])) ok = false;
        }
        if (!ok) continue;
        map_gh[v] = w;
        used[w] = 1;
        if (iso_backtrack(g, h, map_gh, used, v + 1, deg_g, deg_h)) return true;
        used[w] = 0;
    }
    return false;
}
}  // namespace

bool is_isomorphic(const DiGraph& g, const DiGraph& h) {
    if (g.n != h.n || g.edges.size() != h.edges.size()) return false;
    auto degs = [](const DiGraph& x) {
        std::vector<std::pair<int, int>> d(x.n, {0, 0});
        for (auto [u, v] : x.edges) {
            d[u].first++;
            d[v].second++;
        }
        return d;
    };
    auto dg = degs(g), dh = degs(h);
    auto sg = dg, sh = dh;
    std::sort(sg.begin(), sg.end());
    std::sort(sh.begin(), sh.end());
    if (sg != sh) return false;
    std::vector<int> map_gh(g.n, -1);
    std::vector<char> used(g.n, 0);
    return iso_backtrack(g, h, map_gh, used, 0, dg, dh);
}

DiGraph parse_graph_text(const std::string& text) {
    std::istringstream in(text);
    std::string tag;
    int n = -1;
    if (!(in >> tag >> n) || tag != "digraph" || n < 0)
        throw input_error("graph text: expected header 'digraph <vertex_count>'");
    DiGraph g;
    g.n = n;
    int u, v;
    while (in >> u >> v) {
        if (u < 0 || u >= n || v < 0 || v >= n) throw input_error("graph text: vertex out of range");
        if (g.has_edge(u, v)) throw input_error("graph text: parallel edge rejected");
        g.edges.insert({u, v});
    }
    if (!in.eof() && in.fail()) {
        in.clear();
        std::string rest;
        in >> rest;
        if (!rest.empty()) throw input_error("graph text: trailing garbage '" + rest + "'");
    }
    return g;
}

DiGraph parse_graph_json(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const std::exception& e) {
        throw input_error(std::string("graph json: ") + e.what());
    }
    if (!j.contains("vertices") || !j["vertices"].is_number_integer())
        throw input_error("graph json: missing integer field 'vertices'");
    DiGraph g;
    g.n = j["vertices"].get<int>();
    if (g.n < 0) throw input_error("graph json: negative vertex count");
    if (j.contains("edges")) {
        for (const auto& e : j["edges"]) {
            if (!e.is_array() || e.size() != 2) throw input_error("graph json: bad edge entry");
            int u = e[0].get<int>(), v = e[1].get<int>();
            if (u < 0 || u >= g.n || v < 0 || v >= g.n)
                throw input_error("graph json: vertex out of range");
            if (g.has_edge(u, v)) throw input_error("graph json: parallel edge rejected");
            g.edges.insert({u, v});
        }
    }
    if (j.contains("labels")) {
        for (const auto& s : j["labels"]) g.labels.push_back(s.get<std::string>());
        if (!g.labels.empty() && int(g.labels.size()) != g.n)
            throw input_error("graph json: label count mismatch");
    }
    return g;
}

std::string graph_to_text(const DiGraph& g) {
    std::ostringstream out;
    out << "digraph " << g.n << "\n";
    for (auto [u, v] : g.edges) out << u << " " << v << "\n";
    return out.str();
}

std::string graph_to_json(const DiGraph& g) {
    nlohmann::ordered_json j;
    j["vertices"] = g.n;
    j["edges"] = nlohmann::ordered_json::array();
    for (auto [u, v] : g.edges) j["edges"].push_back({u, v});
    if (!g.labels.empty()) j["labels"] = g.labels;
    return j.dump();
}

}  // namespace mpss
