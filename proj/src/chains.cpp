#include "mpss/chains.hpp"

#include <algorithm>
#include <atomic>
#include <sstream>
#include <thread>

#include <json.hpp>

namespace mpss {

std::string trail_str(const std::vector<int>& tuple, const DiGraph& g) {
    std::string s = "(";
    for (size_t i = 0; i < tuple.size(); ++i) s += (i ? "," : "") + g.label(tuple[i]);
    return s + ")";
}

FormalSum normalize_sum(FormalSum s) {
    std::sort(s.begin(), s.end());
    FormalSum out;
    for (auto& [t, c] : s) {
        if (!out.empty() && out.back().first == t)
            out.back().second += c;
        else
            out.emplace_back(std::move(t), c);
    }
    out.erase(std::remove_if(out.begin(), out.end(), [](const auto& p) { return p.second == 0; }),
              out.end());
    return out;
}

std::string TrailStore::key(const std::vector<int>& tuple) {
    std::string k;
    k.reserve(tuple.size() * 4);
    for (int v : tuple) {
        k.append(reinterpret_cast<const char*>(&v), sizeof(int));
    }
    return k;
}

TrailStore::TrailStore(const DiGraph& g, int k_max, long long l_max)
    : graph_(g), dist_(shortest_path_metric(g)), k_max_(k_max), l_max_(l_max) {
    if (k_max < 0 || l_max < 0) throw input_error("TrailStore: bounds must be nonnegative");
    // Depth-first enumeration: extend a trail by any reachable distinct
    // vertex while the length bound allows.
    std::vector<int> cur;
    std::function<void(long long)> extend = [&](long long len) {
        Trail t;
        t.vertices = cur;
        t.length = len;
        trails_.push_back(std::move(t));
        if (int(cur.size()) - 1 >= k_max_) return;
        int last = cur.back();
        for (int y = 0; y < graph_.n; ++y) {
            if (y == last) continue;
            const Dist& d = dist_.at(last, y);
            if (d.is_inf()) continue;
            if (len + d.value() > l_max_) continue;
            cur.push_back(y);
            extend(len + d.value());
            cur.pop_back();
        }
    };
    for (int v = 0; v < graph_.n; ++v) {
        cur = {v};
        extend(0);
    }

    // Cells sorted lexicographically; per-degree order [(length, tuple)].
    std::vector<int> order(trails_.size());
    for (size_t i = 0; i < order.size(); ++i) order[i] = int(i);
    std::sort(order.begin(), order.end(), [&](int a, int b) {
        return trails_[a].vertices < trails_[b].vertices;
    });
    by_degree_.assign(k_max_ + 1, {});
    for (int id : order) {
        const Trail& t = trails_[id];
        cells_[{t.degree(), t.length}].push_back(id);
    }
    for (int n = 0; n <= k_max_; ++n) {
        auto& blk = by_degree_[n];
        for (long long l = 0; l <= l_max_; ++l) {
            auto it = cells_.find({n, l});
            if (it == cells_.end()) continue;
            blk.insert(blk.end(), it->second.begin(), it->second.end());
        }
    }
    pos_in_degree_.assign(trails_.size(), -1);
    for (int n = 0; n <= k_max_; ++n)
        for (size_t p = 0; p < by_degree_[n].size(); ++p) pos_in_degree_[by_degree_[n][p]] = int(p);
    for (size_t i = 0; i < trails_.size(); ++i) index_[key(trails_[i].vertices)] = int(i);
}

const std::vector<int>& TrailStore::cell(int k, long long l) const {
    auto it = cells_.find({k, l});
    return it == cells_.end() ? empty_ : it->second;
}

const std::vector<int>& TrailStore::degree_ids(int n) const {
    if (n < 0 || n > k_max_) return empty_;
    return by_degree_[n];
}

int TrailStore::id_of(const std::vector<int>& tuple) const {
    auto it = index_.find(key(tuple));
    return it == index_.end() ? -1 : it->second;
}

int TrailStore::degree_size(int n) const { return int(degree_ids(n).size()); }

int TrailStore::filtration_prefix(int n, long long l) const {
    const auto& ids = degree_ids(n);
    int lo = 0, hi = int(ids.size());
    while (lo < hi) {
        int mid = (lo + hi) / 2;
        if (trails_[ids[mid]].length <= l)
            lo = mid + 1;
        else
            hi = mid;
    }
    return lo;
}

long long TrailStore::tuple_length(const std::vector<int>& tuple) const {
    long long len = 0;
    for (size_t i = 1; i < tuple.size(); ++i) {
        const Dist& d = dist_.at(tuple[i - 1], tuple[i]);
        if (d.is_inf()) throw contract_error("tuple_length: consecutive entries unreachable");
        len += d.value();
    }
    return len;
}

FormalSum rc_boundary(const std::vector<int>& tuple, const TrailStore& store, ComplexMode mode,
                      const std::vector<char>* in_a) {
    FormalSum out;
    int k = int(tuple.size()) - 1;
    if (k <= 0) return out;
    long long full_len = store.tuple_length(tuple);
    int sign = 1;
    for (int i = 0; i <= k; ++i, sign = -sign) {
        if (i > 0 && i < k && tuple[i - 1] == tuple[i + 1]) continue;  // degenerate
        std::vector<int> face;
        face.reserve(k);
        for (int j = 0; j <= k; ++j)
            if (j != i) face.push_back(tuple[j]);
        if (mode == ComplexMode::mc_graded && store.tuple_length(face) < full_len) continue;
        if (mode == ComplexMode::relative && in_a) {
            bool inside = true;
            for (int v : face)
                if (!(*in_a)[v]) {
                    inside = false;
                    break;
                }
            if (inside) continue;
        }
        out.emplace_back(std::move(face), sign);
    }
    return normalize_sum(std::move(out));
}

FilteredComplex::FilteredComplex(std::shared_ptr<TrailStore> store, ComplexMode mode)
    : store_(std::move(store)), mode_(mode) {
    if (mode_ == ComplexMode::relative || mode_ == ComplexMode::op)
        throw contract_error("FilteredComplex: wrong constructor for this mode");
    build_columns();
    build_boundaries();
}

FilteredComplex::FilteredComplex(std::shared_ptr<TrailStore> store,
                                 const std::vector<int>& a_vertices, bool require_no_entry)
    : store_(std::move(store)), mode_(ComplexMode::relative) {
    const DiGraph& x = store_->graph();
    in_a_.assign(x.n, 0);
    for (int v : a_vertices) {
        if (v < 0 || v >= x.n) throw input_error("relative complex: vertex out of range");
        in_a_[v] = 1;
    }
    // Convexity check: the induced metric of A agrees with the ambient one.
    std::vector<int> avs;
    for (int v = 0; v < x.n; ++v)
        if (in_a_[v]) avs.push_back(v);
    DiGraph a = induced_subgraph(x, avs);
    auto da = shortest_path_metric(a);
    const auto& dx = store_->metric();
    for (size_t i = 0; i < avs.size(); ++i)
        for (size_t j = 0; j < avs.size(); ++j)
            if (da.at(int(i), int(j)) != dx.at(avs[i], avs[j]))
                throw input_error("relative complex: A is not convex in X");
    if (require_no_entry) {
        for (auto [u, v] : x.edges)
            if (!in_a_[u] && in_a_[v])
                throw input_error("relative complex: an edge enters A from outside");
        no_entry_ = true;
    }
    build_columns();
    build_boundaries();
}

void FilteredComplex::build_columns() {
    int kmax = store_->k_max();
    columns_.assign(kmax + 1, {});
    // position_ is indexed by trail id; count total trails first.
    size_t total = 0;
    for (int n = 0; n <= kmax; ++n) total += store_->degree_ids(n).size();
    position_.assign(total, -1);
    for (int n = 0; n <= kmax; ++n) {
        for (int id : store_->degree_ids(n)) {
            if (mode_ == ComplexMode::relative) {
                const auto& t = store_->trail(id).vertices;
                bool inside = true;
                for (int v : t)
                    if (!in_a_[v]) {
                        inside = false;
                        break;
                    }
                if (inside) continue;  // quotient kills trails wholly in A
            }
            position_[id] = int(columns_[n].size());
            columns_[n].push_back(id);
        }
    }
    prefix_.assign(kmax + 1, {});
    for (int n = 0; n <= kmax; ++n) {
        prefix_[n].assign(size_t(store_->l_max()) + 2, 0);
        for (long long l = 0; l <= store_->l_max(); ++l) {
            int cnt = 0;
            for (int id : columns_[n])
                if (store_->trail(id).length <= l) ++cnt;
            prefix_[n][l] = cnt;
        }
        prefix_[n][store_->l_max() + 1] = int(columns_[n].size());
    }
}

int FilteredComplex::prefix(int n, long long l) const {
    if (n < 0 || n >= int(prefix_.size())) return 0;
    if (l < 0) return 0;
    if (l > store_->l_max()) l = store_->l_max() + 1;
    return prefix_[n][l];
}

int FilteredComplex::position(int id) const {
    if (id < 0 || id >= int(position_.size())) return -1;
    return position_[id];
}

void FilteredComplex::build_boundaries() {
    RingZ zz;
    int kmax = store_->k_max();
    boundary_.assign(kmax + 1, SparseMat<RingZ>());
    boundary_[0] = SparseMat<RingZ>(0, dim(0));
    ComplexMode bmode = (mode_ == ComplexMode::mc_graded) ? ComplexMode::mc_graded
                        : (mode_ == ComplexMode::relative) ? ComplexMode::relative
                                                           : ComplexMode::full_rc;
    for (int n = 1; n <= kmax; ++n) {
        SparseMat<RingZ> d(dim(n - 1), dim(n));
        for (int j = 0; j < dim(n); ++j) {
            const auto& tuple = store_->trail(columns_[n][j]).vertices;
            auto sum = rc_boundary(tuple, *store_, bmode,
                                   mode_ == ComplexMode::relative ? &in_a_ : nullptr);
            std::map<int, Int> acc;
            for (const auto& [face, coef] : sum) {
                int id = store_->id_of(face);
                if (id < 0) throw contract_error("boundary face missing from trail store");
                int pos = position_[id];
                if (pos < 0) continue;
                acc[pos] += coef;
            }
            for (auto& [i, v] : acc)
                if (v != 0) d.cols[j].push(i, v);
        }
        boundary_[n] = std::move(d);
    }
    // d o d = 0, every mode.
    for (int n = 2; n <= kmax; ++n)
        if (!sparse_is_zero(sparse_mul(boundary_[n - 1], boundary_[n], zz)))
            throw contract_error("FilteredComplex: differential does not square to zero");
}

bool FilteredComplex::splits_to_a(int trail_id) const {
    if (!no_entry_) throw contract_error("splitting requires the no-entry condition");
    const auto& t = store_->trail(trail_id).vertices;
    return in_a_[t.back()] != 0;
}

SparseMat<RingZ> FilteredComplex::mc_block(int n, long long l) const {
    // Rows: degree n-1 columns of length exactly l; columns likewise at
    // degree n. Entries of the full boundary between them, but only terms
    // that preserve length (drop the rest).
    const auto& d = boundary_[n];
    int c0 = (n >= 1) ? prefix(n, l - 1) : 0;
    int c1 = (n >= 1) ? prefix(n, l) : 0;
    int r0 = prefix(n - 1, l - 1);
    int r1 = prefix(n - 1, l);
    SparseMat<RingZ> blk(r1 - r0, std::max(0, c1 - c0));
    if (n < 1) return blk;
    for (int j = c0; j < c1; ++j)
        for (const auto& [i, v] : d.cols[j].e)
            if (i >= r0 && i < r1) blk.cols[j - c0].push(i - r0, v);
    return blk;
}

GradedBasis enumerate_trails(const DiGraph& g, int k_max, long long l_max) {
    return GradedBasis{std::make_shared<TrailStore>(g, k_max, l_max)};
}

MagnitudeComplex magnitude_complex(const DiGraph& g, long long l) {
    MagnitudeComplex mc;
    mc.l = l;
    mc.store = std::make_shared<TrailStore>(g, int(l), l);
    mc.basis.assign(size_t(l) + 1, {});
    for (int k = 0; k <= int(l); ++k) mc.basis[k] = mc.store->cell(k, l);
    mc.d.assign(size_t(l) + 1, SparseMat<RingZ>());
    mc.d[0] = SparseMat<RingZ>(0, int(mc.basis[0].size()));
    std::unordered_map<int, int> posk, poskm1;
    for (int k = 1; k <= int(l); ++k) {
        poskm1.clear();
        for (size_t p = 0; p < mc.basis[k - 1].size(); ++p) poskm1[mc.basis[k - 1][p]] = int(p);
        SparseMat<RingZ> d(int(mc.basis[k - 1].size()), int(mc.basis[k].size()));
        for (size_t j = 0; j < mc.basis[k].size(); ++j) {
            const auto& tuple = mc.store->trail(mc.basis[k][j]).vertices;
            auto sum = rc_boundary(tuple, *mc.store, ComplexMode::mc_graded);
            std::map<int, Int> acc;
            for (const auto& [face, coef] : sum) {
                int id = mc.store->id_of(face);
                if (id < 0) throw contract_error("magnitude_complex: face missing");
                acc[poskm1.at(id)] += coef;
            }
            for (auto& [i, v] : acc)
                if (v != 0) d.cols[int(j)].push(i, v);
        }
        mc.d[k] = std::move(d);
    }
    RingZ zz;
    for (int k = 2; k <= int(l); ++k)
        if (!sparse_is_zero(sparse_mul(mc.d[k - 1], mc.d[k], zz)))
            throw contract_error("magnitude_complex: d o d != 0");
    return mc;
}

FilteredComplex relative_complex(const DiGraph& x, const std::vector<int>& a_vertices,
                                 long long l_max, bool require_no_entry) {
    auto store = std::make_shared<TrailStore>(x, int(l_max), l_max);
    return FilteredComplex(store, a_vertices, require_no_entry);
}

std::map<std::pair<int, int>, MagnitudeComplex> endpoint_decomposition(const DiGraph& g,
                                                                       long long l) {
    auto full = magnitude_complex(g, l);
    std::map<std::pair<int, int>, MagnitudeComplex> out;
    // Partition each degree's basis by (start, end).
    for (int k = 0; k <= int(l); ++k) {
        for (int id : full.basis[k]) {
            const auto& t = full.store->trail(id).vertices;
            auto key = std::make_pair(t.front(), t.back());
            auto& mc = out[key];
            if (mc.basis.empty()) {
                mc.l = l;
                mc.store = full.store;
                mc.basis.assign(size_t(l) + 1, {});
                mc.d.assign(size_t(l) + 1, SparseMat<RingZ>());
            }
            mc.basis[k].push_back(id);
        }
    }
    for (auto& [key, mc] : out) {
        mc.d[0] = SparseMat<RingZ>(0, int(mc.basis[0].size()));
        for (int k = 1; k <= int(l); ++k) {
            std::unordered_map<int, int> pos;
            for (size_t p = 0; p < mc.basis[k - 1].size(); ++p) pos[mc.basis[k - 1][p]] = int(p);
            SparseMat<RingZ> d(int(mc.basis[k - 1].size()), int(mc.basis[k].size()));
            for (size_t j = 0; j < mc.basis[k].size(); ++j) {
                const auto& tuple = mc.store->trail(mc.basis[k][j]).vertices;
                auto sum = rc_boundary(tuple, *mc.store, ComplexMode::mc_graded);
                std::map<int, Int> acc;
                for (const auto& [face, coef] : sum) {
                    int id2 = mc.store->id_of(face);
                    auto it = pos.find(id2);
                    if (it == pos.end())
                        throw contract_error("endpoint decomposition is not closed");
                    acc[it->second] += coef;
                }
                for (auto& [i, v] : acc)
                    if (v != 0) d.cols[int(j)].push(i, v);
            }
            mc.d[k] = std::move(d);
        }
    }
    return out;
}

namespace {
void enumerate_partitions(long long remaining, int m, std::vector<int>& cur,
                          std::vector<std::vector<OrderedPartition>>& out) {
    if (remaining == 0) {
        if (int(cur.size()) >= int(out.size())) out.resize(cur.size() + 1);
        out[cur.size()].push_back(OrderedPartition{cur});
        return;
    }
    for (int a = 1; a < m && a <= remaining; ++a) {
        cur.push_back(a);
        enumerate_partitions(remaining - a, m, cur, out);
        cur.pop_back();
    }
}
}  // namespace

OPComplex op_complex(long long l, int m) {
    if (m < 2) throw input_error("op_complex: m >= 2 required");
    OPComplex c;
    c.l = l;
    c.m = m;
    if (l < 0) return c;  // the zero complex
    std::vector<int> cur;
    enumerate_partitions(l, m, cur, c.basis);
    if (c.basis.empty()) c.basis.resize(1);
    for (auto& cell : c.basis)
        std::sort(cell.begin(), cell.end());
    c.d.assign(c.basis.size(), SparseMat<RingZ>());
    c.d[0] = SparseMat<RingZ>(0, int(c.basis[0].size()));
    for (int k = 1; k < int(c.basis.size()); ++k) {
        SparseMat<RingZ> d(int(c.basis[k - 1].size()), int(c.basis[k].size()));
        // The differential vanishes in degrees k <= 1.
        if (k >= 2) {
            std::map<std::vector<int>, int> pos;
            for (size_t p = 0; p < c.basis[k - 1].size(); ++p)
                pos[c.basis[k - 1][p].parts] = int(p);
            for (size_t j = 0; j < c.basis[k].size(); ++j) {
                const auto& parts = c.basis[k][j].parts;
                std::map<int, Int> acc;
                int sign = -1;
                for (int i = 0; i + 1 < k; ++i, sign = -sign) {
                    if (parts[i] + parts[i + 1] >= m) continue;  // threshold omission
                    std::vector<int> merged;
                    merged.reserve(k - 1);
                    for (int t = 0; t < int(parts.size()); ++t) {
                        if (t == i) {
                            merged.push_back(parts[i] + parts[i + 1]);
                            ++t;
                        } else {
                            merged.push_back(parts[t]);
                        }
                    }
                    acc[pos.at(merged)] += sign;
                }
                for (auto& [i, v] : acc)
                    if (v != 0) d.cols[int(j)].push(i, v);
            }
        }
        c.d[k] = std::move(d);
    }
    RingZ zz;
    for (int k = 2; k < int(c.d.size()); ++k)
        if (!sparse_is_zero(sparse_mul(c.d[k - 1], c.d[k], zz)))
            throw contract_error("op_complex: d o d != 0");
    return c;
}

void run_cells(size_t count, int threads, const std::function<void(size_t)>& work) {
    if (threads <= 1 || count <= 1) {
        for (size_t i = 0; i < count; ++i) work(i);
        return;
    }
    std::atomic<size_t> next{0};
    std::vector<std::thread> pool;
    int nt = std::min<size_t>(threads, count);
    for (int t = 0; t < nt; ++t)
        pool.emplace_back([&] {
            while (true) {
                size_t i = next.fetch_add(1);
                if (i >= count) break;
                work(i);
            }
        });
    for (auto& th : pool) th.join();
}

std::string complex_to_json(const FilteredComplex& c) {
    nlohmann::ordered_json j;
    j["mode"] = c.is_relative() ? "relative" : (c.mode() == ComplexMode::mc_graded ? "mc" : "rc");
    j["l_max"] = c.l_max();
    auto bases = nlohmann::ordered_json::array();
    auto diffs = nlohmann::ordered_json::array();
    for (int n = 0; n <= c.k_max(); ++n) {
        auto cell = nlohmann::ordered_json::array();
        for (int id : c.columns(n)) cell.push_back(c.store().trail(id).vertices);
        bases.push_back(cell);
        auto trips = nlohmann::ordered_json::array();
        const auto& d = c.boundary(n);
        for (int jj = 0; jj < d.ncols(); ++jj)
            for (const auto& [i, v] : d.cols[jj].e)
                trips.push_back({i, jj, int(v.convert_to<long long>())});
        diffs.push_back(trips);
    }
    j["bases"] = bases;
    j["differentials"] = diffs;
    return j.dump();
}

}  // namespace mpss
