#include "mpss/products.hpp"

namespace mpss {

int path_sign_lattice(const LatticePath& path) {
    // Height on first arrival at each column, summed: that is the number of
    // lattice points (a,b) with 0 <= b < height(a).
    long long n = 0, y = 0;
    for (bool up : path.steps) {
        if (up)
            ++y;
        else
            n += y;  // arriving at the next column at height y
    }
    return n % 2 == 0 ? 1 : -1;
}

int path_sign_pairs(const LatticePath& path) {
    // Walk out the vertex sequence (i_s, j_s), then count pairs (i,j) with
    // j >= 0 such that every s with i_s = i satisfies j < j_s.
    std::vector<std::pair<int, int>> seq{{0, 0}};
    for (bool up : path.steps) {
        auto [i, j] = seq.back();
        seq.push_back(up ? std::make_pair(i, j + 1) : std::make_pair(i + 1, j));
    }
    int p = seq.back().first, q = seq.back().second;
    long long n = 0;
    for (int i = 0; i <= p; ++i)
        for (int j = 0; j <= q; ++j) {
            bool all = true;
            for (auto [is, js] : seq)
                if (is == i && !(j < js)) {
                    all = false;
                    break;
                }
            if (all) ++n;
        }
    return n % 2 == 0 ? 1 : -1;
}

void enumerate_paths(int p, int q, const std::function<void(const LatticePath&)>& fn) {
    LatticePath cur;
    std::function<void(int, int)> rec = [&](int x, int y) {
        if (x == p && y == q) {
            fn(cur);
            return;
        }
        if (x < p) {
            cur.steps.push_back(false);
            rec(x + 1, y);
            cur.steps.pop_back();
        }
        if (y < q) {
            cur.steps.push_back(true);
            rec(x, y + 1);
            cur.steps.pop_back();
        }
    };
    rec(0, 0);
}

FormalSum ez_map(const std::vector<int>& gt, const std::vector<int>& ht, int nvh) {
    FormalSum out;
    int p = int(gt.size()) - 1, q = int(ht.size()) - 1;
    enumerate_paths(p, q, [&](const LatticePath& path) {
        std::vector<int> tuple;
        tuple.reserve(p + q + 1);
        int i = 0, j = 0;
        tuple.push_back(gt[0] * nvh + ht[0]);
        for (bool up : path.steps) {
            if (up)
                ++j;
            else
                ++i;
            tuple.push_back(gt[i] * nvh + ht[j]);
        }
        out.emplace_back(std::move(tuple), path_sign_lattice(path));
    });
    return normalize_sum(std::move(out));
}

FormalSum ez_chain(const FormalSum& a, const FormalSum& b, int nvh) {
    FormalSum out;
    for (const auto& [gt, cg] : a)
        for (const auto& [ht, ch] : b) {
            auto terms = ez_map(gt, ht, nvh);
            for (auto& [t, c] : terms) out.emplace_back(std::move(t), c * cg * ch);
        }
    return normalize_sum(std::move(out));
}

std::vector<TensorTerm> aw_map(const std::vector<int>& box_tuple, int nvh) {
    std::vector<TensorTerm> out;
    int k = int(box_tuple.size()) - 1;
    for (int i = 0; i <= k; ++i) {
        TensorTerm t;
        t.coef = 1;
        bool degenerate = false;
        for (int s = 0; s <= i; ++s) {
            int gv = box_tuple[s] / nvh;
            if (!t.left.empty() && t.left.back() == gv) {
                degenerate = true;
                break;
            }
            t.left.push_back(gv);
        }
        if (degenerate) continue;
        for (int s = i; s <= k; ++s) {
            int hv = box_tuple[s] % nvh;
            if (!t.right.empty() && t.right.back() == hv) {
                degenerate = true;
                break;
            }
            t.right.push_back(hv);
        }
        if (degenerate) continue;
        out.push_back(std::move(t));
    }
    return out;
}

std::vector<TensorTerm> tensor_boundary(const std::vector<int>& gt, const std::vector<int>& ht,
                                        const TrailStore& sg, const TrailStore& sh) {
    std::vector<TensorTerm> out;
    int deg_left = int(gt.size()) - 1;
    for (const auto& [face, coef] : rc_boundary(gt, sg, ComplexMode::full_rc)) {
        TensorTerm t;
        t.left = face;
        t.right = ht;
        t.coef = coef;
        out.push_back(std::move(t));
    }
    int sgn = (deg_left % 2 == 0) ? 1 : -1;
    for (const auto& [face, coef] : rc_boundary(ht, sh, ComplexMode::full_rc)) {
        TensorTerm t;
        t.left = gt;
        t.right = face;
        t.coef = coef * sgn;
        out.push_back(std::move(t));
    }
    return out;
}

}  // namespace mpss
