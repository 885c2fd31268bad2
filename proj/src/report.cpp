#include "mpss/report.hpp"

#include <algorithm>
#include <cstdlib>
#include <sstream>
#include <thread>

#include <json.hpp>

namespace mpss {

RingSpec parse_ring(const std::string& s) {
    RingSpec r;
    if (s == "Z") {
        r.tag = RingSpec::Tag::Z;
    } else if (s == "Q") {
        r.tag = RingSpec::Tag::Q;
    } else if (s.rfind("Fp:", 0) == 0) {
        r.tag = RingSpec::Tag::Fp;
        try {
            r.p = std::stoull(s.substr(3));
        } catch (...) {
            throw input_error("bad Fp modulus in ring spec '" + s + "'");
        }
        RingFp check(r.p);  // validates primality
    } else {
        throw input_error("unknown ring '" + s + "' (expected Z, Q or Fp:<p>)");
    }
    return r;
}

namespace {

std::vector<int> parse_int_list(const std::string& s, const std::string& what) {
    std::vector<int> out;
    std::string cur;
    for (char c : s + ",") {
        if (c == ',') {
            if (cur.empty()) throw input_error("bad " + what + " parameter list '" + s + "'");
            try {
                out.push_back(std::stoi(cur));
            } catch (...) {
                throw input_error("bad integer '" + cur + "' in " + what);
            }
            cur.clear();
        } else {
            cur += c;
        }
    }
    return out;
}

}  // namespace

DiGraph parse_family(const std::string& spec) {
    if (spec == "point") return point();
    if (spec == "I") return interval_i();
    if (spec == "J") return interval_j();
    if (spec.rfind("Zm:", 0) == 0) {
        auto ps = parse_int_list(spec.substr(3), "Zm");
        if (ps.size() != 1) throw input_error("Zm takes one parameter");
        return directed_cycle(ps[0]);
    }
    if (spec.rfind("Cmn:", 0) == 0) {
        auto ps = parse_int_list(spec.substr(4), "Cmn");
        if (ps.size() != 2) throw input_error("Cmn takes two parameters");
        return bidirected_cycle(ps[0], ps[1]);
    }
    if (spec.rfind("Sn:", 0) == 0) {
        auto ps = parse_int_list(spec.substr(3), "Sn");
        if (ps.size() != 1) throw input_error("Sn takes one parameter");
        return sphere(ps[0]);
    }
    if (spec.rfind("cone:", 0) == 0) return cone(parse_family(spec.substr(5))).graph;
    if (spec.rfind("susp:", 0) == 0) return suspension(parse_family(spec.substr(5)));
    if (spec.rfind("box:", 0) == 0) {
        // box:<a>x<b>; both sides are family specs, possibly nested. Try
        // every split on 'x' and accept the first whose halves both parse.
        std::string body = spec.substr(4);
        for (size_t i = 1; i + 1 < body.size() + 1; ++i) {
            if (body[i] != 'x') continue;
            try {
                DiGraph a = parse_family(body.substr(0, i));
                DiGraph b = parse_family(body.substr(i + 1));
                return box_product(a, b).graph;
            } catch (const input_error&) {
                continue;
            }
        }
        throw input_error("cannot parse box spec '" + spec + "'");
    }
    throw input_error("unknown family '" + spec + "'");
}

long long default_l_max(const DiGraph& g) { return 2 * diameter(g) + 1; }

int threads_from_env() {
    if (const char* env = std::getenv("MPSS_THREADS")) {
        try {
            int t = std::stoi(env);
            if (t >= 1) return t;
        } catch (...) {
        }
        throw input_error("bad MPSS_THREADS value");
    }
    unsigned hw = std::thread::hardware_concurrency();
    return int(std::min(8u, std::max(1u, hw)));
}

namespace {

std::string torsion_str(const HomologyGroup& g) {
    std::string s;
    for (size_t i = 0; i < g.torsion.size(); ++i) s += (i ? ";" : "") + g.torsion[i].str();
    return s;
}

}  // namespace

std::string render_text(const DiGraph& g, const RingSpec& ring, long long l_max,
                        const std::vector<PageSummary>& pages, bool magnitude_view) {
    std::ostringstream out;
    out << "graph: " << g.n << " vertices, " << g.edges.size() << " edges\n";
    if (!g.labels.empty()) {
        out << "vertex layout:";
        for (int v = 0; v < g.n; ++v) out << " " << v << "=" << g.label(v);
        out << "\n";
    }
    out << "ring: " << ring.str() << "   l_max: " << l_max << "\n";
    for (const auto& page : pages) {
        std::map<std::pair<int, int>, const EntrySummary*> at;
        int pmax = 0, qmin = 0;
        for (const auto& e : page.entries) {
            at[{e.p, e.q}] = &e;
            pmax = std::max(pmax, e.p);
            qmin = std::min(qmin, e.q);
        }
        if (magnitude_view) {
            out << "\nmagnitude homology (rows k, columns l):\n";
            // Convert: k = p+q, l = p.
            std::map<std::pair<long long, long long>, const EntrySummary*> kl;
            long long kmax = 0, lmax2 = 0;
            for (const auto& e : page.entries) {
                kl[{e.p + e.q, e.p}] = &e;
                kmax = std::max<long long>(kmax, e.p + e.q);
                lmax2 = std::max<long long>(lmax2, e.p);
            }
            out << "k\\l";
            for (long long l = 0; l <= lmax2; ++l) out << "\t" << l;
            out << "\n";
            for (long long k = 0; k <= kmax; ++k) {
                out << k;
                for (long long l = 0; l <= lmax2; ++l) {
                    out << "\t";
                    auto it = kl.find({k, l});
                    if (it == kl.end()) {
                        out << ".";
                    } else {
                        const auto& e = *it->second;
                        out << e.group.free_rank;
                        if (!e.group.torsion.empty()) out << "+T[" << torsion_str(e.group) << "]";
                        if (!e.exact) out << "?";
                    }
                }
                out << "\n";
            }
            continue;
        }
        out << "\npage r=" << page.r << " (rows q, columns p):\n";
        out << "q\\p";
        for (int p = 0; p <= pmax; ++p) out << "\t" << p;
        out << "\n";
        for (int q = 0; q >= qmin; --q) {
            out << q;
            for (int p = 0; p <= pmax; ++p) {
                out << "\t";
                auto it = at.find({p, q});
                if (it == at.end()) {
                    out << ".";
                } else {
                    const auto& e = *it->second;
                    out << e.group.free_rank;
                    if (!e.group.torsion.empty()) out << "+T[" << torsion_str(e.group) << "]";
                    if (!e.exact) out << "?";
                }
            }
            out << "\n";
        }
        for (const auto& e : page.entries)
            for (const auto& rep : e.representatives)
                out << "rep E^" << page.r << "(" << e.p << "," << e.q << "): " << rep << "\n";
    }
    return out.str();
}

std::string render_csv(const std::vector<PageSummary>& pages) {
    std::ostringstream out;
    out << "r,p,q,k,l,rank,torsion,exact\n";
    for (const auto& page : pages)
        for (const auto& e : page.entries) {
            out << page.r << "," << e.p << "," << e.q << "," << (e.p + e.q) << "," << e.p << ","
                << e.group.free_rank << "," << torsion_str(e.group) << ","
                << (e.exact ? 1 : 0) << "\n";
        }
    return out.str();
}

std::string render_json(const DiGraph& g, const RingSpec& ring, long long l_max,
                        const std::vector<PageSummary>& pages) {
    nlohmann::ordered_json j;
    j["graph"] = nlohmann::ordered_json::parse(graph_to_json(g));
    j["ring"] = ring.str();
    j["l_max"] = l_max;
    j["pages"] = nlohmann::ordered_json::array();
    for (const auto& page : pages) {
        nlohmann::ordered_json pj;
        pj["r"] = page.r;
        pj["entries"] = nlohmann::ordered_json::array();
        for (const auto& e : page.entries) {
            nlohmann::ordered_json ej;
            ej["p"] = e.p;
            ej["q"] = e.q;
            ej["rank"] = e.group.free_rank;
            ej["torsion"] = nlohmann::ordered_json::array();
            for (const auto& t : e.group.torsion) ej["torsion"].push_back(t.str());
            ej["exact"] = e.exact;
            if (!e.representatives.empty()) ej["representatives"] = e.representatives;
            pj["entries"].push_back(ej);
        }
        j["pages"].push_back(pj);
    }
    return j.dump(2) + "\n";
}

}  // namespace mpss
