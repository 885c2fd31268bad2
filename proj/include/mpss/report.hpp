#pragma once

#include <iosfwd>
#include <variant>

#include "pages.hpp"

namespace mpss {

// Ring selector as it appears on the command line: Z | Q | Fp:<p>.
struct RingSpec {
    enum class Tag { Z, Q, Fp } tag = Tag::Q;
    std::uint64_t p = 2;

    std::string str() const {
        switch (tag) {
            case Tag::Z: return "Z";
            case Tag::Q: return "Q";
            case Tag::Fp: return "Fp:" + std::to_string(p);
        }
        return "?";
    }
};

RingSpec parse_ring(const std::string& s);

// Builtin family syntax:
//   Zm:<m> | Cmn:<m>,<n> | Sn:<n> | point | I | J
//   cone:<spec> | susp:<spec> | box:<a>x<b>
DiGraph parse_family(const std::string& spec);

struct RunConfig {
    std::string family;        // one of family/input set
    std::string input_path;
    RingSpec ring;
    long long l_max = -1;      // -1: 2*diameter + 1
    int page_lo = 1, page_hi = 2;
    std::string format = "text";  // text | csv | json
    bool representatives = false;
    std::string out_path;      // empty: stdout
    int threads = 1;
};

long long default_l_max(const DiGraph& g);
int threads_from_env();

// Rendering. Pages are given in spectral coordinates; the magnitude view
// converts to (k,l). All output is deterministic for a fixed config.
std::string render_text(const DiGraph& g, const RingSpec& ring, long long l_max,
                        const std::vector<PageSummary>& pages, bool magnitude_view);
std::string render_csv(const std::vector<PageSummary>& pages);
std::string render_json(const DiGraph& g, const RingSpec& ring, long long l_max,
                        const std::vector<PageSummary>& pages);

}  // namespace mpss
