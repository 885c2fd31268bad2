#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "mpss/report.hpp"
#include "mpss/verify.hpp"

using namespace mpss;

namespace {

DiGraph load_graph(const RunConfig& cfg) {
    if (!cfg.family.empty()) return parse_family(cfg.family);
    if (cfg.input_path.empty()) throw input_error("one of --family or --input is required");
    std::ifstream in(cfg.input_path);
    if (!in) throw input_error("cannot open '" + cfg.input_path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    std::string text = ss.str();
    auto first = text.find_first_not_of(" \t\r\n");
    if (first != std::string::npos && text[first] == '{') return parse_graph_json(text);
    return parse_graph_text(text);
}

void emit(const RunConfig& cfg, const std::string& body) {
    if (cfg.out_path.empty()) {
        std::cout << body;
        return;
    }
    std::ofstream out(cfg.out_path, std::ios::binary);
    if (!out) throw input_error("cannot write '" + cfg.out_path + "'");
    out << body;
}

template <class R>
std::vector<PageSummary> compute_pages(const DiGraph& g, const RunConfig& cfg, const R& ring) {
    auto eng = PageEngine<R>::absolute(g, cfg.l_max, ring, cfg.threads);
    std::vector<PageSummary> pages;
    for (int r = cfg.page_lo; r <= cfg.page_hi; ++r)
        pages.push_back(eng.page_summary(r, cfg.representatives));
    return pages;
}

std::vector<PageSummary> compute_pages_any(const DiGraph& g, const RunConfig& cfg) {
    switch (cfg.ring.tag) {
        case RingSpec::Tag::Z: return compute_pages(g, cfg, RingZ{});
        case RingSpec::Tag::Q: return compute_pages(g, cfg, RingQ{});
        case RingSpec::Tag::Fp: return compute_pages(g, cfg, RingFp{cfg.ring.p});
    }
    throw input_error("bad ring");
}

int run_tables(RunConfig cfg, bool magnitude_view) {
    auto g = load_graph(cfg);
    if (cfg.l_max < 0) cfg.l_max = default_l_max(g);
    if (magnitude_view) cfg.page_lo = cfg.page_hi = 1;
    auto pages = compute_pages_any(g, cfg);
    std::string body;
    if (cfg.format == "text")
        body = render_text(g, cfg.ring, cfg.l_max, pages, magnitude_view);
    else if (cfg.format == "csv")
        body = render_csv(pages);
    else if (cfg.format == "json")
        body = render_json(g, cfg.ring, cfg.l_max, pages);
    else
        throw input_error("unknown format '" + cfg.format + "'");
    emit(cfg, body);
    return 0;
}

void add_common(CLI::App* cmd, RunConfig& cfg, std::string& ring_str, std::string& pages_str) {
    cmd->add_option("--family", cfg.family,
                    "builtin family: Zm:<m> | Cmn:<m>,<n> | Sn:<n> | point | I | J | "
                    "cone:<spec> | susp:<spec> | box:<a>x<b>");
    cmd->add_option("--input", cfg.input_path, "graph file (text or JSON)");
    cmd->add_option("--ring", ring_str, "coefficients: Z | Q | Fp:<p> (default Q)");
    cmd->add_option("--lmax", cfg.l_max, "length filtration bound (default 2*diameter+1)");
    cmd->add_option("--pages", pages_str, "page range <r0>..<r1> or a single page");
    cmd->add_option("--format", cfg.format, "text | csv | json");
    cmd->add_flag("--representatives", cfg.representatives, "include class representatives");
    cmd->add_option("--out", cfg.out_path, "write output to a file");
}

void finish_config(RunConfig& cfg, const std::string& ring_str, const std::string& pages_str) {
    if (!ring_str.empty()) cfg.ring = parse_ring(ring_str);
    if (!pages_str.empty()) {
        auto pos = pages_str.find("..");
        try {
            if (pos == std::string::npos) {
                cfg.page_lo = cfg.page_hi = std::stoi(pages_str);
            } else {
                cfg.page_lo = std::stoi(pages_str.substr(0, pos));
                cfg.page_hi = std::stoi(pages_str.substr(pos + 2));
            }
        } catch (const input_error&) {
            throw;
        } catch (...) {
            throw input_error("bad page range '" + pages_str + "'");
        }
        if (cfg.page_lo < 0 || cfg.page_hi < cfg.page_lo)
            throw input_error("bad page range '" + pages_str + "'");
    }
    cfg.threads = threads_from_env();
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"magnitude-path spectral sequences of finite directed graphs"};
    app.require_subcommand(1);

    RunConfig cfg_mag, cfg_pages;
    std::string ring_mag, ring_pages, pages_mag, pages_pages, suite;

    auto* c_mag = app.add_subcommand("magnitude", "magnitude homology table in (k,l)");
    add_common(c_mag, cfg_mag, ring_mag, pages_mag);

    auto* c_pages = app.add_subcommand("pages", "spectral sequence pages in (p,q)");
    add_common(c_pages, cfg_pages, ring_pages, pages_pages);

    auto* c_verify = app.add_subcommand("verify", "run a verification suite");
    c_verify->add_option("suite", suite, "cycles | bicycles | spheres | kunneth | excision | mv | homotopy | all")
        ->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (c_mag->parsed()) {
            finish_config(cfg_mag, ring_mag, pages_mag);
            return run_tables(cfg_mag, true);
        }
        if (c_pages->parsed()) {
            finish_config(cfg_pages, ring_pages, pages_pages);
            return run_tables(cfg_pages, false);
        }
        if (c_verify->parsed()) {
            int threads = threads_from_env();
            auto res = run_suite(suite, threads);
            for (const auto& item : res.items)
                std::cout << (item.ok ? "[ok]   " : "[FAIL] ") << item.name
                          << (item.detail.empty() ? "" : "  (" + item.detail + ")") << "\n";
            std::cout << (res.ok() ? "all checks passed" : "FAILURES present") << " ("
                      << res.items.size() << " assertions)\n";
            return res.ok() ? 0 : 1;
        }
    } catch (const input_error& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return 2;
    } catch (const contract_error& e) {
        std::cerr << "internal assertion failure: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}
