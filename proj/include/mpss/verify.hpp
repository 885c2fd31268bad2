#pragma once

#include <functional>
#include <string>
#include <vector>

namespace mpss {

struct VerifyItem {
    std::string name;
    bool ok = false;
    std::string detail;
};

struct VerifyResult {
    std::vector<VerifyItem> items;

    bool ok() const {
        for (const auto& i : items)
            if (!i.ok) return false;
        return true;
    }
    void check(const std::string& name, bool cond, const std::string& detail = "") {
        items.push_back({name, cond, detail});
    }
    void merge(const VerifyResult& o) {
        items.insert(items.end(), o.items.begin(), o.items.end());
    }
};

// Acceptance criteria, one function per numbered block.
VerifyResult verify_cycle_mh(int threads);          // 1
VerifyResult verify_cycle_ph_pages(int threads);    // 2
VerifyResult verify_d1_classes(int threads);        // 3
VerifyResult verify_op_oracle(int threads);         // 4
VerifyResult verify_bicycles(int threads);          // 5
VerifyResult verify_spheres(int threads);           // 6
VerifyResult verify_excision(int threads);          // 7
VerifyResult verify_mayer_vietoris(int threads);    // 8
VerifyResult verify_kunneth(int threads);           // 9
VerifyResult verify_properties(int threads);        // 10 (minus the homotopy slice)
VerifyResult verify_homotopy(int threads);          // 10, homotopy-invariance slice

// CLI suites.
VerifyResult run_suite(const std::string& name, int threads);
std::vector<std::string> suite_names();

}  // namespace mpss
