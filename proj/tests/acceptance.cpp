// Acceptance suite: one criterion per line, nonzero exit on any failure.

#include <chrono>
#include <iostream>

#include <mpss/report.hpp>
#include <mpss/verify.hpp>

using namespace mpss;

namespace {

int failures = 0;

void run(int number, const std::string& title, VerifyResult (*fn)(int), int threads) {
    auto t0 = std::chrono::steady_clock::now();
    bool ok = false;
    std::string detail;
    try {
        auto res = fn(threads);
        ok = res.ok();
        if (!ok) {
            for (const auto& item : res.items)
                if (!item.ok) {
                    detail = item.name;
                    break;
                }
        }
    } catch (const std::exception& e) {
        detail = e.what();
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::cout << (ok ? "[pass] " : "[FAIL] ") << "criterion " << number << ": " << title << " ("
              << secs << "s)";
    if (!ok) {
        std::cout << "  first failure: " << detail;
        ++failures;
    }
    std::cout << "\n" << std::flush;
}

VerifyResult criterion10(int threads) {
    VerifyResult res;
    res.merge(verify_properties(threads));
    res.merge(verify_homotopy(threads));
    return res;
}

}  // namespace

int main() {
    int threads = threads_from_env();
    std::cout << "acceptance suite (threads=" << threads << ")\n";
    run(1, "magnitude homology of directed cycles", &verify_cycle_mh, threads);
    run(2, "bigraded path homology and pages of directed cycles", &verify_cycle_ph_pages,
        threads);
    run(3, "golden d1 classes", &verify_d1_classes, threads);
    run(4, "ordered-partition oracle", &verify_op_oracle, threads);
    run(5, "bi-directed cycles", &verify_bicycles, threads);
    run(6, "spheres and suspension", &verify_spheres, threads);
    run(7, "excision", &verify_excision, threads);
    run(8, "Mayer-Vietoris", &verify_mayer_vietoris, threads);
    run(9, "Kunneth", &verify_kunneth, threads);
    run(10, "property suites", &criterion10, threads);
    if (failures) {
        std::cout << failures << " criterion(s) failed\n";
        return 1;
    }
    std::cout << "all criteria passed\n";
    return 0;
}
