// Runs every acceptance criterion at its stated tolerance and prints one
// PASS/FAIL line per criterion, followed by the individual checks.
// Usage: acceptance_suite [criterion...]

#include "pnavg/acceptance.hpp"

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <string>
#include <vector>

int main(int argc, char** argv) {
    pnavg::ExperimentConfig cfg;
    std::vector<int> selected;
    for (int i = 1; i < argc; ++i)
        selected.push_back(std::atoi(argv[i]));
    if (selected.empty())
        for (int c = 1; c <= pnavg::criterion_count(); ++c)
            selected.push_back(c);

    pnavg::AcceptanceReport report;
    std::vector<std::string> lines;
    for (int c : selected) {
        const auto start = std::chrono::steady_clock::now();
        std::vector<pnavg::CheckResult> checks;
        std::string failure;
        try {
            checks = pnavg::run_criterion(c, cfg);
        } catch (const std::exception& e) {
            failure = e.what();
        }
        const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        pnavg::AcceptanceReport part{checks};
        const bool ok = failure.empty() && part.all_passed();
        std::printf("criterion %2d %-44s %s (%.1fs)\n", c, pnavg::criterion_title(c).c_str(), ok ? "PASS" : "FAIL",
                    seconds);
        if (!failure.empty())
            std::printf("    exception: %s\n", failure.c_str());
        for (const auto& k : checks)
            std::printf("    %s %-46s measured %.6g %s %.6g  seed %llu%s%s\n", k.passed ? "ok  " : "FAIL",
                        k.name.c_str(), k.measured, k.relation.c_str(), k.tolerance,
                        static_cast<unsigned long long>(k.seed), k.detail.empty() ? "" : "  ", k.detail.c_str());
        std::fflush(stdout);
        report.checks.insert(report.checks.end(), checks.begin(), checks.end());
        if (!ok)
            report.checks.push_back({c, "criterion_failed", 1.0, 0.0, "==", false, cfg.seed, failure});
    }
    const bool all = report.all_passed();
    std::printf("%s: %zu checks\n", all ? "ALL PASS" : "FAILURES", report.checks.size());
    return all ? 0 : 1;
}
