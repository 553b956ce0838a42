#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace aqsens::runner {

struct CheckResult {
    std::string name;
    bool passed = false;
    double observed = 0.0;
    double expected = 0.0;
    double deviation = 0.0;   // |observed - expected| in the gate's unit
    double gate = 0.0;        // allowed deviation
    std::string gate_kind;    // "3sigma" | "exact" | "relative"
    std::vector<std::string> covers;  // closed-form identifiers exercised
};

struct ValidateReport {
    std::vector<CheckResult> checks;
    std::vector<std::string> uncovered_forms;  // coverage checklist failures
    bool all_passed() const;
};

/// Built-in oracle suite: Haar-moment identities, purity closed forms,
/// static-model Monte-Carlo agreement, the GOE conventions and
/// characteristic function, the infidelity and asymptotic-error laws, and
/// the metric utilities. Exercises every closed form implemented in the
/// library and verifies the coverage checklist.
ValidateReport run_validate(std::uint64_t master_seed, int threads);

/// Writes the machine-readable JSON report.
void write_validate_report(const ValidateReport& report, const std::filesystem::path& path);

/// Prints one line per check plus the coverage summary; returns the exit
/// code (0 all green, 3 any gate failed).
int print_validate_report(const ValidateReport& report);

}  // namespace aqsens::runner
