#pragma once

#include <string>
#include <vector>

#include "nlphase/sweep/table.hpp"

namespace nlphase::sweep {

enum class CheckKind { Invariant, Finding };

/// One row of the validation report. Invariants pass or fail against their
/// tolerance; findings record a documented discrepancy and never fail.
struct CheckResult {
    std::string name;
    CheckKind kind = CheckKind::Invariant;
    bool passed = true;
    double max_deviation = 0.0;
    double tolerance = 0.0;
    std::string detail;
};

struct ValidationReport {
    std::vector<CheckResult> checks;

    bool passed() const;
    /// Columns: check, kind, status, max_deviation, tolerance, detail.
    Table table() const;
};

/// Runs every closed-form versus Fock-space comparison, the structural
/// properties of the oracle, and the findings. The oracle is always run at N <= 30.
ValidationReport run_validate();

}  // namespace nlphase::sweep
