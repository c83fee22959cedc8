#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "polsq/fock_oracle.hpp"

namespace polsq {

struct ValidationOptions {
    double relative_tolerance = 1e-6;
    double absolute_tolerance = 1e-8;
    int random_points = 100;
    int boundary_points = 20;
    int boundary_oracle_points = 5;
    std::uint64_t seed = 20240611;
    int direction_samples = 10000;
    TruncationPolicy policy;
};

struct CheckResult {
    std::string name;
    bool passed = false;
    bool informational = false; ///< diagnostics never fail the run
    std::string detail;
    double seconds = 0.0;
};

/// Closed-form vs oracle invariant suite; one entry per check.
std::vector<CheckResult> run_validation(const ValidationOptions &options = {});

/// |value - reference| <= max(rel |reference|, abs)
bool within(double value, double reference, double rel, double abs);

} // namespace polsq
