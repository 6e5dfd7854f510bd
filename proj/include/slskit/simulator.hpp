#pragma once

#include <span>
#include <string>
#include <vector>

#include "slskit/framework.hpp"

namespace slskit {

/// Per-signal comparison of several simulation runs against the first one.
struct ComparisonReport {
    std::vector<std::string> signal_names;  // x, y, u, w, zbar
    // One row per result: max absolute difference vs. results[0], and energy
    // (sum of squared norms over the horizon).
    Matrix max_abs_diff;
    Matrix energy;

    std::string format() const;
};

ComparisonReport compare(std::span<const SimulationResult> results);

}  // namespace slskit
