#pragma once

#include <string>
#include <vector>

#include "dickesim/config.hpp"

namespace dicke {

struct SweepSummary {
    int n_points = 0;
    int n_failed = 0;
    std::vector<std::string> files;  // CSV paths written, manifest last
    std::string manifest;
};

// 12-significant-digit shortest decimal form, locale independent.
std::string format_double(double x);

// Known figure presets, in presentation order.
std::vector<std::string> figure_presets();

// Run one preset and write its CSV files plus manifest.json under out_dir.
// Per-point solver failures land in the CSV error column; the summary
// counts them.
SweepSummary run_figure(const std::string& preset, const std::string& out_dir,
                        int jobs);

// Run a user sweep (Cartesian product of axes, lexicographic order, first
// axis outermost).
SweepSummary run_custom(const RunConfig& cfg, const std::string& out_dir,
                        int jobs);

}  // namespace dicke
