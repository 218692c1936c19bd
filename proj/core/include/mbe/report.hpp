#pragma once

#include <string>
#include <utility>
#include <vector>

#include "mbe/grid.hpp"

namespace mbe {

/// One accepted time level in a run's time series.
struct StepRecord {
    int step = 0;
    double t = 0.0;
    double tau = 0.0;
    double ratio = 0.0;
    double energy = 0.0;
    double modified_energy = 0.0;
    double roughness = 0.0;
    double mean = 0.0;
    int fp_iters = 0;
    double residual = 0.0;      // plug-back residual relative to ||rhs||
    double e_indicator = -1.0;  // adaptive runs only
    int accepted = 1;
    int retries = 0;
};

/// Mesh/kernel audit attached to every run.
struct MeshAudit {
    bool s1_satisfied = true;
    int s1_violations = 0;
    double max_ratio = 0.0;
    int s2_count = 0;
    double s2_fraction = 0.0;
    bool step_restriction_satisfied = true;
    int step_restriction_violations = 0;
    double m_r = 0.0;
    bool m_r_ok = true;
    double orthogonality_deviation = 0.0;
    double row_sum_deviation = 0.0;
};

struct RunReport {
    std::vector<StepRecord> rows;
    std::vector<double> levels;  // time levels actually used (t_0 .. t_N)
    std::vector<std::pair<double, Field>> snapshots;
    MeshAudit audit;
    int accepted_steps = 0;
    int rejected_steps = 0;
    std::string config_json = "{}";  // full echo of parameters and seeds
};

}  // namespace mbe
