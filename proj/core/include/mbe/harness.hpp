#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "mbe/adaptive.hpp"
#include "mbe/model.hpp"
#include "mbe/report.hpp"
#include "mbe/stepper.hpp"
#include "mbe/time_mesh.hpp"

namespace mbe {

enum class MeshKind { Uniform, Random };

enum class ForcingMode {
    Discrete,  // forcing built with the discrete spatial operators (default:
               // the measured error is purely temporal)
    Analytic,  // closed-form continuous forcing
};

struct ConvergenceRow {
    int num_steps = 0;
    double max_step = 0.0;
    double error = 0.0;          // ||Phi(T) - phi^N|| in the discrete L2 norm
    double order = 0.0;          // vs the previous row; 0 for the first row
    double max_ratio = 0.0;
    int s1_violations = 0;       // N_1 = #{k : r_k >= r_s}
};

/// Manufactured-solution accuracy study over a doubling sequence of mesh
/// sizes; order = log(e(N)/e(2N))/log(tau(N)/tau(2N)).
std::vector<ConvergenceRow> convergence_study(
    MeshKind kind, std::span<const int> step_counts, std::uint64_t seed,
    const GridSpec& grid, const MbeParams& p, double horizon,
    const SolverConfig& solver, ForcingMode forcing = ForcingMode::Discrete);

/// Compute the convergence orders in place from error/max_step columns.
void fill_orders(std::vector<ConvergenceRow>& rows);

/// Convolutional consistency diagnostic for a scalar analytic probe Phi(t):
/// xi^j = D2 Phi(t_j) - Phi'(t_j), Xi^k = sum_j theta_{k-j}^{(k)} xi^j, and
/// the a-priori bound
///   sum_k |Xi^k| <= tau_1 * int_0^{t_1}|Phi''| * sum_k prod_{i=2}^k r_i^2/(1+2r_i)
///                   + 3 t_N max_j (tau_j * int_{t_{j-1}}^{t_j}|Phi'''|).
struct ConsistencyReport {
    std::vector<double> xi;      // xi^1 .. xi^N
    std::vector<double> conv;    // Xi^1 .. Xi^N
    double sum_abs = 0.0;        // sum_k |Xi^k|
    double bound = 0.0;
    bool holds = false;
};
using ScalarFn = std::function<double(double)>;
ConsistencyReport consistency_diagnostic(const TimeMesh& mesh, const ScalarFn& phi,
                                         const ScalarFn& dphi, const ScalarFn& d2phi,
                                         const ScalarFn& d3phi);

/// Initial height 0.1(sin 3x sin 2y + sin 5x sin 5y).
Field benchmark_initial_data(const GridSpec& grid);

/// Benchmark run with the unforced model from benchmark_initial_data;
/// uniform marching when `adaptive_cfg` is null, adaptive otherwise.
/// Snapshots are captured at the nearest accepted level at or after each
/// requested time.
RunReport benchmark_run(const GridSpec& grid, const MbeParams& p, double horizon,
                        double tau_uniform, const AdaptiveConfig* adaptive_cfg,
                        double tau_init, const SolverConfig& solver,
                        std::span<const double> snapshot_times,
                        const Observers& obs = {}, bool strict = false);

/// Full mesh/kernel audit (S1, S2, energy step restriction, M_r,
/// orthogonality and row-sum deviations).
MeshAudit audit_mesh(const TimeMesh& mesh, double eps);

/// Persist a report: timeseries.csv, snapshots/t_<time>.csv, mesh.csv,
/// audit.json, config.json.
void emit_report(const RunReport& report, const std::filesystem::path& out_dir);

/// Re-read a timeseries.csv written by emit_report (round-trip checks).
std::vector<StepRecord> load_timeseries(const std::filesystem::path& file);

}  // namespace mbe
