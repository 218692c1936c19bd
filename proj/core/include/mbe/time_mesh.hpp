#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <utility>
#include <vector>

namespace mbe {

/// Zero-stability step-ratio limit r_s = (3+sqrt(17))/2, the root of x^2-3x-2.
double ratio_limit();

/// Ratio threshold 1+sqrt(2) separating "large" amplification factors.
double ratio_classical_limit();

/// Nonuniform time mesh 0 = t_0 < t_1 < ... < t_N = T.
///
/// Levels are the source of truth; step sizes tau_k = t_k - t_{k-1} and
/// ratios r_k = tau_k/tau_{k-1} are recomputed on demand (r_1 == 0 by
/// convention). Immutable after construction.
class TimeMesh {
public:
    static TimeMesh from_levels(std::vector<double> levels);

    /// N+1 equally spaced levels on [0, T].
    static TimeMesh uniform(double horizon, int num_steps);

    /// Random mesh tau_k = T*sigma_k/S with sigma_k ~ U(0,1) from a
    /// deterministic generator; the final level is forced to T exactly.
    static TimeMesh random(double horizon, int num_steps, std::uint64_t seed);

    int num_steps() const { return static_cast<int>(levels_.size()) - 1; }
    double horizon() const { return levels_.back(); }

    /// t_k for 0 <= k <= N.
    double level(int k) const;
    /// tau_k for 1 <= k <= N.
    double step(int k) const;
    /// r_k for 1 <= k <= N; r_1 == 0.
    double ratio(int k) const;

    double max_step() const;
    /// Largest r_k over 2 <= k <= N; 0 when N < 2.
    double max_ratio() const;

    const std::vector<double>& levels() const { return levels_; }
    std::optional<std::uint64_t> seed() const { return seed_; }

    /// One-column CSV (header `t`), with a `# seed=<n>` metadata line for
    /// random meshes.
    void save_csv(const std::filesystem::path& file) const;
    static TimeMesh load_csv(const std::filesystem::path& file);

private:
    explicit TimeMesh(std::vector<double> levels,
                      std::optional<std::uint64_t> seed = std::nullopt);

    std::vector<double> levels_;
    std::optional<std::uint64_t> seed_;
};

/// Condition S1: 0 < r_k < (3+sqrt(17))/2 for all k >= 2.
struct S1Report {
    bool satisfied = true;
    std::vector<std::pair<int, double>> violations;  // (k, r_k) with r_k >= r_s
};
S1Report check_s1(const TimeMesh& mesh);

/// Condition S2: index set R = {k : 1+sqrt(2) <= r_k < r_s} should be small.
/// `satisfied` is advisory (the paper gives no cutoff); callers should look
/// at fraction = N_0/N.
struct S2Report {
    bool satisfied = true;
    std::vector<int> index_set;
    int count = 0;
    double fraction = 0.0;
};
S2Report check_s2(const TimeMesh& mesh);

/// Energy-dissipation step bound
///   tau_n <= 4*eps*min{1, (2+4r_n-r_n^2)/(1+r_n) - r_{n+1}/(1+r_{n+1})}
/// with r_{N+1} taken as 0 at the final level.
double energy_step_bound(const TimeMesh& mesh, double eps, int n);

struct StepRestrictionReport {
    bool satisfied = true;
    std::vector<int> violations;
};
StepRestrictionReport check_energy_step_restriction(const TimeMesh& mesh, double eps);

}  // namespace mbe
