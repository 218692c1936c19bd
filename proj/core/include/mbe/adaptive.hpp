#pragma once

#include "mbe/stepper.hpp"
#include "mbe/time_mesh.hpp"

namespace mbe {

struct AdaptiveConfig {
    double tol = 1e-3;      // reference tolerance for the error indicator
    double safety = 0.9;    // S_a
    double tau_min = 1e-4;
    double tau_max = 0.1;
    int max_rejections = 50;

    void validate() const;
};

/// Raw step proposal tau_ada = min{S_a*sqrt(tol/e)*tau_cur, r_s*tau_cur}
/// (before clamping to [tau_min, tau_max]); e == 0 returns the ratio cap.
double tau_ada(double e, double tau_cur, const AdaptiveConfig& cfg);

/// One controller step: BDF1 and BDF2 trial solves with the same step,
/// relative-difference indicator, accept/reject per the controller rules.
struct AdaptiveStepResult {
    Field phi;             // accepted BDF2 solution
    double used_tau = 0.0;
    double next_tau = 0.0;
    double e_indicator = 0.0;
    int retries = 0;
    bool forced_accept = false;  // rejection guard tripped
    StepStats stats;
};
AdaptiveStepResult adaptive_step(const Field& phi_prev, const Field& phi_prev2,
                                 double tau_prev, double tau, double t_cur,
                                 const MbeParams& p, const SolverConfig& solver,
                                 const AdaptiveConfig& cfg, const Forcing& g = {});

/// March to T with the adaptive controller; level 1 uses tau_init with BDF1.
/// The final step is truncated to land exactly on T.
RunReport run_adaptive(const Field& phi0, double horizon, double tau_init,
                       const AdaptiveConfig& cfg, const MbeParams& p,
                       const SolverConfig& solver, const Forcing& g = {},
                       const Observers& obs = {});

}  // namespace mbe
