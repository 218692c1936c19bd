#pragma once

#include <functional>
#include <stdexcept>

#include "mbe/grid.hpp"
#include "mbe/model.hpp"
#include "mbe/report.hpp"
#include "mbe/time_mesh.hpp"

namespace mbe {

/// Fixed-point (Picard) solver settings. The stopping criterion is the
/// relative L2 change ||phi_{s+1}-phi_s|| / max(1, ||phi_{s+1}||) < fp_tol.
struct SolverConfig {
    double fp_tol = 1e-12;
    int fp_max_iters = 500;
    double relaxation = 1.0;  // omega in (0, 1]
};

struct StepStats {
    int iterations = 0;
    double last_change = 0.0;
    double residual = 0.0;  // ||b0*phi + eps*Lap^2 phi + div f(grad phi) - rhs|| / ||rhs||
};

class SolverError : public std::runtime_error {
public:
    SolverError(const std::string& what, double last_change, int level)
        : std::runtime_error(what), last_change(last_change), level(level) {}
    double last_change;
    int level;
};

/// Optional nodal forcing g(t); empty means the unforced model.
using Forcing = std::function<Field(double)>;

struct Observers {
    /// Called once per accepted level (including the initial one) with the
    /// record and the solution field.
    std::function<void(const StepRecord&, const Field&)> on_step;
    /// Progress/warning lines (typically forwarded to standard error).
    std::function<void(const std::string&)> progress;
};

/// BDF1 step: (phi1 - phi0)/tau1 + eps*Lap_h^2 phi1 + div_h f(grad_h phi1) = g(t1).
Field bdf1_step(const Field& phi0, double tau1, double t1, const MbeParams& p,
                const SolverConfig& cfg, const Forcing& g = {},
                StepStats* stats = nullptr, const Field* initial_guess = nullptr);

/// BDF2 step with step size tau and ratio = tau/tau_prev:
/// b0 (phi - phi_prev) + b1 (phi_prev - phi_prev2) + eps*Lap_h^2 phi
///   + div_h f(grad_h phi) = g(t_new).
Field bdf2_step(const Field& phi_prev, const Field& phi_prev2, double tau,
                double ratio, double t_new, const MbeParams& p,
                const SolverConfig& cfg, const Forcing& g = {},
                StepStats* stats = nullptr, const Field* initial_guess = nullptr);

/// March the scheme over a prescribed mesh: BDF1 for level 1, BDF2 after.
/// With `strict` the theory-grade step conditions (tau <= 4 eps and the
/// energy-dissipation bound) abort the run; otherwise they only produce
/// warnings through the observers.
RunReport run_simulation(const Field& phi0, const TimeMesh& mesh, const MbeParams& p,
                         const SolverConfig& cfg, const Forcing& g = {},
                         const Observers& obs = {}, bool strict = false);

}  // namespace mbe
