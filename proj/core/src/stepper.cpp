#include "mbe/stepper.hpp"

#include <cmath>
#include <sstream>

#include "mbe/kernels.hpp"

namespace mbe {

namespace {

Field nonlinear_term(const Field& phi) { return divergence(force_vector(gradient(phi))); }

/// Picard iteration for b0*phi + eps*Lap^2 phi + div f(grad phi) = rhs.
Field implicit_solve(double b0, const Field& rhs, const MbeParams& p,
                     const SolverConfig& cfg, const Field& guess, int level,
                     StepStats* stats) {
    const double rhs_norm = std::max(norm_l2(rhs), 1e-300);
    auto relative_residual = [&](const Field& w) {
        const Field res = b0 * w + p.eps * bilaplacian(w) + nonlinear_term(w) - rhs;
        return norm_l2(res) / rhs_norm;
    };

    Field phi = guess;
    double change = 0.0, residual = 0.0;
    int iter = 0;
    bool converged = false;
    for (; iter < cfg.fp_max_iters; ++iter) {
        Field next = solve_helmholtz_biharmonic(b0, p.eps, rhs - nonlinear_term(phi));
        if (cfg.relaxation != 1.0)
            next = cfg.relaxation * next + (1.0 - cfg.relaxation) * phi;
        change = norm_l2(next - phi) / std::max(1.0, norm_l2(next));
        phi = std::move(next);
        // the change criterion alone can leave the residual a small multiple
        // of fp_tol, so also require the plug-back residual to be safely
        // inside the 10*fp_tol contract
        if (change < cfg.fp_tol) {
            residual = relative_residual(phi);
            if (residual < 5.0 * cfg.fp_tol) {
                converged = true;
                ++iter;
                break;
            }
        }
    }
    if (!converged) {
        std::ostringstream msg;
        msg << "fixed-point iteration did not converge at level " << level
            << " (last relative change " << change << " after " << cfg.fp_max_iters
            << " iterations; a smaller time step may be needed)";
        throw SolverError(msg.str(), change, level);
    }
    if (stats) {
        stats->iterations = iter;
        stats->last_change = change;
        stats->residual = residual;
    }
    return phi;
}

}  // namespace

Field bdf1_step(const Field& phi0, double tau1, double t1, const MbeParams& p,
                const SolverConfig& cfg, const Forcing& g, StepStats* stats,
                const Field* initial_guess) {
    if (!(tau1 > 0.0)) throw std::invalid_argument("bdf1_step: tau must be positive");
    const double b0 = 1.0 / tau1;
    Field rhs = b0 * phi0;
    if (g) rhs += g(t1);
    return implicit_solve(b0, rhs, p, cfg, initial_guess ? *initial_guess : phi0, 1, stats);
}

Field bdf2_step(const Field& phi_prev, const Field& phi_prev2, double tau,
                double ratio, double t_new, const MbeParams& p, const SolverConfig& cfg,
                const Forcing& g, StepStats* stats, const Field* initial_guess) {
    if (!(tau > 0.0) || !(ratio > 0.0))
        throw std::invalid_argument("bdf2_step: tau and ratio must be positive");
    const double b0 = (1.0 + 2.0 * ratio) / (tau * (1.0 + ratio));
    const double b1 = -ratio * ratio / (tau * (1.0 + ratio));
    Field rhs = b0 * phi_prev - b1 * (phi_prev - phi_prev2);
    if (g) rhs += g(t_new);
    Field predictor = initial_guess ? *initial_guess
                                    : phi_prev + ratio * (phi_prev - phi_prev2);
    return implicit_solve(b0, rhs, p, cfg, predictor, -1, stats);
}

RunReport run_simulation(const Field& phi0, const TimeMesh& mesh, const MbeParams& p,
                         const SolverConfig& cfg, const Forcing& g,
                         const Observers& obs, bool strict) {
    RunReport report;
    report.levels = mesh.levels();

    auto warn = [&](const std::string& msg) {
        if (strict) throw std::runtime_error("strict mode: " + msg);
        if (obs.progress) obs.progress("warning: " + msg);
    };
    for (int n = 1; n <= mesh.num_steps(); ++n) {
        if (mesh.step(n) > 4.0 * p.eps) {
            warn("tau_" + std::to_string(n) + " exceeds 4*eps (solvability bound)");
            break;
        }
    }
    {
        const auto restriction = check_energy_step_restriction(mesh, p.eps);
        if (!restriction.satisfied)
            warn("energy-dissipation step restriction violated at " +
                 std::to_string(restriction.violations.size()) + " level(s)");
    }

    auto record_level = [&](int n, const Field& phi, const Field& phi_before,
                            const StepStats& stats, double tau, double ratio,
                            double ratio_next) {
        StepRecord row;
        row.step = n;
        row.t = mesh.level(n);
        row.tau = tau;
        row.ratio = ratio;
        row.energy = discrete_energy(phi, p);
        row.modified_energy = (n == 0) ? row.energy
                                       : modified_energy(phi, phi_before, ratio_next, tau, p);
        row.roughness = roughness(phi);
        row.mean = mean(phi);
        row.fp_iters = stats.iterations;
        row.residual = stats.residual;
        report.rows.push_back(row);
        if (obs.on_step) obs.on_step(row, phi);
    };

    record_level(0, phi0, phi0, {}, 0.0, 0.0, 0.0);
    if (mesh.num_steps() < 1) return report;

    const int total = mesh.num_steps();
    Field phi_prev2 = phi0;
    StepStats stats;
    Field phi_prev = bdf1_step(phi0, mesh.step(1), mesh.level(1), p, cfg, g, &stats);
    report.accepted_steps = 1;
    record_level(1, phi_prev, phi0, stats, mesh.step(1), 0.0,
                 total >= 2 ? mesh.ratio(2) : 0.0);

    for (int n = 2; n <= total; ++n) {
        Field phi;
        try {
            phi = bdf2_step(phi_prev, phi_prev2, mesh.step(n), mesh.ratio(n),
                            mesh.level(n), p, cfg, g, &stats);
        } catch (SolverError& err) {
            throw SolverError(std::string(err.what()) + " [level " + std::to_string(n) + "]",
                              err.last_change, n);
        }
        ++report.accepted_steps;
        record_level(n, phi, phi_prev, stats, mesh.step(n), mesh.ratio(n),
                     n < total ? mesh.ratio(n + 1) : 0.0);
        phi_prev2 = std::move(phi_prev);
        phi_prev = std::move(phi);
        if (obs.progress && n % 500 == 0)
            obs.progress("level " + std::to_string(n) + "/" + std::to_string(total) +
                         ", t=" + std::to_string(mesh.level(n)));
    }
    return report;
}

}  // namespace mbe
