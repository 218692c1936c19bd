#include "mbe/adaptive.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace mbe {

void AdaptiveConfig::validate() const {
    if (!(tol > 0.0)) throw std::invalid_argument("AdaptiveConfig: tol must be positive");
    if (!(safety > 0.0) || safety > 1.0)
        throw std::invalid_argument("AdaptiveConfig: safety must be in (0, 1]");
    if (!(tau_min > 0.0) || !(tau_min <= tau_max))
        throw std::invalid_argument("AdaptiveConfig: need 0 < tau_min <= tau_max");
}

double tau_ada(double e, double tau_cur, const AdaptiveConfig& cfg) {
    if (!(tau_cur > 0.0)) throw std::invalid_argument("tau_ada: tau_cur must be positive");
    if (e < 0.0) throw std::invalid_argument("tau_ada: negative indicator");
    const double cap = ratio_limit() * tau_cur;
    if (e == 0.0) return cap;
    return std::min(cfg.safety * std::sqrt(cfg.tol / e) * tau_cur, cap);
}

namespace {
double clamp_step(double tau, const AdaptiveConfig& cfg) {
    return std::min(std::max(cfg.tau_min, tau), cfg.tau_max);
}
}  // namespace

AdaptiveStepResult adaptive_step(const Field& phi_prev, const Field& phi_prev2,
                                 double tau_prev, double tau, double t_cur,
                                 const MbeParams& p, const SolverConfig& solver,
                                 const AdaptiveConfig& cfg, const Forcing& g) {
    cfg.validate();
    AdaptiveStepResult result;
    const Field* retry_guess = nullptr;
    Field last_trial;
    for (;;) {
        Field phi1 = bdf1_step(phi_prev, tau, t_cur + tau, p, solver, g);
        StepStats stats;
        Field phi2 = bdf2_step(phi_prev, phi_prev2, tau, tau / tau_prev, t_cur + tau, p,
                               solver, g, &stats, retry_guess);
        const double denom = norm_l2(phi2);
        const double e = (denom < 1e-14) ? norm_l2(phi2 - phi1)
                                         : norm_l2(phi2 - phi1) / denom;
        const bool at_floor = tau <= cfg.tau_min * (1.0 + 1e-12);
        if (e < cfg.tol || at_floor || result.retries >= cfg.max_rejections) {
            result.phi = std::move(phi2);
            result.used_tau = tau;
            result.e_indicator = e;
            result.stats = stats;
            result.forced_accept = e >= cfg.tol && !at_floor;
            result.next_tau = (e < cfg.tol) ? clamp_step(tau_ada(e, tau, cfg), cfg)
                                            : cfg.tau_min;
            return result;
        }
        ++result.retries;
        tau = clamp_step(tau_ada(e, tau, cfg), cfg);
        last_trial = std::move(phi2);
        retry_guess = &last_trial;
    }
}

RunReport run_adaptive(const Field& phi0, double horizon, double tau_init,
                       const AdaptiveConfig& cfg, const MbeParams& p,
                       const SolverConfig& solver, const Forcing& g,
                       const Observers& obs) {
    cfg.validate();
    if (!(horizon > 0.0)) throw std::invalid_argument("run_adaptive: horizon must be positive");
    if (tau_init < cfg.tau_min || tau_init > cfg.tau_max)
        throw std::invalid_argument("run_adaptive: tau_init outside [tau_min, tau_max]");

    RunReport report;
    report.levels.push_back(0.0);

    auto make_row = [&](int step, double t, double tau, double ratio, const Field& phi,
                        const StepStats& stats) {
        StepRecord row;
        row.step = step;
        row.t = t;
        row.tau = tau;
        row.ratio = ratio;
        row.energy = discrete_energy(phi, p);
        // provisional: patched once the next accepted step size is known
        row.modified_energy = row.energy;
        row.roughness = roughness(phi);
        row.mean = mean(phi);
        row.fp_iters = stats.iterations;
        row.residual = stats.residual;
        return row;
    };

    StepRecord row0 = make_row(0, 0.0, 0.0, 0.0, phi0, {});
    report.rows.push_back(row0);
    if (obs.on_step) obs.on_step(row0, phi0);

    double t = 0.0;
    double tau1 = std::min(tau_init, horizon);
    StepStats stats;
    Field phi_prev2 = phi0;
    Field phi_prev = bdf1_step(phi0, tau1, tau1, p, solver, g, &stats);
    t = tau1;
    double tau_prev = tau1;
    report.levels.push_back(t);
    ++report.accepted_steps;
    StepRecord row = make_row(1, t, tau1, 0.0, phi_prev, stats);
    report.rows.push_back(row);
    if (obs.on_step) obs.on_step(row, phi_prev);

    double proposal = tau_init;
    int step = 1;
    const double t_eps = 1e-12 * horizon;
    while (t < horizon - t_eps) {
        double tau = std::min(proposal, horizon - t);
        auto res = adaptive_step(phi_prev, phi_prev2, tau_prev, tau, t, p, solver, cfg, g);
        if (res.forced_accept && obs.progress)
            obs.progress("warning: step accepted after rejection guard at t=" +
                         std::to_string(t));
        ++step;
        report.accepted_steps += 1;
        report.rejected_steps += res.retries;
        // finalize the previous row's modified energy with the realized ratio
        report.rows.back().modified_energy = modified_energy(
            phi_prev, phi_prev2, res.used_tau / tau_prev, tau_prev, p);

        t += res.used_tau;
        report.levels.push_back(t);
        StepRecord r = make_row(step, t, res.used_tau, res.used_tau / tau_prev, res.phi,
                                res.stats);
        r.e_indicator = res.e_indicator;
        r.retries = res.retries;
        report.rows.push_back(r);
        if (obs.on_step) obs.on_step(r, res.phi);
        if (obs.progress && step % 100 == 0)
            obs.progress("adaptive step " + std::to_string(step) + ", t=" +
                         std::to_string(t) + ", tau=" + std::to_string(res.used_tau));

        phi_prev2 = std::move(phi_prev);
        phi_prev = std::move(res.phi);
        tau_prev = res.used_tau;
        proposal = res.next_tau;
    }
    return report;
}

}  // namespace mbe
