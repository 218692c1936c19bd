#pragma once

#include "mbe/grid.hpp"

namespace mbe {

struct MbeParams {
    double eps = 0.1;  // surface-diffusion coefficient, > 0

    explicit MbeParams(double eps);
    MbeParams() = default;
};

/// Pointwise nonlinear force f(v) = v/(1+|v|^2); |f| <= 1/2 everywhere and
/// f is 1-Lipschitz.
VectorField force_vector(const VectorField& u);

/// Discrete free energy E[phi] = (eps/2)||Delta_h phi||^2
///                               - (1/2)<ln(1+|grad_h phi|^2), 1>.
double discrete_energy(const Field& phi, const MbeParams& p);

/// Modified energy E[phi^n] + r_{n+1}/(2(1+r_{n+1}) tau_n) ||phi^n-phi^{n-1}||^2.
double modified_energy(const Field& phi, const Field& phi_prev, double ratio_next,
                       double tau, const MbeParams& p);

/// Root-mean-square deviation of the height from its spatial mean.
double roughness(const Field& phi);

/// Manufactured solution Phi(x,y,t) = cos(t) sin(x) sin(y) and its forcing.
Field manufactured_solution(double t, const GridSpec& grid);

/// Forcing g = Phi_t + eps*Delta^2 Phi + div f(grad Phi) from closed-form
/// analytic derivatives (continuous operators). Requires L = 2*pi.
Field manufactured_forcing(double t, const GridSpec& grid, const MbeParams& p);

/// Forcing assembled with the discrete spatial operators applied to the nodal
/// manufactured solution, so that Phi at the nodes solves the semi-discrete
/// system exactly and the measured error is purely temporal.
Field manufactured_forcing_discrete(double t, const GridSpec& grid, const MbeParams& p);

}  // namespace mbe
