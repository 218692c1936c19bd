#include "mbe/model.hpp"

#include <cmath>
#include <stdexcept>

namespace mbe {

MbeParams::MbeParams(double eps) : eps(eps) {
    if (!(eps > 0.0)) throw std::invalid_argument("MbeParams: eps must be positive");
}

VectorField force_vector(const VectorField& u) {
    if (u.x.spec() != u.y.spec()) throw std::invalid_argument("force_vector: grid mismatch");
    VectorField f{Field(u.x.spec()), Field(u.y.spec())};
    const auto& ux = u.x.values();
    const auto& uy = u.y.values();
    for (std::size_t k = 0; k < ux.size(); ++k) {
        const double q = 1.0 + ux[k] * ux[k] + uy[k] * uy[k];
        f.x.values()[k] = ux[k] / q;
        f.y.values()[k] = uy[k] / q;
    }
    return f;
}

double discrete_energy(const Field& phi, const MbeParams& p) {
    const auto g = gradient(phi);
    const double h = phi.spec().spacing();
    double log_sum = 0.0;
    for (std::size_t k = 0; k < g.x.values().size(); ++k) {
        const double gx = g.x.values()[k];
        const double gy = g.y.values()[k];
        log_sum += std::log1p(gx * gx + gy * gy);
    }
    const double lap = laplacian_norm(phi);
    return 0.5 * p.eps * lap * lap - 0.5 * h * h * log_sum;
}

double modified_energy(const Field& phi, const Field& phi_prev, double ratio_next,
                       double tau, const MbeParams& p) {
    if (!(tau > 0.0)) throw std::invalid_argument("modified_energy: tau must be positive");
    if (ratio_next < 0.0) throw std::invalid_argument("modified_energy: negative ratio");
    const double diff = norm_l2(phi - phi_prev);
    return discrete_energy(phi, p) +
           ratio_next / (2.0 * (1.0 + ratio_next) * tau) * diff * diff;
}

double roughness(const Field& phi) {
    const double avg = mean(phi);
    double sum = 0.0;
    for (double v : phi.values()) sum += (v - avg) * (v - avg);
    return std::sqrt(sum / phi.values().size());
}

Field manufactured_solution(double t, const GridSpec& grid) {
    const double c = std::cos(t);
    return Field::sample(grid, [c](double x, double y) { return c * std::sin(x) * std::sin(y); });
}

namespace {
void require_two_pi(const GridSpec& grid) {
    if (std::abs(grid.length - 2.0 * M_PI) > 1e-12)
        throw std::invalid_argument("manufactured solution requires L = 2*pi");
}
}  // namespace

Field manufactured_forcing(double t, const GridSpec& grid, const MbeParams& p) {
    require_two_pi(grid);
    const double c = std::cos(t);
    const double s = std::sin(t);
    const double eps = p.eps;
    return Field::sample(grid, [c, s, eps](double x, double y) {
        const double sx = std::sin(x), cx = std::cos(x);
        const double sy = std::sin(y), cy = std::cos(y);
        const double phi_t = -s * sx * sy;
        const double bilap = 4.0 * c * sx * sy;  // Delta^2 (sin x sin y) = 4 sin x sin y
        // u = grad Phi and its first derivatives, all closed form
        const double u1 = c * cx * sy, u2 = c * sx * cy;
        const double u1x = -c * sx * sy, u2y = -c * sx * sy;
        const double u1y = c * cx * cy, u2x = u1y;
        const double q = 1.0 + u1 * u1 + u2 * u2;
        const double qx = 2.0 * (u1 * u1x + u2 * u2x);
        const double qy = 2.0 * (u1 * u1y + u2 * u2y);
        const double divf = (u1x + u2y) / q - (u1 * qx + u2 * qy) / (q * q);
        return phi_t + eps * bilap + divf;
    });
}

Field manufactured_forcing_discrete(double t, const GridSpec& grid, const MbeParams& p) {
    require_two_pi(grid);
    const Field phi = manufactured_solution(t, grid);
    const double s = std::sin(t);
    Field phi_t = Field::sample(grid, [s](double x, double y) {
        return -s * std::sin(x) * std::sin(y);
    });
    return phi_t + p.eps * bilaplacian(phi) + divergence(force_vector(gradient(phi)));
}

}  // namespace mbe
