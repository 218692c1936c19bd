#include <cmath>
#include <random>

#include <doctest.h>

#include "mbe/model.hpp"

using namespace mbe;

namespace {
const double kTwoPi = 8.0 * std::atan(1.0);
}

TEST_CASE("params validation") {
    CHECK_THROWS_AS(MbeParams(0.0), std::invalid_argument);
    CHECK_THROWS_AS(MbeParams(-0.1), std::invalid_argument);
    CHECK(MbeParams{}.eps == 0.1);
}

TEST_CASE("force is bounded by 1/2 and vanishes at zero slope") {
    const GridSpec spec(kTwoPi, 16);
    std::mt19937_64 gen(1);
    std::uniform_real_distribution<double> big(-50.0, 50.0);
    VectorField u{Field(spec), Field(spec)};
    for (auto& x : u.x.values()) x = big(gen);
    for (auto& y : u.y.values()) y = big(gen);
    const auto f = force_vector(u);
    for (int i = 0; i < 16; ++i)
        for (int j = 0; j < 16; ++j) {
            const double mag = std::hypot(f.x.at(i, j), f.y.at(i, j));
            CHECK(mag <= 0.5 + 1e-14);
        }
    VectorField zero{Field(spec), Field(spec)};
    const auto f0 = force_vector(zero);
    CHECK(norm_l2(f0.x) == 0.0);
    CHECK(norm_l2(f0.y) == 0.0);
    // exact value at slope (1, 0): f = (1/2, 0)
    VectorField unit{Field(spec, 1.0), Field(spec)};
    const auto f1 = force_vector(unit);
    CHECK(f1.x.at(3, 3) == doctest::Approx(0.5).epsilon(1e-15));
}

TEST_CASE("force is 1-lipschitz on sampled pairs") {
    const GridSpec spec(kTwoPi, 8);
    std::mt19937_64 gen(2);
    std::uniform_real_distribution<double> unit(-3.0, 3.0);
    for (int trial = 0; trial < 200; ++trial) {
        VectorField a{Field(spec), Field(spec)}, b{Field(spec), Field(spec)};
        a.x.values()[0] = unit(gen); a.y.values()[0] = unit(gen);
        b.x.values()[0] = unit(gen); b.y.values()[0] = unit(gen);
        const auto fa = force_vector(a);
        const auto fb = force_vector(b);
        const double df = std::hypot(fa.x.values()[0] - fb.x.values()[0],
                                     fa.y.values()[0] - fb.y.values()[0]);
        const double dv = std::hypot(a.x.values()[0] - b.x.values()[0],
                                     a.y.values()[0] - b.y.values()[0]);
        CHECK(df <= dv + 1e-13);
    }
}

TEST_CASE("discrete energy matches a direct summation oracle") {
    const GridSpec spec(kTwoPi, 24);
    const MbeParams p{0.07};
    const Field phi = Field::sample(spec, [](double x, double y) {
        return 0.3 * std::sin(2.0 * x) * std::cos(y) + 0.1 * std::cos(3.0 * y);
    });
    const double h = spec.spacing();
    const Field lap_phi = laplacian(phi);
    const auto g = gradient(phi);
    double e1 = 0.0, e2 = 0.0;
    for (int j = 0; j < 24; ++j)
        for (int i = 0; i < 24; ++i) {
            e1 += lap_phi.at(i, j) * lap_phi.at(i, j);
            e2 += std::log(1.0 + g.x.at(i, j) * g.x.at(i, j) +
                           g.y.at(i, j) * g.y.at(i, j));
        }
    const double expected = 0.5 * p.eps * h * h * e1 - 0.5 * h * h * e2;
    CHECK(discrete_energy(phi, p) == doctest::Approx(expected).epsilon(1e-13));
    CHECK(discrete_energy(Field(spec), p) == 0.0);
}

TEST_CASE("modified energy adds the ratio-weighted difference term") {
    const GridSpec spec(kTwoPi, 16);
    const MbeParams p{0.1};
    const Field phi = Field::sample(spec, [](double x, double y) {
        return std::sin(x) * std::sin(y);
    });
    const Field prev = Field::sample(spec, [](double x, double y) {
        return 0.9 * std::sin(x) * std::sin(y);
    });
    const double tau = 0.01, r_next = 2.0;
    const double diff2 = std::pow(norm_l2(phi - prev), 2);
    const double expected =
        discrete_energy(phi, p) + r_next / (2.0 * (1.0 + r_next) * tau) * diff2;
    CHECK(modified_energy(phi, prev, r_next, tau, p) ==
          doctest::Approx(expected).epsilon(1e-13));
    // r_next = 0 reduces to the plain energy
    CHECK(modified_energy(phi, prev, 0.0, tau, p) ==
          doctest::Approx(discrete_energy(phi, p)).epsilon(1e-14));
}

TEST_CASE("roughness of a zero-mean sine is sqrt(1/2)") {
    const GridSpec spec(kTwoPi, 32);
    const Field phi = Field::sample(spec, [](double x, double) { return std::sin(x); });
    CHECK(roughness(phi) == doctest::Approx(std::sqrt(0.5)).epsilon(1e-13));
    // invariant under constant shifts
    CHECK(roughness(phi + Field(spec, 3.7)) == doctest::Approx(std::sqrt(0.5)).epsilon(1e-12));
    CHECK(roughness(Field(spec, 2.0)) == doctest::Approx(0.0).epsilon(1e-14));
}

TEST_CASE("manufactured solution values") {
    const GridSpec spec(kTwoPi, 16);
    const double h = spec.spacing();
    const Field phi = manufactured_solution(0.5, spec);
    CHECK(phi.at(3, 5) ==
          doctest::Approx(std::cos(0.5) * std::sin(3.0 * h) * std::sin(5.0 * h))
              .epsilon(1e-14));
}

TEST_CASE("analytic and discrete forcing converge to each other at second order") {
    const MbeParams p{0.1};
    const double t = 0.4;
    double prev = 0.0;
    for (int M : {32, 64, 128}) {
        const GridSpec spec(kTwoPi, M);
        const Field d = manufactured_forcing(t, spec, p) -
                        manufactured_forcing_discrete(t, spec, p);
        const double err = norm_l2(d);
        if (prev > 0.0) CHECK(prev / err == doctest::Approx(4.0).epsilon(0.1));
        prev = err;
    }
}

TEST_CASE("discrete forcing closes the semi-discrete equation exactly") {
    const GridSpec spec(kTwoPi, 32);
    const MbeParams p{0.1};
    const double t = 0.8;
    const Field phi = manufactured_solution(t, spec);
    const Field phi_t = Field::sample(spec, [&](double x, double y) {
        return -std::sin(t) * std::sin(x) * std::sin(y);
    });
    const Field residual = phi_t + p.eps * bilaplacian(phi) +
                           divergence(force_vector(gradient(phi))) -
                           manufactured_forcing_discrete(t, spec, p);
    CHECK(norm_l2(residual) < 1e-13);
}

TEST_CASE("analytic forcing requires the 2 pi domain") {
    const MbeParams p{0.1};
    CHECK_THROWS_AS(manufactured_forcing(0.0, GridSpec(1.0, 16), p), std::invalid_argument);
}
