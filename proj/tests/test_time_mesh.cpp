#include <cmath>
#include <cstdio>
#include <filesystem>

#include <doctest.h>

#include "mbe/time_mesh.hpp"

using namespace mbe;

TEST_CASE("ratio limit is the positive root of x^2 - 3x - 2") {
    const double rs = ratio_limit();
    CHECK(rs == doctest::Approx((3.0 + std::sqrt(17.0)) / 2.0).epsilon(1e-15));
    CHECK(rs * rs - 3.0 * rs - 2.0 == doctest::Approx(0.0).epsilon(1e-14));
    CHECK(ratio_classical_limit() == doctest::Approx(1.0 + std::sqrt(2.0)).epsilon(1e-15));
    CHECK(ratio_classical_limit() < rs);
}

TEST_CASE("uniform mesh levels, steps and ratios") {
    const auto mesh = TimeMesh::uniform(1.0, 4);
    CHECK(mesh.num_steps() == 4);
    CHECK(mesh.horizon() == 1.0);
    CHECK(mesh.level(0) == 0.0);
    CHECK(mesh.level(2) == doctest::Approx(0.5).epsilon(1e-16));
    CHECK(mesh.level(4) == 1.0);
    CHECK(mesh.step(1) == doctest::Approx(0.25).epsilon(1e-16));
    CHECK(mesh.ratio(1) == 0.0);
    CHECK(mesh.ratio(3) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(mesh.max_step() == doctest::Approx(0.25).epsilon(1e-14));
    CHECK(mesh.max_ratio() == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("from_levels validates input") {
    CHECK_THROWS_AS(TimeMesh::from_levels({}), std::invalid_argument);
    CHECK_THROWS_AS(TimeMesh::from_levels({0.0, 0.5, 0.5}), std::invalid_argument);
    CHECK_THROWS_AS(TimeMesh::from_levels({0.0, 1.0, 0.5}), std::invalid_argument);
    CHECK_NOTHROW(TimeMesh::from_levels({0.0}));  // initial-state-only mesh
    CHECK_THROWS_AS(TimeMesh::uniform(-1.0, 4), std::invalid_argument);
    CHECK_THROWS_AS(TimeMesh::uniform(1.0, 0), std::invalid_argument);
}

TEST_CASE("random mesh is deterministic in the seed and sums to the horizon") {
    const auto a = TimeMesh::random(2.0, 50, 123);
    const auto b = TimeMesh::random(2.0, 50, 123);
    const auto c = TimeMesh::random(2.0, 50, 124);
    CHECK(a.num_steps() == 50);
    CHECK(a.horizon() == 2.0);
    CHECK(a.levels() == b.levels());
    CHECK(a.levels() != c.levels());
    CHECK(a.seed().has_value());
    CHECK(*a.seed() == 123);
    for (int k = 1; k <= a.num_steps(); ++k) CHECK(a.step(k) > 0.0);
}

TEST_CASE("mesh csv round trip preserves levels and seed") {
    const auto dir = std::filesystem::temp_directory_path() / "mbe_mesh_test";
    std::filesystem::create_directories(dir);
    const auto file = dir / "mesh.csv";

    const auto mesh = TimeMesh::random(1.0, 20, 7);
    mesh.save_csv(file);
    const auto back = TimeMesh::load_csv(file);
    CHECK(back.num_steps() == 20);
    CHECK(back.seed().has_value());
    CHECK(*back.seed() == 7);
    for (int k = 0; k <= 20; ++k)
        CHECK(back.level(k) == doctest::Approx(mesh.level(k)).epsilon(1e-16));

    const auto plain = TimeMesh::uniform(1.0, 5);
    plain.save_csv(file);
    CHECK_FALSE(TimeMesh::load_csv(file).seed().has_value());
}

TEST_CASE("S1 check flags exactly the ratios at or above the limit") {
    const double rs = ratio_limit();
    // steps 1, 2, 2*rs -> ratios r2 = 2, r3 = rs (violation)
    const auto bad = TimeMesh::from_levels({0.0, 1.0, 3.0, 3.0 + 2.0 * rs});
    const auto report = check_s1(bad);
    CHECK_FALSE(report.satisfied);
    REQUIRE(report.violations.size() == 1);
    CHECK(report.violations[0].first == 3);
    CHECK(report.violations[0].second == doctest::Approx(rs).epsilon(1e-14));

    CHECK(check_s1(TimeMesh::uniform(1.0, 10)).satisfied);
}

TEST_CASE("S2 index set collects ratios in [1+sqrt(2), r_s)") {
    // ratios: r2 = 3 (inside), r3 = 1 (outside)
    const auto mesh = TimeMesh::from_levels({0.0, 1.0, 4.0, 7.0});
    const auto report = check_s2(mesh);
    CHECK(report.count == 1);
    REQUIRE(report.index_set.size() == 1);
    CHECK(report.index_set[0] == 2);
    CHECK(report.fraction == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
}

TEST_CASE("energy step bound values") {
    const double eps = 0.1;
    // r2 = 2: level 1 sees r_next = 2, term = 2 - 2/3 = 4/3 -> capped at 1.
    const auto mesh = TimeMesh::from_levels({0.0, 0.1, 0.3});
    CHECK(energy_step_bound(mesh, eps, 1) == doctest::Approx(4.0 * eps).epsilon(1e-14));
    // final level: r_next = 0, r2 = 2, term = (2+8-4)/3 = 2 -> capped at 1.
    CHECK(energy_step_bound(mesh, eps, 2) == doctest::Approx(4.0 * eps).epsilon(1e-14));

    // r2 = 3.5 at the final level: (2+14-12.25)/4.5 = 0.8333...
    const auto steep = TimeMesh::from_levels({0.0, 1.0, 4.5});
    CHECK(energy_step_bound(steep, eps, 2) ==
          doctest::Approx(4.0 * eps * (3.75 / 4.5)).epsilon(1e-13));
    CHECK_THROWS_AS(energy_step_bound(steep, -1.0, 1), std::invalid_argument);
}

TEST_CASE("energy step restriction report") {
    const double eps = 0.1;
    // uniform tau = 0.39 < 4*eps satisfies the bound (interior levels:
    // term = (2+4-1)/2 - 1/2 = 2 -> capped at 1).
    CHECK(check_energy_step_restriction(TimeMesh::uniform(1.95, 5), eps).satisfied);
    // tau = 0.5 > 4*eps violates it everywhere.
    const auto report = check_energy_step_restriction(TimeMesh::uniform(2.5, 5), eps);
    CHECK_FALSE(report.satisfied);
    CHECK(report.violations.size() == 5);
}
