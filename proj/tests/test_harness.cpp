#include <cmath>
#include <filesystem>
#include <fstream>

#include <doctest.h>

#include "mbe/harness.hpp"

using namespace mbe;

namespace {
const double kTwoPi = 8.0 * std::atan(1.0);
}

TEST_CASE("fill_orders computes pairwise slopes") {
    std::vector<ConvergenceRow> rows(3);
    rows[0].max_step = 0.1;  rows[0].error = 1e-2;
    rows[1].max_step = 0.05; rows[1].error = 2.5e-3;
    rows[2].max_step = 0.025; rows[2].error = 3.125e-4;
    fill_orders(rows);
    CHECK(rows[0].order == 0.0);
    CHECK(rows[1].order == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(rows[2].order == doctest::Approx(3.0).epsilon(1e-12));
}

TEST_CASE("consistency diagnostic vanishes for linear data") {
    const auto mesh = TimeMesh::random(1.0, 15, 3);
    const auto rep = consistency_diagnostic(
        mesh, [](double t) { return 2.0 * t + 1.0; }, [](double) { return 2.0; },
        [](double) { return 0.0; }, [](double) { return 0.0; });
    REQUIRE(rep.xi.size() == 15);
    for (double x : rep.xi) CHECK(std::abs(x) < 1e-11);
    CHECK(rep.sum_abs < 1e-11);
    CHECK(rep.holds);
}

TEST_CASE("consistency diagnostic for a quadratic isolates the startup error") {
    // Phi = t^2: BDF2 is exact, only the BDF1 start errs with xi^1 = -tau_1.
    const auto mesh = TimeMesh::from_levels({0.0, 0.25, 0.5, 1.0, 1.5});
    const auto rep = consistency_diagnostic(
        mesh, [](double t) { return t * t; }, [](double t) { return 2.0 * t; },
        [](double) { return 2.0; }, [](double) { return 0.0; });
    CHECK(rep.xi[0] == doctest::Approx(-0.25).epsilon(1e-12));
    for (std::size_t k = 1; k < rep.xi.size(); ++k)
        CHECK(std::abs(rep.xi[k]) < 1e-11);
    CHECK(rep.holds);
    CHECK(rep.sum_abs <= rep.bound);
}

TEST_CASE("consistency bound holds for the oscillatory probe on random meshes") {
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        const auto mesh = TimeMesh::random(1.0, 30, seed);
        if (!check_s1(mesh).satisfied) continue;
        const auto rep = consistency_diagnostic(
            mesh, [](double t) { return std::cos(t); },
            [](double t) { return -std::sin(t); }, [](double t) { return -std::cos(t); },
            [](double t) { return std::sin(t); });
        CHECK(rep.holds);
        CHECK(rep.sum_abs <= rep.bound * (1.0 + 1e-10) + 1e-14);
    }
}

TEST_CASE("benchmark initial data values") {
    const GridSpec spec(kTwoPi, 16);
    const Field phi = benchmark_initial_data(spec);
    const double h = spec.spacing();
    const double x = 3.0 * h, y = 5.0 * h;
    CHECK(phi.at(3, 5) ==
          doctest::Approx(0.1 * (std::sin(3.0 * x) * std::sin(2.0 * y) +
                                 std::sin(5.0 * x) * std::sin(5.0 * y)))
              .epsilon(1e-13));
    CHECK(std::abs(mean(phi)) < 1e-14);
}

TEST_CASE("audit_mesh summarizes mesh and kernel health") {
    const auto good = TimeMesh::uniform(1.0, 20);
    const auto audit = audit_mesh(good, 0.1);
    CHECK(audit.s1_satisfied);
    CHECK(audit.s1_violations == 0);
    CHECK(audit.s2_count == 0);
    CHECK(audit.step_restriction_satisfied);
    CHECK(audit.m_r_ok);
    CHECK(audit.m_r <= 4.05);
    CHECK(audit.orthogonality_deviation < 1e-12);
    CHECK(audit.row_sum_deviation < 1e-12);

    const double rs = ratio_limit();
    const auto bad = TimeMesh::from_levels({0.0, 0.1, 0.1 + 0.1 * (rs + 0.5)});
    const auto bad_audit = audit_mesh(bad, 0.1);
    CHECK_FALSE(bad_audit.s1_satisfied);
    CHECK(bad_audit.s1_violations == 1);
}

TEST_CASE("uniform convergence study shows second order") {
    const GridSpec spec(kTwoPi, 16);
    const std::vector<int> counts{10, 20, 40};
    const auto rows = convergence_study(MeshKind::Uniform, counts, 1, spec, MbeParams{0.1},
                                        1.0, SolverConfig{});
    REQUIRE(rows.size() == 3);
    CHECK(rows[0].max_step == doctest::Approx(0.1).epsilon(1e-14));
    CHECK(rows[1].order == doctest::Approx(2.0).epsilon(0.1));
    CHECK(rows[2].order == doctest::Approx(2.0).epsilon(0.1));
    for (const auto& r : rows) CHECK(r.s1_violations == 0);
}

TEST_CASE("random convergence study is reproducible and reports violations") {
    const GridSpec spec(kTwoPi, 16);
    const std::vector<int> counts{10, 20};
    const auto a = convergence_study(MeshKind::Random, counts, 5, spec, MbeParams{0.1},
                                     1.0, SolverConfig{});
    const auto b = convergence_study(MeshKind::Random, counts, 5, spec, MbeParams{0.1},
                                     1.0, SolverConfig{});
    REQUIRE(a.size() == 2);
    CHECK(a[0].error == b[0].error);
    CHECK(a[1].error == b[1].error);
    CHECK(a[0].max_ratio > 0.0);
}

TEST_CASE("report round trip through emit_report and load_timeseries") {
    const GridSpec spec(kTwoPi, 16);
    const MbeParams p{0.1};
    const auto dir = std::filesystem::temp_directory_path() / "mbe_report_test";
    std::filesystem::remove_all(dir);

    const std::vector<double> snaps{0.05};
    auto report = benchmark_run(spec, p, 0.1, 0.01, nullptr, 1e-3, SolverConfig{}, snaps);
    report.config_json = "{\"case\":\"round-trip\"}";
    emit_report(report, dir);

    CHECK(std::filesystem::exists(dir / "timeseries.csv"));
    CHECK(std::filesystem::exists(dir / "mesh.csv"));
    CHECK(std::filesystem::exists(dir / "audit.json"));
    CHECK(std::filesystem::exists(dir / "config.json"));
    REQUIRE(report.snapshots.size() == 1);

    const auto rows = load_timeseries(dir / "timeseries.csv");
    REQUIRE(rows.size() == report.rows.size());
    for (std::size_t n = 0; n < rows.size(); ++n) {
        CHECK(rows[n].step == report.rows[n].step);
        CHECK(rows[n].t == doctest::Approx(report.rows[n].t).epsilon(1e-15));
        CHECK(rows[n].energy == doctest::Approx(report.rows[n].energy).epsilon(1e-15));
        CHECK(rows[n].fp_iters == report.rows[n].fp_iters);
    }

    const auto mesh = TimeMesh::load_csv(dir / "mesh.csv");
    CHECK(mesh.num_steps() == static_cast<int>(report.levels.size()) - 1);

    std::ifstream cfg(dir / "config.json");
    std::string text((std::istreambuf_iterator<char>(cfg)),
                     std::istreambuf_iterator<char>());
    CHECK(text.find("round-trip") != std::string::npos);
}

TEST_CASE("benchmark_run snapshot capture lands at or after the requested time") {
    const GridSpec spec(kTwoPi, 16);
    const std::vector<double> snaps{0.033};
    const auto report =
        benchmark_run(spec, MbeParams{0.1}, 0.1, 0.01, nullptr, 1e-3, SolverConfig{}, snaps);
    REQUIRE(report.snapshots.size() == 1);
    CHECK(report.snapshots[0].first >= 0.033 - 1e-12);
    CHECK(report.snapshots[0].first < 0.033 + 0.01 + 1e-12);
}

TEST_CASE("adaptive benchmark_run attaches a mesh audit") {
    const GridSpec spec(kTwoPi, 16);
    AdaptiveConfig cfg;
    const auto report =
        benchmark_run(spec, MbeParams{0.1}, 0.5, 0.0, &cfg, 1e-3, SolverConfig{}, {});
    CHECK(report.accepted_steps > 0);
    CHECK(report.audit.max_ratio > 0.0);
    CHECK(report.audit.orthogonality_deviation < 1e-10);
}
