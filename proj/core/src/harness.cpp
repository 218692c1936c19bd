#include "mbe/harness.hpp"

#include <algorithm>
#include <cmath>

#include "mbe/kernels.hpp"

namespace mbe {

std::vector<ConvergenceRow> convergence_study(
    MeshKind kind, std::span<const int> step_counts, std::uint64_t seed,
    const GridSpec& grid, const MbeParams& p, double horizon,
    const SolverConfig& solver, ForcingMode forcing) {
    std::vector<ConvergenceRow> rows;
    rows.reserve(step_counts.size());
    for (int num_steps : step_counts) {
        const TimeMesh mesh = (kind == MeshKind::Uniform)
                                  ? TimeMesh::uniform(horizon, num_steps)
                                  : TimeMesh::random(horizon, num_steps,
                                                     seed + std::uint64_t(num_steps));
        Forcing g;
        if (forcing == ForcingMode::Discrete)
            g = [&](double t) { return manufactured_forcing_discrete(t, grid, p); };
        else
            g = [&](double t) { return manufactured_forcing(t, grid, p); };

        const Field phi0 = manufactured_solution(0.0, grid);
        Field terminal = phi0;
        Observers capture;
        capture.on_step = [&](const StepRecord& record, const Field& field) {
            if (record.step == num_steps) terminal = field;
        };
        run_simulation(phi0, mesh, p, solver, g, capture);

        ConvergenceRow row;
        row.error = norm_l2(terminal - manufactured_solution(horizon, grid));
        row.num_steps = num_steps;
        row.max_step = mesh.max_step();
        row.max_ratio = mesh.max_ratio();
        row.s1_violations = static_cast<int>(check_s1(mesh).violations.size());
        rows.push_back(row);
    }
    fill_orders(rows);
    return rows;
}

void fill_orders(std::vector<ConvergenceRow>& rows) {
    for (std::size_t i = 1; i < rows.size(); ++i) {
        rows[i].order = std::log(rows[i - 1].error / rows[i].error) /
                        std::log(rows[i - 1].max_step / rows[i].max_step);
    }
}

ConsistencyReport consistency_diagnostic(const TimeMesh& mesh, const ScalarFn& phi,
                                         const ScalarFn& dphi, const ScalarFn& d2phi,
                                         const ScalarFn& d3phi) {
    const int levels = mesh.num_steps();
    ConsistencyReport report;
    std::vector<double> samples(levels + 1);
    for (int k = 0; k <= levels; ++k) samples[k] = phi(mesh.level(k));

    report.xi.resize(levels);
    for (int j = 1; j <= levels; ++j)
        report.xi[j - 1] = apply_d2<double>(mesh, j, samples) - dphi(mesh.level(j));

    const DocKernelTable table = DocKernelTable::closed_form(mesh);
    report.conv.resize(levels);
    for (int k = 1; k <= levels; ++k) {
        double sum = 0.0;
        for (int j = 1; j <= k; ++j) sum += table.entry(k, j) * report.xi[j - 1];
        report.conv[k - 1] = sum;
        report.sum_abs += std::abs(sum);
    }

    // 5-point Gauss-Legendre on [a, b]
    static const double nodes[5] = {-0.906179845938663992, -0.538469310105683091, 0.0,
                                    0.538469310105683091, 0.906179845938663992};
    static const double weights[5] = {0.236926885056189088, 0.478628670499366468,
                                      0.568888888888888889, 0.478628670499366468,
                                      0.236926885056189088};
    auto integrate_abs = [&](const ScalarFn& f, double a, double b) {
        const int panels = 8;
        double total = 0.0;
        const double width = (b - a) / panels;
        for (int p = 0; p < panels; ++p) {
            const double lo = a + p * width;
            const double mid = lo + 0.5 * width;
            double acc = 0.0;
            for (int q = 0; q < 5; ++q)
                acc += weights[q] * std::abs(f(mid + 0.5 * width * nodes[q]));
            total += 0.5 * width * acc;
        }
        return total;
    };

    double ratio_product_sum = 0.0;
    double product = 1.0;
    for (int k = 1; k <= levels; ++k) {
        if (k >= 2) {
            const double r = mesh.ratio(k);
            product *= r * r / (1.0 + 2.0 * r);
        }
        ratio_product_sum += product;
    }
    const double first_part = mesh.step(1) * integrate_abs(d2phi, 0.0, mesh.level(1)) *
                              ratio_product_sum;
    double max_term = 0.0;
    for (int j = 1; j <= levels; ++j)
        max_term = std::max(max_term, mesh.step(j) * integrate_abs(d3phi, mesh.level(j - 1),
                                                                   mesh.level(j)));
    report.bound = first_part + 3.0 * mesh.horizon() * max_term;
    report.holds = report.sum_abs <= report.bound * (1.0 + 1e-10) + 1e-14;
    return report;
}

Field benchmark_initial_data(const GridSpec& grid) {
    return Field::sample(grid, [](double x, double y) {
        return 0.1 * (std::sin(3.0 * x) * std::sin(2.0 * y) +
                      std::sin(5.0 * x) * std::sin(5.0 * y));
    });
}

RunReport benchmark_run(const GridSpec& grid, const MbeParams& p, double horizon,
                        double tau_uniform, const AdaptiveConfig* adaptive_cfg,
                        double tau_init, const SolverConfig& solver,
                        std::span<const double> snapshot_times, const Observers& obs,
                        bool strict) {
    const Field phi0 = benchmark_initial_data(grid);

    std::vector<double> targets(snapshot_times.begin(), snapshot_times.end());
    std::sort(targets.begin(), targets.end());
    std::size_t next_target = 0;
    std::vector<std::pair<double, Field>> snapshots;

    Observers wrapped = obs;
    wrapped.on_step = [&](const StepRecord& row, const Field& field) {
        while (next_target < targets.size() &&
               row.t >= targets[next_target] - 1e-12 * std::max(1.0, horizon)) {
            snapshots.emplace_back(row.t, field);
            ++next_target;
        }
        if (obs.on_step) obs.on_step(row, field);
    };

    RunReport report;
    if (adaptive_cfg) {
        report = run_adaptive(phi0, horizon, tau_init, *adaptive_cfg, p, solver, {}, wrapped);
    } else {
        const int num_steps = static_cast<int>(std::llround(horizon / tau_uniform));
        const TimeMesh mesh = TimeMesh::uniform(horizon, num_steps);
        report = run_simulation(phi0, mesh, p, solver, {}, wrapped, strict);
    }
    report.snapshots = std::move(snapshots);
    report.audit = audit_mesh(TimeMesh::from_levels(report.levels), p.eps);
    return report;
}

MeshAudit audit_mesh(const TimeMesh& mesh, double eps) {
    MeshAudit audit;
    const auto s1 = check_s1(mesh);
    audit.s1_satisfied = s1.satisfied;
    audit.s1_violations = static_cast<int>(s1.violations.size());
    audit.max_ratio = mesh.max_ratio();
    const auto s2 = check_s2(mesh);
    audit.s2_count = s2.count;
    audit.s2_fraction = s2.fraction;
    const auto restriction = check_energy_step_restriction(mesh, eps);
    audit.step_restriction_satisfied = restriction.satisfied;
    audit.step_restriction_violations = static_cast<int>(restriction.violations.size());

    // Kernel diagnostics are O(N^2); for very long runs audit a prefix.
    const int cap = 2000;
    const TimeMesh* target = &mesh;
    TimeMesh prefix = mesh;
    if (mesh.num_steps() > cap) {
        std::vector<double> levels(mesh.levels().begin(), mesh.levels().begin() + cap + 1);
        prefix = TimeMesh::from_levels(std::move(levels));
        target = &prefix;
    }
    const auto mr = compute_m_r(*target);
    audit.m_r = mr.value;
    audit.m_r_ok = mr.ok;
    const auto table = DocKernelTable::closed_form(*target);
    audit.orthogonality_deviation = verify_orthogonality(*target, table);
    audit.row_sum_deviation = max_row_sum_deviation(*target, table);
    return audit;
}

}  // namespace mbe
