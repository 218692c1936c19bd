// Command-line driver for the variable-step BDF2 MBE solver.
//
// Subcommands:
//   converge    manufactured-solution accuracy study (uniform or random meshes)
//   simulate    benchmark simulation, uniform or adaptive time stepping
//   kernels     kernel audit of a mesh CSV, printed as JSON
//   check-mesh  S1/S2/energy-restriction summary for a mesh CSV
//
// A JSON config file (--config) may supply any flag; command-line flags
// override the file. Exit codes: 0 success, 1 solver failure, 2 invalid input.

#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "mbe/harness.hpp"
#include "mbe/kernels.hpp"

using nlohmann::json;

namespace {

json load_config(int argc, char** argv) {
    for (int i = 1; i + 1 < argc; ++i) {
        if (std::string(argv[i]) == "--config") {
            std::ifstream in(argv[i + 1]);
            if (!in) throw std::invalid_argument(std::string("cannot open config ") + argv[i + 1]);
            return json::parse(in);
        }
    }
    return json::object();
}

template <class T>
void from_config(const json& cfg, const char* key, T& var) {
    if (cfg.contains(key)) var = cfg.at(key).get<T>();
}

std::vector<int> parse_int_list(const std::string& csv) {
    std::vector<int> out;
    std::stringstream ss(csv);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(std::stoi(item));
    return out;
}

std::vector<double> parse_double_list(const std::string& csv) {
    std::vector<double> out;
    std::stringstream ss(csv);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(std::stod(item));
    return out;
}

void require_readable(const std::string& path) {
    if (!std::filesystem::exists(path))
        throw std::invalid_argument("no such file: " + path);
}

mbe::Observers stderr_observers() {
    mbe::Observers obs;
    obs.progress = [](const std::string& line) { std::cerr << line << "\n"; };
    return obs;
}

}  // namespace

int main(int argc, char** argv) {
    std::string kind = "uniform", n_list = "20,40,80,160", out_dir = "out";
    std::string mode = "uniform", ic = "builtin:paper51", snapshots, mesh_file;
    std::string forcing = "discrete";
    std::string config_file;
    std::uint64_t seed = 1;
    double eps = 0.1, horizon = 1.0, tau = 1e-3;
    double tol = 1e-3, safety = 0.9, tau_min = 1e-4, tau_max = 0.1, tau_init = 1e-3;
    int grid_size = 64;
    bool strict = false;

    try {
        const json cfg = load_config(argc, argv);
        from_config(cfg, "kind", kind);
        from_config(cfg, "N", n_list);
        from_config(cfg, "seed", seed);
        from_config(cfg, "eps", eps);
        from_config(cfg, "grid", grid_size);
        from_config(cfg, "T", horizon);
        from_config(cfg, "out", out_dir);
        from_config(cfg, "mode", mode);
        from_config(cfg, "tau", tau);
        from_config(cfg, "tol", tol);
        from_config(cfg, "safety", safety);
        from_config(cfg, "tau-min", tau_min);
        from_config(cfg, "tau-max", tau_max);
        from_config(cfg, "tau-init", tau_init);
        from_config(cfg, "ic", ic);
        from_config(cfg, "snapshots", snapshots);
        from_config(cfg, "mesh", mesh_file);
        from_config(cfg, "strict", strict);
        from_config(cfg, "forcing", forcing);

        CLI::App app{"Variable-step BDF2 solver for the no-slope-selection MBE model"};
        app.add_option("--config", config_file, "JSON config file (flags override it)");

        auto* converge = app.add_subcommand("converge", "manufactured-solution accuracy study");
        converge->add_option("--kind", kind)->check(CLI::IsMember({"uniform", "random"}));
        converge->add_option("--N", n_list, "comma-separated step counts");
        converge->add_option("--seed", seed);
        converge->add_option("--eps", eps);
        converge->add_option("--grid", grid_size);
        converge->add_option("--T", horizon);
        converge->add_option("--out", out_dir);
        converge->add_option("--forcing", forcing)
            ->check(CLI::IsMember({"discrete", "analytic"}));

        auto* simulate = app.add_subcommand("simulate", "benchmark simulation");
        simulate->add_option("--mode", mode)->check(CLI::IsMember({"uniform", "adaptive"}));
        simulate->add_option("--eps", eps);
        simulate->add_option("--grid", grid_size);
        simulate->add_option("--T", horizon);
        simulate->add_option("--tau", tau, "uniform step size");
        simulate->add_option("--tol", tol);
        simulate->add_option("--safety", safety);
        simulate->add_option("--tau-min", tau_min);
        simulate->add_option("--tau-max", tau_max);
        simulate->add_option("--tau-init", tau_init);
        simulate->add_option("--ic", ic, "builtin:paper51 or file:<csv>");
        simulate->add_option("--snapshots", snapshots, "comma-separated times");
        simulate->add_option("--out", out_dir);
        simulate->add_flag("--strict", strict, "abort on theory-grade step-condition violations");

        auto* kernels = app.add_subcommand("kernels", "kernel audit of a mesh CSV");
        kernels->add_option("--mesh", mesh_file)->required();
        kernels->add_option("--out", out_dir, "output JSON file ('-' for stdout)");

        auto* check = app.add_subcommand("check-mesh", "mesh condition summary");
        check->add_option("--mesh", mesh_file)->required();
        check->add_option("--eps", eps);

        app.require_subcommand(1);
        try {
            app.parse(argc, argv);
        } catch (const CLI::CallForHelp& e) {
            return app.exit(e);
        } catch (const CLI::ParseError& e) {
            app.exit(e);
            return 2;
        }

        const mbe::MbeParams params(eps);
        const mbe::SolverConfig solver;

        if (converge->parsed()) {
            const auto counts = parse_int_list(n_list);
            const mbe::GridSpec grid(2.0 * M_PI, grid_size);
            const auto rows = mbe::convergence_study(
                kind == "uniform" ? mbe::MeshKind::Uniform : mbe::MeshKind::Random,
                counts, seed, grid, params, horizon, solver,
                forcing == "discrete" ? mbe::ForcingMode::Discrete
                                      : mbe::ForcingMode::Analytic);
            std::filesystem::create_directories(out_dir);
            std::ofstream csv(std::filesystem::path(out_dir) / "convergence.csv");
            csv.precision(17);
            csv << "N,tau,e,order,max_ratio,N1\n";
            std::cout << "    N        tau          e(N)    order   max r_k   N1\n";
            for (const auto& r : rows) {
                csv << r.num_steps << "," << r.max_step << "," << r.error << ","
                    << r.order << "," << r.max_ratio << "," << r.s1_violations << "\n";
                std::printf("%5d  %9.3e  %12.6e  %6.3f  %8.2f  %3d\n", r.num_steps,
                            r.max_step, r.error, r.order, r.max_ratio, r.s1_violations);
            }
            json echo = {{"command", "converge"}, {"kind", kind}, {"N", n_list},
                         {"seed", seed}, {"eps", eps}, {"grid", grid_size},
                         {"T", horizon}, {"forcing", forcing}};
            std::ofstream(std::filesystem::path(out_dir) / "config.json") << echo.dump(2) << "\n";
            return 0;
        }

        if (simulate->parsed()) {
            const mbe::GridSpec grid(2.0 * M_PI, grid_size);
            std::vector<double> snap_times;
            if (!snapshots.empty()) snap_times = parse_double_list(snapshots);
            mbe::AdaptiveConfig adaptive;
            adaptive.tol = tol;
            adaptive.safety = safety;
            adaptive.tau_min = tau_min;
            adaptive.tau_max = tau_max;

            mbe::RunReport report;
            if (ic == "builtin:paper51") {
                report = mbe::benchmark_run(grid, params, horizon, tau,
                                            mode == "adaptive" ? &adaptive : nullptr,
                                            tau_init, solver, snap_times,
                                            stderr_observers(), strict);
            } else if (ic.rfind("file:", 0) == 0) {
                require_readable(ic.substr(5));
                const mbe::Field phi0 = mbe::Field::load_csv(ic.substr(5));
                if (mode == "adaptive") {
                    report = mbe::run_adaptive(phi0, horizon, tau_init, adaptive, params,
                                               solver, {}, stderr_observers());
                } else {
                    const int steps = static_cast<int>(std::llround(horizon / tau));
                    report = mbe::run_simulation(phi0, mbe::TimeMesh::uniform(horizon, steps),
                                                 params, solver, {}, stderr_observers(),
                                                 strict);
                }
                report.audit = mbe::audit_mesh(mbe::TimeMesh::from_levels(report.levels), eps);
            } else {
                throw std::invalid_argument("bad --ic value: " + ic);
            }

            json echo = {{"command", "simulate"}, {"mode", mode}, {"eps", eps},
                         {"grid", grid_size}, {"T", horizon}, {"tau", tau},
                         {"tol", tol}, {"safety", safety}, {"tau-min", tau_min},
                         {"tau-max", tau_max}, {"tau-init", tau_init}, {"ic", ic},
                         {"strict", strict}};
            report.config_json = echo.dump();
            mbe::emit_report(report, out_dir);
            std::cout << "accepted steps: " << report.accepted_steps
                      << ", rejected: " << report.rejected_steps
                      << ", final E: " << report.rows.back().energy << "\n";
            return 0;
        }

        if (kernels->parsed()) {
            require_readable(mesh_file);
            const mbe::TimeMesh mesh = mbe::TimeMesh::load_csv(mesh_file);
            const auto table = mbe::DocKernelTable::closed_form(mesh);
            json doc;
            for (int n = 1; n <= mesh.num_steps(); ++n) {
                const auto [b0, b1] = mbe::bdf2_coefficients(mesh, n);
                doc["levels"].push_back({{"n", n}, {"b0", b0}, {"b1", b1}});
            }
            doc["orthogonality_deviation"] = mbe::verify_orthogonality(mesh, table);
            doc["row_sum_deviation"] = mbe::max_row_sum_deviation(mesh, table);
            const auto mr = mbe::compute_m_r(mesh);
            doc["m_r"] = {{"value", mr.value}, {"ok", mr.ok}, {"argmax_level", mr.argmax_level}};
            const auto s1 = mbe::check_s1(mesh);
            const auto s2 = mbe::check_s2(mesh);
            doc["s1"] = {{"satisfied", s1.satisfied},
                         {"violations", s1.violations.size()}};
            doc["s2"] = {{"count", s2.count}, {"fraction", s2.fraction}};
            if (out_dir == "-" || out_dir == "out")
                std::cout << doc.dump(2) << "\n";
            else
                std::ofstream(out_dir) << doc.dump(2) << "\n";
            return 0;
        }

        if (check->parsed()) {
            require_readable(mesh_file);
            const mbe::TimeMesh mesh = mbe::TimeMesh::load_csv(mesh_file);
            const auto audit = mbe::audit_mesh(mesh, eps);
            std::cout << "levels: " << mesh.num_steps() + 1
                      << ", max step: " << mesh.max_step()
                      << ", max ratio: " << audit.max_ratio << "\n"
                      << "S1: " << (audit.s1_satisfied ? "satisfied" : "violated")
                      << " (" << audit.s1_violations << " violation(s))\n"
                      << "S2: N0=" << audit.s2_count << " (fraction "
                      << audit.s2_fraction << ")\n"
                      << "energy step restriction: "
                      << (audit.step_restriction_satisfied ? "satisfied" : "violated")
                      << " (" << audit.step_restriction_violations << " level(s))\n"
                      << "M_r: " << audit.m_r << (audit.m_r_ok ? "" : " (breakdown)") << "\n";
            return 0;
        }
        return 2;
    } catch (const mbe::SolverError& err) {
        std::cerr << "solver failure: " << err.what() << "\n";
        return 1;
    } catch (const std::invalid_argument& err) {
        std::cerr << "invalid input: " << err.what() << "\n";
        return 2;
    } catch (const std::exception& err) {
        std::cerr << "error: " << err.what() << "\n";
        return 1;
    }
}
