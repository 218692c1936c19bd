#include <fstream>
#include <iomanip>
#include <sstream>

#include <json.hpp>

#include "mbe/harness.hpp"

namespace mbe {

namespace {

nlohmann::json audit_to_json(const MeshAudit& audit) {
    return {
        {"s1", {{"satisfied", audit.s1_satisfied}, {"violations", audit.s1_violations}}},
        {"s2", {{"count", audit.s2_count}, {"fraction", audit.s2_fraction}}},
        {"max_ratio", audit.max_ratio},
        {"energy_step_restriction",
         {{"satisfied", audit.step_restriction_satisfied},
          {"violations", audit.step_restriction_violations}}},
        {"m_r", {{"value", audit.m_r}, {"ok", audit.m_r_ok}}},
        {"orthogonality_deviation", audit.orthogonality_deviation},
        {"row_sum_deviation", audit.row_sum_deviation},
    };
}

std::string format_time_label(double t) {
    std::ostringstream s;
    s << std::setprecision(10) << t;
    std::string label = s.str();
    for (auto& c : label)
        if (c == '.') c = 'p';
    return label;
}

}  // namespace

void emit_report(const RunReport& report, const std::filesystem::path& out_dir) {
    namespace fs = std::filesystem;
    std::error_code ec;
    fs::create_directories(out_dir, ec);
    if (ec) throw std::runtime_error("cannot create " + out_dir.string());

    {
        std::ofstream out(out_dir / "timeseries.csv");
        if (!out) throw std::runtime_error("cannot open " + (out_dir / "timeseries.csv").string());
        out.precision(17);
        out << "step,t,tau,ratio,E,E_modified,roughness,mean,fp_iters,"
               "e_indicator,accepted,retries\n";
        for (const auto& r : report.rows)
            out << r.step << "," << r.t << "," << r.tau << "," << r.ratio << ","
                << r.energy << "," << r.modified_energy << "," << r.roughness << ","
                << r.mean << "," << r.fp_iters << "," << r.e_indicator << ","
                << r.accepted << "," << r.retries << "\n";
        if (!out) throw std::runtime_error("write failed: timeseries.csv");
    }

    if (report.levels.size() >= 2)
        TimeMesh::from_levels(report.levels).save_csv(out_dir / "mesh.csv");

    {
        std::ofstream out(out_dir / "audit.json");
        out << audit_to_json(report.audit).dump(2) << "\n";
        if (!out) throw std::runtime_error("write failed: audit.json");
    }
    {
        nlohmann::json config = nlohmann::json::parse(report.config_json);
        std::ofstream out(out_dir / "config.json");
        out << config.dump(2) << "\n";
        if (!out) throw std::runtime_error("write failed: config.json");
    }

    if (!report.snapshots.empty()) {
        fs::create_directories(out_dir / "snapshots", ec);
        for (const auto& [t, field] : report.snapshots)
            field.save_csv(out_dir / "snapshots" / ("t_" + format_time_label(t) + ".csv"), t);
    }
}

std::vector<StepRecord> load_timeseries(const std::filesystem::path& file) {
    std::ifstream in(file);
    if (!in) throw std::runtime_error("cannot open " + file.string());
    std::vector<StepRecord> rows;
    std::string line;
    std::getline(in, line);  // header
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::stringstream ss(line);
        std::string cell;
        std::vector<std::string> cells;
        while (std::getline(ss, cell, ',')) cells.push_back(cell);
        if (cells.size() != 12) throw std::runtime_error("bad timeseries row: " + line);
        StepRecord r;
        r.step = std::stoi(cells[0]);
        r.t = std::stod(cells[1]);
        r.tau = std::stod(cells[2]);
        r.ratio = std::stod(cells[3]);
        r.energy = std::stod(cells[4]);
        r.modified_energy = std::stod(cells[5]);
        r.roughness = std::stod(cells[6]);
        r.mean = std::stod(cells[7]);
        r.fp_iters = std::stoi(cells[8]);
        r.e_indicator = std::stod(cells[9]);
        r.accepted = std::stoi(cells[10]);
        r.retries = std::stoi(cells[11]);
        rows.push_back(r);
    }
    return rows;
}

}  // namespace mbe
